//! Values at a fixed point, frozen from an independent 40-digit evaluation
//! of the product formulas.

#![allow(clippy::excessive_precision)]

use ellr_core::rmatrix::{components, r_matrix, twisted_diagonal};
use ellr_core::special::{rho_norm, theta, unitarity_scalar};
use ellr_core::{Cx, Gauge, Params};

const Q_HALF: f64 = 0.6855654600401044;
const P: f64 = 0.31;

fn z() -> Cx {
    Cx::new(0.6, 0.2)
}

fn s() -> Cx {
    Cx::new(0.37, 0.11)
}

fn params() -> Params {
    Params::new(Cx::new(Q_HALF, 0.0), Cx::new(P, 0.0)).unwrap()
}

fn assert_close(name: &str, got: Cx, want: (f64, f64), tol: f64) {
    let want = Cx::new(want.0, want.1);
    let rel = (got - want).norm() / want.norm();
    assert!(rel < tol, "{name}: got {got}, want {want}, rel {rel:e}");
}

const THETA: (f64, f64) = (0.087549356008334751912, -0.018512094156683531422);
const THETA_Q2Z: (f64, f64) = (-0.19096151406991087289, -0.0073351912855544086496);
const RHO: (f64, f64) = (1.3517393971096406309, 1.1874559064136709163);
const RHO_INV: (f64, f64) = (-1.1515845624170523404, -1.0239607264887145144);
const N: (f64, f64) = (-0.34073400951773818664, -2.7515839454647360629);
const B: (f64, f64) = (0.77869864385959354306, -0.42235341714318428312);
const B_BAR: (f64, f64) = (0.18588366412364972384, 0.012561922593949457575);
const C: (f64, f64) = (0.19395542536073099571, 0.13555882178566106511);
const C_BAR: (f64, f64) = (0.10371811375130520822, 0.39817197631298319584);
const B_B_BAR: (f64, f64) = (0.15005292810218094842, -0.068726648645541760394);
const B_PRIME: (f64, f64) = (0.38916930067346816728, -0.02444431021253570254);
const B_BAR_PRIME: (f64, f64) = (0.39510596759923117943, -0.15178112894440109881);

#[test]
fn theta_matches_oracle() {
    let p = params();
    assert_close("theta(z)", theta(z(), &p).unwrap(), THETA, 1e-13);
    let q2 = p.q() * p.q();
    assert_close("theta(q^2 z)", theta(q2 * z(), &p).unwrap(), THETA_Q2Z, 1e-13);
}

#[test]
fn rho_and_n_match_oracle() {
    let p = params();
    assert_close("rho(z)", rho_norm(z(), &p).unwrap(), RHO, 1e-13);
    assert_close("rho(1/z)", rho_norm(z().inv(), &p).unwrap(), RHO_INV, 1e-13);
    assert_close("n(z)", unitarity_scalar(z(), &p).unwrap(), N, 1e-13);
}

#[test]
fn rho_matches_oracle_at_high_order() {
    let p = params().with_truncation_order(400).unwrap();
    assert_close("rho(z)", rho_norm(z(), &p).unwrap(), RHO, 1e-13);
}

#[test]
fn components_match_oracle() {
    let k = components(z(), s(), &params()).unwrap();
    assert_close("b", k.b, B, 1e-13);
    assert_close("b_bar", k.b_bar, B_BAR, 1e-13);
    assert_close("c", k.c, C, 1e-13);
    assert_close("c_bar", k.c_bar, C_BAR, 1e-13);
    assert_close("b*b_bar", k.b * k.b_bar, B_B_BAR, 1e-13);
}

#[test]
fn twisted_diagonal_matches_oracle() {
    let (b, b_bar) = twisted_diagonal(z(), s(), &params()).unwrap();
    assert_close("b'", b, B_PRIME, 1e-13);
    assert_close("b_bar'", b_bar, B_BAR_PRIME, 1e-13);
}

#[test]
fn r_matrix_entries_match_oracle() {
    let p = params();
    let rho = Cx::new(RHO.0, RHO.1);
    let r = r_matrix(z(), &p, Gauge::Standard).unwrap().eval(s()).unwrap();
    let scaled = |v: (f64, f64)| {
        let x = rho * Cx::new(v.0, v.1);
        (x.re, x.im)
    };
    assert_close("R[0,0]", r[(0, 0)], RHO, 1e-13);
    assert_close("R[3,3]", r[(3, 3)], RHO, 1e-13);
    assert_close("R[1,1]", r[(1, 1)], scaled(B), 1e-13);
    assert_close("R[1,2]", r[(1, 2)], scaled(C), 1e-13);
    assert_close("R[2,1]", r[(2, 1)], scaled(C_BAR), 1e-13);
    assert_close("R[2,2]", r[(2, 2)], scaled(B_BAR), 1e-13);
    for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 0), (1, 3), (2, 0), (2, 3), (3, 0), (3, 1), (3, 2)] {
        assert_eq!(r[(i, j)], Cx::new(0.0, 0.0), "structural zero at ({i}, {j})");
    }
    let rt = r_matrix(z(), &p, Gauge::Twisted).unwrap().eval(s()).unwrap();
    assert_close("Rtilde[1,1]", rt[(1, 1)], scaled(B_PRIME), 1e-13);
    assert_close("Rtilde[2,2]", rt[(2, 2)], scaled(B_BAR_PRIME), 1e-13);
    assert_close("Rtilde[1,2]", rt[(1, 2)], scaled(C), 1e-13);
}
