//! The dynamical elliptic R-matrix in its two gauges and the diagonal
//! dressings built from the twist matrix `g` and `Υ(λ) = w^{-1/2} Θ_p(w)`.
//!
//! All matrices are [`DynMatrix`] values: functions of the dynamical
//! coordinate `s`, regenerated at every shifted argument. Leg 0 is the
//! first tensor factor.

use serde::Serialize;

use crate::error::{guard_nonzero, Error, Result};
use crate::params::{Cx, Params};
use crate::shift::{weight, CMat, DynMatrix, DynScalar};
use crate::special::{poch_p, rho_norm, theta};

/// Which R-matrix: the original face-type one or its twisted variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    Standard,
    Twisted,
}

impl Gauge {
    pub const ALL: [Gauge; 2] = [Gauge::Standard, Gauge::Twisted];

    pub fn label(self) -> &'static str {
        match self {
            Gauge::Standard => "R",
            Gauge::Twisted => "Rtilde",
        }
    }
}

/// Spectral parameter, dynamical coordinate and numeric context.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RPoint {
    pub z: Cx,
    pub s: Cx,
    pub params: Params,
}

impl RPoint {
    pub fn new(z: Cx, s: Cx, params: Params) -> Self {
        RPoint { z, s, params }
    }
}

/// The four non-trivial weights of the standard gauge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Components {
    pub b: Cx,
    pub b_bar: Cx,
    pub c: Cx,
    pub c_bar: Cx,
}

pub fn components(z: Cx, s: Cx, params: &Params) -> Result<Components> {
    let guard = params.singular_guard();
    let q2 = params.q() * params.q();
    let w = params.dyn_w(s);
    let w_inv = w.inv();
    let th_w = theta(w, params)?;
    let th_w_inv = theta(w_inv, params)?;
    let th_q2z = theta(q2 * z, params)?;
    guard_nonzero(|| "Theta_p(w)".into(), th_w, guard)?;
    guard_nonzero(|| "Theta_p(1/w)".into(), th_w_inv, guard)?;
    guard_nonzero(|| "Theta_p(q^2 z)".into(), th_q2z, guard)?;
    let th_z = theta(z, params)?;
    let th_q2 = theta(q2, params)?;
    Ok(Components {
        b: theta(q2 * w, params)? * th_z / (th_w * th_q2z),
        b_bar: theta(q2 * w_inv, params)? * th_z / (th_w_inv * th_q2z),
        c: th_q2 * theta(w * z, params)? / (th_w * th_q2z),
        c_bar: th_q2 * theta(w_inv * z, params)? / (th_w_inv * th_q2z),
    })
}

/// The diagonal weights `(b', b̄')` of the twisted gauge.
pub fn twisted_diagonal(z: Cx, s: Cx, params: &Params) -> Result<(Cx, Cx)> {
    let guard = params.singular_guard();
    let p = params.p();
    let q = params.q();
    let q2 = q * q;
    let w = params.dyn_w(s);
    let th_q2z = theta(q2 * z, params)?;
    guard_nonzero(|| "Theta_p(q^2 z)".into(), th_q2z, guard)?;
    let spectral = theta(z, params)? / th_q2z;
    let den_b = poch_p(p / w, params);
    let den_bb = poch_p(w, params);
    guard_nonzero(|| "(p/w; p)".into(), den_b, guard)?;
    guard_nonzero(|| "(w; p)".into(), den_bb, guard)?;
    let b = q * poch_p(p * q2 / w, params) * poch_p(p / (w * q2), params) / (den_b * den_b) * spectral;
    let b_bar = q * poch_p(w * q2, params) * poch_p(w / q2, params) / (den_bb * den_bb) * spectral;
    Ok((b, b_bar))
}

fn assemble(rho: Cx, b: Cx, b_bar: Cx, c: Cx, c_bar: Cx) -> CMat {
    let one = Cx::new(1.0, 0.0);
    let zero = Cx::new(0.0, 0.0);
    #[rustfmt::skip]
    let m = CMat::from_row_slice(4, 4, &[
        one,  zero,  zero,  zero,
        zero, b,     c,     zero,
        zero, c_bar, b_bar, zero,
        zero, zero,  zero,  one,
    ]);
    m * rho
}

/// `R(z, ·)` in the chosen gauge as a function of `s`. The normalization
/// `ρ(z)` is computed once; a pole of `ρ` is reported immediately.
pub fn r_matrix(z: Cx, params: &Params, gauge: Gauge) -> Result<DynMatrix> {
    if z == Cx::new(0.0, 0.0) {
        return Err(Error::Domain("spectral parameter must be non-zero".into()));
    }
    let rho = rho_norm(z, params)?;
    let params = *params;
    Ok(DynMatrix::new(2, move |s| {
        let k = components(z, s, &params)?;
        let (b, b_bar) = match gauge {
            Gauge::Standard => (k.b, k.b_bar),
            Gauge::Twisted => twisted_diagonal(z, s, &params)?,
        };
        Ok(assemble(rho, b, b_bar, k.c, k.c_bar))
    }))
}

fn build(point: &RPoint, gauge: Gauge) -> Result<DynMatrix> {
    let r = r_matrix(point.z, &point.params, gauge)?;
    r.eval(point.s)?;
    Ok(r)
}

/// Standard-gauge R-matrix, validated at `point.s`.
pub fn build_r(point: &RPoint) -> Result<DynMatrix> {
    build(point, Gauge::Standard)
}

/// Twisted-gauge R-matrix, validated at `point.s`.
pub fn build_r_tilde(point: &RPoint) -> Result<DynMatrix> {
    build(point, Gauge::Twisted)
}

/// `g₂₂(λ) = w^{-1/2} (w;p)_∞ (p q² w⁻¹;p)_∞`.
pub fn g22(s: Cx, params: &Params) -> Cx {
    let w = params.dyn_w(s);
    let q2 = params.q() * params.q();
    params.dyn_w_inv_sqrt(s) * poch_p(w, params) * poch_p(params.p() * q2 / w, params)
}

/// The twist matrix `g(λ) = diag(1, g₂₂(λ))` on one leg.
pub fn gauge_matrix(params: &Params) -> DynMatrix {
    let params = *params;
    DynMatrix::diagonal(1, move |i, s| {
        Ok(if i == 0 { Cx::new(1.0, 0.0) } else { g22(s, &params) })
    })
}

/// `g₂(λ) g₁(λ+h^{(2)}) R₁₂ g₁⁻¹(λ) g₂⁻¹(λ+h^{(1)})` for any one-leg
/// diagonal `g`.
pub fn twist_with(r: &DynMatrix, g: &DynMatrix, guard: f64) -> DynMatrix {
    twist_with_sign(r, g, guard, 1)
}

/// [`twist_with`] with the spectator shifts `λ + κ h` for `κ = sign`.
pub(crate) fn twist_with_sign(r: &DynMatrix, g: &DynMatrix, guard: f64, sign: i32) -> DynMatrix {
    let g_inv = g.inverse(guard);
    let g2 = g.embed(2, &[1]);
    let g1_shifted = g.embed(2, &[0]).shift_row(&[(1, sign)]);
    let g1_inv = g_inv.embed(2, &[0]);
    let g2_inv_shifted = g_inv.embed(2, &[1]).shift_row(&[(0, sign)]);
    &(&(&(&g2 * &g1_shifted) * r) * &g1_inv) * &g2_inv_shifted
}

/// The standard R-matrix at `point` carried to the twisted gauge.
pub fn twist_of_r(point: &RPoint) -> Result<DynMatrix> {
    let r = build_r(point)?;
    let g = gauge_matrix(&point.params);
    let twisted = twist_with(&r, &g, point.params.singular_guard());
    twisted.eval(point.s)?;
    Ok(twisted)
}

/// `Υ(λ) = w^{-1/2} Θ_p(w) = q^{-s} Θ_p(q^{2s})`.
pub fn upsilon(s: Cx, params: &Params) -> Result<Cx> {
    Ok(params.dyn_w_inv_sqrt(s) * theta(params.dyn_w(s), params)?)
}

/// `Υ(s+k)/Υ(s)` in the branch-free form `q^{-k} Θ_p(w q^{2k}) / Θ_p(w)`.
pub fn upsilon_ratio(s: Cx, k: i32, params: &Params) -> Result<Cx> {
    let w = params.dyn_w(s);
    let den = theta(w, params)?;
    guard_nonzero(|| "Theta_p(w) in Upsilon ratio".into(), den, params.singular_guard())?;
    Ok(params.q_powi(-k) * theta(w * params.q_powi(2 * k), params)? / den)
}

pub fn upsilon_scalar(params: &Params) -> DynScalar {
    let params = *params;
    DynScalar::new(move |s| upsilon(s, &params))
}

/// `G(λ) = Υ(λ)/Υ(λ+σ_z)`, diagonal on one leg.
pub fn ratio_matrix(params: &Params) -> DynMatrix {
    let params = *params;
    DynMatrix::diagonal(1, move |i, s| Ok(upsilon_ratio(s, weight(i), &params)?.inv()))
}

/// `N(λ) = Υ(λ−σ_z)/Υ(λ)` from its closed form.
pub fn n_matrix(params: &Params) -> DynMatrix {
    let params = *params;
    DynMatrix::diagonal(1, move |i, s| upsilon_ratio(s, -weight(i), &params))
}

/// `N(λ) = G(λ)^{-sc}`, the shift-calculus route to [`n_matrix`].
pub fn n_matrix_from_ratio(params: &Params) -> DynMatrix {
    ratio_matrix(params).shift_col(&[(0, -1)])
}

/// `det g(λ)`.
pub fn det_gauge(params: &Params) -> DynScalar {
    gauge_matrix(params).determinant()
}

/// `det g^{-sc}`: determinant of the shift-column dressed twist matrix.
pub fn det_gauge_minus_sc(params: &Params) -> DynScalar {
    gauge_matrix(params).shift_col(&[(0, -1)]).determinant()
}

/// `Γ(λ) = (det g)·g(λ)⁻¹·g(λ)^{-sc}`.
pub fn gamma_matrix(params: &Params) -> DynMatrix {
    let g = gauge_matrix(params);
    let g_inv = g.inverse(params.singular_guard());
    let g_minus_sc = g.shift_col(&[(0, -1)]);
    (&g_inv * &g_minus_sc).scale_by(&det_gauge(params))
}

/// `μ(λ) = (det g)⁻¹ (det g^{-sc})⁻¹ Υ(λ)`.
pub fn mu(params: &Params) -> DynScalar {
    upsilon_scalar(params)
        .mul(&det_gauge(params).recip())
        .mul(&det_gauge_minus_sc(params).recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params() -> Params {
        Params::new(Cx::new(0.6855654600401044, 0.0), Cx::new(0.31, 0.0)).unwrap()
    }

    fn s0() -> Cx {
        Cx::new(0.37, 0.11)
    }

    #[test]
    fn components_at_unit_spectral_parameter() {
        let k = components(Cx::new(1.0, 0.0), s0(), &params()).unwrap();
        assert_eq!(k.b, Cx::new(0.0, 0.0));
        assert_eq!(k.b_bar, Cx::new(0.0, 0.0));
        assert!((k.c - 1.0).norm() < 1e-14);
        assert!((k.c_bar - 1.0).norm() < 1e-14);
        let (b, bb) = twisted_diagonal(Cx::new(1.0, 0.0), s0(), &params()).unwrap();
        assert_eq!(b, Cx::new(0.0, 0.0));
        assert_eq!(bb, Cx::new(0.0, 0.0));
    }

    #[test]
    fn zero_entries_are_structural() {
        let r = r_matrix(Cx::new(0.6, 0.2), &params(), Gauge::Twisted).unwrap();
        let m = r.eval(s0()).unwrap();
        for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 0), (1, 3), (2, 0), (2, 3), (3, 0), (3, 1), (3, 2), (1, 0), (2, 0)] {
            assert_eq!(m[(i, j)], Cx::new(0.0, 0.0));
        }
    }

    #[test]
    fn gauge_entries() {
        let p = params();
        let g = gauge_matrix(&p).eval(s0()).unwrap();
        assert_eq!(g[(0, 0)], Cx::new(1.0, 0.0));
        assert_eq!(det_gauge(&p).eval(s0()).unwrap(), g[(1, 1)]);
        let trig = Params::new(p.q_half(), Cx::new(0.0, 0.0)).unwrap();
        let w = trig.dyn_w(s0());
        let expected = trig.dyn_w_inv_sqrt(s0()) * (1.0 - w);
        assert!((g22(s0(), &trig) - expected).norm() < 1e-15);
    }

    #[test]
    fn identity_twist_is_noop() {
        let p = params();
        let r = r_matrix(Cx::new(0.7, -0.3), &p, Gauge::Standard).unwrap();
        let t = twist_with(&r, &DynMatrix::identity(1), p.singular_guard());
        assert_eq!(t.eval(s0()).unwrap(), r.eval(s0()).unwrap());
    }

    #[test]
    fn upsilon_ratio_telescopes() {
        let p = params();
        assert_eq!(upsilon_ratio(s0(), 0, &p).unwrap(), Cx::new(1.0, 0.0));
        let prod = upsilon_ratio(s0(), 1, &p).unwrap() * upsilon_ratio(s0() + 1.0, -1, &p).unwrap();
        assert!((prod - 1.0).norm() < 1e-13);
        let direct = upsilon(s0() + 2.0, &p).unwrap() / upsilon(s0(), &p).unwrap();
        assert!((upsilon_ratio(s0(), 2, &p).unwrap() - direct).norm() < 1e-12 * direct.norm());
    }

    #[test]
    fn gamma_hand_expansion() {
        let p = params();
        let gamma = gamma_matrix(&p).eval(s0()).unwrap();
        assert!((gamma[(0, 0)] - g22(s0(), &p)).norm() < 1e-13);
        assert!((gamma[(1, 1)] - g22(s0() + 1.0, &p)).norm() < 1e-13);
        assert_eq!(gamma[(0, 1)], Cx::new(0.0, 0.0));
    }

    #[test]
    fn rho_pole_is_reported() {
        let err = r_matrix(Cx::new(1.0, 0.0), &params(), Gauge::Standard).unwrap_err();
        assert!(err.is_singular());
    }

    fn point() -> impl Strategy<Value = (Params, Cx, Cx)> {
        (0.05f64..0.5, 0.4f64..0.8, 0.5f64..2.0, 0.0f64..std::f64::consts::TAU, -1.0f64..1.0, -0.5f64..0.5)
            .prop_map(|(p, qh, r, t, sr, si)| {
                let params = Params::new(Cx::new(qh, 0.0), Cx::new(p, 0.0)).unwrap();
                (params, Cx::from_polar(r, t), Cx::new(sr, si))
            })
    }

    fn unitarity_residual(params: &Params, z: Cx, s: Cx, gauge: Gauge) -> Result<f64> {
        let r12 = r_matrix(z, params, gauge)?.eval(s)?;
        let r21 = r_matrix(z.inv(), params, gauge)?.swap_legs(0, 1).eval(s)?;
        let n = crate::special::unitarity_scalar(z, params)?;
        let diff = r12 * r21 - CMat::identity(4, 4) * n;
        Ok(diff.iter().fold(0.0f64, |acc, x| acc.max(x.norm())) / n.norm().max(1.0))
    }

    proptest! {
        #[test]
        fn unitarity_in_both_gauges((params, z, s) in point()) {
            for gauge in Gauge::ALL {
                if let Ok(res) = unitarity_residual(&params, z, s, gauge) {
                    prop_assert!(res < 1e-9, "{} residual {res:e}", gauge.label());
                }
            }
        }

        #[test]
        fn twist_reproduces_twisted_gauge((params, z, s) in point()) {
            let pt = RPoint::new(z, s, params);
            if let (Ok(a), Ok(b)) = (twist_of_r(&pt), build_r_tilde(&pt)) {
                if let (Ok(a), Ok(b)) = (a.eval(s), b.eval(s)) {
                    let res = (a - &b).iter().fold(0.0f64, |acc, x| acc.max(x.norm()));
                    prop_assert!(res < 1e-10 * b.iter().fold(1.0f64, |acc, x| acc.max(x.norm())));
                }
            }
        }

        #[test]
        fn c_weights_swap_under_inversion_of_w((params, z, s) in point()) {
            if let (Ok(a), Ok(b)) = (components(z, s, &params), components(z, -s, &params)) {
                prop_assert!((a.c - b.c_bar).norm() <= 1e-12 * a.c.norm().max(1.0));
                prop_assert!((a.b - b.b_bar).norm() <= 1e-12 * a.b.norm().max(1.0));
            }
        }
    }
}
