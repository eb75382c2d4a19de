//! Special-function and shift-calculus properties, run as named checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::checks::sigma_y1;
use super::{CheckReport, SamplePoint, Sides};
use crate::error::Result;
use crate::params::{Cx, Params};
use crate::rmatrix::{g22, r_matrix, upsilon, Gauge};
use crate::shift::{
    joint_weight_shift, leg_index, skew_mul, weight, weight_shift_matrix, DynMatrix, DynScalar,
    ShiftElement, ShiftMatrix,
};
use crate::special::{qpochhammer, rho_norm, theta, unitarity_scalar};

fn finish(name: &str, pt: &SamplePoint, outcome: Result<f64>, detail: &str) -> CheckReport {
    CheckReport::from_outcome(name, pt.record(), outcome, pt.params.tolerance(), detail)
}

/// Worst residual over several identities.
pub fn max_residual(sides: &[Sides], samples: &[Cx]) -> Result<f64> {
    sides
        .iter()
        .try_fold(0.0, |acc, s| Ok(super::nan_max(acc, s.residual(samples)?)))
}

// ---------------------------------------------------------------------------
// Theta layer

/// `Θ(pz) = −z⁻¹Θ(z)`; `sign = −1` flips the right side.
pub fn theta_quasi_periodicity_sides(params: &Params, z: &[Cx], sign: f64) -> Result<Sides> {
    let pairs = z
        .iter()
        .map(|&z| Ok((theta(params.p() * z, params)?, -sign * theta(z, params)? / z)))
        .collect::<Result<_>>()?;
    Ok(Sides::Relative(pairs))
}

/// `Θ(1/z) = −z⁻¹Θ(z)`.
pub fn theta_inversion_sides(params: &Params, z: &[Cx]) -> Result<Sides> {
    let pairs = z
        .iter()
        .map(|&z| Ok((theta(z.inv(), params)?, -theta(z, params)? / z)))
        .collect::<Result<_>>()?;
    Ok(Sides::Relative(pairs))
}

/// Θ and ρ at the configured order against twice that order.
pub fn truncation_convergence_sides(params: &Params, z: &[Cx]) -> Result<Sides> {
    let fine = params.with_truncation_order(2 * params.truncation_order())?;
    let mut pairs = Vec::new();
    for &z in z {
        pairs.push((theta(z, params)?, theta(z, &fine)?));
        pairs.push((rho_norm(z, params)?, rho_norm(z, &fine)?));
    }
    Ok(Sides::Values(pairs))
}

/// `𝔫(q^k z) = 𝔫(z)` with `k = 4` for the identity.
pub fn n_periodicity_sides(params: &Params, z: &[Cx], q_power: i32) -> Result<Sides> {
    let pairs = z
        .iter()
        .map(|&z| {
            Ok((
                unitarity_scalar(params.q_powi(q_power) * z, params)?,
                unitarity_scalar(z, params)?,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(Sides::Relative(pairs))
}

/// Closed forms at `p = 0`: `(z;0) = Θ₀(z) = 1 − z` and
/// `g₂₂ = Υ = q^{-s}(1 − w)`.
pub fn trigonometric_limit_sides(params: &Params, z: &[Cx], s: &[Cx]) -> Result<Sides> {
    let trig = params.with_nome(Cx::new(0.0, 0.0))?;
    let one = Cx::new(1.0, 0.0);
    let mut pairs = Vec::new();
    for &z in z {
        pairs.push((theta(z, &trig)?, one - z));
        pairs.push((qpochhammer(z, &[Cx::new(0.0, 0.0)], trig.truncation_order())?, one - z));
    }
    for &s in s {
        let closed = trig.dyn_w_inv_sqrt(s) * (one - trig.dyn_w(s));
        pairs.push((g22(s, &trig), closed));
        pairs.push((upsilon(s, &trig)?, closed));
    }
    Ok(Sides::Values(pairs))
}

pub fn check_theta_quasi_periodicity(pt: &SamplePoint) -> CheckReport {
    let out = theta_quasi_periodicity_sides(&pt.params, &pt.z, 1.0).and_then(|s| s.residual(&pt.s));
    finish("theta_quasi_periodicity", pt, out, "z = z1, z2, z3")
}

pub fn check_theta_inversion(pt: &SamplePoint) -> CheckReport {
    let out = theta_inversion_sides(&pt.params, &pt.z).and_then(|s| s.residual(&pt.s));
    finish("theta_inversion", pt, out, "z = z1, z2, z3")
}

pub fn check_truncation_convergence(pt: &SamplePoint) -> CheckReport {
    let out = truncation_convergence_sides(&pt.params, &pt.z).and_then(|s| s.residual(&pt.s));
    let detail = format!(
        "orders {} and {}",
        pt.params.truncation_order(),
        2 * pt.params.truncation_order()
    );
    finish("truncation_convergence", pt, out, &detail)
}

pub fn check_n_periodicity(pt: &SamplePoint) -> CheckReport {
    let out = n_periodicity_sides(&pt.params, &pt.z, 4).and_then(|s| s.residual(&pt.s));
    finish("n_periodicity", pt, out, "z = z1, z2, z3")
}

pub fn check_trigonometric_limit(pt: &SamplePoint) -> CheckReport {
    let out = trigonometric_limit_sides(&pt.params, &pt.z, &pt.s).and_then(|s| s.residual(&pt.s));
    finish("trigonometric_limit", pt, out, "p = 0 at the point's q")
}

// ---------------------------------------------------------------------------
// Random dynamical data

/// Seeded generator of Laurent polynomials in `w = q^{2s}` and matrices of
/// them.
pub struct RandomDyn {
    rng: ChaCha8Rng,
    params: Params,
}

impl RandomDyn {
    pub fn new(params: &Params, seed: u64) -> Self {
        RandomDyn {
            rng: ChaCha8Rng::seed_from_u64(seed),
            params: *params,
        }
    }

    fn coefficient(&mut self) -> Cx {
        Cx::new(self.rng.random_range(-1.0..1.0), self.rng.random_range(-1.0..1.0))
    }

    /// `Σ_{k=-1}^{1} c_k w^k` with random complex `c_k`.
    pub fn laurent(&mut self) -> DynScalar {
        let coeffs: Vec<Cx> = (0..3).map(|_| self.coefficient()).collect();
        let params = self.params;
        DynScalar::new(move |s| {
            Ok(coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * params.dyn_w(s * (k as f64 - 1.0)))
                .sum())
        })
    }

    pub fn matrix(&mut self, legs: usize) -> DynMatrix {
        let dim = 1 << legs;
        let entries = (0..dim * dim).map(|_| self.laurent()).collect();
        DynMatrix::from_entries(legs, entries)
    }

    /// Random matrix with the entries violating the zero-weight condition
    /// set to zero.
    pub fn zero_weight_matrix(&mut self, legs: usize) -> DynMatrix {
        zero_weight_part(&self.matrix(legs))
    }

    pub fn element(&mut self, degrees: &[i32]) -> ShiftElement {
        degrees.iter().fold(ShiftElement::zero(), |acc, &k| {
            acc.add(&ShiftElement::term(self.laurent(), k))
        })
    }
}

fn total_weight(flat: usize, legs: usize) -> i32 {
    (0..legs).map(|l| weight(leg_index(flat, l, legs))).sum()
}

/// Keeps the entries whose row and column weight totals agree.
pub fn zero_weight_part(m: &DynMatrix) -> DynMatrix {
    let inner = m.clone();
    let legs = m.legs();
    DynMatrix::new(legs, move |s| {
        let mut v = inner.eval(s)?;
        for r in 0..v.nrows() {
            for c in 0..v.ncols() {
                if total_weight(r, legs) != total_weight(c, legs) {
                    v[(r, c)] = Cx::new(0.0, 0.0);
                }
            }
        }
        Ok(v)
    })
}

// ---------------------------------------------------------------------------
// Shift calculus

fn element_pairs(a: &ShiftElement, b: &ShiftElement, samples: &[Cx]) -> Result<Vec<(Cx, Cx)>> {
    let mut pairs = Vec::new();
    let zero = Cx::new(0.0, 0.0);
    for &s in samples {
        let ca = a.eval_coefficients(s)?;
        let cb = b.eval_coefficients(s)?;
        for k in ca.keys().chain(cb.keys()) {
            pairs.push((*ca.get(k).unwrap_or(&zero), *cb.get(k).unwrap_or(&zero)));
        }
    }
    Ok(pairs)
}

/// Associativity of the skew product on random triples and `E·f = f(s+1)·E`.
pub fn skew_ring_sides(params: &Params, seed: u64, samples: &[Cx]) -> Result<Sides> {
    let mut gen = RandomDyn::new(params, seed);
    let a = gen.element(&[-1, 0, 2]);
    let b = gen.element(&[0, 1]);
    let c = gen.element(&[-2, 1]);
    let left = skew_mul(&a, &skew_mul(&b, &c));
    let right = skew_mul(&skew_mul(&a, &b), &c);
    let mut pairs = element_pairs(&left, &right, samples)?;
    let f = gen.laurent();
    let ef = skew_mul(&ShiftElement::shift_operator(1), &ShiftElement::from_scalar(f.clone()));
    pairs.extend(element_pairs(&ef, &ShiftElement::term(f.shift(1), 1), samples)?);
    Ok(Sides::Values(pairs))
}

/// Component and operator forms of sc/sl on one and two legs, both signs.
pub fn shift_operator_forms_sides(params: &Params, seed: u64) -> Vec<Sides> {
    let mut gen = RandomDyn::new(params, seed);
    let mut out = Vec::new();
    for legs in [1, 2] {
        let m = gen.matrix(legs);
        let lifted = ShiftMatrix::from_dyn(m.clone());
        for leg in 0..legs {
            for sign in [1, -1] {
                let d = weight_shift_matrix(legs, leg, sign);
                let d_inv = weight_shift_matrix(legs, leg, -sign);
                let sc = d
                    .mul(&lifted.transpose_leg(leg))
                    .transpose_leg(leg)
                    .mul(&d_inv);
                out.push(Sides::Shift(ShiftMatrix::from_dyn(m.shift_col(&[(leg, sign)])), sc));
                let sl = d.mul(&lifted).transpose_leg(leg).mul(&d_inv).transpose_leg(leg);
                out.push(Sides::Shift(ShiftMatrix::from_dyn(m.shift_row(&[(leg, sign)])), sl));
            }
        }
    }
    out
}

/// `(M^{t_l})^{sc_l} = (M^{sl_l})^{t_l}` on each leg; `same_kind` uses sc
/// on both sides.
pub fn transpose_shift_exchange_sides(params: &Params, seed: u64, same_kind: bool) -> Vec<Sides> {
    let m = RandomDyn::new(params, seed).matrix(2);
    (0..2)
        .map(|leg| {
            let spec = [(leg, 1)];
            let lhs = m.transpose_leg(leg).shift_col(&spec);
            let rhs = if same_kind {
                m.shift_col(&spec).transpose_leg(leg)
            } else {
                m.shift_row(&spec).transpose_leg(leg)
            };
            Sides::Dyn(lhs, rhs)
        })
        .collect()
}

/// `M e^{(−σ_z⁽¹⁾+σ_z⁽²⁾)∂} = e^{(−σ_z⁽¹⁾+σ_z⁽²⁾)∂} M^{sl₁−sl₂}` for `M^{t₁}`
/// zero-weight.
pub fn zero_weight_shift_commutation_sides(params: &Params, seed: u64) -> Sides {
    let m = RandomDyn::new(params, seed).zero_weight_matrix(2).transpose_leg(0);
    let w = joint_weight_shift(2, &[(0, -1), (1, 1)]);
    let lhs = ShiftMatrix::from_dyn(m.clone()).mul(&w);
    let rhs = w.mul(&ShiftMatrix::from_dyn(m.shift_row(&[(0, 1), (1, -1)])));
    Sides::Shift(lhs, rhs)
}

/// `(σ_y⁽¹⁾ A σ_y⁽¹⁾)^{t₁} = σ_y⁽¹⁾ A^{t₁} σ_y⁽¹⁾`.
pub fn sigma_y_transpose_sides(params: &Params, seed: u64) -> Sides {
    let a = RandomDyn::new(params, seed).matrix(2);
    let sy = sigma_y1();
    let lhs = (&(&sy * &a) * &sy).transpose_leg(0);
    let rhs = &(&sy * &a.transpose_leg(0)) * &sy;
    Sides::Dyn(lhs, rhs)
}

/// Both R-matrices against their zero-weight parts.
pub fn zero_weight_sides(params: &Params, z: Cx) -> Result<Vec<Sides>> {
    Gauge::ALL
        .iter()
        .map(|&g| {
            let r = r_matrix(z, params, g)?;
            Ok(Sides::Dyn(r.clone(), zero_weight_part(&r)))
        })
        .collect()
}

pub fn check_skew_associativity(pt: &SamplePoint) -> CheckReport {
    let out = skew_ring_sides(&pt.params, pt.seed, &pt.s).and_then(|s| s.residual(&pt.s));
    let mut rep = finish("skew_associativity", pt, out, "random triples, E*f = f(s+1)*E");
    rep.point = rep.point.with_seed(pt.seed);
    rep
}

pub fn check_shift_operator_forms(pt: &SamplePoint) -> CheckReport {
    let out = max_residual(&shift_operator_forms_sides(&pt.params, pt.seed), &pt.s);
    let mut rep = finish("shift_operator_forms", pt, out, "sc and sl, one and two legs, both signs");
    rep.point = rep.point.with_seed(pt.seed);
    rep
}

pub fn check_transpose_shift_exchange(pt: &SamplePoint) -> CheckReport {
    let out = max_residual(&transpose_shift_exchange_sides(&pt.params, pt.seed, false), &pt.s);
    let mut rep = finish("transpose_shift_exchange", pt, out, "legs 1 and 2");
    rep.point = rep.point.with_seed(pt.seed);
    rep
}

pub fn check_zero_weight_shift_commutation(pt: &SamplePoint) -> CheckReport {
    let out = zero_weight_shift_commutation_sides(&pt.params, pt.seed).residual(&pt.s);
    let mut rep = finish("zero_weight_shift_commutation", pt, out, "random M with M^t1 zero-weight");
    rep.point = rep.point.with_seed(pt.seed);
    rep
}

pub fn check_sigma_y_transpose(pt: &SamplePoint) -> CheckReport {
    let out = sigma_y_transpose_sides(&pt.params, pt.seed).residual(&pt.s);
    let mut rep = finish("sigma_y_transpose", pt, out, "random A");
    rep.point = rep.point.with_seed(pt.seed);
    rep
}

pub fn check_zero_weight(pt: &SamplePoint) -> CheckReport {
    let out = zero_weight_sides(&pt.params, pt.z[0]).and_then(|s| max_residual(&s, &pt.s));
    finish("zero_weight", pt, out, "R and Rtilde at z = z1")
}

// ---------------------------------------------------------------------------
// Trace exchange

/// `tr₁(A e^{-σ_z⁽¹⁾∂} M₁ e^{σ_z⁽¹⁾∂} C) = tr₁((C^{sl₁.t₂} A^{sc₁.t₂})^{-sc₁} e^{-σ_z⁽¹⁾∂} M₁ e^{σ_z⁽¹⁾∂})^{t₂}`
/// for random `A`, `C` and a random one-leg `M₁` with entries that are
/// functions of λ. `swap_roles` exchanges sl₁ and sc₁ on the right.
pub fn trace_exchange_sides(params: &Params, seed: u64, swap_roles: bool) -> Sides {
    let mut gen = RandomDyn::new(params, seed);
    let a = gen.matrix(2);
    let c = gen.matrix(2);
    let m1 = ShiftMatrix::from_dyn(gen.matrix(1).embed(2, &[0]));
    let conj = weight_shift_matrix(2, 0, -1)
        .mul(&m1)
        .mul(&weight_shift_matrix(2, 0, 1));
    let lhs = ShiftMatrix::from_dyn(a.clone())
        .mul(&conj)
        .mul(&ShiftMatrix::from_dyn(c.clone()))
        .partial_trace(0);
    let spec = [(0, 1)];
    let (c_dressed, a_dressed) = if swap_roles {
        (c.shift_col(&spec), a.shift_row(&spec))
    } else {
        (c.shift_row(&spec), a.shift_col(&spec))
    };
    let product = &c_dressed.transpose_leg(1) * &a_dressed.transpose_leg(1);
    let rhs = ShiftMatrix::from_dyn(product.shift_col(&[(0, -1)]))
        .mul(&conj)
        .partial_trace(0)
        .transpose_leg(0);
    Sides::Shift(lhs, rhs)
}

pub fn check_trace_exchange(pt: &SamplePoint) -> CheckReport {
    let out = trace_exchange_sides(&pt.params, pt.seed, false).residual(&pt.s);
    let mut rep = finish("trace_exchange", pt, out, "random A, C (Laurent in w), M1 of degree 0");
    rep.point = rep.point.with_seed(pt.seed);
    rep
}
