//! R-matrix level identities. Each `*_sides` builder returns both sides of
//! one identity; the flags select the corruptions used as negative controls.

use super::{CheckReport, PointRecord, SamplePoint, Sides};
use crate::error::Result;
use crate::params::{Cx, Params};
use crate::rmatrix::{
    det_gauge, det_gauge_minus_sc, gamma_matrix, mu, n_matrix, n_matrix_from_ratio, r_matrix,
    ratio_matrix, twist_with_sign, gauge_matrix, upsilon, upsilon_ratio, upsilon_scalar, Gauge,
};
use crate::shift::{
    joint_weight_shift, leg_index, promote_shifted_scalar, weight, CMat, DynMatrix, ShiftMatrix,
};
use crate::special::unitarity_scalar;

fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

/// `σ_y ⊗ 1`.
pub(crate) fn sigma_y1() -> DynMatrix {
    let sy = CMat::from_row_slice(2, 2, &[cx(0.0, 0.0), cx(0.0, -1.0), cx(0.0, 1.0), cx(0.0, 0.0)]);
    DynMatrix::constant(1, sy).embed(2, &[0])
}

pub(crate) fn sigma_y() -> DynMatrix {
    sigma_y1().partial_trace(1).scale(cx(0.5, 0.0))
}

/// Diagonal two-leg matrix with entry `f(weight(I₁), weight(I₂), s)`.
fn diag2(f: impl Fn(i32, i32, Cx) -> Result<Cx> + Send + Sync + 'static) -> DynMatrix {
    DynMatrix::diagonal(2, move |i, s| {
        f(weight(leg_index(i, 0, 2)), weight(leg_index(i, 1, 2)), s)
    })
}

/// `Υ(λ + e·σ_z^{(2)}) / Υ(λ)`.
fn upsilon_leg2(params: &Params, e: i32) -> DynMatrix {
    let params = *params;
    diag2(move |_, w2, s| upsilon_ratio(s, e * w2, &params))
}

fn r(params: &Params, z: Cx, gauge: Gauge) -> Result<DynMatrix> {
    r_matrix(z, params, gauge)
}

fn report(name: &str, pt: &SamplePoint, sides: Result<Sides>, detail: &str) -> CheckReport {
    let outcome = sides.and_then(|s| s.residual(&pt.s));
    CheckReport::from_outcome(name, pt.record(), outcome, pt.params.tolerance(), detail)
}

// ---------------------------------------------------------------------------
// Dynamical Yang–Baxter equation

/// `R₁₂(λ+h⁽³⁾) R₁₃(λ) R₂₃(λ+h⁽¹⁾) = R₂₃(λ) R₁₃(λ+h⁽²⁾) R₁₂(λ)` on three legs.
pub fn dybe_sides(
    params: &Params,
    z: [Cx; 3],
    gauge: Gauge,
    drop_first_spectator: bool,
) -> Result<Sides> {
    let r12 = r(params, z[0] / z[1], gauge)?.embed(3, &[0, 1]);
    let r13 = r(params, z[0] / z[2], gauge)?.embed(3, &[0, 2]);
    let r23 = r(params, z[1] / z[2], gauge)?.embed(3, &[1, 2]);
    let r23_h1 = if drop_first_spectator {
        r23.clone()
    } else {
        r23.shift_row(&[(0, 1)])
    };
    let lhs = &(&r12.shift_row(&[(2, 1)]) * &r13) * &r23_h1;
    let rhs = &(&r23 * &r13.shift_row(&[(1, 1)])) * &r12;
    Ok(Sides::Dyn(lhs, rhs))
}

pub fn check_dybe(pt: &SamplePoint, gauge: Gauge) -> CheckReport {
    let name = match gauge {
        Gauge::Standard => "dybe_r",
        Gauge::Twisted => "dybe_rtilde",
    };
    report(name, pt, dybe_sides(&pt.params, pt.z, gauge, false), "spectral arguments z1/z2, z1/z3, z2/z3")
}

// ---------------------------------------------------------------------------
// Unitarity

/// `(c·R₁₂(z)) R₂₁(1/z) = 𝔫(z)`; `c = 1` is the identity.
pub fn unitarity_sides(params: &Params, z: Cx, gauge: Gauge, scale: Cx) -> Result<Sides> {
    let lhs = &r(params, z, gauge)?.scale(scale) * &r(params, z.inv(), gauge)?.swap_legs(0, 1);
    let n = unitarity_scalar(z, params)?;
    Ok(Sides::Dyn(lhs, DynMatrix::identity(2).scale(n)))
}

pub fn check_unitarity(pt: &SamplePoint, gauge: Gauge) -> CheckReport {
    let name = match gauge {
        Gauge::Standard => "unitarity_r",
        Gauge::Twisted => "unitarity_rtilde",
    };
    report(name, pt, unitarity_sides(&pt.params, pt.z[0], gauge, cx(1.0, 0.0)), "z = z1")
}

// ---------------------------------------------------------------------------
// Crossing

/// `σ_y⁽¹⁾ (R^{t₁}(z⁻¹q⁻²))^{-sl₁} σ_y⁽¹⁾ Υ(λ+σ_z⁽²⁾)/Υ(λ) = R⁻¹(z⁻¹)`.
pub fn crossing_sides(params: &Params, z: Cx) -> Result<Sides> {
    let q2 = params.q() * params.q();
    let sy = sigma_y1();
    let crossed = r(params, (z * q2).inv(), Gauge::Standard)?
        .transpose_leg(0)
        .shift_row(&[(0, -1)]);
    let lhs = &(&(&sy * &crossed) * &sy) * &upsilon_leg2(params, 1);
    let rhs = r(params, z.inv(), Gauge::Standard)?.inverse(params.singular_guard());
    Ok(Sides::Dyn(lhs, rhs))
}

/// The Γ-dressed crossing relation of the twisted gauge; `with_gamma =
/// false` replaces Γ by the identity.
pub fn crossing_tilde_sides(params: &Params, z: Cx, with_gamma: bool) -> Result<Sides> {
    let guard = params.singular_guard();
    let q2 = params.q() * params.q();
    let sy = sigma_y1();
    let g1 = if with_gamma {
        gamma_matrix(params).embed(2, &[0])
    } else {
        DynMatrix::identity(2)
    };
    let crossed = r(params, (z * q2).inv(), Gauge::Twisted)?
        .transpose_leg(0)
        .shift_row(&[(0, -1)]);
    let g1_shift_inv = g1.shift_row(&[(1, 1)]).inverse(guard);
    let lhs = &(&(&(&(&sy * &g1) * &crossed) * &g1_shift_inv) * &sy) * &upsilon_leg2(params, 1);
    let rhs = r(params, z.inv(), Gauge::Twisted)?.inverse(guard);
    Ok(Sides::Dyn(lhs, rhs))
}

pub fn check_crossing(pt: &SamplePoint) -> CheckReport {
    report("crossing", pt, crossing_sides(&pt.params, pt.z[0]), "R, z = z1")
}

pub fn check_crossing_tilde(pt: &SamplePoint) -> CheckReport {
    report("crossing_tilde", pt, crossing_tilde_sides(&pt.params, pt.z[0], true), "Rtilde, z = z1")
}

// ---------------------------------------------------------------------------
// Crossing-unitarity

/// `((R₁₂(z⁻¹q^{k})^{-sl₂})^{t₁})⁻¹ = 𝔫(z)⁻¹ G₁⁻¹ (R₂₁^{t₁}(z))^{-sc₂} G₁(λ−σ_z⁽²⁾)`
/// with `k = q_power` (`−4` in the identity).
pub fn crossing_unitarity_sides(
    params: &Params,
    z: Cx,
    gauge: Gauge,
    q_power: i32,
) -> Result<Sides> {
    let guard = params.singular_guard();
    let lhs = r(params, params.q_powi(q_power) / z, gauge)?
        .shift_row(&[(1, -1)])
        .transpose_leg(0)
        .inverse(guard);
    let g1 = ratio_matrix(params).embed(2, &[0]);
    let n = unitarity_scalar(z, params)?;
    let middle = r(params, z, gauge)?
        .swap_legs(0, 1)
        .transpose_leg(0)
        .shift_col(&[(1, -1)]);
    let rhs = (&(&g1.inverse(guard) * &middle) * &g1.shift_row(&[(1, -1)])).scale(n.inv());
    Ok(Sides::Dyn(lhs, rhs))
}

pub fn check_crossing_unitarity(pt: &SamplePoint, gauge: Gauge) -> CheckReport {
    let name = match gauge {
        Gauge::Standard => "crossing_unitarity_r",
        Gauge::Twisted => "crossing_unitarity_rtilde",
    };
    report(name, pt, crossing_unitarity_sides(&pt.params, pt.z[0], gauge, -4), "z = z1")
}

// ---------------------------------------------------------------------------
// Twist

/// `R̃ = g₂(λ) g₁(λ+κh⁽²⁾) R g₁⁻¹(λ) g₂⁻¹(λ+κh⁽¹⁾)`; `κ = 1` is the identity.
pub fn twist_sides(params: &Params, z: Cx, sign: i32) -> Result<Sides> {
    let standard = r(params, z, Gauge::Standard)?;
    let twisted = twist_with_sign(&standard, &gauge_matrix(params), params.singular_guard(), sign);
    Ok(Sides::Dyn(twisted, r(params, z, Gauge::Twisted)?))
}

pub fn check_twist(pt: &SamplePoint) -> CheckReport {
    report("twist", pt, twist_sides(&pt.params, pt.z[0], 1), "z = z1")
}

// ---------------------------------------------------------------------------
// Crossing-unitarity derivation, step by step (twisted gauge)

struct ChainParts {
    params: Params,
    s: DynMatrix,
    g1: DynMatrix,
    g1_inv: DynMatrix,
    /// `(R̃^{t₁}(z⁻¹q⁻⁴))^{-sl₁}` dressed: `G₁ (·) Γ₁(λ+σ_z⁽²⁾)⁻¹`.
    m: DynMatrix,
    /// `Γ₁ R̃⁻¹(z⁻¹) Γ₁(λ+σ_z⁽²⁾)⁻¹`.
    mz: DynMatrix,
    rq2: DynMatrix,
    rq4: DynMatrix,
    rzi: DynMatrix,
    r21: DynMatrix,
    n: Cx,
}

impl ChainParts {
    fn new(params: &Params, z: Cx) -> Result<Self> {
        let guard = params.singular_guard();
        let q = params.q();
        let g1 = gamma_matrix(params).embed(2, &[0]);
        let g1_inv = g1.inverse(guard);
        let rq2 = r(params, (z * q * q).inv(), Gauge::Twisted)?;
        let rq4 = r(params, (z * q.powi(4)).inv(), Gauge::Twisted)?;
        let rzi = r(params, z.inv(), Gauge::Twisted)?;
        let g1_up_inv = g1.shift_row(&[(1, 1)]).inverse(guard);
        let m = &(&g1 * &rq4.transpose_leg(0).shift_row(&[(0, -1)])) * &g1_up_inv;
        let mz = &(&g1 * &rzi.inverse(guard)) * &g1_up_inv;
        Ok(ChainParts {
            params: *params,
            s: sigma_y1(),
            g1,
            g1_inv,
            m,
            mz,
            rq2,
            rq4,
            rzi,
            r21: r(params, z, Gauge::Twisted)?.swap_legs(0, 1),
            n: unitarity_scalar(z, params)?,
        })
    }

    fn guard(&self) -> f64 {
        self.params.singular_guard()
    }

    /// `diag(μ(s+a·w₁+b·w₂) / μ(s+c·w₁+d·w₂))`.
    fn mu_ratio(&self, num: (i32, i32), den: (i32, i32)) -> DynMatrix {
        let mu = mu(&self.params);
        diag2(move |w1, w2, s| {
            let shift = |(a, b): (i32, i32)| s + (a * w1 + b * w2) as f64;
            Ok(mu.eval(shift(num))? / mu.eval(shift(den))?)
        })
    }

    /// `diag(Υ(s+w₁)/Υ(s+w₁−w₂))`.
    fn upsilon_split(&self) -> DynMatrix {
        let params = self.params;
        diag2(move |w1, w2, s| Ok(upsilon_ratio(s + w1 as f64, -w2, &params)?.inv()))
    }

    fn mz_t1_minus_sc2(&self) -> DynMatrix {
        self.mz.transpose_leg(0).shift_col(&[(1, -1)])
    }

    fn rq4_t1_inverse(&self) -> DynMatrix {
        self.rq4
            .shift_row(&[(1, -1)])
            .transpose_leg(0)
            .inverse(self.guard())
    }

    fn inverted_crossing(&self) -> Sides {
        let up_inv = upsilon_leg2(&self.params, 1).inverse(self.guard());
        let crossed_inv = self
            .rq2
            .transpose_leg(0)
            .shift_row(&[(0, -1)])
            .inverse(self.guard());
        let lhs = chain(&[
            &up_inv,
            &self.s,
            &self.g1.shift_row(&[(1, 1)]),
            &crossed_inv,
            &self.g1_inv,
            &self.s,
        ]);
        Sides::Dyn(lhs, self.rzi.clone())
    }

    fn shifted_inverse(&self) -> Sides {
        let guard = self.guard();
        let up_inv = upsilon_leg2(&self.params, 1).inverse(guard);
        let lhs = chain(&[&up_inv, &self.s, &self.m.inverse(guard), &self.s]);
        let ups = upsilon_scalar(&self.params);
        let inner = chain(&[
            &self.g1_inv.scale_by(&ups),
            &self.s,
            &self.rzi.inverse(guard),
            &self.s,
            &self.g1.shift_row(&[(1, 1)]),
            &promote_shifted_scalar(&ups, 2, &[(1, 1)]).inverse(guard),
        ]);
        let rhs = inner.transpose_leg(0).shift_col(&[(0, 1)]);
        Sides::Dyn(lhs, rhs)
    }

    fn sigma_y_rearranged(&self) -> Sides {
        let lhs = &self.m.inverse(self.guard()) * &self.s;
        let rhs = chain(&[
            &upsilon_leg2(&self.params, 1),
            &(&self.mz.transpose_leg(0) * &self.s).shift_col(&[(0, 1)]),
            &self.mu_ratio((1, 0), (1, 1)),
        ]);
        Sides::Dyn(lhs, rhs)
    }

    fn sl_commutation(&self) -> Sides {
        let mi = self.m.inverse(self.guard());
        let w = joint_weight_shift(2, &[(0, -1), (1, 1)]);
        let lhs = ShiftMatrix::from_dyn(mi.clone()).mul(&w);
        let rhs = w.mul(&ShiftMatrix::from_dyn(mi.shift_row(&[(0, 1), (1, -1)])));
        Sides::Shift(lhs, rhs)
    }

    fn sl_inverse(&self) -> Sides {
        let spec = [(0, 1), (1, -1)];
        let lhs = self.m.inverse(self.guard()).shift_row(&spec);
        let rhs = self.m.shift_row(&spec).inverse(self.guard());
        Sides::Dyn(lhs, rhs)
    }

    fn component_form(&self) -> Sides {
        let lhs = self.m.shift_row(&[(0, 1), (1, -1)]);
        let rhs = chain(&[
            &self.g1.shift_row(&[(1, -1)]).shift_col(&[(0, 1)]),
            &self.rq4.transpose_leg(0).shift_row(&[(1, -1)]),
            &self.g1_inv.shift_col(&[(0, 1)]),
        ]);
        Sides::Dyn(lhs, rhs)
    }

    fn sigma_y_sc(&self) -> Sides {
        let mzt = self.mz.transpose_leg(0);
        let lhs = ShiftMatrix::from_dyn((&mzt * &self.s).shift_col(&[(0, 1)]))
            .mul(&joint_weight_shift(2, &[(0, 1), (1, 1)]));
        let rhs = joint_weight_shift(2, &[(0, -1), (1, 1)])
            .mul(&ShiftMatrix::from_dyn(&self.mz_t1_minus_sc2() * &self.s));
        Sides::Shift(lhs, rhs)
    }

    fn lhs_operator(&self) -> Sides {
        let guard = self.guard();
        let lhs = ShiftMatrix::from_dyn(&self.m.inverse(guard) * &self.s)
            .mul(&joint_weight_shift(2, &[(0, 1), (1, 1)]));
        let inner = chain(&[
            &self.g1.shift_col(&[(0, 1)]),
            &self.rq4_t1_inverse(),
            &self.g1.shift_row(&[(1, -1)]).inverse(guard).shift_col(&[(0, 1)]),
            &self.s,
        ]);
        let rhs = joint_weight_shift(2, &[(0, -1), (1, 1)]).mul(&ShiftMatrix::from_dyn(inner));
        Sides::Shift(lhs, rhs)
    }

    fn rhs_operator(&self) -> Sides {
        let lhs_inner = chain(&[
            &upsilon_leg2(&self.params, 1),
            &(&self.mz.transpose_leg(0) * &self.s).shift_col(&[(0, 1)]),
            &self.mu_ratio((1, 0), (1, 1)),
        ]);
        let lhs = ShiftMatrix::from_dyn(lhs_inner).mul(&joint_weight_shift(2, &[(0, 1), (1, 1)]));
        let rhs_inner = chain(&[
            &self.upsilon_split(),
            &self.mz_t1_minus_sc2(),
            &self.s,
            &self.mu_ratio((0, -1), (0, 0)),
        ]);
        let rhs = joint_weight_shift(2, &[(0, -1), (1, 1)]).mul(&ShiftMatrix::from_dyn(rhs_inner));
        Sides::Shift(lhs, rhs)
    }

    fn reduced(&self) -> Sides {
        let guard = self.guard();
        let lhs = chain(&[
            &self.g1.shift_col(&[(0, 1)]),
            &self.rq4_t1_inverse(),
            &self.g1.shift_row(&[(1, -1)]).inverse(guard).shift_col(&[(0, 1)]),
        ]);
        let rhs = chain(&[
            &self.upsilon_split(),
            &self.mz_t1_minus_sc2(),
            &self.mu_ratio((0, -1), (0, 0)),
        ]);
        Sides::Dyn(lhs, rhs)
    }

    fn unitarity_component(&self) -> Sides {
        let rhs = chain(&[
            &self.g1_inv,
            &self.r21.transpose_leg(0).shift_col(&[(1, -1)]),
            &self.g1.shift_row(&[(1, -1)]),
        ])
        .scale(self.n.inv());
        Sides::Dyn(self.mz_t1_minus_sc2(), rhs)
    }
}

fn chain(factors: &[&DynMatrix]) -> DynMatrix {
    let (first, rest) = factors.split_first().expect("non-empty product");
    rest.iter().fold((*first).clone(), |acc, f| &acc * *f)
}

/// `Γ μ/Υ(λ+σ_z) Γ^{sc} = Υ(λ)/Υ(λ+σ_z)` on one leg. With `omit_det_sc`
/// the `(det g^{-sc})⁻¹` factor of μ is dropped.
pub fn gamma_mu_sides(params: &Params, omit_det_sc: bool) -> Sides {
    let gamma = gamma_matrix(params);
    let mu = if omit_det_sc {
        upsilon_scalar(params).mul(&det_gauge(params).recip())
    } else {
        mu(params)
    };
    let p = *params;
    let middle = DynMatrix::diagonal(1, move |i, s| {
        Ok(mu.eval(s)? / upsilon(s + weight(i) as f64, &p)?)
    });
    let lhs = chain(&[&gamma, &middle, &gamma.shift_col(&[(0, 1)])]);
    Sides::Dyn(lhs, ratio_matrix(params))
}

/// `Γ⁻¹ σ_y = (det g)⁻¹ (det g^{-sc})⁻¹ σ_y Γ` on one leg.
pub fn gamma_commutation_sides(params: &Params) -> Sides {
    let gamma = gamma_matrix(params);
    let sy = sigma_y();
    let factor = det_gauge(params).mul(&det_gauge_minus_sc(params)).recip();
    let lhs = &gamma.inverse(params.singular_guard()) * &sy;
    let rhs = (&sy * &gamma).scale_by(&factor);
    Sides::Dyn(lhs, rhs)
}

/// Names of the derivation steps, in order.
pub const CHAIN_STEPS: [&str; 13] = [
    "inverted_crossing",
    "shifted_inverse",
    "sigma_y_rearranged",
    "sl_commutation",
    "sl_inverse",
    "component_form",
    "sigma_y_sc",
    "lhs_operator",
    "rhs_operator",
    "reduced",
    "unitarity_component",
    "gamma_mu",
    "gamma_commutation",
];

pub const CHAIN_PREFIX: &str = "crossing_unitarity_chain";

/// Both sides of every derivation step of the crossing-unitarity relation.
pub fn crossing_unitarity_chain_sides(params: &Params, z: Cx) -> Result<Vec<(&'static str, Sides)>> {
    let parts = ChainParts::new(params, z)?;
    Ok(vec![
        (CHAIN_STEPS[0], parts.inverted_crossing()),
        (CHAIN_STEPS[1], parts.shifted_inverse()),
        (CHAIN_STEPS[2], parts.sigma_y_rearranged()),
        (CHAIN_STEPS[3], parts.sl_commutation()),
        (CHAIN_STEPS[4], parts.sl_inverse()),
        (CHAIN_STEPS[5], parts.component_form()),
        (CHAIN_STEPS[6], parts.sigma_y_sc()),
        (CHAIN_STEPS[7], parts.lhs_operator()),
        (CHAIN_STEPS[8], parts.rhs_operator()),
        (CHAIN_STEPS[9], parts.reduced()),
        (CHAIN_STEPS[10], parts.unitarity_component()),
        (CHAIN_STEPS[11], gamma_mu_sides(params, false)),
        (CHAIN_STEPS[12], gamma_commutation_sides(params)),
    ])
}

/// One report per derivation step; a singular setup skips every step.
pub fn check_crossing_unitarity_chain(pt: &SamplePoint) -> Vec<CheckReport> {
    let name = |step: &str| format!("{CHAIN_PREFIX}.{step}");
    match crossing_unitarity_chain_sides(&pt.params, pt.z[0]) {
        Ok(steps) => steps
            .into_iter()
            .map(|(step, sides)| report(&name(step), pt, Ok(sides), "Rtilde, z = z1"))
            .collect(),
        Err(e) => CHAIN_STEPS
            .iter()
            .map(|step| report(&name(step), pt, Err(e.clone()), ""))
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Critical-level condition

/// `((R₁₂(βz₁/z₂)^{-sl₂})^{t₁})⁻¹ = a⁻¹ (N₁^{sc₁})⁻¹ (R₂₁^{t₁}(αz₂/z₁))^{-sc₂} N₁(λ−σ_z⁽²⁾)^{sc₁}`
/// with `N = G^{-sc}` and `a = 𝔫(αz₂/z₁)`.
pub fn magic_sides(
    params: &Params,
    z1: Cx,
    z2: Cx,
    alpha: Cx,
    beta: Cx,
    gauge: Gauge,
) -> Result<Sides> {
    let guard = params.singular_guard();
    let lhs = r(params, beta * z1 / z2, gauge)?
        .shift_row(&[(1, -1)])
        .transpose_leg(0)
        .inverse(guard);
    let x = alpha * z2 / z1;
    let a = unitarity_scalar(x, params)?;
    let n1 = n_matrix_from_ratio(params).embed(2, &[0]);
    let rhs = chain(&[
        &n1.shift_col(&[(0, 1)]).inverse(guard),
        &r(params, x, gauge)?
            .swap_legs(0, 1)
            .transpose_leg(0)
            .shift_col(&[(1, -1)]),
        &n1.shift_row(&[(1, -1)]).shift_col(&[(0, 1)]),
    ])
    .scale(a.inv());
    Ok(Sides::Dyn(lhs, rhs))
}

/// Single evaluation of the critical-level condition at explicit `(α, β)`;
/// the detail records `αβ q⁴`.
pub fn check_magic(pt: &SamplePoint, alpha: Cx, beta: Cx, gauge: Gauge) -> CheckReport {
    let product = alpha * beta * pt.params.q_powi(4);
    let detail = format!(
        "{} gauge, alpha*beta*q^4 = {}{:+}i",
        gauge.label(),
        product.re,
        product.im
    );
    let sides = magic_sides(&pt.params, pt.z[0], pt.z[1], alpha, beta, gauge);
    let mut rep = report("magic", pt, sides, &detail);
    rep.point = rep.point.with_alpha_beta(alpha, beta);
    rep
}

/// The `(α, β)` pairs exercised per point: the two distinct table
/// assignments at the critical levels and a free split of `q⁻⁴`, each with
/// `β` multiplied by `e^δ`.
pub fn magic_assignments(pt: &SamplePoint, offset: f64) -> [(&'static str, Cx, Cx); 3] {
    let p = &pt.params;
    let bump = cx(offset.exp(), 0.0);
    [
        ("alpha=beta=q^-2", p.q_powi(-2), p.q_powi(-2) * bump),
        ("alpha=q^-4,beta=1", p.q_powi(-4), bump),
        ("alpha=q^-4*t,beta=1/t", p.q_powi(-4) * pt.t, pt.t.inv() * bump),
    ]
}

/// Suite form: all assignments of [`magic_assignments`] in both gauges, the
/// residual being the worst of the six.
pub fn check_magic_point(pt: &SamplePoint, offset: f64) -> CheckReport {
    let mut worst: Result<f64> = Ok(0.0);
    let mut parts = Vec::new();
    for (label, alpha, beta) in magic_assignments(pt, offset) {
        for gauge in Gauge::ALL {
            let res = magic_sides(&pt.params, pt.z[0], pt.z[1], alpha, beta, gauge)
                .and_then(|s| s.residual(&pt.s));
            match res {
                Ok(v) => {
                    parts.push(format!("{}[{label}]={v:e}", gauge.label()));
                    if let Ok(w) = worst.as_mut() {
                        *w = super::nan_max(*w, v);
                    }
                }
                Err(e) => {
                    worst = Err(e);
                }
            }
        }
    }
    let detail = format!("offset={offset}; {}", parts.join(", "));
    let (_, alpha, beta) = magic_assignments(pt, offset)[2];
    CheckReport::from_outcome(
        "magic",
        pt.record().with_alpha_beta(alpha, beta),
        worst,
        pt.params.tolerance(),
        detail,
    )
}

/// `(N₁(λ−σ_z⁽²⁾) R₂₁(x)^{-sl₁-sl₂})^{sc₁.t₁} = (R₂₁(x)^{t₁})^{-sc₂} N₁(λ−σ_z⁽²⁾)^{sc₁}`.
pub fn magic_component_sides(params: &Params, x: Cx, gauge: Gauge) -> Result<Sides> {
    let r21 = r(params, x, gauge)?.swap_legs(0, 1);
    let n1m = n_matrix_from_ratio(params).embed(2, &[0]).shift_row(&[(1, -1)]);
    let lhs = (&n1m * &r21.shift_row(&[(0, -1), (1, -1)]))
        .shift_col(&[(0, 1)])
        .transpose_leg(0);
    let rhs = &r21.transpose_leg(0).shift_col(&[(1, -1)]) * &n1m.shift_col(&[(0, 1)]);
    Ok(Sides::Dyn(lhs, rhs))
}

pub fn check_magic_component(pt: &SamplePoint) -> CheckReport {
    let x = pt.params.q_powi(-2) * pt.z[1] / pt.z[0];
    let sides = magic_component_sides(&pt.params, x, Gauge::Standard).and_then(|a| {
        let b = magic_component_sides(&pt.params, x, Gauge::Twisted)?;
        Ok((a, b))
    });
    let outcome = sides.and_then(|(a, b)| Ok(a.residual(&pt.s)?.max(b.residual(&pt.s)?)));
    CheckReport::from_outcome(
        "magic_component",
        pt.record(),
        outcome,
        pt.params.tolerance(),
        "both gauges, x = q^-2 z2/z1",
    )
}

/// `a = 𝔫(αz₂/z₁)` against the normalization `𝒩` for the four generating
/// function / Lax pairings, the first two at level `c`, the last two at
/// level `c_star`.
pub fn a_equals_n_sides(params: &Params, z1: Cx, z2: Cx, c: i32, c_star: i32) -> Result<Sides> {
    let x = z2 / z1;
    let n = |k: i32| unitarity_scalar(params.q_powi(k) * x, params);
    Ok(Sides::Relative(vec![
        (n(c)?, n(-c)?),
        (n(2 * c)?, n(2 * c)?),
        (n(-2 * c_star)?, n(0)?),
        (n(-c_star)?, n(-c_star)?),
    ]))
}

pub fn check_a_equals_n(pt: &SamplePoint) -> CheckReport {
    report(
        "a_equals_n",
        pt,
        a_equals_n_sides(&pt.params, pt.z[0], pt.z[1], -2, 2),
        "rows: t/L+ and t/L- at c=-2, t*/L+ and t*/L- at c=2",
    )
}

// ---------------------------------------------------------------------------
// N(λ)

/// `G^{k·sc}` against `Υ(λ−σ_z)/Υ(λ)`; `k = −1` is the identity.
pub fn n_forms_sides(params: &Params, sign: i32) -> Sides {
    Sides::Dyn(ratio_matrix(params).shift_col(&[(0, sign)]), n_matrix(params))
}

pub fn check_n_forms(pt: &SamplePoint) -> CheckReport {
    let shifted: Vec<Cx> = pt.s.iter().flat_map(|&s| [s, s + 1.0]).collect();
    let outcome = n_forms_sides(&pt.params, -1).residual(&shifted);
    CheckReport::from_outcome("n_forms", pt.record(), outcome, pt.params.tolerance(), "samples s and s+1")
}

// ---------------------------------------------------------------------------
// Trace pipeline in the level-zero evaluation model

/// Which Lax matrix is exchanged with the generating function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lax {
    Plus,
    Minus,
}

/// Exchange of `t(z₁,λ) = tr(N e^{-σ_z∂} Q(z₁) e^{σ_z∂})` with `L^±₂(z₂) e^{σ_z⁽²⁾∂}`
/// at `c = 0`, where `L⁺(z) = R(z/u)` and `L⁻(z) = R_{Qa}(u/z)⁻¹` act on an
/// auxiliary leg and a two-dimensional quantum space. Legs: `[1, 2, Q]`.
/// With `trace_with_identity` the `N` inside the exchanged trace is replaced
/// by the identity.
pub fn integration_sides(
    params: &Params,
    z1: Cx,
    z2: Cx,
    u: Cx,
    lax: Lax,
    trace_with_identity: bool,
) -> Result<Sides> {
    let guard = params.singular_guard();
    let l_plus = |z: Cx| r(params, z / u, Gauge::Standard);
    let l_minus = |z: Cx| -> Result<DynMatrix> {
        Ok(r(params, u / z, Gauge::Standard)?.swap_legs(0, 1).inverse(guard))
    };
    let q1 = &l_plus(z1)?.inverse(guard) * &l_minus(z1)?;
    let n = n_matrix_from_ratio(params);

    // t(z₁) on the quantum space, then placed on legs [2, Q].
    let conj_q = joint_weight_shift(2, &[(0, -1)])
        .mul(&ShiftMatrix::from_dyn(q1.clone()))
        .mul(&joint_weight_shift(2, &[(0, 1)]));
    let t = ShiftMatrix::from_dyn(n.embed(2, &[0]))
        .mul(&conj_q)
        .partial_trace(0)
        .embed(2, &[1]);

    let lax2 = match lax {
        Lax::Plus => l_plus(z2)?,
        Lax::Minus => l_minus(z2)?,
    };
    let d2 = joint_weight_shift(2, &[(0, 1)]);
    let lhs = t.mul(&ShiftMatrix::from_dyn(lax2.clone())).mul(&d2);

    let n1 = if trace_with_identity {
        DynMatrix::identity(3)
    } else {
        n.embed(3, &[0]).shift_row(&[(1, -1)])
    };
    let dressing = [(0, -1), (1, -1)];
    let r21 = r(params, z2 / z1, Gauge::Standard)?
        .swap_legs(0, 1)
        .embed(3, &[0, 1])
        .shift_row(&dressing);
    let r12 = r(params, z1 / z2, Gauge::Standard)?
        .embed(3, &[0, 1])
        .shift_row(&dressing);
    let conj_q3 = joint_weight_shift(3, &[(0, -1)])
        .mul(&ShiftMatrix::from_dyn(q1.embed(3, &[0, 2])))
        .mul(&joint_weight_shift(3, &[(0, 1)]));
    let traced = ShiftMatrix::from_dyn(&n1 * &r21)
        .mul(&conj_q3)
        .mul(&ShiftMatrix::from_dyn(r12))
        .partial_trace(0);
    let norm = unitarity_scalar(z2 / z1, params)?;
    let rhs = ShiftMatrix::from_dyn(lax2)
        .mul(&d2)
        .mul(&traced)
        .scale(norm.inv());
    Ok(Sides::Shift(lhs, rhs))
}

pub fn check_integration_trace(pt: &SamplePoint, z1: Cx, z2: Cx, u: Cx) -> CheckReport {
    let outcome = [Lax::Plus, Lax::Minus].iter().try_fold(0.0f64, |acc, &lax| {
        let res = integration_sides(&pt.params, z1, z2, u, lax, false)?.residual(&pt.s)?;
        Ok(super::nan_max(acc, res))
    });
    CheckReport::from_outcome(
        "integration_trace",
        PointRecord::new(pt.index, &pt.params, pt.s[0], &[z1, z2, u]),
        outcome,
        pt.params.tolerance(),
        "c = 0 evaluation model, both L+ and L-, z = (z1, z2, u)",
    )
}
