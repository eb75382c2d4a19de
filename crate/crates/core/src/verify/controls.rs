//! Negative controls: each identity with one side minimally corrupted.
//!
//! A control reports like any check (so it is expected to *fail*); it
//! demonstrates sensitivity when its residual exceeds
//! [`ControlCase::SENSITIVITY`].

use super::checks::*;
use super::properties::*;
use super::{CheckReport, SamplePoint, Sides};
use crate::error::Result;
use crate::params::Cx;
use crate::rmatrix::Gauge;

pub struct ControlCase {
    pub name: &'static str,
    /// The identity being corrupted.
    pub target: &'static str,
    pub description: &'static str,
    pub residual: fn(&SamplePoint) -> Result<f64>,
}

impl ControlCase {
    /// Residual a control must exceed to count as detected.
    pub const SENSITIVITY: f64 = 1e-3;
}

fn eval(sides: Result<Sides>, pt: &SamplePoint) -> Result<f64> {
    sides?.residual(&pt.s)
}

pub const CONTROLS: &[ControlCase] = &[
    ControlCase {
        name: "theta_sign_flip",
        target: "theta_quasi_periodicity",
        description: "Theta(pz) compared with +Theta(z)/z",
        residual: |pt| eval(theta_quasi_periodicity_sides(&pt.params, &pt.z, -1.0), pt),
    },
    ControlCase {
        name: "n_period_q2",
        target: "n_periodicity",
        description: "n(q^2 z) compared with n(z)",
        residual: |pt| eval(n_periodicity_sides(&pt.params, &pt.z, 2), pt),
    },
    ControlCase {
        name: "transpose_shift_same_kind",
        target: "transpose_shift_exchange",
        description: "(M^t)^sc compared with (M^sc)^t",
        residual: |pt| max_residual(&transpose_shift_exchange_sides(&pt.params, pt.seed, true), &pt.s),
    },
    ControlCase {
        name: "dybe_unshifted_r",
        target: "dybe_r",
        description: "R23(lambda+h1) replaced by R23(lambda)",
        residual: |pt| eval(dybe_sides(&pt.params, pt.z, Gauge::Standard, true), pt),
    },
    ControlCase {
        name: "dybe_unshifted_rtilde",
        target: "dybe_rtilde",
        description: "R23(lambda+h1) replaced by R23(lambda)",
        residual: |pt| eval(dybe_sides(&pt.params, pt.z, Gauge::Twisted, true), pt),
    },
    ControlCase {
        name: "unitarity_scaled",
        target: "unitarity_r",
        description: "R(z) multiplied by 2",
        residual: |pt| {
            eval(unitarity_sides(&pt.params, pt.z[0], Gauge::Standard, Cx::new(2.0, 0.0)), pt)
        },
    },
    ControlCase {
        name: "crossing_tilde_without_gamma",
        target: "crossing_tilde",
        description: "Gamma replaced by the identity",
        residual: |pt| eval(crossing_tilde_sides(&pt.params, pt.z[0], false), pt),
    },
    ControlCase {
        name: "crossing_unitarity_q2_rtilde",
        target: "crossing_unitarity_rtilde",
        description: "spectral argument z^-1 q^-2 instead of z^-1 q^-4",
        residual: |pt| eval(crossing_unitarity_sides(&pt.params, pt.z[0], Gauge::Twisted, -2), pt),
    },
    ControlCase {
        name: "crossing_unitarity_q2_r",
        target: "crossing_unitarity_r",
        description: "spectral argument z^-1 q^-2 instead of z^-1 q^-4",
        residual: |pt| eval(crossing_unitarity_sides(&pt.params, pt.z[0], Gauge::Standard, -2), pt),
    },
    ControlCase {
        name: "twist_opposite_shift",
        target: "twist",
        description: "g1(lambda-h2) and g2^-1(lambda-h1) in the twist",
        residual: |pt| eval(twist_sides(&pt.params, pt.z[0], -1), pt),
    },
    ControlCase {
        name: "gamma_mu_without_det_sc",
        target: "crossing_unitarity_chain.gamma_mu",
        description: "(det g^-sc)^-1 dropped from mu",
        residual: |pt| gamma_mu_sides(&pt.params, true).residual(&pt.s),
    },
    ControlCase {
        name: "trace_exchange_swapped_roles",
        target: "trace_exchange",
        description: "sl1 and sc1 exchanged on the right side",
        residual: |pt| trace_exchange_sides(&pt.params, pt.seed, true).residual(&pt.s),
    },
    ControlCase {
        name: "magic_off_critical",
        target: "magic",
        description: "alpha = q^-2, beta = 1 (alpha*beta = q^-2)",
        residual: |pt| {
            let p = &pt.params;
            eval(magic_sides(p, pt.z[0], pt.z[1], p.q_powi(-2), Cx::new(1.0, 0.0), Gauge::Standard), pt)
        },
    },
    ControlCase {
        name: "magic_offset",
        target: "magic",
        description: "alpha*beta = q^-4 e^0.1",
        residual: |pt| {
            let p = &pt.params;
            let beta = Cx::new(0.1f64.exp(), 0.0) / pt.t;
            eval(magic_sides(p, pt.z[0], pt.z[1], p.q_powi(-4) * pt.t, beta, Gauge::Standard), pt)
        },
    },
    ControlCase {
        name: "a_equals_n_off_critical",
        target: "a_equals_n",
        description: "table rows at c = -1 and c = 1",
        residual: |pt| eval(a_equals_n_sides(&pt.params, pt.z[0], pt.z[1], -1, 1), pt),
    },
    ControlCase {
        name: "n_forms_plus_sc",
        target: "n_forms",
        description: "G^sc in place of G^-sc",
        residual: |pt| n_forms_sides(&pt.params, 1).residual(&pt.s),
    },
    ControlCase {
        name: "integration_n_identity",
        target: "integration_trace",
        description: "N replaced by the identity inside the exchanged trace",
        residual: |pt| {
            eval(integration_sides(&pt.params, pt.z[0], pt.z[1], pt.u, Lax::Plus, true), pt)
        },
    },
];

/// Runs one control at `pt`; the report is named `control.<name>`.
pub fn run_control(case: &ControlCase, pt: &SamplePoint) -> CheckReport {
    CheckReport::from_outcome(
        format!("control.{}", case.name),
        pt.record(),
        (case.residual)(pt),
        pt.params.tolerance(),
        format!("corrupts {}: {}", case.target, case.description),
    )
}
