use super::checks::*;
use super::properties::*;
use super::{sample_points, CheckReport, GridSpec, SamplePoint, Status};
use crate::error::Result;
use crate::rmatrix::Gauge;

/// Every check the suite can schedule, in report order.
pub const CHECK_NAMES: &[&str] = &[
    "theta_quasi_periodicity",
    "theta_inversion",
    "truncation_convergence",
    "n_periodicity",
    "trigonometric_limit",
    "skew_associativity",
    "shift_operator_forms",
    "transpose_shift_exchange",
    "zero_weight_shift_commutation",
    "sigma_y_transpose",
    "zero_weight",
    "dybe_r",
    "dybe_rtilde",
    "unitarity_r",
    "unitarity_rtilde",
    "crossing",
    "crossing_tilde",
    "crossing_unitarity_r",
    "crossing_unitarity_rtilde",
    "crossing_unitarity_chain",
    "twist",
    "trace_exchange",
    "magic",
    "magic_component",
    "a_equals_n",
    "n_forms",
    "integration_trace",
];

/// Runs the named check at one point. Unknown names yield no reports.
pub fn run_check(name: &str, pt: &SamplePoint, grid: &GridSpec) -> Vec<CheckReport> {
    let one = |r: CheckReport| vec![r];
    match name {
        "theta_quasi_periodicity" => one(check_theta_quasi_periodicity(pt)),
        "theta_inversion" => one(check_theta_inversion(pt)),
        "truncation_convergence" => one(check_truncation_convergence(pt)),
        "n_periodicity" => one(check_n_periodicity(pt)),
        "trigonometric_limit" => one(check_trigonometric_limit(pt)),
        "skew_associativity" => one(check_skew_associativity(pt)),
        "shift_operator_forms" => one(check_shift_operator_forms(pt)),
        "transpose_shift_exchange" => one(check_transpose_shift_exchange(pt)),
        "zero_weight_shift_commutation" => one(check_zero_weight_shift_commutation(pt)),
        "sigma_y_transpose" => one(check_sigma_y_transpose(pt)),
        "zero_weight" => one(check_zero_weight(pt)),
        "dybe_r" => one(check_dybe(pt, Gauge::Standard)),
        "dybe_rtilde" => one(check_dybe(pt, Gauge::Twisted)),
        "unitarity_r" => one(check_unitarity(pt, Gauge::Standard)),
        "unitarity_rtilde" => one(check_unitarity(pt, Gauge::Twisted)),
        "crossing" => one(check_crossing(pt)),
        "crossing_tilde" => one(check_crossing_tilde(pt)),
        "crossing_unitarity_r" => one(check_crossing_unitarity(pt, Gauge::Standard)),
        "crossing_unitarity_rtilde" => one(check_crossing_unitarity(pt, Gauge::Twisted)),
        "crossing_unitarity_chain" => check_crossing_unitarity_chain(pt),
        "twist" => one(check_twist(pt)),
        "trace_exchange" => one(check_trace_exchange(pt)),
        "magic" => one(check_magic_point(pt, grid.alpha_beta_offset)),
        "magic_component" => one(check_magic_component(pt)),
        "a_equals_n" => one(check_a_equals_n(pt)),
        "n_forms" => one(check_n_forms(pt)),
        "integration_trace" => one(check_integration_trace(pt, pt.z[0], pt.z[1], pt.u)),
        _ => Vec::new(),
    }
}

/// Runs the selected checks over the seeded grid. Reports are ordered by
/// check name, then point index.
pub fn run_suite(grid: &GridSpec) -> Result<Vec<CheckReport>> {
    let points = sample_points(grid)?;
    let mut names: Vec<&str> = grid.checks.iter().map(String::as_str).collect();
    names.sort_unstable();
    names.dedup();
    let mut reports = Vec::new();
    for name in names {
        for pt in &points {
            reports.extend(run_check(name, pt, grid));
        }
    }
    reports.sort_by(|a, b| a.name.cmp(&b.name).then(a.point.index.cmp(&b.point.index)));
    Ok(reports)
}

/// No failures and at least 90% of the scheduled checks evaluated.
pub fn suite_passes(reports: &[CheckReport]) -> bool {
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    let ran = reports
        .iter()
        .filter(|r| r.status != Status::SkippedSingular)
        .count();
    !failed && ran * 10 >= reports.len() * 9
}
