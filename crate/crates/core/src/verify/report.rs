use serde::Serialize;
use serde_json::Value;

use super::{suite_passes, CheckReport, GridSpec, Status};

pub const SCHEMA_VERSION: &str = "ellr-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(reports: &[CheckReport]) -> Self {
        reports.iter().fold(Summary::default(), |mut acc, r| {
            match r.status {
                Status::Pass => acc.pass += 1,
                Status::Fail => acc.fail += 1,
                Status::SkippedSingular => acc.skipped += 1,
            }
            acc
        })
    }
}

/// The machine-readable result of a suite run.
#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub config_echo: Value,
    pub reports: Vec<CheckReport>,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn new(grid: &GridSpec, reports: Vec<CheckReport>, timestamp: Option<String>) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            timestamp,
            config_echo: grid.echo(),
            summary: Summary::of(&reports),
            reports,
        }
    }

    pub fn passes(&self) -> bool {
        suite_passes(&self.reports)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// One line per report followed by the summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            let residual = r
                .residual
                .map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"));
            out.push_str(&format!(
                "{:<16} {:<44} point {:>3}  residual {:>10}  {}\n",
                r.status.label(),
                r.name,
                r.point.index,
                residual,
                r.detail
            ));
        }
        out.push_str(&format!(
            "summary: {} pass, {} fail, {} skipped-singular; suite {}\n",
            self.summary.pass,
            self.summary.fail,
            self.summary.skipped,
            if self.passes() { "PASSED" } else { "FAILED" }
        ));
        out
    }
}
