//! JSON and text renderings of verification reports.

use serde::Serialize;
use wforge_core::verify::VerificationReport;

use crate::listing::table;

#[derive(Debug, Serialize)]
pub struct ExpectedJson {
    pub value: f64,
    pub provenance: &'static str,
}

/// Serialized form of a report. Runtime is left out so that identical
/// runs give identical files.
#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub check: String,
    pub grid: String,
    pub mean: f64,
    pub max_abs_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub negative_control: bool,
    pub succeeded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedJson>,
    pub samples: usize,
    pub extras: serde_json::Map<String, serde_json::Value>,
}

impl From<&VerificationReport> for ReportJson {
    fn from(r: &VerificationReport) -> Self {
        ReportJson {
            check: r.check.clone(),
            grid: r.grid.clone(),
            mean: r.mean,
            max_abs_deviation: r.max_abs_deviation,
            tolerance: r.tolerance,
            pass: r.pass,
            negative_control: r.expect_failure,
            succeeded: r.succeeded(),
            expected: r.expected.as_ref().map(|e| ExpectedJson { value: e.value, provenance: e.provenance.as_str() }),
            samples: r.samples,
            extras: r.extras.iter().map(|(k, v)| (k.clone(), serde_json::json!(v))).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub succeeded: usize,
    pub failed: usize,
}

#[derive(Debug, Serialize)]
pub struct SuiteJson {
    pub reports: Vec<ReportJson>,
    pub summary: Summary,
}

pub fn summary(reports: &[VerificationReport]) -> Summary {
    let succeeded = reports.iter().filter(|r| r.succeeded()).count();
    Summary { total: reports.len(), succeeded, failed: reports.len() - succeeded }
}

pub fn to_json(reports: &[VerificationReport]) -> String {
    let doc = SuiteJson { reports: reports.iter().map(ReportJson::from).collect(), summary: summary(reports) };
    let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
    s.push('\n');
    s
}

fn status(r: &VerificationReport) -> &'static str {
    match (r.succeeded(), r.expect_failure) {
        (true, false) => "pass",
        (true, true) => "fails as expected",
        (false, false) => "FAIL",
        (false, true) => "CONTROL PASSED",
    }
}

/// Aligned table, one row per report, followed by a summary line.
pub fn to_table(reports: &[VerificationReport]) -> String {
    let header = ["check", "status", "mean", "max deviation", "tolerance", "runtime"].map(String::from);
    let rows: Vec<[String; 6]> = reports
        .iter()
        .map(|r| {
            [
                r.check.clone(),
                status(r).into(),
                format!("{:.10e}", r.mean),
                format!("{:.3e}", r.max_abs_deviation),
                format!("{:.1e}", r.tolerance),
                format!("{:.3} s", r.runtime_s),
            ]
        })
        .collect();
    let s = summary(reports);
    format!("{}{} of {} checks behaved as expected\n", table(&header, &rows), s.succeeded, s.total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_controls_count_when_failing() {
        let reports = vec![
            VerificationReport::new("a", "g", 0.0, 0.0, 1.0),
            VerificationReport::new("b", "g", 0.0, 2.0, 1.0).negative_control(),
        ];
        let s = summary(&reports);
        assert_eq!((s.succeeded, s.failed), (2, 0));
        let json: serde_json::Value = serde_json::from_str(&to_json(&reports)).unwrap();
        assert_eq!(json["reports"][1]["negative_control"], true);
        assert!(to_table(&reports).contains("fails as expected"));
    }
}
