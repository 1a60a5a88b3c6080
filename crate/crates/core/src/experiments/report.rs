use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;

use super::ExperimentReport;

pub const CSV_HEADER: &str = "claim,required,anchor,inputs,measured,predicted,rule,tolerance,pass";

/// Counts of an emitted report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub required_failed: usize,
}

impl ReportSummary {
    /// 1 iff a required record failed.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.required_failed > 0)
    }
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Records sorted by claim id; the sort is stable so repeated ids keep
/// their order.
fn ordered(records: &[ExperimentReport]) -> Vec<&ExperimentReport> {
    let mut rs: Vec<&ExperimentReport> = records.iter().collect();
    rs.sort_by(|a, b| a.claim.cmp(&b.claim));
    rs
}

/// CSV text with LF endings; runtimes are left out so reruns are
/// byte-identical.
pub fn write_csv(records: &[ExperimentReport]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in ordered(records) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            field(&r.claim),
            if r.required { "yes" } else { "no" },
            field(&r.anchor),
            field(&r.inputs),
            r.measured,
            r.predicted,
            r.rule.name(),
            r.tolerance,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    out
}

fn summary_text(records: &[ExperimentReport], s: &ReportSummary) -> String {
    let mut out = String::new();
    for r in ordered(records) {
        let _ = writeln!(
            out,
            "{:<4} {:<28} measured {:<14.6e} predicted {:<14.6e} {} {:.3e}{}  [{}] ({:.2?})",
            if r.pass { "ok" } else { "FAIL" },
            r.claim,
            r.measured,
            r.predicted,
            r.rule.name(),
            r.tolerance,
            if r.required { "" } else { " (optional)" },
            r.anchor,
            r.runtime
        );
    }
    let _ = writeln!(
        out,
        "{} records: {} passed, {} failed, {} required failures",
        s.total, s.passed, s.failed, s.required_failed
    );
    out
}

pub fn summarize(records: &[ExperimentReport]) -> ReportSummary {
    let passed = records.iter().filter(|r| r.pass).count();
    ReportSummary {
        total: records.len(),
        passed,
        failed: records.len() - passed,
        required_failed: records.iter().filter(|r| r.required && !r.pass).count(),
    }
}

/// Writes `report.csv` and `summary.txt` under `dir`.
pub fn emit_report(records: &[ExperimentReport], dir: &Path) -> Result<ReportSummary> {
    std::fs::create_dir_all(dir)?;
    let s = summarize(records);
    std::fs::write(dir.join("report.csv"), write_csv(records))?;
    std::fs::write(dir.join("summary.txt"), summary_text(records, &s))?;
    Ok(s)
}

/// Human-readable summary, as written to `summary.txt`.
pub fn summary(records: &[ExperimentReport]) -> String {
    summary_text(records, &summarize(records))
}

#[cfg(test)]
mod tests {
    use std::time::Duration;

    use super::super::{ClaimEntry, Measurement, Rule};
    use super::*;

    fn rec(id: &str, measured: f64, required: bool) -> ExperimentReport {
        let e = ClaimEntry { id: id.into(), required, rule: Rule::AtMost, anchor: "a, b".into() };
        ExperimentReport::judge(Measurement::new(id, "n=1", measured, 0.0), &e, 0.5, Duration::from_millis(3))
    }

    #[test]
    fn csv_is_sorted_and_quoted() {
        let csv = write_csv(&[rec("b", 1.0, true), rec("a", 0.0, true)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("a,yes,\"a, b\",n=1,0,0,at_most,0.5,pass"));
        assert!(lines[2].ends_with("FAIL"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn optional_failures_do_not_fail_the_run() {
        assert_eq!(summarize(&[rec("a", 1.0, false)]).exit_code(), 0);
        assert_eq!(summarize(&[rec("a", 1.0, true), rec("b", 0.0, true)]).exit_code(), 1);
    }
}
