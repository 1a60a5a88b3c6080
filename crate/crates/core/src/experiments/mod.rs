//! Verification suites: each claim in the manifest is measured, compared with
//! its prediction under a tolerance from the config, and reported.

mod claims;
mod config;
mod report;
mod suites;

pub use claims::{run_claims, CLAIM_GROUPS};
pub use config::{parse_list, parse_number, ClaimEntry, Config, Manifest, DEFAULT_CONFIG, DEFAULT_MANIFEST};
pub use report::{emit_report, summarize, summary, write_csv, ReportSummary, CSV_HEADER};
pub use suites::{invariance_suite, theorem1_sweep, InvarianceCheck, Theorem1Series};

use std::time::Duration;

/// How a measurement is compared with its prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// `|m - p| <= tol |p|`
    RelErr,
    /// `|m - p| <= tol`
    AbsErr,
    /// `m <= p + tol`
    AtMost,
    /// `m >= p - tol`
    AtLeast,
}

impl Rule {
    pub fn from_name(s: &str) -> Option<Rule> {
        match s {
            "rel" => Some(Rule::RelErr),
            "abs" => Some(Rule::AbsErr),
            "at_most" => Some(Rule::AtMost),
            "at_least" => Some(Rule::AtLeast),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::RelErr => "rel",
            Rule::AbsErr => "abs",
            Rule::AtMost => "at_most",
            Rule::AtLeast => "at_least",
        }
    }

    /// NaN measurements never pass.
    pub fn check(&self, measured: f64, predicted: f64, tol: f64) -> bool {
        match self {
            Rule::RelErr => (measured - predicted).abs() <= tol * predicted.abs(),
            Rule::AbsErr => (measured - predicted).abs() <= tol,
            Rule::AtMost => measured <= predicted + tol,
            Rule::AtLeast => measured >= predicted - tol,
        }
    }
}

/// A raw measurement before it is judged.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub claim: String,
    pub inputs: String,
    pub measured: f64,
    pub predicted: f64,
}

impl Measurement {
    pub fn new(claim: &str, inputs: impl Into<String>, measured: f64, predicted: f64) -> Self {
        Measurement { claim: claim.to_string(), inputs: inputs.into(), measured, predicted }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub claim: String,
    pub anchor: String,
    pub required: bool,
    pub inputs: String,
    pub measured: f64,
    pub predicted: f64,
    pub rule: Rule,
    pub tolerance: f64,
    pub pass: bool,
    /// Wall time of the suite that produced the record; not part of the CSV.
    pub runtime: Duration,
}

impl ExperimentReport {
    pub fn judge(m: Measurement, entry: &ClaimEntry, tolerance: f64, runtime: Duration) -> Self {
        let pass = entry.rule.check(m.measured, m.predicted, tolerance);
        ExperimentReport {
            claim: m.claim,
            anchor: entry.anchor.clone(),
            required: entry.required,
            inputs: m.inputs,
            measured: m.measured,
            predicted: m.predicted,
            rule: entry.rule,
            tolerance,
            pass,
            runtime,
        }
    }

    /// Record for a suite that failed to produce a measurement.
    pub fn failed(claim: &str, entry: &ClaimEntry, tolerance: f64, msg: &str, runtime: Duration) -> Self {
        let m = Measurement::new(claim, format!("error: {msg}"), f64::NAN, f64::NAN);
        ExperimentReport::judge(m, entry, tolerance, runtime)
    }

    /// The same measurement under another tolerance.
    pub fn with_tolerance(&self, tolerance: f64) -> Self {
        let mut r = self.clone();
        r.tolerance = tolerance;
        r.pass = r.rule.check(r.measured, r.predicted, tolerance);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(rule: Rule) -> ClaimEntry {
        ClaimEntry { id: "x".into(), required: true, rule, anchor: "plumbing".into() }
    }

    #[test]
    fn rules() {
        assert!(Rule::RelErr.check(1.04, 1.0, 0.05));
        assert!(!Rule::RelErr.check(1.06, 1.0, 0.05));
        assert!(Rule::AbsErr.check(-0.2, -0.25, 0.05 + 1e-12));
        assert!(Rule::AtMost.check(0.1, 0.0, 0.1) && !Rule::AtMost.check(0.2, 0.0, 0.1));
        assert!(Rule::AtLeast.check(-1e-10, 0.0, 1e-9));
        for r in [Rule::RelErr, Rule::AbsErr, Rule::AtMost, Rule::AtLeast] {
            assert!(!r.check(f64::NAN, 0.0, 1.0));
            assert_eq!(Rule::from_name(r.name()), Some(r));
        }
    }

    #[test]
    fn retolerance_rejudges() {
        let r = ExperimentReport::judge(Measurement::new("x", "", 1.2, 1.0), &entry(Rule::RelErr), 0.1, Duration::ZERO);
        assert!(!r.pass);
        assert!(r.with_tolerance(0.25).pass);
    }
}
