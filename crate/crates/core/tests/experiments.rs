use std::f64::consts::PI;
use std::time::Duration;

use aniso::experiments::{
    emit_report, invariance_suite, parse_list, parse_number, run_claims, summarize, theorem1_sweep, write_csv,
    ClaimEntry, Config, ExperimentReport, Manifest, Measurement, Rule, CLAIM_GROUPS, CSV_HEADER,
};
use aniso::geometry::{gallery, AffineMap};
use aniso::linalg::{vec2, Mat2};
use aniso::mollifier::by_name;

fn entry(id: &str, required: bool, rule: Rule) -> ClaimEntry {
    ClaimEntry { id: id.into(), required, rule, anchor: "plumbing".into() }
}

fn record(id: &str, measured: f64, predicted: f64, required: bool) -> ExperimentReport {
    ExperimentReport::judge(Measurement::new(id, "", measured, predicted), &entry(id, required, Rule::AbsErr), 0.1, Duration::ZERO)
}

#[test]
fn empty_report_is_a_header() {
    let dir = tempfile::tempdir().unwrap();
    let s = emit_report(&[], dir.path()).unwrap();
    assert_eq!((s.total, s.exit_code()), (0, 0));
    assert_eq!(std::fs::read_to_string(dir.path().join("report.csv")).unwrap(), format!("{CSV_HEADER}\n"));
    assert!(dir.path().join("summary.txt").exists());
}

#[test]
fn a_failing_required_record_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let records = [record("a.ok", 1.0, 1.05, true), record("b.bad", 1.0, 2.0, true), record("c.opt", 0.0, 5.0, false)];
    let s = emit_report(&records, dir.path()).unwrap();
    assert_eq!((s.total, s.passed, s.failed, s.required_failed), (3, 1, 2, 1));
    assert_eq!(s.exit_code(), 1);
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().nth(2).unwrap().ends_with("FAIL"));
    assert_eq!(summarize(&records[..1]).exit_code(), 0);
    assert_eq!(summarize(&[records[0].clone(), records[2].clone()]).exit_code(), 0);
}

#[test]
fn nan_measurements_fail_every_rule() {
    let r = ExperimentReport::failed("x", &entry("x", true, Rule::AtLeast), 1.0, "boom", Duration::ZERO);
    assert!(!r.pass && r.inputs.contains("boom"));
    assert!(!r.with_tolerance(f64::INFINITY).pass);
}

#[test]
fn csv_ignores_runtime() {
    let mut a = record("x", 1.0, 1.0, true);
    let b = a.clone();
    a.runtime = Duration::from_secs(3);
    assert_eq!(write_csv(&[a]), write_csv(&[b]));
}

#[test]
fn config_parsing_and_overrides() {
    let mut cfg = Config::parse("# comment\na = 1.5\nlist = 1, 2, inf # trailing\nn = 7\n").unwrap();
    assert_eq!(cfg.f64("a").unwrap(), 1.5);
    assert_eq!(cfg.list("list").unwrap(), vec![1.0, 2.0, f64::INFINITY]);
    assert_eq!(cfg.usize("n").unwrap(), 7);
    assert!(cfg.get("missing").is_err());
    cfg.merge(&Config::parse("a = 2").unwrap());
    assert_eq!(cfg.f64("a").unwrap(), 2.0);
    assert!(Config::parse("no equals sign").is_err());
    assert!(Config::parse("bad key = 1").is_err());
    assert_eq!(parse_number(" inf ").unwrap(), f64::INFINITY);
    assert!(parse_number("x").is_err());
    assert_eq!(parse_list("0.02,0.01,").unwrap(), vec![0.02, 0.01]);
}

#[test]
fn shipped_files_cover_every_claim() {
    let cfg = Config::defaults();
    let manifest = Manifest::shipped();
    assert!(!manifest.claims.is_empty());
    for c in &manifest.claims {
        assert!(cfg.tolerance(&c.id).is_ok(), "no tolerance for {}", c.id);
        assert!(CLAIM_GROUPS.iter().any(|g| g.1.contains(&c.id.as_str())), "no suite for {}", c.id);
        assert!(!c.anchor.is_empty());
    }
    assert!(manifest.get("mesh.rate_p64").is_some_and(|c| !c.required));
}

#[test]
fn manifest_rejects_malformed_rows() {
    assert!(Manifest::parse("x yes rel something").is_ok());
    assert!(Manifest::parse("x maybe rel something").is_err());
    assert!(Manifest::parse("x yes between something").is_err());
    assert!(Manifest::parse("x yes rel").is_err());
    assert!(Manifest::parse("x yes rel a\nx no abs b").is_err());
}

#[test]
fn selection_by_prefix_and_group() {
    let cfg = Config::defaults();
    let manifest = Manifest::shipped();
    let r = run_claims(&cfg, &manifest, Some("mollifier")).unwrap();
    let ids: Vec<&str> = r.iter().map(|x| x.claim.as_str()).collect();
    assert_eq!(ids, vec!["mollifier.c2_disc", "mollifier.lower_bound"]);
    assert!(r.iter().all(|x| x.pass));
    let one = run_claims(&cfg, &manifest, Some("mollifier.c2_disc")).unwrap();
    assert_eq!(one.len(), 1);
    assert!((one[0].measured - 1.169545).abs() < 1e-6);
    assert!(run_claims(&cfg, &manifest, Some("mollifier.c2")).is_err());
    assert!(run_claims(&cfg, &manifest, Some("nothing")).is_err());
}

#[test]
fn theorem1_sweep_predictions() {
    let f = gallery::disc(0.3).unwrap();
    let m = by_name("disc").unwrap();
    let s = theorem1_sweep(&f, &m, &[2.0, 4.0], &[0.04, 0.02]).unwrap();
    assert_eq!(s.len(), 2);
    assert!((s[0].limit - 5.525964).abs() < 1e-6);
    assert_eq!(s[0].predicted, vec![s[0].limit; 2]);
    assert!(s[0].rel_error(s[0].finest()) <= s[0].rel_error(s[0].coarsest()));
    // p = 4: prediction grows like delta^{-1/4}
    let ratio = s[1].predicted[1] / s[1].predicted[0];
    assert!((ratio - 2f64.powf(0.25)).abs() < 1e-12);
    assert!(s[1].slope.is_finite() && s[1].slope < 0.0);
    assert_eq!(s[0].finest(), 1);
}

#[test]
fn invariance_identities_hold() {
    let smooth = gallery::smooth_exp();
    let cartoon = gallery::disc(0.3).unwrap();
    let (s, c) = 0.7f64.sin_cos();
    let maps = [
        AffineMap::new(Mat2::new(c, -s, s, c), vec2(0.1, 0.0)).unwrap(),
        AffineMap::new(Mat2::new(2.0, 0.0, 0.0, 2.0), vec2(0.0, 0.0)).unwrap(),
        AffineMap::new(Mat2::new(1.0, 0.5, 0.0, 1.0), vec2(0.0, -0.3)).unwrap(),
    ];
    for t in &maps {
        for check in invariance_suite(&smooth, &cartoon, t, 2.0, 128).unwrap() {
            assert!((check.ratio() - 1.0).abs() < 1e-6, "{}: {}", check.quantity, check.ratio());
            assert!(check.original > 0.0);
        }
    }
    let e2 = invariance_suite(&smooth, &cartoon, &maps[1], 2.0, 128).unwrap()[1].clone();
    assert!((e2.original - (2.0 * PI).powf(1.5) * 0.3).abs() < 1e-9);
    assert_eq!(e2.factor, 2.0);
}
