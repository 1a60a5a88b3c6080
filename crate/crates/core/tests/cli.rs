use std::path::Path;
use std::process::{Command, Output};

fn aniso(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aniso")).arg("--out").arg(out).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn bad_usage_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&aniso(dir.path(), &["--no-such-flag", "gallery"])), 2);
    assert_eq!(code(&aniso(dir.path(), &["verify"])), 2);
    assert_eq!(code(&aniso(dir.path(), &["verify", "--all", "--only", "mesh"])), 2);
    assert_eq!(code(&aniso(dir.path(), &["constants", "--p", "two"])), 2);
}

#[test]
fn numeric_failures_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = aniso(dir.path(), &["constants", "--mollifier", "triweight"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("constants"));
    assert_eq!(code(&aniso(dir.path(), &["theorem1", "--p", "0.5"])), 1);
}

#[test]
fn gallery_lists_the_cases() {
    let dir = tempfile::tempdir().unwrap();
    let o = aniso(dir.path(), &["gallery"]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("gallery.csv")).unwrap();
    assert!(csv.starts_with("name,syntax,description\n"));
    assert!(csv.lines().any(|l| l.starts_with("disc,")));
}

#[test]
fn constants_row_for_the_disc() {
    let dir = tempfile::tempdir().unwrap();
    let o = aniso(dir.path(), &["constants", "--mollifier", "disc", "--p", "2"]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("constants.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    let fields: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(fields[0], "disc");
    let c: f64 = fields[3].parse().unwrap();
    assert!((c - 1.169545).abs() < 1e-6, "{c}");
    let all = aniso(dir.path(), &["constants", "--mollifier", "all", "--p", "2,inf"]);
    assert_eq!(code(&all), 0);
    let csv = std::fs::read_to_string(dir.path().join("constants.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap() >= -1e-9));
}

#[test]
fn theorem1_rows_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let o = aniso(dir.path(), &["--format", "csv+svg", "theorem1", "--case", "disc", "--p", "2", "--deltas", "0.02,0.01,0.005"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("theorem1.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let svg = std::fs::read_to_string(dir.path().join("theorem1.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn verify_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(code(&aniso(a.path(), &["verify", "--only", "mollifier"])), 0);
    assert_eq!(code(&aniso(b.path(), &["verify", "--only", "mollifier"])), 0);
    let ra = std::fs::read(a.path().join("report.csv")).unwrap();
    let rb = std::fs::read(b.path().join("report.csv")).unwrap();
    assert_eq!(ra, rb);
    assert!(a.path().join("summary.txt").exists());
}

#[test]
fn verify_config_overrides_tolerances() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("strict.conf");
    std::fs::write(&conf, "tol.mollifier.lower_bound = -1\n").unwrap();
    let o = aniso(dir.path(), &["verify", "--only", "mollifier.lower_bound", "--config", conf.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().ends_with("FAIL"));
}
