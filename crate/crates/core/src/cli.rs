//! Command-line front end; every subcommand writes its files under `--out`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::experiments::{self, emit_report, parse_number, run_claims, theorem1_sweep, Config, Manifest};
use crate::geometry::gallery;
use crate::mesh::{build_adapted_mesh, interp_error_global, rate_fit, Tag};
use crate::mollifier::{self, c_p_lower_bound};
use crate::raster::{heat_curves, phantom, phase_report, tau_grid, write_pgm, write_raw, DnCurve, PhaseOptions};
use crate::shapefn::{k3_p, k_p_with, disc_cubic, CubicForm, KpOptions, QuadraticForm};
use crate::svg::{self, Plot};
use crate::linalg::tau_of;

#[derive(Debug, Parser)]
#[command(name = "aniso", version, about = "Anisotropic smoothness functionals, shape functions, adapted meshes and raster energies")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "ANISO_OUT", default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    #[value(name = "csv+svg")]
    CsvSvg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Marginal constants C_{p,phi} and their lower bound.
    Constants {
        /// Gallery mollifier, or `all`.
        #[arg(long, default_value = "disc")]
        mollifier: String,
        #[arg(long, value_delimiter = ',', value_parser = number, default_value = "2")]
        p: Vec<f64>,
    },
    /// A_p(f_delta) over a list of delta with its predicted behaviour.
    Theorem1 {
        #[arg(long, default_value = "disc")]
        case: String,
        #[arg(long, default_value = "disc")]
        mollifier: String,
        #[arg(long, value_parser = number, default_value = "2")]
        p: f64,
        #[arg(long, value_delimiter = ',', value_parser = number, default_value = "0.02,0.01,0.005")]
        deltas: Vec<f64>,
    },
    /// Shape functions K_p of random quadratic forms, or K_{3,p} of cubic ones.
    Shape(ShapeArgs),
    /// Interpolation error of adapted meshes over a list of budgets.
    MeshRate {
        #[arg(long, default_value = "disc")]
        case: String,
        #[arg(long, value_parser = number, default_value = "2")]
        p: f64,
        #[arg(long, value_delimiter = ',', default_value = "128,256,512,1024,2048,4096,8192")]
        budgets: Vec<usize>,
    },
    /// D_n(tau) curves of the heat-smoothed phantom and the detected phases.
    Phantom {
        #[arg(long, default_value_t = 256)]
        size: usize,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 26)]
        tau_samples: usize,
        /// Record every `stride`-th step.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Runs the claims manifest and writes report.csv and summary.txt.
    Verify(VerifyArgs),
    /// Lists the built-in cartoon functions.
    Gallery,
}

#[derive(Debug, Args)]
struct ShapeArgs {
    #[arg(long, value_parser = number, default_value = "2")]
    p: f64,
    /// Random forms per determinant (or discriminant) sign.
    #[arg(long, default_value_t = 5)]
    samples: usize,
    #[arg(long, default_value_t = 20240611)]
    seed: u64,
    /// Cubic forms and quadratic Lagrange interpolation.
    #[arg(long)]
    cubic: bool,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Selection {
    #[arg(long)]
    all: bool,
    /// A claim id, or a dotted prefix such as `mesh`.
    #[arg(long)]
    only: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    selection: Selection,
    /// Key-value file overriding the shipped settings.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn number(s: &str) -> std::result::Result<f64, String> {
    parse_number(s)
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code: 0 on success, 1 on numeric or I/O failure or a failed
/// required claim, 2 on bad usage.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if cli.threads > 0 {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let name = command_name(&cli.command);
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("aniso {name}: {e}");
            1
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Constants { .. } => "constants",
        Command::Theorem1 { .. } => "theorem1",
        Command::Shape(_) => "shape",
        Command::MeshRate { .. } => "mesh-rate",
        Command::Phantom { .. } => "phantom",
        Command::Verify(_) => "verify",
        Command::Gallery => "gallery",
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let svg = cli.format == Format::CsvSvg;
    let out = &cli.out;
    match &cli.command {
        Command::Constants { mollifier, p } => constants(out, mollifier, p),
        Command::Theorem1 { case, mollifier, p, deltas } => theorem1(out, svg, case, mollifier, *p, deltas),
        Command::Shape(a) => shape(out, a),
        Command::MeshRate { case, p, budgets } => mesh_rate(out, svg, case, *p, budgets),
        Command::Phantom { size, steps, tau_samples, stride } => phantom_cmd(out, svg, *size, *steps, *tau_samples, *stride),
        Command::Verify(a) => verify(out, a),
        Command::Gallery => gallery_cmd(out),
    }
}

fn constants(out: &Path, name: &str, ps: &[f64]) -> Result<i32> {
    let names: Vec<&str> = if name == "all" { mollifier::NAMES.to_vec() } else { vec![name] };
    let mut csv = String::from("mollifier,p,tau,C_p_phi,lower_bound,margin\n");
    for n in names {
        let m = mollifier::by_name(n)?;
        for &p in ps {
            let c = m.c_p(p)?;
            let lb = c_p_lower_bound(p);
            let _ = writeln!(csv, "{n},{p},{},{c},{lb},{}", tau_of(p), c - lb);
        }
    }
    write(out, "constants.csv", &csv)?;
    print!("{csv}");
    Ok(0)
}

fn theorem1(out: &Path, svg: bool, case: &str, mname: &str, p: f64, deltas: &[f64]) -> Result<i32> {
    let f = gallery::by_name(case)?;
    let m = mollifier::by_name(mname)?;
    let s = theorem1_sweep(&f, &m, &[p], deltas).map_err(|e| context(e, &format!("case={case} p={p}")))?.remove(0);
    let mut csv = String::from("delta,A_p_delta,smooth_part,edge_part,corner_bound,predicted_limit,rel_error\n");
    for (k, r) in s.rows.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            r.delta, r.value, r.smooth_part, r.edge_part, r.corner_part, s.predicted[k], s.rel_error(k)
        );
    }
    write(out, "theorem1.csv", &csv)?;
    print!("{csv}");
    if s.slope.is_finite() {
        println!("fitted slope of ln A_p against ln delta: {}", s.slope);
    }
    if svg {
        let plot = Plot::new(&format!("A_p(f_delta), {case}, p = {p}"), "delta", "A_p")
            .log_log()
            .with_series("A_p(f_delta)", s.rows.iter().map(|r| (r.delta, r.value)).collect())
            .with_series("prediction", s.rows.iter().zip(&s.predicted).map(|(r, &q)| (r.delta, q)).collect());
        write(out, "theorem1.svg", &plot.to_svg())?;
    }
    Ok(0)
}

fn context(e: Error, what: &str) -> Error {
    Error::Numeric { msg: format!("{what}: {e}"), at: f64::NAN }
}

fn shape(out: &Path, a: &ShapeArgs) -> Result<i32> {
    let opts = KpOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut u = || rng.random_range(-1.0..1.0);
    let mut csv = String::new();
    if a.cubic {
        csv.push_str("a,b,c,d,disc,K3,ratio,stagnated\n");
        let (mut pos, mut neg) = (0, 0);
        while pos < a.samples || neg < a.samples {
            let q = CubicForm::new(u(), u(), u(), u());
            let d = disc_cubic(&q);
            if d.abs() < 1e-8 * q.coefficient_norm().powi(4) {
                continue;
            }
            let slot = if d > 0.0 { &mut pos } else { &mut neg };
            if *slot >= a.samples {
                continue;
            }
            *slot += 1;
            let r = k3_p(&q, a.p, &opts)?;
            let _ = writeln!(csv, "{},{},{},{},{d},{},{},{}", q.a, q.b, q.c, q.d, r.value, r.value / d.abs().powf(0.25), r.stagnated);
        }
        write(out, "shape_cubic.csv", &csv)?;
    } else {
        csv.push_str("a,b,c,det,K,ratio,stagnated\n");
        let mut forms = vec![QuadraticForm::new(1.0, 0.0, 1.0), QuadraticForm::new(1.0, 0.0, -1.0)];
        let (mut pos, mut neg) = (0, 0);
        while pos < a.samples || neg < a.samples {
            let q = QuadraticForm::new(u(), u(), u());
            let d = q.det();
            let slot = if d > 0.0 { &mut pos } else { &mut neg };
            if d.abs() < 0.05 || *slot >= a.samples {
                continue;
            }
            *slot += 1;
            forms.push(q);
        }
        for q in forms {
            let r = k_p_with(&q, a.p, &opts)?;
            let d = q.det();
            let _ = writeln!(csv, "{},{},{},{d},{},{},{}", q.a, q.b, q.c, r.value, r.value / d.abs().sqrt(), r.stagnated);
        }
        write(out, "shape.csv", &csv)?;
    }
    print!("{csv}");
    Ok(0)
}

fn mesh_rate(out: &Path, svg: bool, case: &str, p: f64, budgets: &[usize]) -> Result<i32> {
    let f = gallery::by_name(case)?;
    let mut csv = String::from("N,n_regular,n_edgy,strip_width,error\n");
    let mut pairs = Vec::new();
    let mut first = None;
    for &n in budgets {
        let tri = build_adapted_mesh(&f, n, p).map_err(|e| context(e, &format!("case={case} N={n}")))?;
        let err = interp_error_global(&f, &tri, p).map_err(|e| context(e, &format!("case={case} N={n} p={p}")))?;
        let _ = writeln!(csv, "{n},{},{},{},{err}", tri.count(Tag::Regular), tri.count(Tag::Edgy), tri.strip_width);
        pairs.push((n as f64, err));
        first.get_or_insert(tri);
    }
    let slope = if pairs.len() >= 2 && pairs.iter().all(|x| x.1 > 0.0) { rate_fit(&pairs)? } else { f64::NAN };
    let _ = writeln!(csv, "slope,,,,{slope}");
    write(out, "mesh_rate.csv", &csv)?;
    print!("{csv}");
    if svg {
        let predicted = -(2.0 / p).min(1.0);
        let e0 = pairs.first().map_or(1.0, |x| x.1);
        let n0 = pairs.first().map_or(1.0, |x| x.0);
        let plot = Plot::new(&format!("interpolation error, {case}, p = {p}"), "N", "error")
            .log_log()
            .with_series("adapted mesh", pairs.clone())
            .with_series("N^-min(1,2/p)", pairs.iter().map(|x| (x.0, e0 * (x.0 / n0).powf(predicted))).collect());
        write(out, "mesh_rate.svg", &plot.to_svg())?;
        if let Some(tri) = first {
            let tris: Vec<[[f64; 2]; 3]> = (0..tri.len()).map(|i| tri.corners(i).map(|v| [v.x, v.y])).collect();
            let edgy: Vec<bool> = tri.tags.iter().map(|&t| t == Tag::Edgy).collect();
            write(out, "mesh.svg", &svg::triangles(&tris, &edgy, 640.0))?;
        }
    }
    Ok(0)
}

fn phantom_cmd(out: &Path, svg: bool, size: usize, steps: usize, tau_samples: usize, stride: usize) -> Result<i32> {
    let img = phantom(size)?;
    std::fs::create_dir_all(out)?;
    write_pgm(&img, &out.join("phantom.pgm"), true, 0.0, 1.02)?;
    write_raw(&img, &out.join("phantom.raw"))?;
    let taus = tau_grid(tau_samples);
    let curves = heat_curves(&img, steps, stride, &taus)?;
    let mut csv = String::from("n,tau,D,D_scaled\n");
    for c in &curves {
        for k in 0..c.tau.len() {
            let _ = writeln!(csv, "{},{},{},{}", c.n, c.tau[k], c.values[k], c.scaled[k]);
        }
    }
    write(out, "phantom.csv", &csv)?;
    let w = phase_report(&curves, &PhaseOptions::default());
    match w.window {
        Some((a, b)) => println!(
            "phase 2 window: n = {a}..{b}, D_n(2/3) variation {:.4}, slopes {:e} (tau = 0.55) and {:e} (tau = 0.95)",
            w.variation, w.slope_low, w.slope_high
        ),
        None => println!("no phase 2 window found"),
    }
    if svg {
        let (a, b) = w.window.unwrap_or((steps / 3, 2 * steps / 3));
        let phase = |lo: usize, hi: usize, title: &str| {
            let sel: Vec<&DnCurve> = curves.iter().filter(|c| c.n >= lo && c.n <= hi).collect();
            let every = (sel.len() / 6).max(1);
            sel.iter().step_by(every).fold(Plot::new(title, "tau", "D_n(tau)"), |p, c| {
                p.with_series(&format!("n = {}", c.n), c.tau.iter().copied().zip(c.values.iter().copied()).collect())
            })
        };
        let plots = [
            phase(0, a, &format!("phase 1, n <= {a}")),
            phase(a, b, &format!("phase 2, {a} <= n <= {b}")),
            phase(b, steps, &format!("phase 3, n >= {b}")),
        ];
        write(out, "phantom.svg", &svg::panels(&plots, 3))?;
    }
    Ok(0)
}

fn verify(out: &Path, a: &VerifyArgs) -> Result<i32> {
    let cfg = match &a.config {
        Some(p) => Config::load_over_defaults(p)?,
        None => Config::defaults(),
    };
    let manifest = Manifest::shipped();
    let only = if a.selection.all { None } else { a.selection.only.as_deref() };
    let records = run_claims(&cfg, &manifest, only)?;
    let s = emit_report(&records, out)?;
    print!("{}", experiments::summary(&records));
    Ok(s.exit_code())
}

fn gallery_cmd(out: &Path) -> Result<i32> {
    let mut csv = String::from("name,syntax,description\n");
    for (name, syntax, desc) in gallery::CASES {
        println!("{syntax:<30} {desc}");
        let _ = writeln!(csv, "{name},\"{syntax}\",\"{desc}\"");
    }
    write(out, "gallery.csv", &csv)?;
    Ok(0)
}
