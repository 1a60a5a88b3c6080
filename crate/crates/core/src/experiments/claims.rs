//! Measurement suites behind the claim ids of the manifest.

use std::time::Instant;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::functionals::{e_p, hessian_asymptotics_probe, s_p};
use crate::geometry::{gallery, AffineMap, CartoonFunction};
use crate::linalg::{vec2, Mat2};
use crate::mesh::{build_adapted_mesh, interp_error_global, rate_fit};
use crate::mollifier::{self, c_p_lower_bound, gaussian_c_p};
use crate::raster::{
    det9, heat_curves, heat_delta, heat_steps, phantom, phase_report, rasterize, tau_grid, PhaseOptions, RasterImage,
};
use crate::shapefn::{disc_cubic, k_p_with, p2_interp_equivalence, CubicForm, KpOptions, QuadraticForm};

use super::{invariance_suite, theorem1_sweep, ClaimEntry, Config, ExperimentReport, Manifest, Measurement};

type Suite = fn(&Config) -> Result<Vec<Measurement>>;

/// Suites with the claim ids they produce, in execution order.
pub const CLAIM_GROUPS: &[(&str, &[&str], Suite)] = &[
    ("mollifier", &["mollifier.c2_disc", "mollifier.lower_bound"], mollifier_suite),
    ("theorem1.p2", &["theorem1.p2_closed_form", "theorem1.p2_limit", "theorem1.p2_monotone"], theorem1_p2),
    ("theorem1.p1", &["theorem1.p1_decay"], theorem1_p1),
    ("theorem1.p1_smooth", &["theorem1.s1_closed_form", "theorem1.p1_smooth_limit"], theorem1_p1_smooth),
    ("theorem1.p4", &["theorem1.p4_slope", "theorem1.p4_rescaled"], theorem1_p4),
    ("probes", &["probes.flat", "probes.circle_tt"], probes_suite),
    ("shape", &["shape.sigma_spread", "shape.covariance"], shape_suite),
    ("cubic", &["cubic.disc_examples", "cubic.equivalence"], cubic_suite),
    ("mesh", &["mesh.rate_p1", "mesh.rate_p2", "mesh.rate_p4", "mesh.rate_p64", "mesh.budget"], mesh_suite),
    ("raster", &["raster.det9", "raster.mass", "raster.gaussian"], raster_suite),
    ("raster.continuum", &["raster.continuum"], raster_continuum),
    ("phantom", &["phantom.phase2"], phantom_suite),
    (
        "invariance",
        &[
            "invariance.rotation.ap",
            "invariance.rotation.e2",
            "invariance.rotation.mesh",
            "invariance.scaling.ap",
            "invariance.scaling.e2",
            "invariance.scaling.mesh",
            "invariance.shear.ap",
            "invariance.shear.e2",
            "invariance.shear.mesh",
        ],
        invariance_claims,
    ),
];

/// `id` selected by `only`: equal, or below it in the dotted hierarchy.
fn selected(id: &str, only: Option<&str>) -> bool {
    match only {
        None => true,
        Some(o) => id == o || (id.starts_with(o) && id[o.len()..].starts_with('.')),
    }
}

/// Runs every suite needed for the manifest claims selected by `only` (a
/// claim id, a dotted prefix or a suite name) and
/// judges each claim exactly once; claims whose suite fails or that no
/// suite produces get a failing record.
pub fn run_claims(cfg: &Config, manifest: &Manifest, only: Option<&str>) -> Result<Vec<ExperimentReport>> {
    let in_group = |id: &str| only.is_some_and(|o| CLAIM_GROUPS.iter().any(|g| g.0 == o && g.1.contains(&id)));
    let wanted: Vec<&ClaimEntry> =
        manifest.claims.iter().filter(|c| selected(&c.id, only) || in_group(&c.id)).collect();
    if wanted.is_empty() {
        return Err(Error::Parse(format!("no manifest claim matches {:?}", only.unwrap_or(""))));
    }
    let mut out: Vec<ExperimentReport> = Vec::new();
    for &(_, ids, suite) in CLAIM_GROUPS {
        let mine: Vec<&ClaimEntry> = wanted.iter().copied().filter(|c| ids.contains(&c.id.as_str())).collect();
        if mine.is_empty() {
            continue;
        }
        let start = Instant::now();
        let result = suite(cfg);
        let runtime = start.elapsed();
        for entry in mine {
            let tol = cfg.tolerance(&entry.id)?;
            let rec = match &result {
                Ok(ms) => match ms.iter().find(|m| m.claim == entry.id) {
                    Some(m) => ExperimentReport::judge(m.clone(), entry, tol, runtime),
                    None => ExperimentReport::failed(&entry.id, entry, tol, "not produced by its suite", runtime),
                },
                Err(e) => ExperimentReport::failed(&entry.id, entry, tol, &e.to_string(), runtime),
            };
            out.push(rec);
        }
    }
    for entry in wanted {
        if !out.iter().any(|r| r.claim == entry.id) {
            let tol = cfg.tolerance(&entry.id)?;
            out.push(ExperimentReport::failed(&entry.id, entry, tol, "no suite produces this claim", Default::default()));
        }
    }
    out.sort_by(|a, b| a.claim.cmp(&b.claim));
    Ok(out)
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn mollifier_suite(cfg: &Config) -> Result<Vec<Measurement>> {
    let disc = mollifier::by_name("disc")?;
    let exact = 2.0 / std::f64::consts::PI * 1.5f64.powf(1.5);
    let c2 = Measurement::new("mollifier.c2_disc", "mollifier=disc p=2", disc.c_p(2.0)?, exact);
    let ps = cfg.list("mollifier.p_list")?;
    let mut worst = (f64::INFINITY, String::new());
    for name in mollifier::NAMES {
        let m = mollifier::by_name(name)?;
        for &p in &ps {
            let margin = m.c_p(p)? - c_p_lower_bound(p);
            if margin < worst.0 {
                worst = (margin, format!("{name} p={p}"));
            }
        }
    }
    let inputs = format!("mollifiers=all p={} worst={}", fmt_list(&ps), worst.1);
    Ok(vec![c2, Measurement::new("mollifier.lower_bound", inputs, worst.0, 0.0)])
}

struct Case {
    spec: String,
    f: CartoonFunction,
    mollifier: String,
    m: mollifier::RadialMollifier,
}

fn case(cfg: &Config, prefix: &str) -> Result<Case> {
    let spec = cfg.get(&format!("{prefix}.case"))?.to_string();
    let mollifier = cfg.get(&format!("{prefix}.mollifier"))?.to_string();
    Ok(Case { f: gallery::by_name(&spec)?, m: mollifier::by_name(&mollifier)?, spec, mollifier })
}

fn radius(spec: &str) -> Result<f64> {
    match spec.split_once(':') {
        Some((_, r)) => r.trim().parse().map_err(|e| Error::Parse(format!("{spec}: {e}"))),
        None => Ok(0.3),
    }
}

fn theorem1_p2(cfg: &Config) -> Result<Vec<Measurement>> {
    let c = case(cfg, "theorem1.p2")?;
    let deltas = cfg.list("theorem1.p2.deltas")?;
    let s = &theorem1_sweep(&c.f, &c.m, &[2.0], &deltas)?[0];
    let inputs = format!("case={} mollifier={} p=2 deltas={}", c.spec, c.mollifier, fmt_list(&deltas));
    // unit-jump circle: E_2 C_2 = (2 pi)^{3/2} R C_2
    let closed = (2.0 * std::f64::consts::PI).powf(1.5) * radius(&c.spec)? * c.m.c_p(2.0)?;
    let k = s.finest();
    let mut order: Vec<usize> = (0..s.rows.len()).collect();
    order.sort_by(|&a, &b| s.rows[b].delta.total_cmp(&s.rows[a].delta));
    let growth = order.windows(2).map(|w| s.rel_error(w[1]) - s.rel_error(w[0])).fold(f64::NEG_INFINITY, f64::max);
    let errs: Vec<f64> = order.iter().map(|&i| s.rel_error(i)).collect();
    Ok(vec![
        Measurement::new("theorem1.p2_closed_form", format!("case={} mollifier={}", c.spec, c.mollifier), s.limit, closed),
        Measurement::new("theorem1.p2_limit", inputs.clone(), s.rows[k].value, s.limit),
        Measurement::new("theorem1.p2_monotone", format!("{inputs} rel_errors={}", fmt_list(&errs)), growth, 0.0),
    ])
}

fn theorem1_p1(cfg: &Config) -> Result<Vec<Measurement>> {
    let c = case(cfg, "theorem1.p1")?;
    let deltas = cfg.list("theorem1.p1.deltas")?;
    let s = &theorem1_sweep(&c.f, &c.m, &[1.0], &deltas)?[0];
    let (hi, lo) = (s.rows[s.coarsest()].value, s.rows[s.finest()].value);
    let inputs = format!("case={} mollifier={} p=1 deltas={} values={}", c.spec, c.mollifier, fmt_list(&deltas), fmt_list(&[hi, lo]));
    Ok(vec![Measurement::new("theorem1.p1_decay", inputs, lo / hi, 0.0)])
}

fn theorem1_p1_smooth(cfg: &Config) -> Result<Vec<Measurement>> {
    let c = case(cfg, "theorem1.p1_smooth")?;
    let deltas = cfg.list("theorem1.p1_smooth.deltas")?;
    let s = &theorem1_sweep(&c.f, &c.m, &[1.0], &deltas)?[0];
    // x^2 + y^2 on the disc: S_1 = (pi R^2 sqrt 2)^2 = 2 pi^2 R^4
    let r = radius(&c.spec)?;
    let closed = 2.0 * std::f64::consts::PI.powi(2) * r.powi(4);
    let k = s.finest();
    let inputs = format!("case={} mollifier={} p=1 deltas={}", c.spec, c.mollifier, fmt_list(&deltas));
    Ok(vec![
        Measurement::new("theorem1.s1_closed_form", format!("case={}", c.spec), s_p(&c.f, 1.0)?, closed),
        Measurement::new("theorem1.p1_smooth_limit", inputs, s.rows[k].value, s.limit),
    ])
}

fn theorem1_p4(cfg: &Config) -> Result<Vec<Measurement>> {
    let c = case(cfg, "theorem1.p4")?;
    let deltas = cfg.list("theorem1.p4.deltas")?;
    let s = &theorem1_sweep(&c.f, &c.m, &[4.0], &deltas)?[0];
    let k = s.finest();
    let d = s.rows[k].delta;
    let inputs = format!("case={} mollifier={} p=4 deltas={}", c.spec, c.mollifier, fmt_list(&deltas));
    Ok(vec![
        Measurement::new("theorem1.p4_slope", inputs.clone(), s.slope, -0.25),
        Measurement::new("theorem1.p4_rescaled", format!("{inputs} delta={d}"), d.powf(0.25) * s.rows[k].value, s.limit),
    ])
}

/// Middle of the first in-domain window of curve 0.
fn mid_parameter(f: &CartoonFunction) -> Result<f64> {
    let w = f.windows_in_domain(0);
    let (a, b) = *w.first().ok_or_else(|| Error::geometry("curve 0 misses the domain"))?;
    Ok(0.5 * (a + b))
}

fn probes_suite(cfg: &Config) -> Result<Vec<Measurement>> {
    let m = mollifier::by_name(cfg.get("probes.mollifier")?)?;
    let us = cfg.list("probes.u")?;
    let flat = gallery::half_plane()?;
    let delta = cfg.f64("probes.flat.delta")?;
    let t = mid_parameter(&flat)?;
    let mut worst: f64 = 0.0;
    for &u in &us {
        let r = hessian_asymptotics_probe(&flat, &m, delta, 0, t, u)?;
        worst = worst.max(r.r_nn).max(r.r_nt).max(r.r_tt).max(r.r_k);
    }
    let circle = gallery::by_name(cfg.get("probes.circle.case")?)?;
    let cd = cfg.f64("probes.circle.delta")?;
    let cu = cfg.f64("probes.circle.u")?;
    let ct = mid_parameter(&circle)?;
    let r = hessian_asymptotics_probe(&circle, &m, cd, 0, ct, cu)?;
    let rel = (r.d_tt - r.tt_predicted).abs() / r.tt_predicted.abs();
    Ok(vec![
        Measurement::new(
            "probes.flat",
            format!("case=half-plane mollifier={} delta={delta} u={}", m.name, fmt_list(&us)),
            worst,
            0.0,
        ),
        Measurement::new(
            "probes.circle_tt",
            format!("case={} mollifier={} delta={cd} u={cu}", cfg.get("probes.circle.case")?, m.name),
            rel,
            0.0,
        ),
    ])
}

/// Forms `a x^2 + b xy + c y^2` with coefficients in `[-1, 1]`, `count` of
/// each determinant sign, rejecting `|det| < min_det`.
fn random_forms(rng: &mut ChaCha8Rng, count: usize, min_det: f64) -> Vec<QuadraticForm> {
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    while pos.len() < count || neg.len() < count {
        let q = QuadraticForm::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let d = q.det();
        if d >= min_det && pos.len() < count {
            pos.push(q);
        } else if d <= -min_det && neg.len() < count {
            neg.push(q);
        }
    }
    pos.into_iter().chain(neg).collect()
}

fn shape_suite(cfg: &Config) -> Result<Vec<Measurement>> {
    let opts = KpOptions::default();
    let ps = cfg.list("shape.p_list")?;
    let n = cfg.usize("shape.forms")?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.u64("seed")?);
    let forms = random_forms(&mut rng, n, cfg.f64("shape.min_det")?);
    let maps: Vec<Mat2> = (0..cfg.usize("shape.covariance.maps")?)
        .map(|_| loop {
            let m = Mat2::new(
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..1.5),
            );
            if m.determinant().abs() > 0.2 {
                break m;
            }
        })
        .collect();
    let (mut spread, mut spread_at) = (0.0f64, String::new());
    let (mut cov, mut cov_at) = (0.0f64, String::new());
    for &p in &ps {
        let sigma_pos = k_p_with(&QuadraticForm::new(1.0, 0.0, 1.0), p, &opts)?.value;
        let sigma_neg = k_p_with(&QuadraticForm::new(1.0, 0.0, -1.0), p, &opts)?.value;
        let ks: Vec<f64> = forms.iter().map(|q| k_p_with(q, p, &opts).map(|r| r.value)).collect::<Result<_>>()?;
        for (q, &k) in forms.iter().zip(&ks) {
            let sigma = if q.det() > 0.0 { sigma_pos } else { sigma_neg };
            let dev = (k - sigma * q.det().abs().sqrt()).abs() / k;
            if dev > spread {
                (spread, spread_at) = (dev, format!("p={p} q=({},{},{})", q.a, q.b, q.c));
            }
        }
        // one definite and one indefinite form per map
        for (i, phi) in maps.iter().enumerate() {
            for idx in [i % n, n + i % n] {
                let (q, k0) = (&forms[idx], ks[idx]);
                let k1 = k_p_with(&q.compose(phi), p, &opts)?.value;
                let dev = (k1 / (phi.determinant().abs() * k0) - 1.0).abs();
                if dev > cov {
                    (cov, cov_at) = (dev, format!("p={p} q=({},{},{})", q.a, q.b, q.c));
                }
            }
        }
    }
    let base = format!("p={} forms_per_sign={n} seed={}", fmt_list(&ps), cfg.u64("seed")?);
    Ok(vec![
        Measurement::new("shape.sigma_spread", format!("{base} worst={spread_at}"), spread, 0.0),
        Measurement::new(
            "shape.covariance",
            format!("{base} maps={} worst={cov_at}", maps.len()),
            cov,
            0.0,
        ),
    ])
}

fn cubic_suite(cfg: &Config) -> Result<Vec<Measurement>> {
    let examples = [
        (CubicForm::new(1.0, 0.0, 0.0, 0.0), 0.0),
        (CubicForm::new(1.0, 0.0, -3.0, 0.0), 108.0),
        (CubicForm::new(0.0, 1.0, 1.0, 0.0), 1.0),
    ];
    let worst = examples.iter().map(|(q, d)| (disc_cubic(q) - d).abs()).fold(0.0, f64::max);
    let n = cfg.usize("cubic.samples")?;
    let p = cfg.f64("cubic.p")?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.u64("seed")?);
    let samples: Vec<CubicForm> = (0..n)
        .map(|_| {
            CubicForm::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
        })
        .collect();
    let st = p2_interp_equivalence(&samples, p, &KpOptions::default())?;
    let spread = st.positive.spread().max(st.negative.spread());
    let inputs = format!(
        "p={p} samples={n} seed={} positive={} negative={} excluded={}",
        cfg.u64("seed")?,
        st.positive.count,
        st.negative.count,
        st.excluded
    );
    Ok(vec![
        Measurement::new("cubic.disc_examples", "x^3; x^3-3xy^2; x^2y+xy^2", worst, 0.0),
        Measurement::new("cubic.equivalence", inputs, spread, 0.0),
    ])
}

fn mesh_suite(cfg: &Config) -> Result<Vec<Measurement>> {
    let spec = cfg.get("mesh.case")?;
    let f = gallery::by_name(spec)?;
    let budgets = cfg.usize_list("mesh.budgets")?;
    let mut out = Vec::new();
    let mut excess = i64::MIN;
    for (id, p) in [("mesh.rate_p1", 1.0), ("mesh.rate_p2", 2.0), ("mesh.rate_p4", 4.0), ("mesh.rate_p64", 64.0)] {
        let mut pairs = Vec::new();
        for &n in &budgets {
            let tri = build_adapted_mesh(&f, n, p)?;
            excess = excess.max(tri.len() as i64 - n as i64);
            pairs.push((n as f64, interp_error_global(&f, &tri, p)?));
        }
        let slope = rate_fit(&pairs)?;
        let errs: Vec<f64> = pairs.iter().map(|x| x.1).collect();
        out.push(Measurement::new(
            id,
            format!("case={spec} p={p} errors={}", fmt_list(&errs)),
            slope,
            -(2.0 / p).min(1.0),
        ));
    }
    let list = budgets.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(";");
    out.push(Measurement::new("mesh.budget", format!("case={spec} budgets={list}"), excess as f64, 0.0));
    Ok(out)
}

fn raster_suite(cfg: &Config) -> Result<Vec<Measurement>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.u64("seed")?);
    // det9 on random quadratics a i^2 + b ij + c j^2 + affine: d = 4ac - b^2
    let size = cfg.usize("raster.det9.size")?;
    let mut det_err: f64 = 0.0;
    for _ in 0..cfg.usize("raster.det9.samples")? {
        let c: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let img = RasterImage::from_fn(size, size, |i, j| {
            let (x, y) = (i as f64, j as f64);
            c[0] * x * x + c[1] * x * y + c[2] * y * y + c[3] * x + c[4] * y + c[5]
        })?;
        let exact = 4.0 * c[0] * c[2] - c[1] * c[1];
        let scale = img.samples.iter().fold(0.0f64, |m, v| m.max(v.abs())).powi(2);
        let d = det9(&img);
        for i in 1..size - 1 {
            for j in 1..size - 1 {
                det_err = det_err.max((d[i * size + j] - exact).abs() / scale);
            }
        }
    }
    let msize = cfg.usize("raster.mass.size")?;
    let steps = cfg.usize("raster.mass.steps")?;
    let img = RasterImage::from_fn(msize, msize, |_, _| 0.0)?;
    let img = RasterImage { samples: img.samples.iter().map(|_| rng.random_range(0.0..1.0)).collect(), ..img };
    let before = img.sum();
    let drift = (heat_steps(&img, steps).sum() - before).abs() / before;

    let gsize = cfg.usize("raster.gaussian.size")?;
    let gsteps = cfg.usize("raster.gaussian.steps")?;
    let disc = gallery::by_name(cfg.get("raster.gaussian.case")?)?;
    let u0 = rasterize(&disc, gsize, 4)?;
    let heat = heat_steps(&u0, gsteps);
    let direct = gaussian_blur(&u0, heat_delta(1.0, gsteps));
    let diff = heat.samples.iter().zip(&direct.samples).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    Ok(vec![
        Measurement::new("raster.det9", format!("size={size} random quadratics"), det_err, 0.0),
        Measurement::new("raster.mass", format!("size={msize} steps={steps} random image"), drift, 0.0),
        Measurement::new(
            "raster.gaussian",
            format!("case={} size={gsize} steps={gsteps}", cfg.get("raster.gaussian.case")?),
            diff / direct.l2_norm(),
            0.0,
        ),
    ])
}

/// Dense convolution with `exp(-|x|^2 / delta^2)` (delta in pixels),
/// normalized to unit sum and truncated at `6 delta`; zero outside.
fn gaussian_blur(img: &RasterImage, delta: f64) -> RasterImage {
    use rayon::prelude::*;
    let r = (6.0 * delta).ceil() as i64;
    let mut k = Vec::new();
    for di in -r..=r {
        for dj in -r..=r {
            k.push((di, dj, (-((di * di + dj * dj) as f64) / (delta * delta)).exp()));
        }
    }
    let total: f64 = k.iter().map(|e| e.2).sum();
    let (w, h) = (img.width as i64, img.height as i64);
    let samples = (0..w * h)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / w, idx % w);
            let mut acc = 0.0;
            for &(di, dj, g) in &k {
                let (a, b) = (i + di, j + dj);
                if a >= 0 && b >= 0 && a < h && b < w {
                    acc += g * img.samples[(a * w + b) as usize];
                }
            }
            acc / total
        })
        .collect();
    RasterImage { samples, ..img.clone() }
}

fn raster_continuum(cfg: &Config) -> Result<Vec<Measurement>> {
    let spec = cfg.get("raster.continuum.case")?;
    let f = gallery::by_name(spec)?;
    let size = cfg.usize("raster.continuum.size")?;
    let ns = cfg.usize_list("raster.continuum.steps")?;
    let img = rasterize(&f, size, 4)?;
    let target = e_p(&f, 2.0)? * gaussian_c_p(2.0)?;
    let last = ns.iter().copied().max().unwrap_or(0);
    let curves = heat_curves(&img, last, 1, &[2.0 / 3.0])?;
    let mut worst: f64 = 0.0;
    for &n in &ns {
        let c = &curves[n];
        worst = worst.max((c.scaled[0] - target).abs() / target);
    }
    let list = ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(";");
    Ok(vec![Measurement::new(
        "raster.continuum",
        format!("case={spec} size={size} steps={list} target=E2*C2(gaussian)={target}"),
        worst,
        0.0,
    )])
}

fn phantom_suite(cfg: &Config) -> Result<Vec<Measurement>> {
    let size = cfg.usize("phantom.size")?;
    let steps = cfg.usize("phantom.steps")?;
    let taus = tau_grid(cfg.usize("phantom.tau_samples")?);
    let img = phantom(size)?;
    let curves = heat_curves(&img, steps, 1, &taus)?;
    let opts = PhaseOptions { eps_rel: cfg.f64("phantom.eps_rel")?, ..PhaseOptions::default() };
    let w = phase_report(&curves, &opts);
    let (measured, detail) = match w.window {
        Some((a, b)) => (w.variation, format!("window={a}..{b} slope_low={:e} slope_high={:e}", w.slope_low, w.slope_high)),
        None => (f64::INFINITY, "no window".to_string()),
    };
    Ok(vec![Measurement::new(
        "phantom.phase2",
        format!("size={size} steps={steps} tau_samples={} {detail}", taus.len()),
        measured,
        0.0,
    )])
}

fn invariance_claims(cfg: &Config) -> Result<Vec<Measurement>> {
    let smooth = gallery::by_name(cfg.get("invariance.smooth_case")?)?;
    let cartoon = gallery::by_name(cfg.get("invariance.cartoon_case")?)?;
    let p = cfg.f64("invariance.p")?;
    let budget = cfg.usize("invariance.budget")?;
    let shear = cfg.f64("invariance.shear")?;
    let scale = cfg.f64("invariance.scale")?;
    let maps = [
        ("rotation", AffineMap::rotation(cfg.f64("invariance.angle")?)),
        ("scaling", AffineMap::scaling(scale, scale)?),
        ("shear", AffineMap::new(Mat2::new(1.0, shear, 0.0, 1.0), vec2(0.0, 0.0))?),
    ];
    let mut out = Vec::new();
    for (name, t) in maps {
        for c in invariance_suite(&smooth, &cartoon, &t, p, budget)? {
            out.push(Measurement::new(
                &format!("invariance.{name}.{}", c.quantity),
                format!("p={p} det={} original={} transformed={}", t.det(), c.original, c.transformed),
                c.ratio(),
                1.0,
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_follows_the_dotted_hierarchy() {
        assert!(selected("mesh.rate_p1", Some("mesh")));
        assert!(selected("mesh.rate_p1", Some("mesh.rate_p1")));
        assert!(!selected("mesh.rate_p1", Some("mesh.rate")));
        assert!(!selected("meshy.a", Some("mesh")));
        assert!(selected("x", None));
    }

    #[test]
    fn every_manifest_claim_has_a_suite() {
        let m = Manifest::shipped();
        for c in &m.claims {
            let n = CLAIM_GROUPS.iter().filter(|g| g.1.contains(&c.id.as_str())).count();
            assert_eq!(n, 1, "{}", c.id);
        }
        for g in CLAIM_GROUPS {
            for id in g.1 {
                assert!(m.get(id).is_some(), "{id} missing from the manifest");
            }
        }
    }

    #[test]
    fn random_forms_are_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fs = random_forms(&mut rng, 5, 0.05);
        assert_eq!(fs.len(), 10);
        assert!(fs[..5].iter().all(|q| q.det() >= 0.05));
        assert!(fs[5..].iter().all(|q| q.det() <= -0.05));
    }
}
