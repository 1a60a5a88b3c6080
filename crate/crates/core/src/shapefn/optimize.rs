use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{tau_of, vec2, Mat2};

use super::{p1_interp_error, p2_interp_error, CubicForm, QuadraticForm, Triangle};

/// Nelder-Mead settings.
#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_iter: usize,
    /// Stop when the spread of simplex values falls below `f_tol * (|f| + f_tol)`.
    pub f_tol: f64,
    /// and the simplex diameter below `x_tol`.
    pub x_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead { max_iter: 200, f_tol: 1e-10, x_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Derivative-free simplex descent from `x0` with initial steps `step`.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], step: &[f64], nm: &NelderMead) -> NmResult {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step[i];
        simplex.push(x);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|x| f(x)).collect();
    let mut evals = n + 1;
    let mut it = 0;
    let mut converged = false;
    while it < nm.max_iter {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        let spread = vals[n] - vals[0];
        let diam = simplex[1..]
            .iter()
            .map(|x| x.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread <= nm.f_tol * (vals[0].abs() + nm.f_tol) && diam <= nm.x_tol {
            converged = true;
            break;
        }
        it += 1;
        let centroid: Vec<f64> = (0..n).map(|k| simplex[..n].iter().map(|x| x[k]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..n).map(|k| centroid[k] + t * (simplex[n][k] - centroid[k])).collect() };
        let xr = along(-1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < vals[0] {
            let xe = along(-2.0);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                simplex[n] = xe;
                vals[n] = fe;
            } else {
                simplex[n] = xr;
                vals[n] = fr;
            }
        } else if fr < vals[n - 1] {
            simplex[n] = xr;
            vals[n] = fr;
        } else {
            let (xc, fc) = if fr < vals[n] {
                let x = along(-0.5);
                let v = f(&x);
                (x, v)
            } else {
                let x = along(0.5);
                let v = f(&x);
                (x, v)
            };
            evals += 1;
            if fc < vals[n].min(fr) {
                simplex[n] = xc;
                vals[n] = fc;
            } else {
                for i in 1..=n {
                    let x: Vec<f64> = (0..n).map(|k| simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k])).collect();
                    vals[i] = f(&x);
                    simplex[i] = x;
                }
                evals += n;
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    NmResult { x: simplex[best].clone(), f: vals[best], iterations: it, evaluations: evals, converged }
}

/// Multi-start search settings for the shape functions.
#[derive(Debug, Clone, Copy)]
pub struct KpOptions {
    /// Start grid points per parameter.
    pub grid: usize,
    /// Number of best grid starts refined by Nelder-Mead.
    pub budget: usize,
    pub nm: NelderMead,
    /// Aspect ratios above this are penalized.
    pub aspect_cap: f64,
    pub parallel: bool,
}

impl Default for KpOptions {
    fn default() -> Self {
        KpOptions { grid: 8, budget: 6, nm: NelderMead::default(), aspect_cap: 1e6, parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KpResult {
    pub value: f64,
    /// Best triangle found (none for forms whose infimum is 0 by formula).
    pub triangle: Option<Triangle>,
    /// True when the best local search hit its iteration limit.
    pub stagnated: bool,
    pub evaluations: usize,
}

/// Unit-area triangle `(0,0), (w,0), (s w, 2/w)` rotated by `theta`, with
/// `params = (ln w, s, theta)`.
pub fn unit_triangle(params: &[f64]) -> Result<Triangle> {
    let w = params[0].exp();
    let s = params[1];
    let (sn, cs) = params[2].sin_cos();
    let rot = Mat2::new(cs, -sn, sn, cs);
    Triangle::new(vec2(0.0, 0.0), rot * vec2(w, 0.0), rot * vec2(s * w, 2.0 / w))
}

/// Minimizes `objective` over unit-area triangles.
pub fn search_unit_triangles<F>(objective: F, opts: &KpOptions) -> Result<KpResult>
where
    F: Fn(&Triangle) -> Result<f64> + Sync,
{
    let penalized = |x: &[f64]| -> f64 {
        let Ok(t) = unit_triangle(x) else { return f64::INFINITY };
        let Ok(v) = objective(&t) else { return f64::INFINITY };
        let aspect = t.aspect_ratio();
        if aspect > opts.aspect_cap {
            v * (1.0 + (aspect / opts.aspect_cap).ln()) + 1.0
        } else {
            v
        }
    };
    let g = opts.grid.max(1);
    let lin = |k: usize, lo: f64, hi: f64| if g == 1 { 0.5 * (lo + hi) } else { lo + (hi - lo) * k as f64 / (g - 1) as f64 };
    let mut starts = Vec::with_capacity(g * g * g);
    for i in 0..g {
        for j in 0..g {
            for k in 0..g {
                starts.push([lin(i, -1.5, 4.0), lin(j, 0.0, 1.0), std::f64::consts::PI * k as f64 / g as f64]);
            }
        }
    }
    let vals: Vec<f64> = if opts.parallel {
        starts.par_iter().map(|x| penalized(x)).collect()
    } else {
        starts.iter().map(|x| penalized(x)).collect()
    };
    let mut order: Vec<usize> = (0..starts.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
    let chosen: Vec<usize> = order.iter().copied().take(opts.budget).collect();
    let step = [0.25, 0.1, 0.1];
    let runs: Vec<NmResult> = if opts.parallel {
        chosen.par_iter().map(|&i| nelder_mead(penalized, &starts[i], &step, &opts.nm)).collect()
    } else {
        chosen.iter().map(|&i| nelder_mead(penalized, &starts[i], &step, &opts.nm)).collect()
    };
    let mut best_x = starts[order[0]].to_vec();
    let mut best_f = vals[order[0]];
    let mut stagnated = false;
    let mut evaluations = starts.len();
    for r in &runs {
        evaluations += r.evaluations;
        if r.f < best_f {
            best_f = r.f;
            best_x = r.x.clone();
            stagnated = !r.converged;
        }
    }
    if !best_f.is_finite() {
        return Err(Error::Numeric { msg: "no finite objective value on the start grid".into(), at: 0.0 });
    }
    let tri = unit_triangle(&best_x)?;
    Ok(KpResult { value: objective(&tri)?, triangle: Some(tri), stagnated, evaluations })
}

/// `K_p(q)` with default search settings.
pub fn k_p(q: &QuadraticForm, p: f64) -> Result<KpResult> {
    k_p_with(q, p, &KpOptions::default())
}

pub fn k_p_with(q: &QuadraticForm, p: f64, opts: &KpOptions) -> Result<KpResult> {
    if q.det() == 0.0 {
        return Ok(KpResult { value: 0.0, triangle: None, stagnated: false, evaluations: 0 });
    }
    search_unit_triangles(|t| p1_interp_error(q, t, p), opts)
}

/// `inf_{|T| = a} e_T(q)_p = a^{1/tau} K_p(q)`.
pub fn scaled_k(q: &QuadraticForm, area: f64, p: f64) -> Result<f64> {
    if !(area > 0.0) {
        return Err(Error::domain(format!("area {area} must be positive")));
    }
    Ok(area.powf(1.0 / tau_of(p)) * k_p(q, p)?.value)
}

/// `K_{3,p}(q)` for quadratic Lagrange interpolation of a cubic form.
pub fn k3_p(q: &CubicForm, p: f64, opts: &KpOptions) -> Result<KpResult> {
    search_unit_triangles(|t| p2_interp_error(q, t, p), opts)
}
