//! Local Lagrange interpolation errors on triangles and the shape functions
//! `K_p(q) = inf_{|T| = 1} ||q - I_T q||_{L^p(T)}` for quadratic and cubic
//! forms.

mod cubic;
mod optimize;

pub use cubic::{disc_cubic, p2_interp_equivalence, p2_interp_error, CubicForm, EquivalenceStats};
pub use optimize::{
    unit_triangle,
    k3_p, k_p, k_p_with, nelder_mead, scaled_k, search_unit_triangles, KpOptions, KpResult, NelderMead, NmResult,
};

use crate::error::{Error, Result};
use crate::linalg::{cross, Mat2, Vec2};
use crate::quad::{integrate_scalar, GaussLegendre, QuadOptions, TriangleRule};

/// `a x^2 + b x y + c y^2`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticForm {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        QuadraticForm { a, b, c }
    }

    /// `ac - b^2/4`, the determinant of the symmetric matrix of the form.
    pub fn det(&self) -> f64 {
        self.a * self.c - 0.25 * self.b * self.b
    }

    /// `M` with `q(x) = x^T M x`.
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.a, 0.5 * self.b, 0.5 * self.b, self.c)
    }

    pub fn from_matrix(m: &Mat2) -> Self {
        QuadraticForm { a: m[(0, 0)], b: m[(0, 1)] + m[(1, 0)], c: m[(1, 1)] }
    }

    pub fn eval(&self, x: &Vec2) -> f64 {
        self.a * x.x * x.x + self.b * x.x * x.y + self.c * x.y * x.y
    }

    /// `q o phi` for a linear map `phi`.
    pub fn compose(&self, phi: &Mat2) -> Self {
        Self::from_matrix(&(phi.transpose() * self.matrix() * phi))
    }
}

/// Positively oriented triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub v: [Vec2; 3],
}

impl Triangle {
    /// Reorders the vertices to positive orientation; rejects degenerate input.
    pub fn new(a: Vec2, b: Vec2, c: Vec2) -> Result<Self> {
        let s = cross(&(b - a), &(c - a));
        let scale = (b - a).norm_squared().max((c - a).norm_squared()).max((c - b).norm_squared());
        if !(s.abs() > 1e-14 * scale) || !s.is_finite() {
            return Err(Error::domain("degenerate triangle"));
        }
        Ok(if s > 0.0 { Triangle { v: [a, b, c] } } else { Triangle { v: [a, c, b] } })
    }

    pub fn area(&self) -> f64 {
        0.5 * cross(&(self.v[1] - self.v[0]), &(self.v[2] - self.v[0]))
    }

    /// Edge matrix `A = [v1 - v0, v2 - v0]`, mapping the reference triangle.
    pub fn edge_matrix(&self) -> Mat2 {
        Mat2::from_columns(&[self.v[1] - self.v[0], self.v[2] - self.v[0]])
    }

    pub fn translate(&self, d: &Vec2) -> Self {
        Triangle { v: [self.v[0] + d, self.v[1] + d, self.v[2] + d] }
    }

    pub fn map(&self, m: &Mat2) -> Result<Self> {
        Triangle::new(m * self.v[0], m * self.v[1], m * self.v[2])
    }

    /// Longest edge over its height; 1 is not attained, equilateral is `2/sqrt 3`.
    pub fn aspect_ratio(&self) -> f64 {
        let l2 = (0..3).map(|i| (self.v[(i + 1) % 3] - self.v[i]).norm_squared()).fold(0.0, f64::max);
        l2 / (2.0 * self.area())
    }
}

/// `(alpha, beta, gamma)` of the form `x -> q(A x)` on the reference triangle.
fn reference_coeffs(q: &QuadraticForm, a: &Mat2) -> [f64; 3] {
    let r = QuadraticForm::from_matrix(&(a.transpose() * q.matrix() * a));
    [r.a, r.b, r.c]
}

/// Interpolation error `q - I q` of the reference form on the reference
/// triangle.
fn reference_error(c: &[f64; 3], x: f64, y: f64) -> f64 {
    c[0] * (x * x - x) + c[1] * x * y + c[2] * (y * y - y)
}

/// `||q - I q||_{L^p}` on the reference triangle for the reference form `c`.
fn reference_norm(c: &[f64; 3], p: f64) -> Result<f64> {
    if p.is_infinite() {
        return Ok(reference_sup(c));
    }
    if p.fract() == 0.0 && (p as u64) % 2 == 0 && p <= 40.0 {
        let rule = TriangleRule::collapsed(p as usize + 1);
        return Ok(rule.integrate(|x| reference_error(c, x[0], x[1]).powi(p as i32)).max(0.0).powf(1.0 / p));
    }
    let q = RefQuadratic::of_form(c);
    let v = line_sweep(&|x, y| reference_error(c, x, y), |x, len| q.cuts(x, len), &q.breaks(), p)?;
    Ok(v.powf(1.0 / p))
}

/// `max |q - I q|` on the reference triangle from the analytic candidates.
fn reference_sup(c: &[f64; 3]) -> f64 {
    let [a, b, g] = *c;
    let mut best = (a.abs().max(g.abs()).max((a - b + g).abs())) / 4.0;
    // interior critical point: [2a b; b 2g] x = [a; g]
    let det = 4.0 * a * g - b * b;
    if det != 0.0 {
        let x = (2.0 * g * a - b * g) / det;
        let y = (2.0 * a * g - b * a) / det;
        if x >= 0.0 && y >= 0.0 && x + y <= 1.0 {
            best = best.max(reference_error(c, x, y).abs());
        }
    }
    best
}

/// `max |e|` on the reference triangle by dense sampling followed by a
/// pattern search from the best samples.
pub fn sample_sup<E: Fn(f64, f64) -> f64>(e: E) -> f64 {
    let e = |x: f64, y: f64| e(x, y).abs();
    let n = 48;
    let mut pts: Vec<(f64, f64, f64)> = Vec::new();
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (x, y) = (i as f64 / n as f64, j as f64 / n as f64);
            pts.push((e(x, y), x, y));
        }
    }
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let inside = |x: f64, y: f64| x >= 0.0 && y >= 0.0 && x + y <= 1.0;
    let mut best = pts[0].0;
    for &(v0, mut x, mut y) in pts.iter().take(4) {
        let mut v = v0;
        let mut h = 1.0 / n as f64;
        while h > 1e-12 {
            let mut moved = false;
            for (dx, dy) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h), (h, -h), (-h, h)] {
                let (nx, ny) = (x + dx, y + dy);
                if inside(nx, ny) {
                    let nv = e(nx, ny);
                    if nv > v {
                        (x, y, v) = (nx, ny, nv);
                        moved = true;
                    }
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        best = best.max(v);
    }
    best
}

/// `int_T |e|^p` on the reference triangle for `e` polynomial of degree
/// `deg` in the second variable; pieces are split at sign changes, found
/// exactly for `deg = 2` and by sampling otherwise.
pub fn sweep_abs_power<E>(e: E, deg: usize, p: f64) -> Result<f64>
where
    E: Fn(f64, f64) -> f64 + Sync,
{
    if deg == 2 {
        let q = RefQuadratic::fit(&e);
        return line_sweep(&e, |x, len| q.cuts(x, len), &q.breaks(), p);
    }
    let samples = 8 * deg.max(1);
    let cuts = |x: f64, len: f64| {
        let ys: Vec<f64> = (0..=samples).map(|k| len * k as f64 / samples as f64).collect();
        let vs: Vec<f64> = ys.iter().map(|&y| e(x, y)).collect();
        let mut cuts = Vec::new();
        for k in 0..samples {
            if vs[k] == 0.0 && k > 0 {
                cuts.push(ys[k]);
            } else if vs[k] * vs[k + 1] < 0.0 {
                let (mut lo, mut hi) = (ys[k], ys[k + 1]);
                let neg = vs[k] < 0.0;
                for _ in 0..60 {
                    let m = 0.5 * (lo + hi);
                    if (e(x, m) < 0.0) == neg {
                        lo = m;
                    } else {
                        hi = m;
                    }
                }
                cuts.push(0.5 * (lo + hi));
            }
        }
        cuts
    };
    line_sweep(&e, cuts, &[], p)
}

/// `c0 + cx x + cy y + cxx x^2 + cxy x y + cyy y^2` on the reference triangle.
struct RefQuadratic([f64; 6]);

impl RefQuadratic {
    /// Exact for quadratic `e`: P2 nodal values at vertices and midpoints.
    fn fit<E: Fn(f64, f64) -> f64>(e: &E) -> Self {
        let c0 = e(0.0, 0.0);
        let cxx = 2.0 * (e(1.0, 0.0) - 2.0 * e(0.5, 0.0) + c0);
        let cx = e(1.0, 0.0) - c0 - cxx;
        let cyy = 2.0 * (e(0.0, 1.0) - 2.0 * e(0.0, 0.5) + c0);
        let cy = e(0.0, 1.0) - c0 - cyy;
        let cxy = 4.0 * (e(0.5, 0.5) - c0 - 0.5 * (cx + cy) - 0.25 * (cxx + cyy));
        RefQuadratic([c0, cx, cy, cxx, cxy, cyy])
    }

    fn of_form(c: &[f64; 3]) -> Self {
        RefQuadratic([0.0, -c[0], -c[2], c[0], c[1], c[2]])
    }

    /// Sign changes in `(0, len)` on the line `x`.
    fn cuts(&self, x: f64, len: f64) -> Vec<f64> {
        let [c0, cx, cy, cxx, cxy, cyy] = self.0;
        quadratic_roots(cyy, cy + cxy * x, c0 + cx * x + cxx * x * x, len)
    }

    /// Lines where the cut structure changes: a double root, or a root
    /// leaving through `y = 0` or `y = 1 - x`. Between them the line
    /// integral is smooth.
    fn breaks(&self) -> Vec<f64> {
        let [c0, cx, cy, cxx, cxy, cyy] = self.0;
        let mut out = quadratic_roots(cxy * cxy - 4.0 * cyy * cxx, 2.0 * cy * cxy - 4.0 * cyy * cx, cy * cy - 4.0 * cyy * c0, 1.0);
        out.extend(quadratic_roots(cxx, cx, c0, 1.0));
        out.extend(quadratic_roots(cxx - cxy + cyy, cx - cy + cxy - 2.0 * cyy, c0 + cy + cyy, 1.0));
        out.push(0.5);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        out
    }
}

/// Vertical-line integration of `|e|^p` over the reference triangle with
/// interior sign changes of each line supplied by `cuts(x, 1 - x)`; the
/// outer rule splits at `breaks`.
fn line_sweep<E, C>(e: &E, cuts: C, breaks: &[f64], p: f64) -> Result<f64>
where
    E: Fn(f64, f64) -> f64 + Sync,
    C: Fn(f64, f64) -> Vec<f64> + Sync,
{
    let gl = GaussLegendre::new(8);
    let line = |x: f64| -> Result<f64> {
        let len = 1.0 - x;
        if len <= 0.0 {
            return Ok(0.0);
        }
        let mut ys = vec![0.0];
        ys.extend(cuts(x, len));
        ys.push(len);
        Ok(ys.windows(2).map(|w| gl.integrate(w[0], w[1], |y| e(x, y).abs().powf(p))).sum())
    };
    let breaks = if breaks.is_empty() { &[0.5][..] } else { breaks };
    let r = integrate_scalar(line, 0.0, 1.0, breaks, &QuadOptions::tol(1e-15, 1e-12).with_max_panels(400))?;
    Ok(r.scalar())
}

/// Sorted roots in `(0, len)` of `qa y^2 + qb y + qc`.
fn quadratic_roots(qa: f64, qb: f64, qc: f64, len: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    let scale = qa.abs().max(qb.abs()).max(qc.abs());
    if scale == 0.0 {
        return roots;
    }
    if qa.abs() <= 1e-14 * scale {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc > 0.0 {
            let sgn = if qb >= 0.0 { 1.0 } else { -1.0 };
            let q = -0.5 * (qb + sgn * disc.sqrt());
            if q != 0.0 {
                roots.push(q / qa);
                roots.push(qc / q);
            } else {
                roots.push(0.0);
            }
        }
    }
    roots.retain(|&y| y > 0.0 && y < len);
    roots.sort_by(f64::total_cmp);
    roots
}

/// `||q - I_T q||_{L^p(T)}` for the P1 interpolant at the vertices.
pub fn p1_interp_error(q: &QuadraticForm, t: &Triangle, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("p = {p} must be at least 1")));
    }
    let area = t.area();
    if !(area > 0.0) {
        return Err(Error::domain("degenerate triangle"));
    }
    let c = reference_coeffs(q, &t.edge_matrix());
    let n = reference_norm(&c, p)?;
    Ok(if p.is_infinite() { n } else { (2.0 * area).powf(1.0 / p) * n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec2;

    fn reference() -> Triangle {
        Triangle::new(vec2(0.0, 0.0), vec2(1.0, 0.0), vec2(0.0, 1.0)).unwrap()
    }

    #[test]
    fn x_squared_on_reference_triangle() {
        let q = QuadraticForm::new(1.0, 0.0, 0.0);
        assert!((p1_interp_error(&q, &reference(), f64::INFINITY).unwrap() - 0.25).abs() < 1e-15);
        assert!((p1_interp_error(&q, &reference(), 1.0).unwrap() - 1.0 / 12.0).abs() < 1e-13);
        // int (x - x^2)^2 (1 - x) dx = 1/60
        assert!((p1_interp_error(&q, &reference(), 2.0).unwrap() - (1.0f64 / 60.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn odd_power_sweep_matches_even_rule() {
        let c = [0.7, -1.3, 0.4];
        let even = reference_norm(&c, 4.0).unwrap();
        let swept = sweep_abs_power(|x, y| reference_error(&c, x, y), 2, 4.0).unwrap().powf(0.25);
        assert!((even - swept).abs() < 1e-12 * even);
    }

    #[test]
    fn analytic_cuts_match_bisection() {
        for c in [[1.0, 0.3, -1.0], [0.2, -2.0, 0.7], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0]] {
            let exact = reference_norm(&c, 1.0).unwrap();
            let generic = sweep_abs_power(|x, y| reference_error(&c, x, y), 2, 1.0).unwrap();
            assert!((exact - generic).abs() <= 1e-11 * generic, "{c:?}: {exact} vs {generic}");
        }
    }

    #[test]
    fn sup_matches_dense_sampling() {
        let c = [1.0, 3.0, -0.5];
        let mut best: f64 = 0.0;
        let n = 600;
        for i in 0..=n {
            for j in 0..=(n - i) {
                best = best.max(reference_error(&c, i as f64 / n as f64, j as f64 / n as f64).abs());
            }
        }
        let s = reference_sup(&c);
        assert!(s >= best - 1e-12 && s - best < 1e-4, "{s} {best}");
    }

    #[test]
    fn degenerate_triangle_is_rejected() {
        assert!(Triangle::new(vec2(0.0, 0.0), vec2(1.0, 1.0), vec2(2.0, 2.0)).is_err());
    }
}
