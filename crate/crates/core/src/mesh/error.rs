use rayon::prelude::*;

use super::{Tag, Triangulation};
use crate::error::{Error, Result};
use crate::geometry::CartoonFunction;
use crate::linalg::Vec2;
use crate::quad::{sweep, QuadOptions, SweepDomain, SweepOptions, TriangleRule};
use crate::shapefn::{sample_sup, sweep_abs_power};

/// Affine interpolant of the vertex values on one triangle.
struct Interpolant {
    origin: Vec2,
    /// Rows map `z - origin` to the barycentric coordinates 1 and 2.
    inv: crate::linalg::Mat2,
    values: [f64; 3],
}

impl Interpolant {
    fn at(&self, z: &Vec2) -> f64 {
        let l = self.inv * (z - self.origin);
        self.values[0] * (1.0 - l.x - l.y) + self.values[1] * l.x + self.values[2] * l.y
    }
}

fn interpolant(f: &CartoonFunction, v: &[Vec2; 3], edgy: bool) -> Result<Interpolant> {
    let centroid = (v[0] + v[1] + v[2]) / 3.0;
    let value = |z: &Vec2| -> Result<f64> {
        // a vertex sitting on an edge takes its value from inside the triangle
        let on_edge = edgy && f.distance_to_edges(z).is_some_and(|(d, _, _)| d < 1e-12);
        if on_edge {
            f.value(&(z + 1e-9 * (centroid - z).normalize()))
        } else {
            f.value(z)
        }
    };
    let a = crate::linalg::Mat2::from_columns(&[v[1] - v[0], v[2] - v[0]]);
    let inv = a.try_inverse().ok_or_else(|| Error::domain("degenerate triangle"))?;
    Ok(Interpolant { origin: v[0], inv, values: [value(&v[0])?, value(&v[1])?, value(&v[2])?] })
}

fn even_integer(p: f64) -> bool {
    p.fract() == 0.0 && (p as u64) % 2 == 0 && p <= 40.0
}

/// `int_T |f - I f|^p` for finite `p`, `max_T |f - I f|` otherwise.
fn triangle_error(f: &CartoonFunction, v: &[Vec2; 3], tag: Tag, p: f64) -> Result<f64> {
    let edgy = tag == Tag::Edgy && !f.curves.is_empty();
    let it = interpolant(f, v, edgy)?;
    let area2 = (v[1] - v[0]).perp(&(v[2] - v[0]));
    let map = |x: f64, y: f64| v[0] + x * (v[1] - v[0]) + y * (v[2] - v[0]);
    if !edgy {
        let e = |x: f64, y: f64| {
            let z = map(x, y);
            f.value(&z).map_or(f64::NAN, |fz| fz - it.at(&z))
        };
        let r = if p.is_infinite() {
            sample_sup(e)
        } else if f.piecewise_quadratic() && even_integer(p) {
            area2 * TriangleRule::collapsed(p as usize + 1).integrate(|x| e(x[0], x[1]).powi(p as i32))
        } else {
            let deg = if f.piecewise_quadratic() { 2 } else { 4 };
            area2 * sweep_abs_power(e, deg, p)?
        };
        return if r.is_finite() { Ok(r) } else { Err(Error::domain("interpolation error is not finite")) };
    }
    if p.is_infinite() {
        return edgy_sup(f, v, &it);
    }
    // reference coordinates keep the sweep lines aligned with the triangle
    // and make the result independent of an affine change of the mesh
    let dom = SweepDomain::convex_polygon(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
    let opts = SweepOptions {
        outer: QuadOptions::tol(1e-14, 1e-11).with_parallel(false).with_max_panels(4000),
        ..SweepOptions::default()
    };
    let r = sweep(
        &dom,
        |x| f.region_of(&map(x[0], x[1])).map_or(-1, |i| i as i64),
        |x, zone| {
            let z = map(x[0], x[1]);
            Ok([(f.pieces[zone as usize].value(&z) - it.at(&z)).abs().powf(p)])
        },
        &opts,
    )?;
    Ok(area2 * r.require(1e-12f64.max(1e-9 * r.value[0].abs()))?.value[0])
}

/// Sup over dense samples of the triangle and over edge points inside it,
/// where both one-sided limits count.
fn edgy_sup(f: &CartoonFunction, v: &[Vec2; 3], it: &Interpolant) -> Result<f64> {
    let inside = |z: &Vec2| {
        let l = it.inv * (z - it.origin);
        l.x >= 0.0 && l.y >= 0.0 && l.x + l.y <= 1.0
    };
    let mut best: f64 = 0.0;
    let n = 32;
    for i in 0..=n {
        for j in 0..=(n - i) {
            let z = v[0] + (i as f64 / n as f64) * (v[1] - v[0]) + (j as f64 / n as f64) * (v[2] - v[0]);
            if let Some(k) = f.region_of(&z) {
                best = best.max((f.pieces[k].value(&z) - it.at(&z)).abs());
            }
        }
    }
    let centroid = (v[0] + v[1] + v[2]) / 3.0;
    let r = v.iter().map(|z| (z - centroid).norm()).fold(0.0, f64::max) * 1.01;
    for (j, c) in f.curves.iter().enumerate() {
        for w in c.windows_in_ball(&centroid, r) {
            for k in 0..=256 {
                let t = w.a + (w.b - w.a) * k as f64 / 256.0;
                let z = c.gamma(t);
                if !inside(&z) {
                    continue;
                }
                let (plus, minus) = f.sides(j, t)?;
                for s in [plus, minus] {
                    best = best.max((f.pieces[s].value(&z) - it.at(&z)).abs());
                }
            }
        }
    }
    Ok(best)
}

/// Per-triangle `int_T |f - I_T f|^p` (the local sup for `p = inf`).
pub fn interp_error_per_triangle(f: &CartoonFunction, tri: &Triangulation, p: f64) -> Result<Vec<f64>> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("p = {p} must be at least 1")));
    }
    (0..tri.len())
        .into_par_iter()
        .map(|i| {
            triangle_error(f, &tri.corners(i), tri.tags[i], p).map_err(|e| match e {
                Error::Triangle { .. } => e,
                other => Error::Triangle { id: i, msg: other.to_string() },
            })
        })
        .collect()
}

/// `||f - I f||_{L^p}` with the interpolant taken triangle by triangle.
pub fn interp_error_global(f: &CartoonFunction, tri: &Triangulation, p: f64) -> Result<f64> {
    let local = interp_error_per_triangle(f, tri, p)?;
    Ok(if p.is_infinite() {
        local.iter().copied().fold(0.0, f64::max)
    } else {
        local.iter().sum::<f64>().powf(1.0 / p)
    })
}

/// Least-squares slope of `ln error` against `ln N`.
pub fn rate_fit(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 2 {
        return Err(Error::domain("rate fit needs at least two points"));
    }
    if pairs.iter().any(|&(n, e)| !(n > 0.0) || !(e > 0.0)) {
        return Err(Error::domain("rate fit needs positive budgets and errors"));
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if !(sxx > 0.0) {
        return Err(Error::domain("rate fit needs distinct budgets"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let pairs: Vec<(f64, f64)> = [128.0, 256.0, 1024.0].iter().map(|&n| (n, 3.0 / n)).collect();
        assert!((rate_fit(&pairs).unwrap() + 1.0).abs() < 1e-12);
        let pairs: Vec<(f64, f64)> = [128.0, 512.0].iter().map(|&n: &f64| (n, n.powf(-0.5))).collect();
        assert!((rate_fit(&pairs).unwrap() + 0.5).abs() < 1e-12);
        assert!(rate_fit(&[(1.0, 1.0)]).is_err());
    }
}
