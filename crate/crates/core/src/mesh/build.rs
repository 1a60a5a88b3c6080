use geo::{BooleanOps, Coord, LineString, MultiPolygon, Polygon, TriangulateEarcut};

use super::{Builder, Tag, Triangulation};
use crate::error::{Error, Result};
use crate::geometry::CartoonFunction;
use crate::linalg::{cross, vec2, Vec2};
use crate::quad::QuadOptions;

#[derive(Debug, Clone, Copy)]
pub struct MeshOptions {
    /// `c` in the layer width `w = c ds^2 (max|kappa| + 1/L)`, with `ds`
    /// the sample spacing and `L` the total edge length.
    pub strip_constant: f64,
    /// Edge samples per curve are `N / (divisor * #curves)`.
    pub samples_divisor: usize,
    /// Halvings of `c` tried when the layer folds.
    pub retries: usize,
}

impl Default for MeshOptions {
    fn default() -> Self {
        MeshOptions { strip_constant: 1.0, samples_divisor: 10, retries: 5 }
    }
}

/// Layer of thin triangles around the edges of `f` plus a uniform grid on
/// the rest of the rectangular domain, with at most `budget` triangles.
pub fn build_adapted_mesh(f: &CartoonFunction, budget: usize, p: f64) -> Result<Triangulation> {
    build_adapted_mesh_with(f, budget, p, &MeshOptions::default())
}

pub fn build_adapted_mesh_with(f: &CartoonFunction, budget: usize, p: f64, opts: &MeshOptions) -> Result<Triangulation> {
    if budget < 32 {
        return Err(Error::Mesh(format!("budget {budget} below 32")));
    }
    if !(p >= 1.0) {
        return Err(Error::domain(format!("p = {p} must be at least 1")));
    }
    let (lo, hi) = f.domain.bbox();
    let rect_area = (hi.x - lo.x) * (hi.y - lo.y);
    if f.domain.vertices().len() != 4 || (f.domain.area() - rect_area).abs() > 1e-12 * rect_area {
        return Err(Error::Mesh("adapted meshes need an axis-aligned rectangular domain".into()));
    }
    if f.curves.is_empty() {
        let n = ((budget / 2) as f64).sqrt().floor() as usize;
        return Triangulation::uniform(&f.domain, n);
    }
    let mut c = opts.strip_constant;
    let mut layer = None;
    for _ in 0..=opts.retries {
        match edge_layer(f, budget, c, opts) {
            Ok(l) => {
                layer = Some(l);
                break;
            }
            Err(Error::Mesh(_)) => c *= 0.5,
            Err(e) => return Err(e),
        }
    }
    let layer = layer.ok_or_else(|| Error::Mesh(format!("edge layer folds after {} retries", opts.retries)))?;
    if layer.triangles.len() > budget {
        return Err(Error::Mesh(format!("edge layer alone needs {} > {budget} triangles", layer.triangles.len())));
    }
    let mut n = ((budget / 4) as f64).sqrt().floor() as usize;
    while n >= 1 {
        let mesh = assemble(f, &layer, n)?;
        if mesh.len() <= budget {
            return Ok(mesh);
        }
        n -= 1;
    }
    Err(Error::Mesh(format!("budget {budget} too small for the edge layer and a grid")))
}

struct Layer {
    quads: Vec<Polygon<f64>>,
    triangles: Vec<[Vec2; 3]>,
    width: f64,
}

fn poly(pts: &[Vec2]) -> Polygon<f64> {
    Polygon::new(LineString::from(pts.iter().map(|p| Coord { x: p.x, y: p.y }).collect::<Vec<_>>()), vec![])
}

fn earcut(p: &Polygon<f64>) -> Vec<[Vec2; 3]> {
    p.earcut_triangles()
        .into_iter()
        .map(|t| t.to_array().map(|c| vec2(c.x, c.y)))
        .collect()
}

fn edge_layer(f: &CartoonFunction, budget: usize, c: f64, opts: &MeshOptions) -> Result<Layer> {
    let ncurves = f.curves.len();
    let m = (budget / (opts.samples_divisor * ncurves)).max(4);
    let arc = QuadOptions::tol(1e-12, 1e-12);
    let domain_poly = poly(f.domain.vertices());
    let kappa = f.max_abs_curvature();
    let mut quads = Vec::new();
    let mut triangles = Vec::new();
    let mut width = 0.0;
    for (j, curve) in f.curves.iter().enumerate() {
        let windows = f.windows_in_domain(j);
        let lens: Vec<f64> =
            windows.iter().map(|&(a, b)| curve.arc_integral_on(|_| 1.0, a, b, &arc)).collect::<Result<_>>()?;
        let total: f64 = lens.iter().sum();
        if !(total > 0.0) {
            continue;
        }
        let ds = total / m as f64;
        let w = c * ds * ds * (kappa + 1.0 / total);
        if 0.5 * w * kappa >= 0.5 {
            return Err(Error::Mesh(format!("layer width {w} too large for curvature {kappa}")));
        }
        width = f64::max(width, w);
        let (t0, t1) = curve.range();
        for (&(a, b), &len) in windows.iter().zip(&lens) {
            let whole = curve.is_closed() && (b - a) >= (t1 - t0) * (1.0 - 1e-12);
            let k = ((len / ds).round() as usize).max(1);
            let step = len / k as f64;
            let mut ts = vec![a];
            for i in 0..k {
                ts.push(curve.advance(ts[i], step));
            }
            if whole {
                ts[k] = a;
            } else {
                ts.insert(0, curve.advance(a, -step));
                ts.push(curve.advance(ts[ts.len() - 1], step));
            }
            let off: Vec<(Vec2, Vec2)> = ts
                .iter()
                .map(|&t| {
                    let fr = curve.frame(t)?;
                    Ok((fr.point - 0.5 * w * fr.normal, fr.point + 0.5 * w * fr.normal))
                })
                .collect::<Result<_>>()?;
            for s in off.windows(2) {
                let (m0, p0) = s[0];
                let (m1, p1) = s[1];
                let q = [m0, m1, p1, p0];
                let a1 = cross(&(m1 - m0), &(p1 - m0));
                let a2 = cross(&(p1 - m0), &(p0 - m0));
                if !(a1 * a2 > 0.0) {
                    return Err(Error::Mesh(format!("layer folds on curve {j}")));
                }
                let quad = if a1 > 0.0 { poly(&q) } else { poly(&[m0, p0, p1, m1]) };
                if q.iter().all(|v| f.domain.contains(v)) {
                    triangles.push([m0, m1, p1]);
                    triangles.push([m0, p1, p0]);
                    quads.push(quad);
                } else {
                    for piece in quad.intersection(&domain_poly) {
                        triangles.extend(earcut(&piece));
                        quads.push(piece);
                    }
                }
            }
        }
    }
    Ok(Layer { quads, triangles, width })
}

fn assemble(f: &CartoonFunction, layer: &Layer, n: usize) -> Result<Triangulation> {
    let (lo, hi) = f.domain.bbox();
    let h = vec2((hi.x - lo.x) / n as f64, (hi.y - lo.y) / n as f64);
    let cell_of = |x: f64, y: f64| -> (usize, usize) {
        let i = ((x - lo.x) / h.x).floor().clamp(0.0, (n - 1) as f64) as usize;
        let j = ((y - lo.y) / h.y).floor().clamp(0.0, (n - 1) as f64) as usize;
        (i, j)
    };
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for (k, q) in layer.quads.iter().enumerate() {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for c in q.exterior().coords() {
            x0 = x0.min(c.x);
            x1 = x1.max(c.x);
            y0 = y0.min(c.y);
            y1 = y1.max(c.y);
        }
        let (i0, j0) = cell_of(x0, y0);
        let (i1, j1) = cell_of(x1, y1);
        for i in i0..=i1 {
            for j in j0..=j1 {
                buckets[i * n + j].push(k);
            }
        }
    }
    let mut b = Builder::default();
    for t in &layer.triangles {
        b.push(t[0], t[1], t[2], Tag::Edgy);
    }
    for i in 0..n {
        for j in 0..n {
            let p = |a: usize, c: usize| vec2(lo.x + h.x * a as f64, lo.y + h.y * c as f64);
            let (p00, p10, p11, p01) = (p(i, j), p(i + 1, j), p(i + 1, j + 1), p(i, j + 1));
            let near = &buckets[i * n + j];
            if near.is_empty() {
                b.push(p00, p10, p11, Tag::Regular);
                b.push(p00, p11, p01, Tag::Regular);
                continue;
            }
            let cell = poly(&[p00, p10, p11, p01]);
            let cut = MultiPolygon::new(near.iter().map(|&k| layer.quads[k].clone()).collect());
            for piece in cell.difference(&cut) {
                for t in earcut(&piece) {
                    b.push(t[0], t[1], t[2], Tag::Regular);
                }
            }
        }
    }
    Ok(b.finish(layer.width))
}
