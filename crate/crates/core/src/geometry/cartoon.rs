use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Vec2};

use super::{AffineMap, ConvexPolygon, ParamCurve, Pullback, ScalarField};

type Indicator = Arc<dyn Fn(&Vec2) -> bool + Send + Sync>;

/// Open region given by an indicator, with the curves bounding it. Each
/// `(curve, plus_side)` says whether the region lies on the `+n` side of
/// that curve.
#[derive(Clone)]
pub struct Region {
    indicator: Indicator,
    pub boundary: Vec<(usize, bool)>,
}

impl Region {
    pub fn new<F>(indicator: F, boundary: Vec<(usize, bool)>) -> Self
    where
        F: Fn(&Vec2) -> bool + Send + Sync + 'static,
    {
        Region { indicator: Arc::new(indicator), boundary }
    }

    pub fn contains(&self, z: &Vec2) -> bool {
        (self.indicator)(z)
    }
}

/// Piecewise smooth function: piece `i` lives on region `i`, the regions
/// are separated by `curves`, and everything is restricted to `domain`.
#[derive(Clone)]
pub struct CartoonFunction {
    pub name: String,
    pub regions: Vec<Region>,
    pub pieces: Vec<Arc<dyn ScalarField>>,
    pub curves: Vec<ParamCurve>,
    pub domain: ConvexPolygon,
    /// `(plus region, minus region)` per curve.
    sides: Vec<(Option<usize>, Option<usize>)>,
}

impl std::fmt::Debug for CartoonFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CartoonFunction")
            .field("name", &self.name)
            .field("regions", &self.regions.len())
            .field("curves", &self.curves)
            .field("domain", &self.domain)
            .finish()
    }
}

impl CartoonFunction {
    pub fn new(
        name: impl Into<String>,
        regions: Vec<Region>,
        pieces: Vec<Arc<dyn ScalarField>>,
        curves: Vec<ParamCurve>,
        domain: ConvexPolygon,
    ) -> Result<Self> {
        if regions.len() != pieces.len() || regions.is_empty() {
            return Err(Error::geometry("need exactly one piece per region"));
        }
        let mut sides = vec![(None, None); curves.len()];
        for (i, r) in regions.iter().enumerate() {
            for &(j, plus) in &r.boundary {
                let slot = sides.get_mut(j).ok_or_else(|| Error::geometry(format!("region {i} cites unknown curve {j}")))?;
                let side = if plus { &mut slot.0 } else { &mut slot.1 };
                if side.is_some() {
                    return Err(Error::geometry(format!("curve {j} has two regions on one side")));
                }
                *side = Some(i);
            }
        }
        Ok(CartoonFunction { name: name.into(), regions, pieces, curves, domain, sides })
    }

    /// A single smooth piece on the whole domain.
    pub fn smooth(name: impl Into<String>, piece: Arc<dyn ScalarField>, domain: ConvexPolygon) -> Self {
        Self::new(name, vec![Region::new(|_| true, vec![])], vec![piece], vec![], domain).expect("valid")
    }

    /// First region containing `z`.
    pub fn region_of(&self, z: &Vec2) -> Option<usize> {
        self.regions.iter().position(|r| r.contains(z))
    }

    /// `(f(z), region id)`.
    pub fn eval(&self, z: &Vec2) -> Result<(f64, usize)> {
        let i = self
            .region_of(z)
            .ok_or_else(|| Error::geometry(format!("point ({}, {}) lies in no region", z.x, z.y)))?;
        Ok((self.pieces[i].value(z), i))
    }

    pub fn value(&self, z: &Vec2) -> Result<f64> {
        self.eval(z).map(|v| v.0)
    }

    /// `(plus region, minus region)` of curve `j`.
    pub fn sides(&self, j: usize, t: f64) -> Result<(usize, usize)> {
        match self.sides.get(j) {
            Some(&(Some(p), Some(m))) => Ok((p, m)),
            Some(_) => Err(Error::Corner { curve: j, t, msg: "curve is not adjacent to two regions".into() }),
            None => Err(Error::geometry(format!("unknown curve {j}"))),
        }
    }

    /// Jump `[f] = f_plus - f_minus` at `gamma_j(t)`, where plus is the side
    /// the normal points to.
    pub fn jump(&self, j: usize, t: f64) -> Result<f64> {
        let (p, m) = self.sides(j, t)?;
        let x = self.curves[j].gamma(t);
        Ok(self.pieces[p].value(&x) - self.pieces[m].value(&x))
    }

    /// Jump of the gradient, same convention as [`jump`](Self::jump).
    pub fn jump_gradient(&self, j: usize, t: f64) -> Result<Vec2> {
        let (p, m) = self.sides(j, t)?;
        let x = self.curves[j].gamma(t);
        Ok(self.pieces[p].gradient(&x) - self.pieces[m].gradient(&x))
    }

    /// True if every piece has a constant Hessian.
    pub fn piecewise_quadratic(&self) -> bool {
        self.pieces.iter().all(|p| p.constant_hessian().is_some())
    }

    /// Hessian of the piece of region `i` at `z`.
    pub fn piece_hessian(&self, i: usize, z: &Vec2) -> Mat2 {
        self.pieces[i].hessian(z)
    }

    /// Distance from `z` to the union of the curves, with the nearest curve
    /// and parameter.
    pub fn distance_to_edges(&self, z: &Vec2) -> Option<(f64, usize, f64)> {
        self.curves
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let (d, t) = c.distance(z);
                (d, j, t)
            })
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
    }

    /// Parameter intervals of curve `j` lying inside the domain.
    pub fn windows_in_domain(&self, j: usize) -> Vec<(f64, f64)> {
        let c = &self.curves[j];
        let (t0, t1) = c.range();
        let n = 2048;
        let inside = |t: f64| self.domain.inset_distance(&c.gamma(t));
        let ts: Vec<f64> = (0..=n).map(|k| t0 + (t1 - t0) * k as f64 / n as f64).collect();
        let vs: Vec<f64> = ts.iter().map(|&t| inside(t)).collect();
        let mut cuts = vec![t0];
        for k in 0..n {
            if (vs[k] >= 0.0) != (vs[k + 1] >= 0.0) {
                let (mut a, mut b) = (ts[k], ts[k + 1]);
                let pos_a = vs[k] >= 0.0;
                for _ in 0..80 {
                    let m = 0.5 * (a + b);
                    if !(m > a && m < b) {
                        break;
                    }
                    if (inside(m) >= 0.0) == pos_a {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                cuts.push(0.5 * (a + b));
            }
        }
        cuts.push(t1);
        cuts.windows(2).filter(|w| inside(0.5 * (w[0] + w[1])) >= 0.0).map(|w| (w[0], w[1])).collect()
    }

    /// Ordinates of curve crossings (and near-vertical tangents within
    /// `pad`) on the vertical line at `x`; probe hints for sweeps.
    pub fn vertical_hints(&self, x: f64, pad: f64) -> Vec<f64> {
        self.curves.iter().flat_map(|c| c.vertical_hits(x, pad)).collect()
    }

    pub fn max_abs_curvature(&self) -> f64 {
        self.curves.iter().map(|c| c.max_abs_curvature()).fold(0.0, f64::max)
    }

    /// `f~ = f o T^{-1}` on `T(domain)`, with curves `T o gamma`.
    pub fn pushforward(&self, t: &AffineMap) -> CartoonFunction {
        let inv = t.inverse();
        let flip = t.det() < 0.0;
        let regions = self
            .regions
            .iter()
            .map(|r| {
                let ind = r.indicator.clone();
                Region {
                    indicator: Arc::new(move |z: &Vec2| ind(&inv.apply(z))),
                    boundary: r.boundary.iter().map(|&(j, plus)| (j, plus != flip)).collect(),
                }
            })
            .collect();
        let pieces = self
            .pieces
            .iter()
            .map(|p| Arc::new(Pullback::new(p.clone(), inv)) as Arc<dyn ScalarField>)
            .collect();
        let curves = self.curves.iter().map(|c| c.transform(t)).collect();
        let sides = self.sides.iter().map(|&(p, m)| if flip { (m, p) } else { (p, m) }).collect();
        CartoonFunction {
            name: format!("{}@affine", self.name),
            regions,
            pieces,
            curves,
            domain: self.domain.transform(t),
            sides,
        }
    }

    /// Sampled consistency check: regions disjoint, covering the domain
    /// away from the curves, and agreeing with the side flags.
    pub fn validate(&self, n: usize) -> Result<()> {
        let (mn, mx) = self.domain.bbox();
        let margin = 1e-6 * (mx - mn).norm();
        for a in 0..n {
            for b in 0..n {
                let z = Vec2::new(
                    mn.x + (mx.x - mn.x) * (a as f64 + 0.5) / n as f64,
                    mn.y + (mx.y - mn.y) * (b as f64 + 0.5) / n as f64,
                );
                if !self.domain.contains(&z) {
                    continue;
                }
                let hits = self.regions.iter().filter(|r| r.contains(&z)).count();
                let near = self.distance_to_edges(&z).is_some_and(|d| d.0 < margin);
                if hits > 1 {
                    return Err(Error::geometry(format!("regions overlap at ({}, {})", z.x, z.y)));
                }
                if hits == 0 && !near {
                    return Err(Error::geometry(format!("no region at ({}, {})", z.x, z.y)));
                }
            }
        }
        for (j, c) in self.curves.iter().enumerate() {
            let (t0, t1) = c.range();
            for k in 0..16 {
                let t = t0 + (t1 - t0) * (k as f64 + 0.5) / 16.0;
                let fr = c.frame(t)?;
                if !self.domain.contains(&fr.point) {
                    continue;
                }
                let eps = 1e-6 * (mx - mn).norm();
                let (p, m) = match self.sides(j, t) {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                if self.region_of(&(fr.point + fr.normal * eps)) != Some(p)
                    || self.region_of(&(fr.point - fr.normal * eps)) != Some(m)
                {
                    return Err(Error::geometry(format!("side flags of curve {j} disagree with indicators at t = {t}")));
                }
            }
        }
        Ok(())
    }
}
