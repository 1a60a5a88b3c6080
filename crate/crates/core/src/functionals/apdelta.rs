use crate::error::{Error, Result};
use crate::geometry::{CartoonFunction, ConvexPolygon};
use crate::linalg::{sqrt_abs_det, vec2, Vec2};
use crate::mollifier::RadialMollifier;
use crate::quad::{sweep, sweep_with_hints, QuadOptions, SweepDomain, SweepOptions};

use super::{FunctionalConfig, Smoothed};

/// Normal-coordinate chart `U(t, u) = gamma(t) + delta u n(t)` of the edge
/// neighbourhood of one curve, over a trimmed parameter window.
#[derive(Debug, Clone, Copy)]
pub struct TubeChart {
    pub curve: usize,
    pub delta: f64,
    /// Parameter window; open curves lose arc length `2 delta` at each end.
    pub window: (f64, f64),
}

impl TubeChart {
    pub fn new(f: &CartoonFunction, curve: usize, delta: f64) -> TubeChart {
        let c = &f.curves[curve];
        let (t0, t1) = c.range();
        let window = if c.is_closed() { (t0, t1) } else { (c.advance(t0, 2.0 * delta), c.advance(t1, -2.0 * delta)) };
        TubeChart { curve, delta, window }
    }

    pub fn point(&self, f: &CartoonFunction, t: f64, u: f64) -> Result<Vec2> {
        let fr = f.curves[self.curve].frame(t)?;
        Ok(fr.point + fr.normal * (self.delta * u))
    }

    /// `delta (1 - delta u kappa) |gamma'|`, the area element in `(t, u)`.
    pub fn jacobian(&self, f: &CartoonFunction, t: f64, u: f64) -> Result<f64> {
        let fr = f.curves[self.curve].frame(t)?;
        Ok(self.delta * (1.0 - self.delta * u * fr.curvature) * fr.speed)
    }

    /// True if the foot parameter `t` lies in the window (periodically for
    /// closed curves).
    pub fn covers(&self, f: &CartoonFunction, t: f64) -> bool {
        let c = &f.curves[self.curve];
        c.is_closed() || (t >= self.window.0 && t <= self.window.1)
    }
}

/// Parts of `int K(d^2 f_delta)^tau` over the inner parallel set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApDeltaReport {
    pub delta: f64,
    pub p: f64,
    pub tau: f64,
    /// `A_p(f_delta)`, the tau-th root of the total.
    pub value: f64,
    /// Points farther than delta from every edge.
    pub smooth_part: f64,
    /// Tube charts around the edges.
    pub edge_part: f64,
    /// Edge neighbourhood outside the trimmed windows (near curve ends).
    pub corner_part: f64,
}

const CORNER: i64 = i64::MAX;

fn zone_of(f: &CartoonFunction, charts: &[TubeChart], delta: f64, z: &Vec2) -> i64 {
    match f.distance_to_edges(z) {
        Some((d, j, t)) if d <= delta => {
            if charts[j].covers(f, t) {
                -1
            } else {
                CORNER
            }
        }
        _ => f.region_of(z).map_or(-1, |i| i as i64),
    }
}

fn inner_domain(f: &CartoonFunction, delta: f64) -> Result<ConvexPolygon> {
    f.domain.inset(delta)
}

/// `A_p(f_delta) = || K(d^2 f_delta) ||_{L^tau(Omega^delta)}`, integrated on
/// the partition smooth zone / tube charts / corner zone.
pub fn a_p_delta(f: &CartoonFunction, m: &RadialMollifier, delta: f64, cfg: &FunctionalConfig) -> Result<ApDeltaReport> {
    let kmax = f.max_abs_curvature();
    if delta * kmax >= 0.5 {
        return Err(Error::DeltaTooLarge { delta, msg: format!("delta * max|kappa| = {} >= 1/2", delta * kmax) });
    }
    let inner = inner_domain(f, delta)?;
    let tau = cfg.tau;
    let sm = Smoothed::new(f, m, delta)?.with_tol((cfg.quad_tol * 1e-2).max(1e-11));
    let charts: Vec<TubeChart> = (0..f.curves.len()).map(|j| TubeChart::new(f, j, delta)).collect();
    let k_tau = |z: &Vec2| -> Result<f64> { Ok(sqrt_abs_det(&sm.hessian(z)?).powf(tau)) };

    // smooth and corner zones
    let dom = SweepDomain::convex_polygon(&inner.as_arrays());
    let opts = SweepOptions {
        outer: QuadOptions::tol(1e-12, cfg.quad_tol).with_parallel(cfg.parallel).with_max_panels(4000),
        probes: 16,
        ..SweepOptions::default()
    };
    let constant_k: Vec<Option<f64>> = f
        .pieces
        .iter()
        .map(|p| p.constant_hessian().map(|h| sqrt_abs_det(&h).powf(tau)))
        .collect();
    let sc = sweep_with_hints(
        &dom,
        |z| zone_of(f, &charts, delta, &vec2(z[0], z[1])),
        |x| f.vertical_hints(x, delta),
        |z, zone| {
            let z = vec2(z[0], z[1]);
            if zone == CORNER {
                return Ok([0.0, k_tau(&z)?]);
            }
            match constant_k[zone as usize] {
                Some(k) => Ok([k, 0.0]),
                None => Ok([k_tau(&z)?, 0.0]),
            }
        },
        &opts,
    )?;
    let sc = sc.require(cfg.quad_tol)?;
    let (smooth_part, corner_part) = (sc.value[0], sc.value[1]);

    // tube charts
    let mut edge_part = 0.0;
    for ch in &charts {
        let (a, b) = ch.window;
        if !(b > a) {
            continue;
        }
        let n = cfg.tube_subdivisions.max(1);
        let breaks: Vec<f64> = (1..n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
        let tdom = SweepDomain::rectangle(a, b, -1.0, 1.0).with_breaks(breaks);
        let topts = SweepOptions {
            outer: QuadOptions::tol(1e-12, cfg.quad_tol).with_parallel(cfg.parallel).with_max_panels(4000),
            inner: QuadOptions::tol(1e-12, cfg.quad_tol * 0.1).with_max_panels(400),
            probes: 8,
            inner_adaptive: true,
        };
        let r = sweep(
            &tdom,
            |tu| match ch.point(f, tu[0], tu[1]) {
                Ok(z) if inner.inset_distance(&z) >= 0.0 => 0,
                _ => -1,
            },
            |tu, _| {
                let jac = ch.jacobian(f, tu[0], tu[1])?;
                if !(jac > 0.0) {
                    return Err(Error::DeltaTooLarge { delta, msg: format!("tube jacobian {jac} at t = {}", tu[0]) });
                }
                let z = ch.point(f, tu[0], tu[1])?;
                Ok([k_tau(&z)? * jac])
            },
            &topts,
        )?;
        edge_part += r.require(cfg.quad_tol)?.value[0];
    }
    let total = smooth_part + edge_part + corner_part;
    Ok(ApDeltaReport { delta, p: cfg.p, tau, value: total.powf(1.0 / tau), smooth_part, edge_part, corner_part })
}

/// `int K(d^2 f_delta)^tau` over the edge neighbourhood covered by the tube
/// charts, by direct quadrature in Cartesian coordinates.
pub fn edge_zone_direct(f: &CartoonFunction, m: &RadialMollifier, delta: f64, cfg: &FunctionalConfig) -> Result<f64> {
    let inner = inner_domain(f, delta)?;
    let tau = cfg.tau;
    let sm = Smoothed::new(f, m, delta)?.with_tol((cfg.quad_tol * 1e-2).max(1e-11));
    let charts: Vec<TubeChart> = (0..f.curves.len()).map(|j| TubeChart::new(f, j, delta)).collect();
    let dom = SweepDomain::convex_polygon(&inner.as_arrays());
    let opts = SweepOptions {
        outer: QuadOptions::tol(1e-12, cfg.quad_tol).with_parallel(cfg.parallel).with_max_panels(8000),
        inner: QuadOptions::tol(1e-12, cfg.quad_tol * 0.1).with_max_panels(400),
        probes: 16,
        inner_adaptive: true,
    };
    let r = sweep_with_hints(
        &dom,
        |z| match zone_of(f, &charts, delta, &vec2(z[0], z[1])) {
            -1 => 0,
            _ => -1,
        },
        |x| f.vertical_hints(x, delta),
        |z, _| Ok([sqrt_abs_det(&sm.hessian(&vec2(z[0], z[1]))?).powf(tau)]),
        &opts,
    )?;
    Ok(r.require(cfg.quad_tol)?.value[0])
}
