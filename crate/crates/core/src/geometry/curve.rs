use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::{cross, perp, Mat2, Vec2};
use crate::quad::{integrate_scalar, QuadOptions};

use super::AffineMap;

type CurveFn = Arc<dyn Fn(f64) -> [Vec2; 3] + Send + Sync>;

#[derive(Clone)]
enum Shape {
    /// `center + axes * (cos t, sin t)`
    Conic { center: Vec2, axes: Mat2 },
    /// `origin + t * dir`
    Line { origin: Vec2, dir: Vec2 },
    /// Position and first two derivatives.
    Closure(CurveFn),
}

/// Point, unit tangent, unit normal with det(tangent, normal) = +1, signed
/// curvature and speed `|gamma'|`.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub point: Vec2,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub curvature: f64,
    pub speed: f64,
}

/// Parameter interval of a curve inside an open ball. `a_cross`/`b_cross`
/// mark endpoints where the curve crosses the sphere (as opposed to curve
/// ends or an artificial cut).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub a: f64,
    pub b: f64,
    pub a_cross: bool,
    pub b_cross: bool,
}

/// Twice differentiable parametric planar curve on `[t0, t1]`.
#[derive(Clone)]
pub struct ParamCurve {
    shape: Shape,
    t0: f64,
    t1: f64,
    closed: bool,
    index: Arc<OnceLock<Index>>,
}

impl std::fmt::Debug for ParamCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.shape {
            Shape::Conic { .. } => "conic",
            Shape::Line { .. } => "line",
            Shape::Closure(_) => "closure",
        };
        f.debug_struct("ParamCurve")
            .field("kind", &kind)
            .field("t0", &self.t0)
            .field("t1", &self.t1)
            .field("closed", &self.closed)
            .finish()
    }
}

const SAMPLES: usize = 4096;
const BLOCK: usize = 32;

struct Index {
    ts: Vec<f64>,
    pts: Vec<Vec2>,
    /// per block: (min, max, slack)
    boxes: Vec<(Vec2, Vec2, f64)>,
}

impl ParamCurve {
    fn new(shape: Shape, t0: f64, t1: f64, closed: bool) -> Self {
        ParamCurve { shape, t0, t1, closed, index: Arc::new(OnceLock::new()) }
    }

    /// Counterclockwise circle, `t in [0, 2 pi]`.
    pub fn circle(center: Vec2, r: f64) -> Self {
        Self::new(Shape::Conic { center, axes: Mat2::new(r, 0.0, 0.0, r) }, 0.0, 2.0 * PI, true)
    }

    /// Counterclockwise ellipse with semi-axes `a` (along angle `rot`) and `b`.
    pub fn ellipse(center: Vec2, a: f64, b: f64, rot: f64) -> Self {
        let (s, c) = rot.sin_cos();
        let axes = Mat2::new(c, -s, s, c) * Mat2::new(a, 0.0, 0.0, b);
        Self::new(Shape::Conic { center, axes }, 0.0, 2.0 * PI, true)
    }

    /// `origin + t * dir` for `t in [t0, t1]`.
    pub fn line(origin: Vec2, dir: Vec2, t0: f64, t1: f64) -> Self {
        Self::new(Shape::Line { origin, dir }, t0, t1, false)
    }

    pub fn segment(a: Vec2, b: Vec2) -> Self {
        Self::line(a, b - a, 0.0, 1.0)
    }

    /// Curve from a closure returning `[gamma, gamma', gamma'']`.
    pub fn from_fn<F>(f: F, t0: f64, t1: f64, closed: bool) -> Self
    where
        F: Fn(f64) -> [Vec2; 3] + Send + Sync + 'static,
    {
        Self::new(Shape::Closure(Arc::new(f)), t0, t1, closed)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    pub fn period(&self) -> f64 {
        self.t1 - self.t0
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Maps `t` into `[t0, t1)` for closed curves.
    fn wrap(&self, t: f64) -> f64 {
        if self.closed && (t < self.t0 || t >= self.t1) {
            self.t0 + (t - self.t0).rem_euclid(self.period())
        } else {
            t
        }
    }

    /// `[gamma(t), gamma'(t), gamma''(t)]`; closed curves are periodic in `t`.
    pub fn jet(&self, t: f64) -> [Vec2; 3] {
        match &self.shape {
            Shape::Conic { center, axes } => {
                let (s, c) = t.sin_cos();
                [center + axes * Vec2::new(c, s), axes * Vec2::new(-s, c), -(axes * Vec2::new(c, s))]
            }
            Shape::Line { origin, dir } => [origin + dir * t, *dir, Vec2::zeros()],
            Shape::Closure(f) => f(self.wrap(t)),
        }
    }

    pub fn gamma(&self, t: f64) -> Vec2 {
        self.jet(t)[0]
    }

    pub fn dgamma(&self, t: f64) -> Vec2 {
        self.jet(t)[1]
    }

    pub fn d2gamma(&self, t: f64) -> Vec2 {
        self.jet(t)[2]
    }

    /// Frenet-type frame at `t`.
    pub fn frame(&self, t: f64) -> Result<Frame> {
        let [p, d1, d2] = self.jet(t);
        let speed = d1.norm();
        if !(speed >= 1e-14) {
            return Err(Error::domain(format!("degenerate derivative |gamma'| = {speed:e} at t = {t}")));
        }
        let tangent = d1 / speed;
        Ok(Frame { point: p, tangent, normal: perp(&tangent), curvature: cross(&d1, &d2) / speed.powi(3), speed })
    }

    /// Checks that position and derivatives match across the seam.
    pub fn check_seam(&self) -> bool {
        if !self.closed {
            return true;
        }
        let a = match &self.shape {
            Shape::Closure(f) => f(self.t0),
            _ => self.jet(self.t0),
        };
        let b = match &self.shape {
            Shape::Closure(f) => f(self.t1),
            _ => self.jet(self.t1),
        };
        a.iter().zip(&b).all(|(x, y)| (x - y).norm() <= 1e-12 * (1.0 + x.norm().max(y.norm())))
    }

    /// Image `T o gamma` with the same parametrization.
    pub fn transform(&self, t: &AffineMap) -> ParamCurve {
        let shape = match &self.shape {
            Shape::Conic { center, axes } => Shape::Conic { center: t.apply(center), axes: t.linear * axes },
            Shape::Line { origin, dir } => Shape::Line { origin: t.apply(origin), dir: t.linear * dir },
            Shape::Closure(f) => {
                let f = f.clone();
                let t = *t;
                Shape::Closure(Arc::new(move |s| {
                    let [p, d1, d2] = f(s);
                    [t.apply(&p), t.linear * d1, t.linear * d2]
                }))
            }
        };
        ParamCurve::new(shape, self.t0, self.t1, self.closed)
    }

    /// `int g(frame(t)) |gamma'(t)| dt` by adaptive quadrature.
    pub fn arc_integral<G>(&self, g: G, opts: &QuadOptions) -> Result<f64>
    where
        G: Fn(&Frame) -> f64 + Sync,
    {
        self.arc_integral_on(g, self.t0, self.t1, opts)
    }

    /// Same as [`arc_integral`](Self::arc_integral) over a sub-range.
    pub fn arc_integral_on<G>(&self, g: G, a: f64, b: f64, opts: &QuadOptions) -> Result<f64>
    where
        G: Fn(&Frame) -> f64 + Sync,
    {
        let breaks: Vec<f64> = (1..8).map(|k| a + (b - a) * k as f64 / 8.0).collect();
        let r = integrate_scalar(
            |t| {
                let fr = self.frame(t)?;
                let v = g(&fr) * fr.speed;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Numeric { msg: "non-finite arc integrand".into(), at: t })
                }
            },
            a,
            b,
            &breaks,
            opts,
        )?;
        Ok(r.require(opts.abs_tol)?.scalar())
    }

    /// Parameter reached from `t` after arc length `s` (backwards if `s < 0`).
    pub fn advance(&self, t: f64, s: f64) -> f64 {
        let gl = crate::quad::GaussLegendre::new(16);
        let arc = |a: f64, b: f64| gl.integrate(a, b, |x| self.dgamma(x).norm());
        let speed = self.dgamma(t).norm().max(1e-300);
        // bracket: grow until the arc length exceeds |s|
        let dir = s.signum();
        let mut step = s.abs() / speed;
        let mut hi = step;
        for _ in 0..60 {
            if arc(t.min(t + dir * hi), t.max(t + dir * hi)) >= s.abs() {
                break;
            }
            step *= 2.0;
            hi = step;
        }
        let (mut lo, mut hi) = (0.0, hi);
        for _ in 0..80 {
            let m = 0.5 * (lo + hi);
            if !(m > lo && m < hi) {
                break;
            }
            if arc(t.min(t + dir * m), t.max(t + dir * m)) < s.abs() {
                lo = m;
            } else {
                hi = m;
            }
        }
        t + dir * 0.5 * (lo + hi)
    }

    pub fn length(&self) -> Result<f64> {
        self.arc_integral(|_| 1.0, &QuadOptions::tol(1e-12, 1e-12))
    }

    /// Maximum of `|kappa|` over the dense sample set.
    pub fn max_abs_curvature(&self) -> f64 {
        let idx = self.index();
        idx.ts.iter().filter_map(|&t| self.frame(t).ok()).map(|f| f.curvature.abs()).fold(0.0, f64::max)
    }

    /// Winding number of the closed curve around `z` (polyline estimate).
    pub fn winding_number(&self, z: &Vec2) -> i64 {
        let idx = self.index();
        let mut total = 0.0;
        for w in idx.pts.windows(2) {
            let a = w[0] - z;
            let b = w[1] - z;
            total += cross(&a, &b).atan2(a.dot(&b));
        }
        if self.closed {
            let a = idx.pts[idx.pts.len() - 1] - z;
            let b = idx.pts[0] - z;
            total += cross(&a, &b).atan2(a.dot(&b));
        }
        (total / (2.0 * PI)).round() as i64
    }

    fn index(&self) -> &Index {
        self.index.get_or_init(|| {
            let n = SAMPLES;
            let ts: Vec<f64> = (0..=n).map(|k| self.t0 + self.period() * k as f64 / n as f64).collect();
            let pts: Vec<Vec2> = ts.iter().map(|&t| self.gamma(t)).collect();
            let boxes = (0..n.div_ceil(BLOCK))
                .map(|b| {
                    let lo = b * BLOCK;
                    let hi = ((b + 1) * BLOCK).min(n);
                    let mut mn = pts[lo];
                    let mut mx = pts[lo];
                    let mut slack: f64 = 0.0;
                    for k in lo..=hi {
                        mn = mn.inf(&pts[k]);
                        mx = mx.sup(&pts[k]);
                        if k < hi {
                            slack = slack.max((pts[k + 1] - pts[k]).norm());
                        }
                    }
                    (mn, mx, slack)
                })
                .collect();
            Index { ts, pts, boxes }
        })
    }

    /// Distance from `z` to the curve and the parameter of a nearest point.
    pub fn distance(&self, z: &Vec2) -> (f64, f64) {
        let idx = self.index();
        let mut best = f64::INFINITY;
        let mut best_k = 0;
        for (b, (mn, mx, slack)) in idx.boxes.iter().enumerate() {
            if box_distance(z, mn, mx) - slack > best {
                continue;
            }
            let lo = b * BLOCK;
            let hi = ((b + 1) * BLOCK).min(SAMPLES);
            for k in lo..=hi {
                let d = (idx.pts[k] - z).norm_squared();
                if d < best * best || best.is_infinite() {
                    best = d.sqrt();
                    best_k = k;
                }
            }
        }
        let h = self.period() / SAMPLES as f64;
        let (lo, hi) = if self.closed {
            (idx.ts[best_k] - h, idx.ts[best_k] + h)
        } else {
            ((idx.ts[best_k] - h).max(self.t0), (idx.ts[best_k] + h).min(self.t1))
        };
        let dist2 = |t: f64| (self.gamma(t) - z).norm_squared();
        // Newton on (gamma - z) . gamma' = 0, safeguarded to [lo, hi]
        let mut t = idx.ts[best_k];
        for _ in 0..30 {
            let [p, d1, d2] = self.jet(t);
            let r = p - z;
            let g = r.dot(&d1);
            let gp = d1.norm_squared() + r.dot(&d2);
            if gp <= 0.0 {
                break;
            }
            let tn = (t - g / gp).clamp(lo, hi);
            if (tn - t).abs() <= 1e-15 * (1.0 + t.abs()) {
                t = tn;
                break;
            }
            t = tn;
        }
        let mut cand = [(t, dist2(t)), (lo, dist2(lo)), (hi, dist2(hi))];
        cand.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let t = if self.closed { self.wrap(cand[0].0) } else { cand[0].0 };
        (cand[0].1.sqrt(), t)
    }

    /// Ordinates where the vertical line at `x` meets the curve, plus the
    /// points with a vertical tangent within `pad` of the line (approximate,
    /// from the sample polyline; meant as probe hints).
    pub fn vertical_hits(&self, x: f64, pad: f64) -> Vec<f64> {
        let idx = self.index();
        let mut out = Vec::new();
        for (b, (mn, mx, slack)) in idx.boxes.iter().enumerate() {
            if x < mn.x - pad - slack || x > mx.x + pad + slack {
                continue;
            }
            let lo = b * BLOCK;
            let hi = ((b + 1) * BLOCK).min(SAMPLES);
            for k in lo..hi {
                let (p, q) = (idx.pts[k], idx.pts[k + 1]);
                if (p.x - x) * (q.x - x) <= 0.0 && p.x != q.x {
                    let g = |t: f64| self.gamma(t).x - x;
                    let t = bisect(&g, idx.ts[k], idx.ts[k + 1], p.x - x);
                    out.push(self.gamma(t).y);
                }
                if k > 0 || self.closed {
                    let prev = if k > 0 { idx.pts[k - 1] } else { idx.pts[SAMPLES - 1] };
                    if (p.x - prev.x) * (q.x - p.x) <= 0.0 && (p.x - x).abs() <= pad + slack {
                        out.push(p.y);
                    }
                }
            }
        }
        out
    }

    /// Parameter windows where `|gamma(t) - z| < r`. For closed curves a
    /// window may extend past `t1` (evaluate with periodic `t`).
    pub fn windows_in_ball(&self, z: &Vec2, r: f64) -> Vec<Window> {
        let idx = self.index();
        let d = |t: f64| (self.gamma(t) - z).norm() - r;
        let mut events: Vec<f64> = Vec::new();
        for (b, (mn, mx, slack)) in idx.boxes.iter().enumerate() {
            if box_distance(z, mn, mx) > r + slack {
                continue;
            }
            let lo = b * BLOCK;
            let hi = ((b + 1) * BLOCK).min(SAMPLES);
            for k in lo..hi {
                let (ta, tb) = (idx.ts[k], idx.ts[k + 1]);
                let (da, db) = (d(ta), d(tb));
                if (da < 0.0) != (db < 0.0) {
                    events.push(bisect(&d, ta, tb, da));
                } else if da >= 0.0 && db >= 0.0 {
                    let len = (idx.pts[k + 1] - idx.pts[k]).norm();
                    if segment_distance(z, &idx.pts[k], &idx.pts[k + 1]) < r + len {
                        let (tm, dm) = golden_min(&d, ta, tb);
                        if dm < 0.0 {
                            events.push(bisect(&d, ta, tm, da));
                            events.push(bisect(&d, tm, tb, dm));
                        }
                    }
                }
            }
        }
        events.sort_by(|a, b| a.partial_cmp(b).unwrap());
        events.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * (1.0 + b.abs()));
        let mut cuts = Vec::with_capacity(events.len() + 2);
        cuts.push((self.t0, false));
        cuts.extend(events.iter().filter(|&&t| t > self.t0 && t < self.t1).map(|&t| (t, true)));
        cuts.push((self.t1, false));
        let mut out: Vec<Window> = Vec::new();
        for w in cuts.windows(2) {
            let (a, ac) = w[0];
            let (b, bc) = w[1];
            if b <= a || d(0.5 * (a + b)) >= 0.0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.b == a && !last.b_cross => {
                    last.b = b;
                    last.b_cross = bc;
                }
                _ => out.push(Window { a, b, a_cross: ac, b_cross: bc }),
            }
        }
        if self.closed && out.len() >= 2 {
            let first = out[0];
            let last = out[out.len() - 1];
            if first.a == self.t0 && last.b == self.t1 {
                out.pop();
                out[0] = Window { a: last.a, b: first.b + self.period(), a_cross: last.a_cross, b_cross: first.b_cross };
            }
        }
        out
    }
}

fn box_distance(z: &Vec2, mn: &Vec2, mx: &Vec2) -> f64 {
    let dx = (mn.x - z.x).max(0.0).max(z.x - mx.x);
    let dy = (mn.y - z.y).max(0.0).max(z.y - mx.y);
    dx.hypot(dy)
}

fn segment_distance(z: &Vec2, a: &Vec2, b: &Vec2) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_squared();
    let s = if l2 > 0.0 { ((z - a).dot(&ab) / l2).clamp(0.0, 1.0) } else { 0.0 };
    (a + ab * s - z).norm()
}

/// Root of `f` in `[a, b]` given a sign change; `fa = f(a)`.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let neg_a = fa < 0.0;
    for _ in 0..64 {
        let m = 0.5 * (a + b);
        if !(m > a && m < b) {
            break;
        }
        if (f(m) < 0.0) == neg_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc < 0.0 {
            return (c, fc);
        }
        if fd < 0.0 {
            return (d, fd);
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec2;

    #[test]
    fn circle_frame() {
        let c = ParamCurve::circle(vec2(0.1, 0.2), 0.5);
        let f = c.frame(0.3).unwrap();
        assert!((f.curvature - 2.0).abs() < 1e-13);
        assert!((cross(&f.tangent, &f.normal) - 1.0).abs() < 1e-15);
        // normal points to the center on a counterclockwise circle
        assert!(((f.point + f.normal * 0.5) - vec2(0.1, 0.2)).norm() < 1e-14);
    }

    #[test]
    fn ellipse_curvature_at_vertex() {
        let c = ParamCurve::ellipse(Vec2::zeros(), 2.0, 0.5, 0.0);
        assert!((c.frame(0.0).unwrap().curvature - 2.0 / 0.25).abs() < 1e-12);
    }

    #[test]
    fn degenerate_derivative_is_rejected() {
        let c = ParamCurve::segment(vec2(1.0, 1.0), vec2(1.0, 1.0));
        assert!(matches!(c.frame(0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn distance_to_circle() {
        let c = ParamCurve::circle(Vec2::zeros(), 1.0);
        let (d, t) = c.distance(&vec2(0.0, 0.4));
        assert!((d - 0.6).abs() < 1e-13);
        assert!((t - PI / 2.0).abs() < 1e-9);
        let (d, _) = c.distance(&vec2(3.0, 4.0));
        assert!((d - 4.0).abs() < 1e-13);
    }

    #[test]
    fn distance_to_open_segment_uses_endpoints() {
        let c = ParamCurve::segment(vec2(0.0, 0.0), vec2(1.0, 0.0));
        let (d, t) = c.distance(&vec2(2.0, 0.0));
        assert!((d - 1.0).abs() < 1e-14);
        assert_eq!(t, 1.0);
    }

    #[test]
    fn ball_windows_on_circle() {
        let c = ParamCurve::circle(Vec2::zeros(), 1.0);
        // ball centered on the curve at t = 0: window wraps around the seam
        let w = c.windows_in_ball(&vec2(1.0, 0.0), 0.1);
        assert_eq!(w.len(), 1);
        let half = 2.0 * (0.05f64).asin();
        assert!(w[0].a_cross && w[0].b_cross);
        assert!((w[0].a - (2.0 * PI - half)).abs() < 1e-12, "{:?}", w);
        assert!((w[0].b - (2.0 * PI + half)).abs() < 1e-12, "{:?}", w);
        // ball away from the seam
        let w = c.windows_in_ball(&vec2(0.0, 0.95), 0.1);
        assert_eq!(w.len(), 1);
        for t in [w[0].a, w[0].b] {
            assert!(((c.gamma(t) - vec2(0.0, 0.95)).norm() - 0.1).abs() < 1e-13);
        }
        assert!(c.windows_in_ball(&vec2(0.0, 0.5), 0.1).is_empty());
    }

    #[test]
    fn grazing_window_is_found() {
        let c = ParamCurve::line(vec2(-1.0, 0.0), vec2(1.0, 0.0), 0.0, 2.0);
        let w = c.windows_in_ball(&vec2(0.0, 0.0999999), 0.1);
        assert_eq!(w.len(), 1);
        assert!(w[0].b - w[0].a > 0.0 && w[0].b - w[0].a < 1e-2);
    }

    #[test]
    fn open_curve_ending_inside_ball() {
        let c = ParamCurve::segment(vec2(0.0, 0.0), vec2(1.0, 0.0));
        let w = c.windows_in_ball(&vec2(0.0, 0.0), 0.2);
        assert_eq!(w, vec![Window { a: 0.0, b: w[0].b, a_cross: false, b_cross: true }]);
        assert!((w[0].b - 0.2).abs() < 1e-14);
    }

    #[test]
    fn perimeter_and_winding() {
        let c = ParamCurve::circle(vec2(0.3, 0.0), 0.7);
        assert!((c.length().unwrap() - 1.4 * PI).abs() < 1e-12);
        assert_eq!(c.winding_number(&vec2(0.3, 0.1)), 1);
        assert_eq!(c.winding_number(&vec2(3.0, 0.1)), 0);
        assert!(c.check_seam());
    }
}
