use crate::error::{Error, Result};
use crate::geometry::{CartoonFunction, Window};
use crate::linalg::{symmetrize, vec2, Mat2, Vec2};
use crate::mollifier::RadialMollifier;
use crate::quad::{integrate, sweep_with_hints, QuadOptions, SweepDomain, SweepOptions};

/// Derivative order of a mollified field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Value,
    Gradient,
    Hessian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MollifiedValue {
    Value(f64),
    Gradient(Vec2),
    Hessian(Mat2),
}

/// `f_delta = f * phi_delta` and its derivatives at points of the inner
/// parallel set `{z : B(z, delta) in Omega}`.
///
/// Derivatives are moved from the kernel onto `f`: the distributional
/// gradient of a cartoon is `(grad f) dx + [f] n ds`, so
/// `d^2 f_delta = (d^2 f) * phi_delta + line integrals over the edges` plus
/// point terms where an edge crosses the support boundary (nonzero only
/// when `rho(1) > 0`).
pub struct Smoothed<'a> {
    pub f: &'a CartoonFunction,
    pub m: &'a RadialMollifier,
    pub delta: f64,
    /// Relative tolerance of the inner quadratures.
    pub tol: f64,
}

/// One-shot evaluation of `f_delta` or a derivative at `z`.
pub fn mollify_field(
    f: &CartoonFunction,
    m: &RadialMollifier,
    delta: f64,
    z: &Vec2,
    order: Order,
) -> Result<MollifiedValue> {
    let s = Smoothed::new(f, m, delta)?;
    Ok(match order {
        Order::Value => MollifiedValue::Value(s.value(z)?),
        Order::Gradient => MollifiedValue::Gradient(s.gradient(z)?),
        Order::Hessian => MollifiedValue::Hessian(s.hessian(z)?),
    })
}

struct EdgeWindow {
    curve: usize,
    w: Window,
    /// parameter of the point nearest to the ball centre, if inside
    foot: Option<f64>,
}

impl<'a> Smoothed<'a> {
    pub fn new(f: &'a CartoonFunction, m: &'a RadialMollifier, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::domain(format!("delta = {delta} must be positive")));
        }
        Ok(Smoothed { f, m, delta, tol: 1e-9 })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn check(&self, z: &Vec2) -> Result<()> {
        let d = self.f.domain.inset_distance(z);
        if d < self.delta * (1.0 - 1e-12) {
            return Err(Error::domain(format!(
                "z = ({}, {}) is {d} from the boundary, closer than delta = {}",
                z.x, z.y, self.delta
            )));
        }
        Ok(())
    }

    fn windows(&self, z: &Vec2) -> Vec<EdgeWindow> {
        let mut out = Vec::new();
        for (j, c) in self.f.curves.iter().enumerate() {
            let ws = c.windows_in_ball(z, self.delta);
            if ws.is_empty() {
                continue;
            }
            let (_, tf) = c.distance(z);
            for w in ws {
                let foot = [tf, tf + c.period(), tf - c.period()].into_iter().find(|&t| t > w.a && t < w.b);
                out.push(EdgeWindow { curve: j, w, foot });
            }
        }
        out
    }

    fn ball_sweep<const N: usize, G>(&self, z: &Vec2, g: G) -> Result<[f64; N]>
    where
        G: Fn(&Vec2, usize) -> [f64; N] + Sync,
    {
        let d = self.delta;
        let dom = SweepDomain::ball([z.x, z.y], d).with_breaks(self.outer_breaks(z));
        let opts = SweepOptions {
            outer: QuadOptions::tol(self.tol * 1e-3, self.tol),
            inner: QuadOptions::tol(self.tol * 1e-3, self.tol),
            probes: 8,
            inner_adaptive: false,
        };
        let r = sweep_with_hints(
            &dom,
            |x| self.f.region_of(&vec2(x[0], x[1])).map_or(-1, |i| i as i64),
            |x| self.f.vertical_hints(x, 1e-3 * d),
            |x, i| {
                let x = vec2(x[0], x[1]);
                let w = self.m.phi_delta(&(z - x), d);
                let v = g(&x, i as usize);
                let mut out = [0.0; N];
                for k in 0..N {
                    out[k] = v[k] * w;
                }
                Ok(out)
            },
            &opts,
        )?;
        Ok(r.value)
    }

    /// Sweep angles `asin((x - z.x) / delta)` of the ball at which the line
    /// integrals have kinks: edge points on the ball boundary and
    /// vertical tangents of the edges inside it.
    fn outer_breaks(&self, z: &Vec2) -> Vec<f64> {
        let d = self.delta;
        let mut xs = Vec::new();
        for ew in self.windows(z) {
            let c = &self.f.curves[ew.curve];
            let (a, b) = (ew.w.a, ew.w.b);
            xs.push(c.gamma(a).x);
            xs.push(c.gamma(b).x);
            let n = 32;
            let t = |k: usize| a + (b - a) * k as f64 / n as f64;
            for k in 0..n {
                let (mut lo, mut hi) = (t(k), t(k + 1));
                let neg = c.dgamma(lo).x < 0.0;
                if (c.dgamma(hi).x < 0.0) == neg {
                    continue;
                }
                for _ in 0..60 {
                    let m = 0.5 * (lo + hi);
                    if (c.dgamma(m).x < 0.0) == neg {
                        lo = m;
                    } else {
                        hi = m;
                    }
                }
                xs.push(c.gamma(0.5 * (lo + hi)).x);
            }
        }
        xs.into_iter().map(|x| ((x - z.x) / d).clamp(-1.0, 1.0).asin()).collect()
    }

    fn line_opts(&self, scale: f64) -> QuadOptions {
        QuadOptions::tol(self.tol * 1e-3 * scale, self.tol)
    }

    fn window_breaks(ew: &EdgeWindow) -> Vec<f64> {
        ew.foot.into_iter().collect()
    }

    /// `f_delta(z)`
    pub fn value(&self, z: &Vec2) -> Result<f64> {
        self.check(z)?;
        let ws = self.windows(z);
        if ws.is_empty() {
            let i = self.region(z)?;
            if self.f.pieces[i].constant_hessian().is_some_and(|h| h == Mat2::zeros()) {
                // affine piece: the radial kernel reproduces it
                return Ok(self.f.pieces[i].value(z));
            }
        }
        Ok(self.ball_sweep(z, |x, i| [self.f.pieces[i].value(x)])?[0])
    }

    fn region(&self, z: &Vec2) -> Result<usize> {
        self.f.region_of(z).ok_or_else(|| Error::geometry(format!("point ({}, {}) lies in no region", z.x, z.y)))
    }

    /// `grad f_delta(z)`
    pub fn gradient(&self, z: &Vec2) -> Result<Vec2> {
        self.check(z)?;
        let d = self.delta;
        let ws = self.windows(z);
        let mut g = if ws.is_empty() {
            let i = self.region(z)?;
            match self.f.pieces[i].constant_hessian() {
                Some(h) if h == Mat2::zeros() => self.f.pieces[i].gradient(z),
                Some(_) => self.f.pieces[i].gradient(z),
                None => {
                    let v = self.ball_sweep(z, |x, i| {
                        let g = self.f.pieces[i].gradient(x);
                        [g.x, g.y]
                    })?;
                    vec2(v[0], v[1])
                }
            }
        } else {
            let v = self.ball_sweep(z, |x, i| {
                let g = self.f.pieces[i].gradient(x);
                [g.x, g.y]
            })?;
            vec2(v[0], v[1])
        };
        for ew in &ws {
            let c = &self.f.curves[ew.curve];
            let r = integrate(
                |t| {
                    let fr = c.frame(t)?;
                    let jf = self.f.jump(ew.curve, t)?;
                    let w = self.m.phi_delta(&(z - fr.point), d) * jf * fr.speed;
                    Ok([fr.normal.x * w, fr.normal.y * w])
                },
                ew.w.a,
                ew.w.b,
                &Self::window_breaks(ew),
                &self.line_opts(1.0 / d),
            )?;
            g += vec2(r.value[0], r.value[1]);
        }
        Ok(g)
    }

    /// Symmetric `d^2 f_delta(z)`.
    pub fn hessian(&self, z: &Vec2) -> Result<Mat2> {
        self.check(z)?;
        let d = self.delta;
        let ws = self.windows(z);
        if ws.is_empty() {
            let i = self.region(z)?;
            if let Some(h) = self.f.pieces[i].constant_hessian() {
                return Ok(h);
            }
            let v = self.ball_sweep(z, |x, i| {
                let h = self.f.piece_hessian(i, x);
                [h[(0, 0)], h[(0, 1)], h[(1, 1)]]
            })?;
            return Ok(Mat2::new(v[0], v[1], v[1], v[2]));
        }
        let mut h = if self.f.pieces.iter().all(|p| p.constant_hessian() == Some(Mat2::zeros())) {
            Mat2::zeros()
        } else if self.f.pieces.iter().all(|p| p.constant_hessian().is_some()) {
            self.piecewise_constant_hessian(z, &ws)?
        } else {
            self.piecewise_hessian_sweep(z)?
        };
        let rho1 = self.m.rho_at_one();
        for ew in &ws {
            let j = ew.curve;
            let c = &self.f.curves[j];
            let r = integrate(
                |t| {
                    let fr = c.frame(t)?;
                    let jf = self.f.jump(j, t)?;
                    let jg = self.f.jump_gradient(j, t)?;
                    let y = z - fr.point;
                    let w = self.m.phi_delta(&y, d);
                    let gw = self.m.grad_phi_delta(&y, d);
                    let n = fr.normal;
                    let s = fr.speed;
                    // [grad f] n^T phi + [f] n (grad phi)^T
                    Ok([
                        (jg.x * n.x * w + jf * n.x * gw.x) * s,
                        (jg.x * n.y * w + jf * n.x * gw.y) * s,
                        (jg.y * n.x * w + jf * n.y * gw.x) * s,
                        (jg.y * n.y * w + jf * n.y * gw.y) * s,
                    ])
                },
                ew.w.a,
                ew.w.b,
                &Self::window_breaks(ew),
                &self.line_opts(1.0 / (d * d)),
            )?;
            h += Mat2::new(r.value[0], r.value[1], r.value[2], r.value[3]);
            if rho1 != 0.0 {
                for (t, crossing) in [(ew.w.a, ew.w.a_cross), (ew.w.b, ew.w.b_cross)] {
                    if !crossing {
                        continue;
                    }
                    let fr = c.frame(t)?;
                    let jf = self.f.jump(j, t)?;
                    let y = z - fr.point;
                    // d/dt |gamma - z| at the crossing
                    let dd = (-y).dot(&(fr.tangent * fr.speed)) / d;
                    if dd.abs() < 1e-300 {
                        continue;
                    }
                    let coef = -self.m.c() * rho1 * jf * fr.speed / (d * d * dd.abs());
                    h += fr.normal * (y / d).transpose() * coef;
                }
            }
        }
        Ok(symmetrize(&h))
    }

    /// `(d^2 f)_pw * phi_delta` by area quadrature over the ball.
    fn piecewise_hessian_sweep(&self, z: &Vec2) -> Result<Mat2> {
        let v = self.ball_sweep(z, |x, i| {
            let h = self.f.piece_hessian(i, x);
            [h[(0, 0)], h[(0, 1)], h[(1, 1)]]
        })?;
        Ok(Mat2::new(v[0], v[1], v[1], v[2]))
    }

    /// `(d^2 f)_pw * phi_delta` for piecewise constant Hessians. The field
    /// `F(y) = y (M(|y|/delta) - 1) / (2 pi |y|^2)`, with `M` the radial
    /// mass, has divergence `phi_delta - delta_0` and vanishes on the
    /// support boundary, so every region mass is a line integral.
    fn piecewise_constant_hessian(&self, z: &Vec2, ws: &[EdgeWindow]) -> Result<Mat2> {
        let d = self.delta;
        let hess = |i: usize| self.f.pieces[i].constant_hessian().unwrap_or_else(Mat2::zeros);
        let near = self.f.distance_to_edges(z).filter(|&(dist, _, _)| dist <= 1e-12 * d);
        let mut h = match near {
            // on an edge the point mass splits evenly
            Some((_, j, t)) => {
                let (plus, minus) = self.f.sides(j, t)?;
                (hess(minus) + hess(plus)) * 0.5
            }
            None => hess(self.region(z)?),
        };
        for ew in ws {
            let j = ew.curve;
            let c = &self.f.curves[j];
            let r = integrate(
                |t| {
                    let fr = c.frame(t)?;
                    let (plus, minus) = self.f.sides(j, t)?;
                    let y = fr.point - z;
                    let r2 = y.norm_squared();
                    let flux = if r2 > 0.0 {
                        y.dot(&fr.normal) * (self.m.radial_mass(r2.sqrt() / d) - 1.0) / (2.0 * std::f64::consts::PI * r2)
                    } else {
                        0.0
                    };
                    let jh = (hess(plus) - hess(minus)) * (-flux * fr.speed);
                    Ok([jh[(0, 0)], jh[(0, 1)], jh[(1, 1)]])
                },
                ew.w.a,
                ew.w.b,
                &Self::window_breaks(ew),
                &self.line_opts(1.0),
            )?;
            h += Mat2::new(r.value[0], r.value[1], r.value[1], r.value[2]);
        }
        Ok(h)
    }

    /// Hessian by direct quadrature of `f * D^2 phi_delta` over the ball.
    /// Only valid for kernels with `rho(1) = rho'(1) = 0`.
    pub fn hessian_direct(&self, z: &Vec2) -> Result<Mat2> {
        self.check(z)?;
        let [r1, dr1, _] = self.m.profile(1.0);
        if r1.abs() > 1e-12 || dr1.abs() > 1e-12 {
            return Err(Error::domain(format!("kernel {} is not C^1 across its support boundary", self.m.name)));
        }
        let d = self.delta;
        let dom = SweepDomain::ball([z.x, z.y], d).with_breaks(self.outer_breaks(z));
        let opts = SweepOptions {
            outer: QuadOptions::tol(self.tol * 1e-3 / (d * d), self.tol),
            inner: QuadOptions::tol(self.tol * 1e-3, self.tol),
            probes: 8,
            inner_adaptive: true,
        };
        let r = sweep_with_hints(
            &dom,
            |x| self.f.region_of(&vec2(x[0], x[1])).map_or(-1, |i| i as i64),
            |x| self.f.vertical_hints(x, 1e-3 * d),
            |x, i| {
                let x = vec2(x[0], x[1]);
                let h = self.m.hessian_phi_delta(&(z - x), d) * self.f.pieces[i as usize].value(&x);
                Ok([h[(0, 0)], h[(0, 1)], h[(1, 1)]])
            },
            &opts,
        )?;
        let v = r.value;
        Ok(Mat2::new(v[0], v[1], v[1], v[2]))
    }
}
