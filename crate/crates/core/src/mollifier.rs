//! Radial compactly supported mollifiers `phi(z) = c rho(|z|)` on the unit
//! ball, their marginal profile `Phi(x) = int phi(x, y) dy` and the constants
//! `C_{p,phi} = || sqrt|Phi Phi'| ||_{L^tau}`.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{tau_of, Mat2, Vec2};
use crate::quad::{integrate_scalar, QuadOptions};

type Radial = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Radial profile on `[0, 1]`.
#[derive(Clone)]
pub enum Profile {
    /// `(1 - r^2)^k`; `k = 0` is the disc indicator.
    PolyBump(u32),
    /// `(1 + cos(pi r)) / 2`
    Cosine,
    /// User profile with derivative evaluators `[rho, rho', rho'']`.
    Custom { rho: Radial, drho: Radial, d2rho: Radial },
}

impl Profile {
    fn eval(&self, r: f64) -> [f64; 3] {
        match self {
            Profile::PolyBump(k) => {
                let k = *k as i32;
                let a = 1.0 - r * r;
                let kf = k as f64;
                let p0 = a.powi(k);
                let p1 = if k >= 1 { -2.0 * kf * r * a.powi(k - 1) } else { 0.0 };
                let p2 = match k {
                    0 => 0.0,
                    1 => -2.0,
                    _ => -2.0 * kf * a.powi(k - 1) + 4.0 * kf * (kf - 1.0) * r * r * a.powi(k - 2),
                };
                [p0, p1, p2]
            }
            Profile::Cosine => {
                let (s, c) = (PI * r).sin_cos();
                [0.5 * (1.0 + c), -0.5 * PI * s, -0.5 * PI * PI * c]
            }
            Profile::Custom { rho, drho, d2rho } => [rho(r), drho(r), d2rho(r)],
        }
    }
}

/// Unit-mass radial mollifier.
#[derive(Clone)]
pub struct RadialMollifier {
    pub name: String,
    profile: Profile,
    c: f64,
    decreasing: bool,
}

impl std::fmt::Debug for RadialMollifier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialMollifier").field("name", &self.name).field("c", &self.c).finish()
    }
}

/// Gallery names accepted by [`by_name`].
pub const NAMES: &[&str] = &["disc", "quadratic", "biweight", "poly4", "cosine"];

/// Builds a gallery mollifier.
pub fn by_name(name: &str) -> Result<RadialMollifier> {
    let profile = match name {
        "disc" => Profile::PolyBump(0),
        "quadratic" => Profile::PolyBump(1),
        "biweight" => Profile::PolyBump(2),
        "poly4" => Profile::PolyBump(4),
        "cosine" => Profile::Cosine,
        _ => return Err(Error::Parse(format!("unknown mollifier '{name}'"))),
    };
    normalize_profile(name, profile)
}

/// Computes the normalization `c` with `2 pi c int_0^1 rho(r) r dr = 1`.
pub fn normalize_profile(name: &str, profile: Profile) -> Result<RadialMollifier> {
    let mut decreasing = true;
    let mut prev = f64::INFINITY;
    for k in 0..=1000 {
        let v = profile.eval(k as f64 / 1000.0)[0];
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::domain(format!("profile {name} is negative or non-finite at r = {}", k as f64 / 1000.0)));
        }
        if v > prev + 1e-14 {
            decreasing = false;
        }
        prev = v;
    }
    let m = integrate_scalar(|r| Ok(profile.eval(r)[0] * r), 0.0, 1.0, &[0.5], &QuadOptions::tol(1e-13, 1e-13))?
        .require(1e-13)?
        .scalar();
    if !(m > 0.0) {
        return Err(Error::domain(format!("profile {name} has zero mass")));
    }
    Ok(RadialMollifier { name: name.to_string(), profile, c: 1.0 / (2.0 * PI * m), decreasing })
}

fn poly_chord_integral(k: u32) -> f64 {
    // int_{-1}^{1} (1 - s^2)^k ds = 2 (2k)!! / (2k + 1)!!
    (1..=k).fold(2.0, |acc, j| acc * (2.0 * j as f64) / (2.0 * j as f64 + 1.0))
}

impl RadialMollifier {
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn is_radially_decreasing(&self) -> bool {
        self.decreasing
    }

    /// `[rho, rho', rho'']` at `r`, zero for `r > 1`.
    pub fn profile(&self, r: f64) -> [f64; 3] {
        if r > 1.0 {
            [0.0; 3]
        } else {
            self.profile.eval(r)
        }
    }

    /// `rho(1^-)`, the height of the jump at the support boundary.
    pub fn rho_at_one(&self) -> f64 {
        self.profile.eval(1.0)[0]
    }

    pub fn phi(&self, y: &Vec2) -> f64 {
        self.c * self.profile(y.norm())[0]
    }

    /// `phi_delta(y) = delta^{-2} phi(y / delta)`
    pub fn phi_delta(&self, y: &Vec2, delta: f64) -> f64 {
        self.c * self.profile(y.norm() / delta)[0] / (delta * delta)
    }

    /// Absolutely continuous part of the gradient of `phi_delta`.
    pub fn grad_phi_delta(&self, y: &Vec2, delta: f64) -> Vec2 {
        let r = y.norm();
        if r == 0.0 || r >= delta {
            return Vec2::zeros();
        }
        let d1 = self.profile(r / delta)[1];
        y * (self.c * d1 / (delta.powi(3) * r))
    }

    /// Hessian of `phi_delta` inside the support (no boundary layer).
    pub fn hessian_phi_delta(&self, y: &Vec2, delta: f64) -> Mat2 {
        let r = y.norm();
        if r >= delta {
            return Mat2::zeros();
        }
        let s = r / delta;
        let [_, d1, d2] = self.profile(s);
        let scale = self.c / delta.powi(4);
        if s < 1e-12 {
            return Mat2::identity() * (scale * d2);
        }
        let u = y / r;
        let uu = u * u.transpose();
        (uu * d2 + (Mat2::identity() - uu) * (d1 / s)) * scale
    }

    /// Kernel mass inside the ball of radius `a` (in units of the support).
    pub fn radial_mass(&self, a: f64) -> f64 {
        if a >= 1.0 {
            return 1.0;
        }
        let a = a.max(0.0);
        // int_0^a s rho(s) ds
        let moment = match &self.profile {
            Profile::PolyBump(k) => {
                let k1 = (*k + 1) as i32;
                (1.0 - (1.0 - a * a).powi(k1)) / (2.0 * k1 as f64)
            }
            Profile::Cosine => {
                let (s, c) = (PI * a).sin_cos();
                a * a / 4.0 + a * s / (2.0 * PI) + (c - 1.0) / (2.0 * PI * PI)
            }
            Profile::Custom { rho, .. } => crate::quad::GaussLegendre::new(24).integrate(0.0, a, |s| s * rho(s)),
        };
        2.0 * PI * self.c * moment
    }

    /// True when `Phi` has a closed form.
    pub fn has_closed_form_marginal(&self) -> bool {
        matches!(self.profile, Profile::PolyBump(_))
    }

    /// `(Phi(x), Phi'(x))`, zero for `|x| >= 1`.
    pub fn marginal(&self, x: f64) -> Result<(f64, f64)> {
        if x.abs() >= 1.0 {
            return Ok((0.0, 0.0));
        }
        let a2 = 1.0 - x * x;
        if let Profile::PolyBump(k) = self.profile {
            let ik = poly_chord_integral(k);
            let kf = k as f64;
            let phi = self.c * ik * a2.powf(kf + 0.5);
            let dphi = -(2.0 * kf + 1.0) * x * self.c * ik * a2.powf(kf - 0.5);
            return Ok((phi, dphi));
        }
        self.marginal_numeric(x)
    }

    /// Marginal by quadrature over the chord, independent of closed forms.
    pub fn marginal_numeric(&self, x: f64) -> Result<(f64, f64)> {
        if x.abs() >= 1.0 {
            return Ok((0.0, 0.0));
        }
        let a = (1.0 - x * x).sqrt();
        let opts = QuadOptions::tol(1e-13, 1e-13);
        // y = a sin(theta) over half the chord, doubled by symmetry
        let r_of = |th: f64| (x * x + (a * th.sin()).powi(2)).sqrt().min(1.0);
        let phi = integrate_scalar(
            |th| Ok(self.profile.eval(r_of(th))[0] * a * th.cos()),
            0.0,
            0.5 * PI,
            &[],
            &opts,
        )?
        .require(1e-13)?
        .scalar();
        let dphi = integrate_scalar(
            |th| {
                let r = r_of(th);
                let ratio = if r > 0.0 { x / r } else { 0.0 };
                Ok(self.profile.eval(r)[1] * ratio * a * th.cos())
            },
            0.0,
            0.5 * PI,
            &[],
            &opts,
        )?
        .require(1e-13)?
        .scalar();
        let jump = 2.0 * self.c * self.rho_at_one() * x / a;
        Ok((2.0 * self.c * phi, 2.0 * self.c * dphi - jump))
    }

    /// `C_{p,phi} = (int_{-1}^{1} |Phi Phi'|^{tau/2})^{1/tau}`, `1/tau = 1 + 1/p`.
    pub fn c_p(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::domain(format!("p = {p} must be at least 1")));
        }
        let tau = tau_of(p);
        // integrand is even; graded breakpoints toward 0 and 1
        let mut breaks: Vec<f64> = (1..=24).map(|k| 0.5f64.powi(k)).collect();
        breaks.extend((2..=24).map(|k| 1.0 - 0.5f64.powi(k)));
        let tol = 1e-12;
        let r = integrate_scalar(
            |x| {
                let (f, df) = self.marginal(x)?;
                Ok((f * df).abs().powf(0.5 * tau))
            },
            0.0,
            1.0,
            &breaks,
            &QuadOptions::tol(tol, 1e-12).with_max_panels(4000),
        )?;
        if !r.converged {
            return Err(Error::NoConvergence { estimate: (2.0 * r.scalar()).powf(1.0 / tau), error: r.error, tol });
        }
        Ok((2.0 * r.scalar()).powf(1.0 / tau))
    }
}

/// `(2/pi) (4 / (tau + 2))^{1/tau}`, the value of `C_{p,phi}` for the disc
/// mollifier and a lower bound for radially decreasing ones.
pub fn c_p_lower_bound(p: f64) -> f64 {
    let tau = tau_of(p);
    2.0 / PI * (4.0 / (tau + 2.0)).powf(1.0 / tau)
}

/// `C_{p,phi}` of the Gaussian `exp(-|x|^2) / pi`, whose marginal is
/// `exp(-x^2) / sqrt(pi)`; not compactly supported, so only used to compare
/// heat-smoothed rasters with the continuum.
pub fn gaussian_c_p(p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("p = {p} must be at least 1")));
    }
    let tau = tau_of(p);
    let mut breaks: Vec<f64> = (1..=24).map(|k| 0.5f64.powi(k)).collect();
    breaks.extend((1..=9).map(|k| k as f64));
    let r = integrate_scalar(
        |x| Ok((2.0 * x * (-2.0 * x * x).exp() / PI).powf(0.5 * tau)),
        0.0,
        10.0,
        &breaks,
        &QuadOptions::tol(1e-13, 1e-12).with_max_panels(4000),
    )?;
    Ok((2.0 * r.scalar()).powf(1.0 / tau))
}

/// `C_{p,phi}` of the rescaled mollifier `phi_delta`.
pub fn c_p_rescaled(m: &RadialMollifier, p: f64, delta: f64) -> Result<f64> {
    let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
    Ok(m.c_p(p)? * delta.powf(inv_p - 0.5))
}
