//! Continuous functionals of cartoon functions (`S_p`, `E_p`, total
//! variation, the cartoon `A_2`), mollified fields `f_delta` and the
//! regularized `A_p(f_delta)`.

mod apdelta;
mod mollify;
mod probe;

pub use apdelta::{a_p_delta, edge_zone_direct, ApDeltaReport, TubeChart};
pub use mollify::{mollify_field, MollifiedValue, Order, Smoothed};
pub use probe::{hessian_asymptotics_probe, ProbeResidual};

use crate::error::{Error, Result};
use crate::geometry::CartoonFunction;
use crate::linalg::tau_of;
use crate::mollifier::RadialMollifier;
use crate::quad::{sweep_with_hints, QuadOptions, SweepDomain, SweepOptions};

/// Exponent and tolerance settings shared by the functionals.
#[derive(Debug, Clone, Copy)]
pub struct FunctionalConfig {
    pub p: f64,
    /// `1/tau = 1 + 1/p`
    pub tau: f64,
    /// Relative quadrature tolerance.
    pub quad_tol: f64,
    /// Initial pieces of each tube window along the curve.
    pub tube_subdivisions: usize,
    pub parallel: bool,
}

impl FunctionalConfig {
    pub fn new(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::domain(format!("p = {p} must be at least 1")));
        }
        Ok(FunctionalConfig { p, tau: tau_of(p), quad_tol: 1e-6, tube_subdivisions: 8, parallel: true })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.quad_tol = tol;
        self
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }
}

/// Region-sweep over the whole domain; the zone of a point is its region.
fn region_sweep<const N: usize, G>(f: &CartoonFunction, g: G, tol: f64, parallel: bool) -> Result<[f64; N]>
where
    G: Fn(&crate::linalg::Vec2, usize) -> [f64; N] + Sync,
{
    let dom = SweepDomain::convex_polygon(&f.domain.as_arrays());
    let pad = 1e-3 * f.domain.area().sqrt();
    let opts = SweepOptions {
        outer: QuadOptions::tol(tol * 1e-3, tol).with_parallel(parallel).with_max_panels(4000),
        ..SweepOptions::default()
    };
    let r = sweep_with_hints(
        &dom,
        |z| f.region_of(&crate::linalg::vec2(z[0], z[1])).map_or(-1, |i| i as i64),
        |x| f.vertical_hints(x, pad),
        |z, zone| Ok(g(&crate::linalg::vec2(z[0], z[1]), zone as usize)),
        &opts,
    )?;
    Ok(r.require(tol)?.value)
}

/// `S_p(f) = (sum_i int_{Omega_i} |det d^2 f_i|^{tau/2})^{1/tau}`.
pub fn s_p(f: &CartoonFunction, p: f64) -> Result<f64> {
    let cfg = FunctionalConfig::new(p)?;
    s_p_with(f, &cfg)
}

pub fn s_p_with(f: &CartoonFunction, cfg: &FunctionalConfig) -> Result<f64> {
    let tau = cfg.tau;
    if f.pieces.iter().all(|p| p.constant_hessian().is_some_and(|h| h.determinant() == 0.0)) {
        return Ok(0.0);
    }
    let v = region_sweep(f, |z, i| [f.piece_hessian(i, z).determinant().abs().powf(0.5 * tau)], cfg.quad_tol, cfg.parallel)?;
    Ok(v[0].powf(1.0 / tau))
}

/// `E_p(f) = (sum_j int_{Gamma_j} (|kappa|^{1/2} |[f]|)^tau ds)^{1/tau}`,
/// restricted to the part of each curve inside the domain.
pub fn e_p(f: &CartoonFunction, p: f64) -> Result<f64> {
    let tau = tau_of(p);
    if !(p >= 1.0) {
        return Err(Error::domain(format!("p = {p} must be at least 1")));
    }
    let total = edge_integral(f, |k, jf| (k.abs().sqrt() * jf.abs()).powf(tau))?;
    Ok(total.powf(1.0 / tau))
}

/// `J(f) = int_Gamma |[f]| ds`.
pub fn jump_length(f: &CartoonFunction) -> Result<f64> {
    edge_integral(f, |_, jf| jf.abs())
}

/// `TV(f) = int |grad f| + int_Gamma |[f]| ds`.
pub fn total_variation(f: &CartoonFunction) -> Result<f64> {
    let smooth = region_sweep(f, |z, i| [f.pieces[i].gradient(z).norm()], 1e-9, true)?[0];
    Ok(smooth + jump_length(f)?)
}

fn edge_integral<G: Fn(f64, f64) -> f64 + Sync>(f: &CartoonFunction, g: G) -> Result<f64> {
    let opts = QuadOptions::tol(1e-12, 1e-11);
    let mut total = 0.0;
    for (j, c) in f.curves.iter().enumerate() {
        for (a, b) in f.windows_in_domain(j) {
            let err = std::sync::Mutex::new(None);
            let v = c.arc_integral_on(
                |fr| {
                    // jump evaluated at the frame's parameter through the point
                    let (p, m) = match f.sides(j, 0.0) {
                        Ok(s) => s,
                        Err(e) => {
                            *err.lock().unwrap() = Some(e);
                            return 0.0;
                        }
                    };
                    let jf = f.pieces[p].value(&fr.point) - f.pieces[m].value(&fr.point);
                    g(fr.curvature, jf)
                },
                a,
                b,
                &opts,
            )?;
            if let Some(e) = err.into_inner().unwrap() {
                return Err(e);
            }
            total += v;
        }
    }
    Ok(total)
}

/// `A_2(f) = (S_2^{2/3} + E_2^{2/3} C_{2,phi}^{2/3})^{3/2}`.
pub fn a2_cartoon(f: &CartoonFunction, m: &RadialMollifier) -> Result<f64> {
    let s = s_p(f, 2.0)?;
    let e = e_p(f, 2.0)?;
    let c = m.c_p(2.0)?;
    Ok((s.powf(2.0 / 3.0) + (e * c).powf(2.0 / 3.0)).powf(1.5))
}
