use crate::error::Result;
use crate::geometry::CartoonFunction;
use crate::linalg::sqrt_abs_det;
use crate::mollifier::RadialMollifier;

use super::Smoothed;

/// Residuals of the leading-order edge asymptotics of `d^2 f_delta` at
/// `z = gamma_j(t) + delta u n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeResidual {
    /// `delta |d_nn f_delta - delta^{-2} [f] Phi'(u)|`
    pub r_nn: f64,
    /// `delta |d_nt f_delta|`
    pub r_nt: f64,
    /// `delta |d_tt f_delta + delta^{-1} [f] kappa Phi(u)|`
    pub r_tt: f64,
    /// `|delta^{3/2} K(d^2 f_delta) - sqrt|kappa| |[f]| sqrt|Phi Phi'|(u)|`
    pub r_k: f64,
    pub d_nn: f64,
    pub d_nt: f64,
    pub d_tt: f64,
    /// `-delta^{-1} [f] kappa Phi(u)`, the predicted `d_tt f_delta`.
    pub tt_predicted: f64,
}

pub fn hessian_asymptotics_probe(
    f: &CartoonFunction,
    m: &RadialMollifier,
    delta: f64,
    j: usize,
    t: f64,
    u: f64,
) -> Result<ProbeResidual> {
    let fr = f.curves[j].frame(t)?;
    let z = fr.point + fr.normal * (delta * u);
    let h = Smoothed::new(f, m, delta)?.with_tol(1e-11).hessian(&z)?;
    let (n, tg) = (fr.normal, fr.tangent);
    let d_nn = n.dot(&(h * n));
    let d_nt = n.dot(&(h * tg));
    let d_tt = tg.dot(&(h * tg));
    let jf = f.jump(j, t)?;
    let (phi, dphi) = m.marginal(u)?;
    let tt_predicted = -jf * fr.curvature * phi / delta;
    Ok(ProbeResidual {
        r_nn: delta * (d_nn - jf * dphi / (delta * delta)).abs(),
        r_nt: delta * d_nt.abs(),
        r_tt: delta * (d_tt - tt_predicted).abs(),
        r_k: (delta.powf(1.5) * sqrt_abs_det(&h) - fr.curvature.abs().sqrt() * jf.abs() * (phi * dphi).abs().sqrt()).abs(),
        d_nn,
        d_nt,
        d_tt,
        tt_predicted,
    })
}
