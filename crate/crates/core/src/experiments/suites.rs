use crate::error::Result;
use crate::functionals::{a2_cartoon, a_p_delta, e_p, s_p, s_p_with, ApDeltaReport, FunctionalConfig};
use crate::geometry::{AffineMap, CartoonFunction};
use crate::mesh::{build_adapted_mesh, interp_error_global, rate_fit};
use crate::mollifier::RadialMollifier;

/// `A_p(f_delta)` over a list of `delta` with its predicted behaviour.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Series {
    pub p: f64,
    pub rows: Vec<ApDeltaReport>,
    /// Predicted `A_p(f_delta)` per row: `S_p` for `p < 2`, the cartoon
    /// `A_2` for `p = 2` and `E_p C_p delta^{1/p - 1/2}` for `p > 2`.
    pub predicted: Vec<f64>,
    /// `S_p`, `A_2(f)` or `E_p C_p` (the limit of `delta^{1/2 - 1/p} A_p`).
    pub limit: f64,
    /// Least-squares slope of `ln A_p` against `ln delta`, NaN for a
    /// single row.
    pub slope: f64,
}

impl Theorem1Series {
    /// `|A - predicted| / predicted`, infinite for a zero prediction.
    pub fn rel_error(&self, k: usize) -> f64 {
        let (a, q) = (self.rows[k].value, self.predicted[k]);
        if q == 0.0 {
            if a == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (a - q).abs() / q.abs()
        }
    }

    /// Row with the smallest `delta`.
    pub fn finest(&self) -> usize {
        (0..self.rows.len()).min_by(|&a, &b| self.rows[a].delta.total_cmp(&self.rows[b].delta)).unwrap_or(0)
    }

    pub fn coarsest(&self) -> usize {
        (0..self.rows.len()).max_by(|&a, &b| self.rows[a].delta.total_cmp(&self.rows[b].delta)).unwrap_or(0)
    }
}

fn inv(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// Runs `A_p(f_delta)` on the grid `p_list x deltas`.
pub fn theorem1_sweep(
    f: &CartoonFunction,
    m: &RadialMollifier,
    p_list: &[f64],
    deltas: &[f64],
) -> Result<Vec<Theorem1Series>> {
    let mut out = Vec::with_capacity(p_list.len());
    for &p in p_list {
        let cfg = FunctionalConfig::new(p)?;
        let rows = deltas.iter().map(|&d| a_p_delta(f, m, d, &cfg)).collect::<Result<Vec<_>>>()?;
        let (limit, predicted): (f64, Vec<f64>) = if p < 2.0 {
            let s = s_p(f, p)?;
            (s, vec![s; rows.len()])
        } else if p == 2.0 {
            let a = a2_cartoon(f, m)?;
            (a, vec![a; rows.len()])
        } else {
            let ec = e_p(f, p)? * m.c_p(p)?;
            (ec, rows.iter().map(|r| ec * r.delta.powf(inv(p) - 0.5)).collect())
        };
        let slope = if rows.len() >= 2 && rows.iter().all(|r| r.value > 0.0) {
            rate_fit(&rows.iter().map(|r| (r.delta, r.value)).collect::<Vec<_>>())?
        } else {
            f64::NAN
        };
        out.push(Theorem1Series { p, rows, predicted, limit, slope });
    }
    Ok(out)
}

/// One affine-invariance identity `transformed = factor * original`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceCheck {
    /// `ap`, `e2` or `mesh`.
    pub quantity: &'static str,
    pub original: f64,
    pub transformed: f64,
    pub factor: f64,
}

impl InvarianceCheck {
    /// `transformed / (factor original)`, 1 when the identity holds.
    pub fn ratio(&self) -> f64 {
        self.transformed / (self.factor * self.original)
    }
}

/// Checks, for `g = f o T^{-1}`:
/// `A_p(g) = |det L|^{1/p} A_p(f)` on the smooth `smooth`,
/// `E_2(g) = |det L|^{1/2} E_2(f)` on `cartoon`, and that the interpolation
/// error of `T(mesh)` on `g` is `|det L|^{1/p}` times that of `mesh` on `f`.
pub fn invariance_suite(
    smooth: &CartoonFunction,
    cartoon: &CartoonFunction,
    t: &AffineMap,
    p: f64,
    budget: usize,
) -> Result<Vec<InvarianceCheck>> {
    let det = t.det().abs();
    let cfg = FunctionalConfig::new(p)?.with_tol(1e-9);
    let sg = smooth.pushforward(t);
    let ap = InvarianceCheck {
        quantity: "ap",
        original: s_p_with(smooth, &cfg)?,
        transformed: s_p_with(&sg, &cfg)?,
        factor: det.powf(inv(p)),
    };
    let cg = cartoon.pushforward(t);
    let e2 = InvarianceCheck { quantity: "e2", original: e_p(cartoon, 2.0)?, transformed: e_p(&cg, 2.0)?, factor: det.sqrt() };
    let mesh = build_adapted_mesh(cartoon, budget, p)?;
    let moved = mesh.transform(t);
    let me = InvarianceCheck {
        quantity: "mesh",
        original: interp_error_global(cartoon, &mesh, p)?,
        transformed: interp_error_global(&cg, &moved, p)?,
        factor: det.powf(inv(p)),
    };
    Ok(vec![ap, e2, me])
}
