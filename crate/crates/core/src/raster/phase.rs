use super::DnCurve;

#[derive(Debug, Clone, Copy)]
pub struct PhaseOptions {
    /// Allowed `(max - min) / mean` of `D_n(tau_mid)` inside the window.
    pub eps_rel: f64,
    pub tau_mid: f64,
    /// `D_n(tau_low)` must trend up and `D_n(tau_high)` down.
    pub tau_low: f64,
    pub tau_high: f64,
    /// Shortest window, in curves.
    pub min_len: usize,
}

impl Default for PhaseOptions {
    fn default() -> Self {
        PhaseOptions { eps_rel: 0.15, tau_mid: 2.0 / 3.0, tau_low: 0.55, tau_high: 0.95, min_len: 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseWindow {
    /// First and last step of the window, `None` when no window qualifies.
    pub window: Option<(usize, usize)>,
    pub variation: f64,
    /// Least-squares slopes of `D_n(tau_low)` and `D_n(tau_high)` in `n`.
    pub slope_low: f64,
    pub slope_high: f64,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx > 0.0 {
        sxy / sxx
    } else {
        0.0
    }
}

/// Longest run of consecutive curves (ordered by `n`) where `D_n(tau_mid)`
/// is nearly constant while the low-`tau` curve rises and the high-`tau`
/// one falls; the earliest run wins ties.
pub fn phase_report(curves: &[DnCurve], opts: &PhaseOptions) -> PhaseWindow {
    let mut cs: Vec<&DnCurve> = curves.iter().collect();
    cs.sort_by_key(|c| c.n);
    let ns: Vec<f64> = cs.iter().map(|c| c.n as f64).collect();
    let mid: Vec<f64> = cs.iter().map(|c| c.value_at(opts.tau_mid)).collect();
    let low: Vec<f64> = cs.iter().map(|c| c.value_at(opts.tau_low)).collect();
    let high: Vec<f64> = cs.iter().map(|c| c.value_at(opts.tau_high)).collect();
    let mut best = PhaseWindow { window: None, variation: 0.0, slope_low: 0.0, slope_high: 0.0 };
    let mut best_len = 0;
    let min_len = opts.min_len.max(2);
    for a in 0..cs.len() {
        let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for b in a..cs.len() {
            lo = lo.min(mid[b]);
            hi = hi.max(mid[b]);
            sum += mid[b];
            let len = b - a + 1;
            let mean = sum / len as f64;
            let variation = if mean > 0.0 { (hi - lo) / mean } else { f64::INFINITY };
            if variation > opts.eps_rel {
                break;
            }
            if len < min_len || len <= best_len {
                continue;
            }
            let sl = slope(&ns[a..=b], &low[a..=b]);
            let sh = slope(&ns[a..=b], &high[a..=b]);
            if sl > 0.0 && sh < 0.0 {
                best_len = len;
                best = PhaseWindow { window: Some((cs[a].n, cs[b].n)), variation, slope_low: sl, slope_high: sh };
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(n: usize, low: f64, mid: f64, high: f64) -> DnCurve {
        DnCurve { n, tau: vec![0.55, 2.0 / 3.0, 0.95], values: vec![low, mid, high], scaled: vec![low, mid, high] }
    }

    #[test]
    fn exact_plateau_is_recovered() {
        let cs: Vec<DnCurve> = (0..10).map(|n| curve(n, 1.0 + n as f64, 5.0, 10.0 - n as f64)).collect();
        let r = phase_report(&cs, &PhaseOptions::default());
        assert_eq!(r.window, Some((0, 9)));
        assert_eq!(r.variation, 0.0);
    }

    #[test]
    fn no_window_without_trends() {
        let cs: Vec<DnCurve> = (0..10).map(|n| curve(n, 1.0, 5.0, 1.0)).collect();
        assert_eq!(phase_report(&cs, &PhaseOptions::default()).window, None);
    }
}
