//! Pixel grids: rasterization of cartoons, explicit heat smoothing, the
//! 9-point Hessian determinant and its `l^tau` curves.

mod io;
mod phantom;
mod phase;

pub use io::{read_pgm, read_raw, write_pgm, write_raw};
pub use phantom::{phantom, phantom_from, phantom_table, Ellipse, PHANTOM_DATA};
pub use phase::{phase_report, PhaseOptions, PhaseWindow};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::CartoonFunction;
use crate::linalg::{vec2, Vec2};

/// Row-major image; row 0 is the top.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub samples: Vec<f64>,
    /// Physical pixel size.
    pub pitch: f64,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, samples: Vec<f64>, pitch: f64) -> Result<Self> {
        if width < 3 || height < 3 {
            return Err(Error::domain(format!("image {width}x{height} is smaller than 3x3")));
        }
        if samples.len() != width * height {
            return Err(Error::domain(format!("{} samples for a {width}x{height} image", samples.len())));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("image samples must be finite"));
        }
        if !(pitch > 0.0) {
            return Err(Error::domain(format!("pitch {pitch} must be positive")));
        }
        Ok(RasterImage { width, height, samples, pitch })
    }

    /// Image with `f(row, col)` samples and pitch `1 / width`.
    pub fn from_fn<F: Fn(usize, usize) -> f64>(width: usize, height: usize, f: F) -> Result<Self> {
        let samples = (0..height).flat_map(|i| (0..width).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        RasterImage::new(width, height, samples, 1.0 / width as f64)
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.samples[i * self.width + j]
    }

    pub fn sum(&self) -> f64 {
        self.samples.iter().sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, a: f64) -> RasterImage {
        RasterImage { samples: self.samples.iter().map(|v| a * v).collect(), ..self.clone() }
    }
}

/// Samples `f` on an `n x n` grid over the bounding box of its domain.
/// Pixels within one pixel of an edge average `supersample^2` points, the
/// others take the value at their centre.
pub fn rasterize(f: &CartoonFunction, n: usize, supersample: usize) -> Result<RasterImage> {
    if n < 3 {
        return Err(Error::domain(format!("raster size {n} below 3")));
    }
    let (lo, hi) = f.domain.bbox();
    let hx = (hi.x - lo.x) / n as f64;
    let hy = (hi.y - lo.y) / n as f64;
    let mut near = vec![false; n * n];
    for c in &f.curves {
        let (t0, t1) = c.range();
        let len = c.length()?;
        let steps = ((4.0 * len / hx.min(hy)).ceil() as usize).max(16);
        for k in 0..=steps {
            let z = c.gamma(t0 + (t1 - t0) * k as f64 / steps as f64);
            let jc = ((z.x - lo.x) / hx).floor() as i64;
            let ic = ((hi.y - z.y) / hy).floor() as i64;
            for di in -1..=1 {
                for dj in -1..=1 {
                    let (i, j) = (ic + di, jc + dj);
                    if i >= 0 && j >= 0 && (i as usize) < n && (j as usize) < n {
                        near[i as usize * n + j as usize] = true;
                    }
                }
            }
        }
    }
    let s = supersample.max(1);
    let samples: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let point = |a: f64, b: f64| vec2(lo.x + (j as f64 + a) * hx, hi.y - (i as f64 + b) * hy);
            if !near[k] || s == 1 {
                return f.value(&point(0.5, 0.5));
            }
            let mut acc = 0.0;
            for a in 0..s {
                for b in 0..s {
                    acc += f.value(&point((a as f64 + 0.5) / s as f64, (b as f64 + 0.5) / s as f64))?;
                }
            }
            Ok(acc / (s * s) as f64)
        })
        .collect::<Result<_>>()?;
    RasterImage::new(n, n, samples, hx)
}

/// `u' = u / 2 + (sum of the 4 neighbours) / 8` with mirrored borders,
/// which conserves the sum of the samples.
pub fn heat_step(img: &RasterImage) -> RasterImage {
    let (w, h) = (img.width, img.height);
    let u = &img.samples;
    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(i, row)| {
        let up = if i == 0 { 0 } else { i - 1 };
        let down = if i + 1 == h { i } else { i + 1 };
        for j in 0..w {
            let left = if j == 0 { 0 } else { j - 1 };
            let right = if j + 1 == w { j } else { j + 1 };
            let nb = u[up * w + j] + u[down * w + j] + u[i * w + left] + u[i * w + right];
            row[j] = 0.5 * u[i * w + j] + 0.125 * nb;
        }
    });
    RasterImage { samples: out, ..img.clone() }
}

/// Result of `steps` heat steps.
pub fn heat_steps(img: &RasterImage, steps: usize) -> RasterImage {
    (0..steps).fold(img.clone(), |u, _| heat_step(&u))
}

/// Smoothing scale matched to `n` heat steps, `h sqrt(n / 2)`; the kernel
/// is `exp(-|x|^2 / delta^2) / (pi delta^2)`.
pub fn heat_delta(pitch: f64, steps: usize) -> f64 {
    pitch * (steps as f64 / 2.0).sqrt()
}

/// 9-point determinant `d = dxx dyy - dxy^2 / 16` of the second
/// differences (in sample units), 0 on the one-pixel margin.
pub fn det9(img: &RasterImage) -> Vec<f64> {
    let (w, h) = (img.width, img.height);
    let u = &img.samples;
    let mut d = vec![0.0; w * h];
    d.par_chunks_mut(w).enumerate().for_each(|(i, row)| {
        if i == 0 || i + 1 == h {
            return;
        }
        for j in 1..w - 1 {
            let c = u[i * w + j];
            let dxx = u[i * w + j + 1] - 2.0 * c + u[i * w + j - 1];
            let dyy = u[(i + 1) * w + j] - 2.0 * c + u[(i - 1) * w + j];
            let dxy = u[(i + 1) * w + j + 1] - u[(i + 1) * w + j - 1] - u[(i - 1) * w + j + 1] + u[(i - 1) * w + j - 1];
            row[j] = dxx * dyy - dxy * dxy / 16.0;
        }
    });
    d
}

/// `count` uniform samples of `[0.5, 1]`.
pub fn tau_grid(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..count).map(|k| 0.5 + 0.5 * k as f64 / (count - 1) as f64).collect(),
    }
}

/// `D_n(tau)` after `n` heat steps.
#[derive(Debug, Clone, PartialEq)]
pub struct DnCurve {
    pub n: usize,
    pub tau: Vec<f64>,
    /// `(sum |d|^{tau/2})^{1/tau}` on the raw stencil values.
    pub values: Vec<f64>,
    /// `values * h^{2/tau - 2}`, the Riemann sum of the continuum
    /// `||sqrt|det d^2 u|| ||_{L^tau}`.
    pub scaled: Vec<f64>,
}

impl DnCurve {
    /// Linear interpolation in `tau`.
    pub fn value_at(&self, tau: f64) -> f64 {
        interpolate(&self.tau, &self.values, tau)
    }
}

pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if xs.len() == 1 {
        return ys[0];
    }
    let k = xs.partition_point(|&t| t < x).clamp(1, xs.len() - 1);
    let (x0, x1) = (xs[k - 1], xs[k]);
    let s = (x - x0) / (x1 - x0);
    ys[k - 1] + s * (ys[k] - ys[k - 1])
}

/// `l^tau` norms of `sqrt|d|` for the stencil determinant of `img`.
pub fn d_curve(img: &RasterImage, tau_grid: &[f64], n: usize) -> Result<DnCurve> {
    if tau_grid.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::domain("tau samples must be positive"));
    }
    let d = det9(img);
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
    let values: Vec<f64> =
        tau_grid.iter().map(|&t| abs.iter().map(|v| v.powf(0.5 * t)).sum::<f64>().powf(1.0 / t)).collect();
    let scaled = tau_grid.iter().zip(&values).map(|(&t, v)| v * img.pitch.powf(2.0 / t - 2.0)).collect();
    Ok(DnCurve { n, tau: tau_grid.to_vec(), values, scaled })
}

/// `D_n` curves for `n = 0..=steps` (every `stride`-th step).
pub fn heat_curves(img: &RasterImage, steps: usize, stride: usize, tau: &[f64]) -> Result<Vec<DnCurve>> {
    let stride = stride.max(1);
    let mut u = img.clone();
    let mut out = Vec::new();
    for n in 0..=steps {
        if n % stride == 0 {
            out.push(d_curve(&u, tau, n)?);
        }
        if n < steps {
            u = heat_step(&u);
        }
    }
    Ok(out)
}

/// Pixel centre of `(row, col)` in the `[-1, 1]^2` frame of a square image.
pub fn pixel_center(n: usize, i: usize, j: usize) -> Vec2 {
    let h = 2.0 / n as f64;
    vec2(-1.0 + (j as f64 + 0.5) * h, 1.0 - (i as f64 + 0.5) * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impulse_spreads_by_the_formula() {
        let img = RasterImage::from_fn(5, 5, |i, j| if (i, j) == (2, 2) { 1.0 } else { 0.0 }).unwrap();
        let u = heat_step(&img);
        assert_eq!(u.at(2, 2), 0.5);
        for (i, j) in [(1, 2), (3, 2), (2, 1), (2, 3)] {
            assert_eq!(u.at(i, j), 0.125);
        }
        assert_eq!(u.sum(), 1.0);
    }

    #[test]
    fn det9_on_quadratics() {
        let h = 0.1;
        let saddle = RasterImage::from_fn(6, 6, |i, j| {
            let (x, y) = (j as f64 * h, i as f64 * h);
            x * x - y * y
        })
        .unwrap();
        let d = det9(&saddle);
        let xy = det9(&RasterImage::from_fn(6, 6, |i, j| (j as f64 * h) * (i as f64 * h)).unwrap());
        for i in 1..5 {
            for j in 1..5 {
                assert!((d[i * 6 + j] + 4.0 * h.powi(4)).abs() < 1e-15);
                assert!((xy[i * 6 + j] + h.powi(4)).abs() < 1e-15);
            }
        }
        assert_eq!(d[0], 0.0);
    }

    #[test]
    fn tau_grid_endpoints() {
        let t = tau_grid(26);
        assert_eq!(t.len(), 26);
        assert_eq!(t[0], 0.5);
        assert_eq!(t[25], 1.0);
        assert!((t[1] - 0.52).abs() < 1e-15);
    }
}
