use rayon::prelude::*;

use super::{pixel_center, RasterImage};
use crate::error::{Error, Result};
use crate::linalg::Vec2;

/// Ellipse table of the modified phantom, one ellipse per line.
pub const PHANTOM_DATA: &str = include_str!("../../data/phantom.txt");

/// `intensity` added on `((x - x0) cos a + (y - y0) sin a)^2 / a^2 + ... <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub intensity: f64,
    pub semi_x: f64,
    pub semi_y: f64,
    pub center: [f64; 2],
    /// Rotation in degrees, counterclockwise.
    pub angle: f64,
}

impl Ellipse {
    pub fn contains(&self, z: &Vec2) -> bool {
        let (s, c) = self.angle.to_radians().sin_cos();
        let (dx, dy) = (z.x - self.center[0], z.y - self.center[1]);
        let u = (dx * c + dy * s) / self.semi_x;
        let v = (-dx * s + dy * c) / self.semi_y;
        u * u + v * v <= 1.0
    }

    /// Mirror image in the vertical axis.
    pub fn mirrored(&self) -> Ellipse {
        Ellipse { center: [-self.center[0], self.center[1]], angle: -self.angle, ..*self }
    }
}

/// Parses the whitespace separated table `intensity a b x0 y0 angle`;
/// `#` starts a comment.
pub fn phantom_table(text: &str) -> Result<Vec<Ellipse>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: Vec<f64> = line
            .split_whitespace()
            .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("phantom line {}: {e}", k + 1))))
            .collect::<Result<_>>()?;
        if v.len() != 6 {
            return Err(Error::Parse(format!("phantom line {}: expected 6 fields, found {}", k + 1, v.len())));
        }
        if !(v[1] > 0.0 && v[2] > 0.0) {
            return Err(Error::Parse(format!("phantom line {}: semi-axes must be positive", k + 1)));
        }
        out.push(Ellipse { intensity: v[0], semi_x: v[1], semi_y: v[2], center: [v[3], v[4]], angle: v[5] });
    }
    Ok(out)
}

/// Superposition of `ellipses` on `[-1, 1]^2` at `n x n`, 4x4 samples per
/// pixel, pitch `1 / n`.
pub fn phantom_from(ellipses: &[Ellipse], n: usize) -> Result<RasterImage> {
    let s = 4;
    let h = 2.0 / n as f64;
    RasterImage::new(
        n,
        n,
        (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let c = pixel_center(n, i, j);
                let mut acc = 0.0;
                for a in 0..s {
                    for b in 0..s {
                        let z = c + Vec2::new(((a as f64 + 0.5) / s as f64 - 0.5) * h, ((b as f64 + 0.5) / s as f64 - 0.5) * h);
                        acc += ellipses.iter().filter(|e| e.contains(&z)).map(|e| e.intensity).sum::<f64>();
                    }
                }
                acc / (s * s) as f64
            })
            .collect(),
        1.0 / n as f64,
    )
}

/// The shipped phantom: head outline without the thin skull ring.
pub fn phantom(n: usize) -> Result<RasterImage> {
    phantom_from(&phantom_table(PHANTOM_DATA)?, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_parses() {
        let t = phantom_table(PHANTOM_DATA).unwrap();
        assert_eq!(t.len(), 9);
        assert!(phantom_table("1 2 3").is_err());
        assert!(phantom_table("1 0 1 0 0 0").is_err());
    }
}
