//! Small fixed-size vector and matrix helpers.

use nalgebra::{Matrix2, Vector2};

pub type Vec2 = Vector2<f64>;
pub type Mat2 = Matrix2<f64>;

#[inline]
pub fn vec2(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

/// det(a, b) for column vectors a, b.
#[inline]
pub fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Counterclockwise quarter turn, so that det(t, perp(t)) = |t|^2.
#[inline]
pub fn perp(t: &Vec2) -> Vec2 {
    Vec2::new(-t.y, t.x)
}

/// `K(M) = sqrt(|det M|)` from the closed 2x2 determinant.
#[inline]
pub fn sqrt_abs_det(m: &Mat2) -> f64 {
    (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).abs().sqrt()
}

#[inline]
pub fn symmetrize(m: &Mat2) -> Mat2 {
    (m + m.transpose()) * 0.5
}

/// Exponent tau with 1/tau = 1 + 1/p; p = infinity gives tau = 1.
#[inline]
pub fn tau_of(p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        p / (p + 1.0)
    }
}

/// Condition number in the spectral norm.
pub fn condition_number(m: &Mat2) -> f64 {
    let sv = m.singular_values();
    let (a, b) = (sv[0].max(sv[1]), sv[0].min(sv[1]));
    if b == 0.0 {
        f64::INFINITY
    } else {
        a / b
    }
}
