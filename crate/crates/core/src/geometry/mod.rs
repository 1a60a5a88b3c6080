//! Parametric curves, regions, cartoon functions and their affine transport.

mod cartoon;
mod curve;
pub mod gallery;

pub use cartoon::{CartoonFunction, Region};
pub use curve::{Frame, ParamCurve, Window};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{cross, vec2, Mat2, Vec2};

/// `x -> linear * x + offset` with `det(linear) != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub linear: Mat2,
    pub offset: Vec2,
}

impl AffineMap {
    pub fn new(linear: Mat2, offset: Vec2) -> Result<Self> {
        let det = linear.determinant();
        if !(det.abs() > 0.0) || !det.is_finite() {
            return Err(Error::domain(format!("affine map with det L = {det}")));
        }
        Ok(AffineMap { linear, offset })
    }

    pub fn identity() -> Self {
        AffineMap { linear: Mat2::identity(), offset: Vec2::zeros() }
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        AffineMap { linear: Mat2::new(c, -s, s, c), offset: Vec2::zeros() }
    }

    pub fn scaling(sx: f64, sy: f64) -> Result<Self> {
        Self::new(Mat2::new(sx, 0.0, 0.0, sy), Vec2::zeros())
    }

    pub fn det(&self) -> f64 {
        self.linear.determinant()
    }

    pub fn apply(&self, x: &Vec2) -> Vec2 {
        self.linear * x + self.offset
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self.linear.try_inverse().expect("nonsingular by construction");
        AffineMap { linear: inv, offset: -(inv * self.offset) }
    }

    /// `self o other`
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap { linear: self.linear * other.linear, offset: self.linear * other.offset + self.offset }
    }
}

/// Convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Vec2>,
}

impl ConvexPolygon {
    pub fn new(mut vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::domain("polygon needs at least three vertices"));
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            if cross(&(b - a), &(c - b)) < -1e-12 * (b - a).norm() * (c - b).norm() {
                return Err(Error::domain("polygon is not convex"));
            }
        }
        if !(signed_area(&vertices) > 0.0) {
            return Err(Error::domain("degenerate polygon"));
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        Self::new(vec![vec2(x0, y0), vec2(x1, y0), vec2(x1, y1), vec2(x0, y1)])
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// `(min, max)` corners of the bounding box.
    pub fn bbox(&self) -> (Vec2, Vec2) {
        let mut mn = self.vertices[0];
        let mut mx = self.vertices[0];
        for v in &self.vertices {
            mn = mn.inf(v);
            mx = mx.sup(v);
        }
        (mn, mx)
    }

    /// Signed distance to the boundary, positive inside (exact for convex sets inside).
    pub fn inset_distance(&self, z: &Vec2) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let e = self.vertices[(i + 1) % n] - a;
                cross(&e, &(z - a)) / e.norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, z: &Vec2) -> bool {
        self.inset_distance(z) >= 0.0
    }

    /// Inner parallel set `{z : B(z, d) in polygon}`.
    pub fn inset(&self, d: f64) -> Result<ConvexPolygon> {
        let n = self.vertices.len();
        let lines: Vec<(Vec2, Vec2)> = (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let e = self.vertices[(i + 1) % n] - a;
                let nrm = vec2(-e.y, e.x) / e.norm();
                (a + nrm * d, e)
            })
            .collect();
        let mut pts = Vec::with_capacity(n);
        for i in 0..n {
            let (p, e) = lines[(i + n - 1) % n];
            let (q, f) = lines[i];
            let den = cross(&e, &f);
            if den.abs() < 1e-300 {
                continue;
            }
            let s = cross(&(q - p), &f) / den;
            pts.push(p + e * s);
        }
        let poly = ConvexPolygon::new(pts).map_err(|_| Error::DeltaTooLarge {
            delta: d,
            msg: "inner parallel domain is empty".into(),
        })?;
        // an inset that swallowed an edge would have flipped orientation
        if poly.vertices.iter().any(|v| self.inset_distance(v) < d - 1e-9 * (1.0 + d)) {
            return Err(Error::DeltaTooLarge { delta: d, msg: "inner parallel domain is degenerate".into() });
        }
        Ok(poly)
    }

    pub fn transform(&self, t: &AffineMap) -> ConvexPolygon {
        ConvexPolygon::new(self.vertices.iter().map(|v| t.apply(v)).collect()).expect("affine image of a convex polygon")
    }

    pub fn as_arrays(&self) -> Vec<[f64; 2]> {
        self.vertices.iter().map(|v| [v.x, v.y]).collect()
    }
}

fn signed_area(v: &[Vec2]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| cross(&v[i], &v[(i + 1) % n])).sum::<f64>()
}

/// Smooth scalar field with exact first and second derivatives.
pub trait ScalarField: Send + Sync {
    fn value(&self, z: &Vec2) -> f64;
    fn gradient(&self, z: &Vec2) -> Vec2;
    fn hessian(&self, z: &Vec2) -> Mat2;
    /// `Some(H)` when the Hessian does not depend on the point.
    fn constant_hessian(&self) -> Option<Mat2> {
        None
    }
}

/// Quadratic polynomial `c + g . z + z^T H z / 2` with symmetric `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poly2 {
    pub c: f64,
    pub g: Vec2,
    pub h: Mat2,
}

impl Poly2 {
    pub fn constant(c: f64) -> Self {
        Poly2 { c, g: Vec2::zeros(), h: Mat2::zeros() }
    }

    /// `c0 + cx x + cy y + cxx x^2 + cxy x y + cyy y^2`
    pub fn from_coeffs(c0: f64, cx: f64, cy: f64, cxx: f64, cxy: f64, cyy: f64) -> Self {
        Poly2 { c: c0, g: vec2(cx, cy), h: Mat2::new(2.0 * cxx, cxy, cxy, 2.0 * cyy) }
    }

    /// `self o a`, again a quadratic.
    pub fn compose(&self, a: &AffineMap) -> Poly2 {
        let (l, b) = (a.linear, a.offset);
        Poly2 {
            c: self.value(&b),
            g: l.transpose() * self.gradient(&b),
            h: crate::linalg::symmetrize(&(l.transpose() * self.h * l)),
        }
    }
}

impl ScalarField for Poly2 {
    fn value(&self, z: &Vec2) -> f64 {
        self.c + self.g.dot(z) + 0.5 * z.dot(&(self.h * z))
    }
    fn gradient(&self, z: &Vec2) -> Vec2 {
        self.g + self.h * z
    }
    fn hessian(&self, _z: &Vec2) -> Mat2 {
        self.h
    }
    fn constant_hessian(&self) -> Option<Mat2> {
        Some(self.h)
    }
}

type Jet2 = (f64, Vec2, Mat2);

/// Field given by a closure returning value, gradient and Hessian.
#[derive(Clone)]
pub struct FnField {
    f: Arc<dyn Fn(&Vec2) -> Jet2 + Send + Sync>,
}

impl FnField {
    pub fn new<F: Fn(&Vec2) -> Jet2 + Send + Sync + 'static>(f: F) -> Self {
        FnField { f: Arc::new(f) }
    }
}

impl ScalarField for FnField {
    fn value(&self, z: &Vec2) -> f64 {
        (self.f)(z).0
    }
    fn gradient(&self, z: &Vec2) -> Vec2 {
        (self.f)(z).1
    }
    fn hessian(&self, z: &Vec2) -> Mat2 {
        (self.f)(z).2
    }
}

/// `inner o a` for a general field.
#[derive(Clone)]
pub struct Pullback {
    inner: Arc<dyn ScalarField>,
    a: AffineMap,
}

impl Pullback {
    pub fn new(inner: Arc<dyn ScalarField>, a: AffineMap) -> Self {
        Pullback { inner, a }
    }
}

impl ScalarField for Pullback {
    fn value(&self, z: &Vec2) -> f64 {
        self.inner.value(&self.a.apply(z))
    }
    fn gradient(&self, z: &Vec2) -> Vec2 {
        self.a.linear.transpose() * self.inner.gradient(&self.a.apply(z))
    }
    fn hessian(&self, z: &Vec2) -> Mat2 {
        let l = self.a.linear;
        l.transpose() * self.inner.hessian(&self.a.apply(z)) * l
    }
    fn constant_hessian(&self) -> Option<Mat2> {
        let l = self.a.linear;
        self.inner.constant_hessian().map(|h| l.transpose() * h * l)
    }
}
