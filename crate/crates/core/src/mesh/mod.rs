//! Layered anisotropic triangulations adapted to cartoon functions and the
//! global P1 interpolation error on them.

mod build;
mod error;

pub use build::{build_adapted_mesh, MeshOptions};
pub use error::{interp_error_global, interp_error_per_triangle, rate_fit};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{AffineMap, ConvexPolygon};
use crate::linalg::{cross, vec2, Vec2};
use crate::shapefn::Triangle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Regular,
    /// Part of the thin layer covering the edges.
    Edgy,
}

/// Triangle soup with shared vertices; hanging nodes are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    pub vertices: Vec<Vec2>,
    /// Positively oriented index triples.
    pub triangles: Vec<[usize; 3]>,
    pub tags: Vec<Tag>,
    /// Width of the edge layer, 0 without edges.
    pub strip_width: f64,
}

impl Triangulation {
    pub fn empty() -> Self {
        Triangulation { vertices: Vec::new(), triangles: Vec::new(), tags: Vec::new(), strip_width: 0.0 }
    }

    /// `2 n^2` right triangles on a uniform `n x n` grid of the bounding box.
    pub fn uniform(domain: &ConvexPolygon, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Mesh("grid needs at least one cell".into()));
        }
        let (lo, hi) = domain.bbox();
        let mut b = Builder::default();
        let h = (hi - lo).component_div(&vec2(n as f64, n as f64));
        for i in 0..n {
            for j in 0..n {
                let p = |a: usize, c: usize| vec2(lo.x + h.x * a as f64, lo.y + h.y * c as f64);
                let (p00, p10, p11, p01) = (p(i, j), p(i + 1, j), p(i + 1, j + 1), p(i, j + 1));
                b.push(p00, p10, p11, Tag::Regular);
                b.push(p00, p11, p01, Tag::Regular);
            }
        }
        Ok(b.finish(0.0))
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn count(&self, tag: Tag) -> usize {
        self.tags.iter().filter(|&&t| t == tag).count()
    }

    pub fn corners(&self, i: usize) -> [Vec2; 3] {
        let [a, b, c] = self.triangles[i];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn triangle(&self, i: usize) -> Result<Triangle> {
        let [a, b, c] = self.corners(i);
        Triangle::new(a, b, c).map_err(|e| Error::Triangle { id: i, msg: e.to_string() })
    }

    pub fn signed_area(&self, i: usize) -> f64 {
        let [a, b, c] = self.corners(i);
        0.5 * cross(&(b - a), &(c - a))
    }

    pub fn area(&self, tag: Tag) -> f64 {
        (0..self.len()).filter(|&i| self.tags[i] == tag).map(|i| self.signed_area(i)).sum()
    }

    pub fn diameter(&self, i: usize) -> f64 {
        let [a, b, c] = self.corners(i);
        (b - a).norm().max((c - b).norm()).max((a - c).norm())
    }

    pub fn max_diameter(&self, tag: Tag) -> f64 {
        (0..self.len()).filter(|&i| self.tags[i] == tag).map(|i| self.diameter(i)).fold(0.0, f64::max)
    }

    /// Index of a triangle containing `z`, if any.
    pub fn locate(&self, z: &Vec2, tag: Option<Tag>) -> Option<usize> {
        (0..self.len()).find(|&i| {
            if tag.is_some_and(|t| t != self.tags[i]) {
                return false;
            }
            let [a, b, c] = self.corners(i);
            let eps = -1e-12 * self.diameter(i).powi(2);
            cross(&(b - a), &(z - a)) >= eps && cross(&(c - b), &(z - b)) >= eps && cross(&(a - c), &(z - c)) >= eps
        })
    }

    /// Image mesh `T(tri)`; orientation is restored when `det T < 0`.
    pub fn transform(&self, t: &AffineMap) -> Triangulation {
        let flip = t.det() < 0.0;
        Triangulation {
            vertices: self.vertices.iter().map(|v| t.apply(v)).collect(),
            triangles: self.triangles.iter().map(|&[a, b, c]| if flip { [a, c, b] } else { [a, b, c] }).collect(),
            tags: self.tags.clone(),
            strip_width: self.strip_width,
        }
    }
}

#[derive(Default)]
struct Builder {
    vertices: Vec<Vec2>,
    index: HashMap<(u64, u64), usize>,
    triangles: Vec<[usize; 3]>,
    tags: Vec<Tag>,
}

impl Builder {
    fn vertex(&mut self, v: Vec2) -> usize {
        // +0.0 and -0.0 must share a key
        let key = ((v.x + 0.0).to_bits(), (v.y + 0.0).to_bits());
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        self.vertices.push(v);
        self.index.insert(key, self.vertices.len() - 1);
        self.vertices.len() - 1
    }

    /// Adds the triangle in positive orientation; returns false for a
    /// degenerate one, which is dropped.
    fn push(&mut self, a: Vec2, b: Vec2, c: Vec2, tag: Tag) -> bool {
        let s = cross(&(b - a), &(c - a));
        if !(s.abs() > 0.0) {
            return false;
        }
        let (b, c) = if s > 0.0 { (b, c) } else { (c, b) };
        let t = [self.vertex(a), self.vertex(b), self.vertex(c)];
        self.triangles.push(t);
        self.tags.push(tag);
        true
    }

    fn finish(self, strip_width: f64) -> Triangulation {
        Triangulation { vertices: self.vertices, triangles: self.triangles, tags: self.tags, strip_width }
    }
}
