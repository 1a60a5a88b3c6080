//! Anisotropic smoothness functionals of cartoon functions and rasters.
//!
//! The crate computes `A_p`, `S_p`, `E_p`, `C_{p,phi}` and total variation for
//! piecewise smooth functions with curved edges, the mollified functional
//! `A_p(f_delta)`, local interpolation shape functions on triangles, adapted
//! triangulations with their error rates, and the discrete determinant
//! energies of heat-smoothed rasters.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod functionals;
pub mod geometry;
pub mod linalg;
pub mod mesh;
pub mod mollifier;
pub mod quad;
pub mod raster;
pub mod shapefn;
pub mod svg;

pub use error::{Error, Result};
