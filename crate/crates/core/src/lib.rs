//! Rational degenerate double affine Hecke algebra, the Dunkl operator and
//! its eigenfunctions, Hankel transforms with weight `|x|^{2k}`, and the
//! finite-dimensional theory at `k = -n - 1/2`.

pub mod algebra;
pub mod bessel;
pub mod error;
pub mod kpoly;
pub mod matrix;
pub mod poly;
pub mod polyrep;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod special;
pub mod transform;
pub mod truncated;

pub use error::{Error, Result};
