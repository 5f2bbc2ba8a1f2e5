//! Finite-dimensional realizations of Hilbert-space operator theory.
//!
//! The crate covers configurable inner products with their induced norms and
//! metrics, Gram-Schmidt orthonormalization under any of those products,
//! operators between distinct spaces with Hilbert-Schmidt machinery and
//! certified truncation, Hermitian eigendecomposition by deflation,
//! singular-value decomposition, and a quadrature layer that turns integral
//! kernels (notably the 1D Helmholtz Green's function) into matrices between
//! weighted spaces.

pub mod basis;
pub mod error;
pub mod kernel;
pub mod operator;
pub mod space;
pub mod spectral;
pub mod svd;

mod power;
mod util;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use space::{CoeffVector, InnerProduct, Space, SpaceValidation, Violation};
