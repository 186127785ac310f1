//! Fourier representation of periodic fields and the spectral calculus built
//! on it: derivatives, curls, Leray projection and dealiased products.

mod fft;
mod field;
mod grid;
mod ops;
mod pressure;

pub use field::{SpectralScalar, SpectralVector};
pub use grid::Grid;
pub(crate) use ops::from_physical_masked;
pub use ops::{
    advect, advect_scalar, curl2d, curl3d, dealiased_product, derivative, derivative_multi, divergence, gradient,
    inverse_laplacian, laplacian, leray_project, velocity_from_vorticity,
};
pub use pressure::{recover_pressure, Pressure};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}
