//! Generated test distributions.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::InequalityError;
use crate::random::{random_scalar, random_solenoidal};
use crate::spectral::{derivative, Grid, SpectralScalar, SpectralVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FamilyKind {
    /// `count` independent unit-`L²` random fields with `max|k_i| ≤ band`.
    RandomBand,
    /// `sin(k·x)`, or for vectors the same profile along a direction
    /// orthogonal to `k`. Yields one field.
    SingleMode { k: [i64; 3] },
    /// Periodized `exp(−|x − x₀|²/2)` centred at `(π, …, π)`; vectors use
    /// its perpendicular gradient `(∂₂g, −∂₁g, 0)`. Yields one field.
    GaussianBump,
    /// `α·g` for each amplitude, `g` the first random band-limited field of
    /// the seed.
    AmplitudeSweep { amplitudes: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldFamily {
    pub kind: FamilyKind,
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    pub band: i64,
}

/// Periodized Gaussian bump of unit width centred at `(π, …, π)`.
pub(crate) fn gaussian_bump(grid: &Arc<Grid>) -> SpectralScalar {
    let dim = grid.dim();
    let images: Vec<f64> = (-2..=2).map(|m| 2.0 * PI * m as f64).collect();
    SpectralScalar::from_fn(grid, |x| {
        let axis_sum = |a: usize| -> f64 { images.iter().map(|s| (-0.5 * (x[a] - PI - s).powi(2)).exp()).sum() };
        (0..dim).map(axis_sum).product()
    })
}

fn perp_gradient(g: &SpectralScalar) -> SpectralVector {
    let grid = g.grid();
    let mut comps = vec![derivative(g, 1, 1), derivative(g, 0, 1).scaled(-1.0)];
    if grid.dim() == 3 {
        comps.push(SpectralScalar::zeros(grid));
    }
    SpectralVector::from_components(comps).expect("shared grid")
}

impl FieldFamily {
    pub fn new(kind: FamilyKind, dim: usize, count: usize, seed: u64, band: i64) -> Self {
        Self { kind, dim, count, seed, band }
    }

    pub fn validate(&self, grid: &Grid) -> Result<(), InequalityError> {
        if grid.dim() != self.dim {
            return Err(InequalityError::DimensionMismatch { expected: self.dim, got: grid.dim() });
        }
        if self.count < 1 {
            return Err(InequalityError::InvalidParameter("count must be >= 1".into()));
        }
        if self.band < 1 || self.band > grid.cutoff() {
            return Err(InequalityError::InvalidParameter(format!(
                "band must lie in [1, {}], got {}",
                grid.cutoff(),
                self.band
            )));
        }
        if let FamilyKind::SingleMode { k } = &self.kind {
            if k.iter().take(self.dim).all(|&ki| ki == 0) || k.iter().any(|ki| ki.abs() > grid.cutoff()) {
                return Err(InequalityError::InvalidParameter(format!(
                    "wavevector {k:?} is zero or beyond the cutoff"
                )));
            }
        }
        if let FamilyKind::AmplitudeSweep { amplitudes } = &self.kind {
            if amplitudes.is_empty() {
                return Err(InequalityError::InvalidParameter("amplitude sweep needs at least one amplitude".into()));
            }
        }
        Ok(())
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// Scalar members of the family.
    pub fn scalar_fields(&self, grid: &Arc<Grid>) -> Result<Vec<SpectralScalar>, InequalityError> {
        self.validate(grid)?;
        Ok(match &self.kind {
            FamilyKind::RandomBand => {
                let mut rng = self.rng();
                (0..self.count).map(|_| random_scalar(grid, self.band, &mut rng)).collect()
            }
            FamilyKind::SingleMode { k } => {
                let k = *k;
                vec![SpectralScalar::from_fn(grid, |x| (0..3).map(|a| k[a] as f64 * x[a]).sum::<f64>().sin())]
            }
            FamilyKind::GaussianBump => vec![gaussian_bump(grid)],
            FamilyKind::AmplitudeSweep { amplitudes } => {
                let base = random_scalar(grid, self.band, &mut self.rng());
                amplitudes.iter().map(|&a| base.scaled(a)).collect()
            }
        })
    }

    /// Divergence-free vector members of the family.
    pub fn vector_fields(&self, grid: &Arc<Grid>) -> Result<Vec<SpectralVector>, InequalityError> {
        self.validate(grid)?;
        Ok(match &self.kind {
            FamilyKind::RandomBand => {
                let mut rng = self.rng();
                (0..self.count).map(|_| random_solenoidal(grid, self.band, &mut rng)).collect()
            }
            FamilyKind::SingleMode { k } => {
                let k = *k;
                let kf = [k[0] as f64, k[1] as f64, k[2] as f64];
                let dir = if self.dim == 2 {
                    [-kf[1], kf[0], 0.0]
                } else {
                    // k × e, e the axis least aligned with k.
                    let a = (0..3).min_by_key(|&a| k[a].abs()).expect("three axes");
                    let mut e = [0.0; 3];
                    e[a] = 1.0;
                    [kf[1] * e[2] - kf[2] * e[1], kf[2] * e[0] - kf[0] * e[2], kf[0] * e[1] - kf[1] * e[0]]
                };
                let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
                vec![SpectralVector::from_fn(grid, |x| {
                    let s = (0..3).map(|a| kf[a] * x[a]).sum::<f64>().sin();
                    [s * dir[0] / norm, s * dir[1] / norm, s * dir[2] / norm]
                })]
            }
            FamilyKind::GaussianBump => vec![perp_gradient(&gaussian_bump(grid))],
            FamilyKind::AmplitudeSweep { amplitudes } => {
                let base = random_solenoidal(grid, self.band, &mut self.rng());
                amplitudes.iter().map(|&a| base.scaled(a)).collect()
            }
        })
    }
}
