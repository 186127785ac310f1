//! Seeded random band-limited fields.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::diagnostics::{sobolev_seminorm, sobolev_seminorm_vector};
use crate::spectral::{leray_project, Grid, SpectralScalar, SpectralVector};

/// Whether every `|k_i| ≤ band` and `k ≠ 0`.
fn in_band(grid: &Grid, idx: usize, band: i64) -> bool {
    let k = grid.k_vec(idx);
    idx != 0 && k.iter().take(grid.dim()).all(|ki| ki.abs() <= band)
}

/// White-noise coefficients on `0 < max|k_i| ≤ band`, made Hermitian, mean
/// zero, unnormalized.
pub fn white_band_limited<R: Rng + ?Sized>(grid: &Arc<Grid>, band: i64, rng: &mut R) -> SpectralScalar {
    let raw: Vec<Complex64> = (0..grid.len())
        .map(|idx| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            if in_band(grid, idx, band) {
                Complex64::new(re, im)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let mut f = SpectralScalar::from_coeffs(grid, raw).expect("length matches grid");
    f.symmetrize();
    f
}

/// Random real scalar field with unit `L²` norm.
pub fn random_scalar<R: Rng + ?Sized>(grid: &Arc<Grid>, band: i64, rng: &mut R) -> SpectralScalar {
    let f = white_band_limited(grid, band, rng);
    let norm = sobolev_seminorm(&f, 0);
    f.scaled(1.0 / norm)
}

/// Random divergence-free vector field with unit `L²` norm: Leray
/// projection of white noise restricted to the band.
pub fn random_solenoidal<R: Rng + ?Sized>(grid: &Arc<Grid>, band: i64, rng: &mut R) -> SpectralVector {
    let comps = (0..grid.dim()).map(|_| white_band_limited(grid, band, rng)).collect();
    let v = leray_project(&SpectralVector::from_components(comps).expect("shared grid"));
    let norm = sobolev_seminorm_vector(&v, 0);
    v.scaled(1.0 / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn solenoidal_field_properties() {
        let g = Grid::new(2, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v = random_solenoidal(&g, 6, &mut rng);
        assert!(v.is_divergence_free(1e-12));
        assert!((sobolev_seminorm_vector(&v, 0) - 1.0).abs() < 1e-14);
        for c in v.components() {
            assert!(c.hermitian_defect() < 1e-15);
            assert_eq!(c.coeffs()[0].norm(), 0.0);
            for (idx, z) in c.coeffs().iter().enumerate() {
                if !in_band(&g, idx, 6) {
                    assert_eq!(z.norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_field() {
        let g = Grid::new(3, 8).unwrap();
        let a = random_scalar(&g, 2, &mut ChaCha8Rng::seed_from_u64(11));
        let b = random_scalar(&g, 2, &mut ChaCha8Rng::seed_from_u64(11));
        let c = random_scalar(&g, 2, &mut ChaCha8Rng::seed_from_u64(12));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
