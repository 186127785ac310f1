//! Torus norms. Every integral carries the measure `(2π)^dim`, so
//! `‖1‖_{L^p} = (2π)^{dim/p}`.

use std::f64::consts::PI;

use super::DiagnosticsError;
use crate::spectral::{SpectralScalar, SpectralVector};

/// `(2π)^dim`.
pub fn torus_volume(dim: usize) -> f64 {
    (2.0 * PI).powi(dim as i32)
}

/// `L^p` norm of grid samples with the torus quadrature weight.
///
/// Any `p ≥ 1` is accepted, including `f64::INFINITY`.
pub fn grid_lp_norm(values: &[f64], dim: usize, p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    }
    let weight = torus_volume(dim) / values.len() as f64;
    let sum: f64 = if p == 2.0 {
        values.iter().map(|v| v * v).sum()
    } else if p == 4.0 {
        values.iter().map(|v| (v * v) * (v * v)).sum()
    } else {
        values.iter().map(|v| v.abs().powf(p)).sum()
    };
    (weight * sum).powf(1.0 / p)
}

/// Pointwise Euclidean magnitude of a set of component samples.
pub fn pointwise_magnitude(components: &[Vec<f64>]) -> Vec<f64> {
    let len = components.first().map_or(0, Vec::len);
    (0..len).map(|i| components.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt()).collect()
}

fn check_exponent(p: f64) -> Result<(), DiagnosticsError> {
    if p == 2.0 || p == 4.0 || p == f64::INFINITY {
        Ok(())
    } else {
        Err(DiagnosticsError::UnsupportedExponent(p))
    }
}

/// `‖f‖_{L^p}` for `p ∈ {2, 4, ∞}`. `L²` uses Parseval; the others are
/// evaluated on the physical grid.
pub fn lp_norm(f: &SpectralScalar, p: f64) -> Result<f64, DiagnosticsError> {
    check_exponent(p)?;
    if p == 2.0 {
        return Ok(sobolev_seminorm(f, 0));
    }
    Ok(grid_lp_norm(&f.to_physical(), f.grid().dim(), p))
}

/// `L^p` norm of the pointwise Euclidean magnitude of a vector field.
pub fn lp_norm_vector(v: &SpectralVector, p: f64) -> Result<f64, DiagnosticsError> {
    check_exponent(p)?;
    if p == 2.0 {
        return Ok(sobolev_seminorm_vector(v, 0));
    }
    let comps: Vec<Vec<f64>> = v.components().iter().map(SpectralScalar::to_physical).collect();
    Ok(grid_lp_norm(&pointwise_magnitude(&comps), v.dim(), p))
}

fn weighted_power(f: &SpectralScalar, s: u32) -> f64 {
    let k2 = f.grid().k_squared();
    f.coeffs().iter().zip(k2).map(|(c, &k2)| if s == 0 { c.norm_sqr() } else { k2.powi(s as i32) * c.norm_sqr() }).sum()
}

/// `‖∇^s f‖_{L²} = ((2π)^dim Σ |k|^{2s} |f̂(k)|²)^{1/2}`: the full derivative
/// tensor norm.
pub fn sobolev_seminorm(f: &SpectralScalar, s: u32) -> f64 {
    (torus_volume(f.grid().dim()) * weighted_power(f, s)).sqrt()
}

/// Vector version of [`sobolev_seminorm`], summing over components.
pub fn sobolev_seminorm_vector(v: &SpectralVector, s: u32) -> f64 {
    let total: f64 = v.components().iter().map(|c| weighted_power(c, s)).sum();
    (torus_volume(v.dim()) * total).sqrt()
}
