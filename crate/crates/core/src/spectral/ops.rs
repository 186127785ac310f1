//! Spectral calculus on the torus.

use std::sync::Arc;

use num_complex::Complex64;

use super::{Grid, SpectralError, SpectralScalar, SpectralVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `(i k)^order` for a signed wavenumber.
fn ik_power(k: i64, order: u32) -> Complex64 {
    let mag = (k as f64).powi(order as i32);
    match order % 4 {
        0 => Complex64::new(mag, 0.0),
        1 => Complex64::new(0.0, mag),
        2 => Complex64::new(-mag, 0.0),
        _ => Complex64::new(0.0, -mag),
    }
}

/// `∂^order f / ∂x_axis^order`.
///
/// For odd orders the Nyquist plane along `axis` is zeroed: the multiplier
/// `(i k)^order` is not Hermitian there.
pub fn derivative(f: &SpectralScalar, axis: usize, order: u32) -> SpectralScalar {
    let grid = f.grid();
    assert!(axis < grid.dim(), "axis {axis} out of range for dim {}", grid.dim());
    assert!(order >= 1, "derivative order must be >= 1");
    let nyquist = -(grid.n() as i64) / 2;
    let mut out = f.clone();
    for (idx, c) in out.coeffs_mut().iter_mut().enumerate() {
        let k = grid.k_along(idx, axis);
        if order % 2 == 1 && k == nyquist {
            *c = ZERO;
        } else {
            *c *= ik_power(k, order);
        }
    }
    out
}

/// Derivative along a multi-index given as a list of axes (repeats allowed).
pub fn derivative_multi(f: &SpectralScalar, axes: &[usize]) -> SpectralScalar {
    let mut counts = [0u32; 3];
    for &a in axes {
        counts[a] += 1;
    }
    let mut out = f.clone();
    for (axis, &order) in counts.iter().enumerate().take(f.grid().dim()) {
        if order > 0 {
            out = derivative(&out, axis, order);
        }
    }
    out
}

pub fn gradient(f: &SpectralScalar) -> SpectralVector {
    let comps = (0..f.grid().dim()).map(|a| derivative(f, a, 1)).collect();
    SpectralVector::from_components(comps).expect("components share the grid")
}

pub fn divergence(v: &SpectralVector) -> SpectralScalar {
    let mut out = SpectralScalar::zeros(v.grid());
    for (axis, c) in v.components().iter().enumerate() {
        out.add_scaled(&derivative(c, axis, 1), 1.0);
    }
    out
}

pub fn laplacian(f: &SpectralScalar) -> SpectralScalar {
    let mut out = f.clone();
    for (c, k2) in out.coeffs_mut().iter_mut().zip(f.grid().k_squared()) {
        *c *= -k2;
    }
    out
}

/// Mean-zero solution `q` of `Δq = f` (mode 0 of `f` is ignored).
pub fn inverse_laplacian(f: &SpectralScalar) -> SpectralScalar {
    let mut out = f.clone();
    for (c, &k2) in out.coeffs_mut().iter_mut().zip(f.grid().k_squared()) {
        *c = if k2 == 0.0 { ZERO } else { *c / -k2 };
    }
    out
}

/// Scalar curl `∂₁v₂ − ∂₂v₁` of a planar vector field.
pub fn curl2d(v: &SpectralVector) -> Result<SpectralScalar, SpectralError> {
    if v.dim() != 2 {
        return Err(SpectralError::DimensionMismatch { expected: 2, got: v.dim() });
    }
    Ok(derivative(v.component(1), 0, 1).sub(&derivative(v.component(0), 1, 1)))
}

/// Standard curl of a 3D vector field.
pub fn curl3d(v: &SpectralVector) -> Result<SpectralVector, SpectralError> {
    if v.dim() != 3 {
        return Err(SpectralError::DimensionMismatch { expected: 3, got: v.dim() });
    }
    let d = |comp: usize, axis: usize| derivative(v.component(comp), axis, 1);
    SpectralVector::from_components(vec![d(2, 1).sub(&d(1, 2)), d(0, 2).sub(&d(2, 0)), d(1, 0).sub(&d(0, 1))])
}

/// Velocity with zero mean whose scalar curl is `omega` (2D Biot–Savart).
///
/// Uses the stream function `ψ = (−Δ)^{-1} ω` with `v = (∂₂ψ, −∂₁ψ)`.
pub fn velocity_from_vorticity(omega: &SpectralScalar) -> Result<SpectralVector, SpectralError> {
    if omega.grid().dim() != 2 {
        return Err(SpectralError::DimensionMismatch { expected: 2, got: omega.grid().dim() });
    }
    let psi = inverse_laplacian(omega).scaled(-1.0);
    SpectralVector::from_components(vec![derivative(&psi, 1, 1), derivative(&psi, 0, 1).scaled(-1.0)])
}

/// Orthogonal projection onto divergence-free fields.
///
/// Per mode `k ≠ 0`: `v̂ ↦ v̂ − (k·v̂/|k|²) k`; mode 0 is left alone.
pub fn leray_project(v: &SpectralVector) -> SpectralVector {
    let grid = Arc::clone(v.grid());
    let dim = grid.dim();
    let mut out = v.clone();
    let k2 = grid.k_squared();
    for idx in 1..grid.len() {
        let k = grid.k_vec(idx);
        let dot: Complex64 = (0..dim).map(|a| v.component(a).coeffs()[idx] * k[a] as f64).sum::<Complex64>() / k2[idx];
        for (a, comp) in out.components_mut().iter_mut().enumerate() {
            comp.coeffs_mut()[idx] -= dot * k[a] as f64;
        }
    }
    out
}

/// Physical values of each field after masking.
pub(crate) fn to_physical_masked(fields: &[&SpectralScalar]) -> Vec<Vec<f64>> {
    fields.iter().map(|f| (*f).clone().masked().to_physical()).collect()
}

/// Transforms physical values back and applies the dealiasing mask.
pub(crate) fn from_physical_masked(grid: &Arc<Grid>, values: &[f64]) -> SpectralScalar {
    SpectralScalar::from_physical(grid, values).expect("length matches grid").masked()
}

/// Pseudo-spectral product with 2/3-rule dealiasing.
pub fn dealiased_product(f: &SpectralScalar, g: &SpectralScalar) -> Result<SpectralScalar, SpectralError> {
    if **f.grid() != **g.grid() {
        return Err(SpectralError::GridMismatch);
    }
    let phys = to_physical_masked(&[f, g]);
    let prod: Vec<f64> = phys[0].iter().zip(&phys[1]).map(|(a, b)| a * b).collect();
    Ok(from_physical_masked(f.grid(), &prod))
}

/// `(a·∇) b` for vector fields, each product dealiased.
pub fn advect(a: &SpectralVector, b: &SpectralVector) -> SpectralVector {
    let grid = Arc::clone(a.grid());
    let dim = grid.dim();
    let a_phys: Vec<Vec<f64>> = a.components().iter().map(|c| c.clone().masked().to_physical()).collect();
    let comps = b
        .components()
        .iter()
        .map(|bc| {
            let mut acc = vec![0.0; grid.len()];
            for (j, aj) in a_phys.iter().enumerate().take(dim) {
                let d = derivative(bc, j, 1).masked().to_physical();
                for ((s, x), y) in acc.iter_mut().zip(aj).zip(&d) {
                    *s += x * y;
                }
            }
            from_physical_masked(&grid, &acc)
        })
        .collect();
    SpectralVector::from_components(comps).expect("components share the grid")
}

/// `(a·∇) f` for a scalar `f`, dealiased.
pub fn advect_scalar(a: &SpectralVector, f: &SpectralScalar) -> SpectralScalar {
    let grid = Arc::clone(a.grid());
    let mut acc = vec![0.0; grid.len()];
    for (j, aj) in a.components().iter().enumerate() {
        let x = aj.clone().masked().to_physical();
        let d = derivative(f, j, 1).masked().to_physical();
        for ((s, p), q) in acc.iter_mut().zip(&x).zip(&d) {
            *s += p * q;
        }
    }
    from_physical_masked(&grid, &acc)
}
