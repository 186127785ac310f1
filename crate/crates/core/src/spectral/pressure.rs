use super::{advect, dealiased_product, divergence, inverse_laplacian, SpectralError, SpectralScalar, SpectralVector};

/// Pressure fields eliminated by the projection, both with zero mean.
#[derive(Debug, Clone)]
pub struct Pressure {
    /// `q = p + ½|h|²`, the potential of the gradient removed from the
    /// momentum right-hand side.
    pub total: SpectralScalar,
    /// `p = q − ½|h|²`.
    pub hydrodynamic: SpectralScalar,
}

/// Solves `−Δq = div(u·∇u − (h·∇)h)` for the total pressure and splits off
/// the magnetic part.
pub fn recover_pressure(u: &SpectralVector, h: &SpectralVector) -> Result<Pressure, SpectralError> {
    if **u.grid() != **h.grid() {
        return Err(SpectralError::GridMismatch);
    }
    let forcing = advect(u, u).sub(&advect(h, h));
    let total = inverse_laplacian(&divergence(&forcing)).scaled(-1.0);
    let mut magnetic = SpectralScalar::zeros(u.grid());
    for c in h.components() {
        magnetic.add_scaled(&dealiased_product(c, c)?, 0.5);
    }
    let mut hydrodynamic = total.sub(&magnetic);
    hydrodynamic.coeffs_mut()[0] = num_complex::Complex64::new(0.0, 0.0);
    Ok(Pressure { total, hydrodynamic })
}
