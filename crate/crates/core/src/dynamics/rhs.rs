//! Right-hand sides of the resistive, inviscid MHD system.
//!
//! Primitive form:
//!
//! ```text
//! u_t = P[(h·∇)h − (u·∇)u]
//! h_t = P[(h·∇)u − (u·∇)h] + νΔh
//! ```
//!
//! Planar vorticity–current form, `ω = ∇×u`, `j = ∇×h`:
//!
//! ```text
//! ω_t = −(u·∇)ω + (h·∇)j
//! j_t = −(u·∇)j + νΔj + (h·∇)ω + 2 tr(∇u ∇⊥h)
//! ```

use std::sync::Arc;

use super::{MhdState, StepError};
use crate::spectral::{
    derivative, from_physical_masked, laplacian, leray_project, velocity_from_vorticity, Grid, SpectralScalar,
    SpectralVector,
};

/// Nonlinear part of the primitive right-hand side.
pub(crate) struct PrimitiveNonlinear {
    pub du: SpectralVector,
    pub dh: SpectralVector,
    /// Largest pointwise `max(|u|, |h|)` on the grid.
    pub max_speed: f64,
}

fn physical(f: &SpectralScalar) -> Vec<f64> {
    f.clone().masked().to_physical()
}

fn max_magnitude(components: &[Vec<f64>]) -> f64 {
    let len = components.first().map_or(0, Vec::len);
    (0..len).map(|i| components.iter().map(|c| c[i] * c[i]).sum::<f64>()).fold(0.0f64, f64::max).sqrt()
}

pub(crate) fn primitive_nonlinear(u: &SpectralVector, h: &SpectralVector) -> PrimitiveNonlinear {
    let grid: Arc<Grid> = Arc::clone(u.grid());
    let dim = grid.dim();
    let len = grid.len();
    let u_phys: Vec<Vec<f64>> = u.components().iter().map(physical).collect();
    let h_phys: Vec<Vec<f64>> = h.components().iter().map(physical).collect();
    let max_speed = max_magnitude(&u_phys).max(max_magnitude(&h_phys));

    let mut du = Vec::with_capacity(dim);
    let mut dh = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut lorentz = vec![0.0; len];
        let mut induction = vec![0.0; len];
        for j in 0..dim {
            let du_ij = physical(&derivative(u.component(i), j, 1));
            let dh_ij = physical(&derivative(h.component(i), j, 1));
            let (uj, hj) = (&u_phys[j], &h_phys[j]);
            for p in 0..len {
                lorentz[p] += hj[p] * dh_ij[p] - uj[p] * du_ij[p];
                induction[p] += hj[p] * du_ij[p] - uj[p] * dh_ij[p];
            }
        }
        du.push(from_physical_masked(&grid, &lorentz));
        dh.push(from_physical_masked(&grid, &induction));
    }
    let du = leray_project(&SpectralVector::from_components(du).expect("shared grid"));
    let dh = leray_project(&SpectralVector::from_components(dh).expect("shared grid"));
    PrimitiveNonlinear { du, dh, max_speed }
}

/// Time derivatives `(du/dt, dh/dt)` of the primitive system.
pub fn rhs_primitive(state: &MhdState, nu: f64) -> (SpectralVector, SpectralVector) {
    let PrimitiveNonlinear { du, mut dh, .. } = primitive_nonlinear(&state.u, &state.h);
    for (d, hc) in dh.components_mut().iter_mut().zip(state.h.components()) {
        d.add_scaled(&laplacian(hc), nu);
    }
    (du, dh)
}

pub(crate) struct VorticityNonlinear {
    pub domega: SpectralScalar,
    pub dcurrent: SpectralScalar,
    pub max_speed: f64,
}

/// Nonlinear part of the vorticity–current system; velocity and magnetic
/// field are recovered from the curls.
pub(crate) fn vorticity_nonlinear(
    omega: &SpectralScalar,
    current: &SpectralScalar,
) -> Result<VorticityNonlinear, StepError> {
    let grid = Arc::clone(omega.grid());
    let len = grid.len();
    let u = velocity_from_vorticity(omega)?;
    let h = velocity_from_vorticity(current)?;
    let u_phys: Vec<Vec<f64>> = u.components().iter().map(physical).collect();
    let h_phys: Vec<Vec<f64>> = h.components().iter().map(physical).collect();
    let max_speed = max_magnitude(&u_phys).max(max_magnitude(&h_phys));
    // grad_u[i][j] = ∂_j u_i
    let grads = |v: &SpectralVector| -> Vec<Vec<Vec<f64>>> {
        (0..2).map(|i| (0..2).map(|j| physical(&derivative(v.component(i), j, 1))).collect()).collect()
    };
    let grad_u = grads(&u);
    let grad_h = grads(&h);
    let d_omega: Vec<Vec<f64>> = (0..2).map(|j| physical(&derivative(omega, j, 1))).collect();
    let d_current: Vec<Vec<f64>> = (0..2).map(|j| physical(&derivative(current, j, 1))).collect();

    let mut w_rate = vec![0.0; len];
    let mut j_rate = vec![0.0; len];
    for p in 0..len {
        let mut uw = 0.0;
        let mut uj = 0.0;
        let mut hw = 0.0;
        let mut hj = 0.0;
        for k in 0..2 {
            uw += u_phys[k][p] * d_omega[k][p];
            uj += u_phys[k][p] * d_current[k][p];
            hw += h_phys[k][p] * d_omega[k][p];
            hj += h_phys[k][p] * d_current[k][p];
        }
        // tr(∇u ∇⊥h) with (∇u)_{ij} = ∂_j u_i and rows of ∇⊥h equal to (−∂₂h_i, ∂₁h_i).
        let mut trace = 0.0;
        for k in 0..2 {
            trace += grad_u[1][k][p] * grad_h[k][0][p] - grad_u[0][k][p] * grad_h[k][1][p];
        }
        w_rate[p] = hj - uw;
        j_rate[p] = hw - uj + 2.0 * trace;
    }
    Ok(VorticityNonlinear {
        domega: from_physical_masked(&grid, &w_rate),
        dcurrent: from_physical_masked(&grid, &j_rate),
        max_speed,
    })
}

/// Time derivatives `(dω/dt, dj/dt)` of the planar vorticity–current system.
pub fn rhs_vorticity_2d(state: &MhdState, nu: f64) -> Result<(SpectralScalar, SpectralScalar), StepError> {
    if state.dim() != 2 {
        return Err(StepError::DimensionMismatch { expected: 2, got: state.dim() });
    }
    let (omega, current) = state.curls_2d()?;
    let VorticityNonlinear { domega, mut dcurrent, .. } = vorticity_nonlinear(&omega, &current)?;
    dcurrent.add_scaled(&laplacian(&current), nu);
    Ok((domega, dcurrent))
}
