use num_complex::Complex64;

use super::{MhdState, StepError};
use crate::spectral::{velocity_from_vorticity, SpectralScalar};

/// Planar state in vorticity–current variables `ω = ∇×u`, `j = ∇×h`.
#[derive(Debug, Clone, PartialEq)]
pub struct VorticityState {
    pub t: f64,
    pub omega: SpectralScalar,
    pub current: SpectralScalar,
}

impl VorticityState {
    pub fn from_primitive(state: &MhdState) -> Result<Self, StepError> {
        if state.dim() != 2 {
            return Err(StepError::DimensionMismatch { expected: 2, got: state.dim() });
        }
        let (omega, current) = state.curls_2d()?;
        Ok(Self { t: state.t, omega, current })
    }

    /// Recovers the mean-zero velocity and magnetic field.
    pub fn to_primitive(&self) -> Result<MhdState, StepError> {
        MhdState::new(self.t, velocity_from_vorticity(&self.omega)?, velocity_from_vorticity(&self.current)?)
    }

    pub(crate) fn enforce_invariants(&mut self) {
        for f in [&mut self.omega, &mut self.current] {
            f.apply_mask();
            f.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
        }
    }
}
