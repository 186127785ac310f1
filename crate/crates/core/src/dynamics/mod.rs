//! Time evolution of the inviscid, resistive MHD system in primitive form
//! (2D and 3D) and in planar vorticity–current form.

mod rhs;
mod run;
mod state;
mod stepper;
mod vorticity;

pub use rhs::{rhs_primitive, rhs_vorticity_2d};
pub use run::{run, run_vorticity, BlowupReason, RunError, RunObserver, RunOptions, RunOutcome, RunStatus, Simulation};
pub use state::{MhdState, Scheme, StepperConfig};
pub use stepper::{step, step_vorticity};
pub use vorticity::VorticityState;

use thiserror::Error;

use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StepError {
    #[error("time step {dt:e} exceeds the advective CFL limit {limit:e}")]
    CflViolation { dt: f64, limit: f64 },
    #[error("non-finite coefficient after step ending at t = {t}")]
    NonFinite { t: f64 },
    #[error("invalid stepper configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl From<SpectralError> for StepError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::DimensionMismatch { expected, got } => Self::DimensionMismatch { expected, got },
            other => Self::InvalidState(other.to_string()),
        }
    }
}
