use std::sync::Arc;

use num_complex::Complex64;

use super::StepError;
use crate::spectral::{curl2d, leray_project, Grid, SpectralScalar, SpectralVector};

/// Velocity and magnetic field at one time instant.
#[derive(Debug, Clone, PartialEq)]
pub struct MhdState {
    pub t: f64,
    pub u: SpectralVector,
    pub h: SpectralVector,
}

impl MhdState {
    pub fn new(t: f64, u: SpectralVector, h: SpectralVector) -> Result<Self, StepError> {
        if **u.grid() != **h.grid() {
            return Err(StepError::InvalidState("u and h live on different grids".into()));
        }
        Ok(Self { t, u, h })
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self { t: 0.0, u: SpectralVector::zeros(grid), h: SpectralVector::zeros(grid) }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.u.grid()
    }

    pub fn dim(&self) -> usize {
        self.grid().dim()
    }

    /// Re-imposes the invariants: projection, dealiasing and zero mean.
    pub fn enforce_invariants(&mut self) {
        for field in [&mut self.u, &mut self.h] {
            *field = leray_project(field);
            field.apply_mask();
            for c in field.components_mut() {
                c.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.h.is_finite()
    }

    /// Checks divergence, reality and mean-zero conditions at relative
    /// tolerance `tol`.
    pub fn validate(&self, tol: f64) -> Result<(), StepError> {
        for (name, field) in [("u", &self.u), ("h", &self.h)] {
            let scale = field.max_abs();
            if field.divergence_defect() > tol * scale.max(f64::MIN_POSITIVE) && scale > 0.0 {
                return Err(StepError::InvalidState(format!("{name} is not divergence-free")));
            }
            for c in field.components() {
                if c.coeffs()[0].norm() > tol * scale.max(1.0) {
                    return Err(StepError::InvalidState(format!("{name} has a nonzero mean")));
                }
                if c.hermitian_defect() > tol * scale.max(1.0) {
                    return Err(StepError::InvalidState(format!("{name} is not real-valued")));
                }
            }
        }
        Ok(())
    }

    /// Scalar vorticity and current of a planar state.
    pub fn curls_2d(&self) -> Result<(SpectralScalar, SpectralScalar), StepError> {
        Ok((curl2d(&self.u)?, curl2d(&self.h)?))
    }
}

/// Time integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Scheme {
    /// Classical RK4 on the integrating-factor variables; resistive decay is
    /// exact per mode.
    #[default]
    #[serde(rename = "if-rk4")]
    IntegratingFactorRk4,
    /// Explicit transport, implicit resistive term. First order.
    #[serde(rename = "imex-euler")]
    ImexEuler,
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "if-rk4" => Ok(Self::IntegratingFactorRk4),
            "imex-euler" => Ok(Self::ImexEuler),
            other => Err(format!("unknown scheme `{other}` (expected if-rk4 or imex-euler)")),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::IntegratingFactorRk4 => "if-rk4",
            Self::ImexEuler => "imex-euler",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    /// Resistivity, strictly positive.
    pub nu: f64,
    pub dt: f64,
    pub scheme: Scheme,
    /// Advective CFL safety factor in (0, 1].
    pub cfl_limit: f64,
}

impl StepperConfig {
    pub fn new(nu: f64, dt: f64) -> Self {
        Self { nu, dt, scheme: Scheme::default(), cfl_limit: 0.5 }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<(), StepError> {
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(StepError::InvalidConfig(format!("nu must be > 0, got {}", self.nu)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(StepError::InvalidConfig(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.cfl_limit > 0.0 && self.cfl_limit <= 1.0) {
            return Err(StepError::InvalidConfig(format!("cfl_limit must lie in (0, 1], got {}", self.cfl_limit)));
        }
        Ok(())
    }
}
