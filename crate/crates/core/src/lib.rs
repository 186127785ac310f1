//! Pseudo-spectral solver for incompressible MHD with zero viscosity and
//! positive resistivity on the periodic torus, with regularity diagnostics
//! and a lab for the functional inequalities behind them.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod diagnostics;
pub mod dynamics;
pub mod inequality;
pub mod random;
pub mod scenarios;
pub mod spectral;

pub use diagnostics::{DiagnosticsError, DiagnosticsRecord, DiagnosticsTracker};
pub use dynamics::{MhdState, Scheme, StepError, StepperConfig, VorticityState};
pub use inequality::{InequalityError, InequalityId, InequalityReport};
pub use scenarios::{make_ic, RunConfig, Scenario};
pub use spectral::{Grid, SpectralError, SpectralScalar, SpectralVector};
