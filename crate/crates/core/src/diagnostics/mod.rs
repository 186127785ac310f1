//! Norms and the monitored regularity quantities: energy law, BKM integral
//! of the vorticity BMO seminorm, running H³ sup and the planar Grönwall
//! envelope.

mod analysis;
mod bmo;
mod norms;
mod record;
mod tracker;

pub use analysis::{
    bkm_accumulate, constants_agree, cumulative_trapezoid, energy_balance, gronwall_2d_check, m_running_sup,
    running_max, BkmSeries, EnergyResidual, GronwallOptions, GronwallReport,
};
pub use bmo::{bmo_of_samples, bmo_seminorm, bmo_seminorm_vector, dyadic_sides};
pub use norms::{
    grid_lp_norm, lp_norm, lp_norm_vector, pointwise_magnitude, sobolev_seminorm, sobolev_seminorm_vector, torus_volume,
};
pub use record::{parse_records, DiagnosticsRecord};
pub use tracker::{sample_state, DiagnosticsTracker, Sample};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("unsupported exponent p = {0} (expected 2, 4 or infinity)")]
    UnsupportedExponent(f64),
    #[error("need at least {needed} records, got {got}")]
    TooFewRecords { needed: usize, got: usize },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("records are missing `{0}`")]
    MissingField(&'static str),
}
