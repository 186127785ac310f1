//! Numerical checks of the interpolation, Gagliardo–Nirenberg, commutator
//! and logarithmic Sobolev inequalities, with empirical constant fitting.

mod checks;
mod family;
mod report;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use checks::{
    check_commutator, check_gn, check_interpolation, check_log_sobolev, commutator_norm, support_band, LogSobolevTerms,
    Ratio,
};
pub use family::{FamilyKind, FieldFamily};
pub use report::{fit_constants, fit_fields, Fields, InequalityReport, SampleResult, SCALING_AMPLITUDES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InequalityError {
    #[error("degenerate field: {0}")]
    DegenerateField(String),
    #[error("field band {band} needs a dealiasing cutoff of at least {needed}, grid has {cutoff}")]
    BandTooWide { band: i64, needed: i64, cutoff: i64 },
    #[error("expected a {expected}D field, got {got}D")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown inequality `{0}`")]
    UnknownInequality(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// The six interpolation inequalities: `‖f‖_X ≤ C ‖f‖₂^{1−θ} ‖∇^m f‖₂^θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interpolation {
    /// `‖f‖_∞ ≤ C‖f‖₂^{1/2}‖∇²f‖₂^{1/2}` in 2D.
    Linf2d,
    /// `‖f‖₄ ≤ C‖f‖₂^{1/2}‖∇f‖₂^{1/2}` in 2D.
    L4Grad2d,
    /// `‖f‖₄ ≤ C‖f‖₂^{3/4}‖∇²f‖₂^{1/4}` in 2D.
    L4Hess2d,
    /// `‖f‖_∞ ≤ C‖f‖₂^{1/4}‖∇²f‖₂^{3/4}` in 3D.
    Linf3d,
    /// `‖f‖₄ ≤ C‖f‖₂^{5/8}‖∇²f‖₂^{3/8}` in 3D.
    L43d,
    /// `‖∇f‖₂ ≤ C‖f‖₂^{1/2}‖∇²f‖₂^{1/2}` in 3D.
    Grad3d,
}

impl Interpolation {
    pub const ALL: [Interpolation; 6] = [
        Interpolation::Linf2d,
        Interpolation::L4Grad2d,
        Interpolation::L4Hess2d,
        Interpolation::Linf3d,
        Interpolation::L43d,
        Interpolation::Grad3d,
    ];

    pub fn dim(self) -> usize {
        match self {
            Self::Linf2d | Self::L4Grad2d | Self::L4Hess2d => 2,
            _ => 3,
        }
    }

    /// `(derivative order m, exponent θ)` of the right-hand side.
    pub fn rhs_shape(self) -> (u32, f64) {
        match self {
            Self::Linf2d => (2, 0.5),
            Self::L4Grad2d => (1, 0.5),
            Self::L4Hess2d => (2, 0.25),
            Self::Linf3d => (2, 0.75),
            Self::L43d => (2, 0.375),
            Self::Grad3d => (2, 0.5),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Self::Linf2d => "2d-linf",
            Self::L4Grad2d => "2d-l4-grad",
            Self::L4Hess2d => "2d-l4-hess",
            Self::Linf3d => "3d-linf",
            Self::L43d => "3d-l4",
            Self::Grad3d => "3d-grad",
        }
    }
}

/// Every inequality the lab can evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InequalityId {
    Interpolation(Interpolation),
    /// `‖∇ⁱu‖_{L^{2s/i}} ≤ C‖u‖_∞^{1−i/s}‖∇ˢu‖₂^{i/s}`.
    GagliardoNirenberg {
        i: u32,
        s: u32,
    },
    /// `‖∇ˢ(u·∇u) − u·∇∇ˢu‖₂ ≤ C‖∇u‖_∞‖∇ˢu‖₂`.
    Commutator {
        s: u32,
    },
    /// `‖∇f‖_∞ ≤ C[1 + ‖f‖₂ + ‖∇×f‖_BMO ln(1 + ‖f‖_{W^{2,p}})]`.
    LogSobolev {
        p: f64,
    },
}

impl InequalityId {
    /// Whether the checker takes a vector field (otherwise a scalar).
    pub fn takes_vector(&self) -> bool {
        !matches!(self, Self::Interpolation(_))
    }

    /// Whether `ratio(αf) = ratio(f)` holds exactly.
    pub fn is_homogeneous(&self) -> bool {
        !matches!(self, Self::LogSobolev { .. })
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Interpolation(i) => f.write_str(i.id()),
            Self::GagliardoNirenberg { i, s } => write!(f, "gn-i{i}-s{s}"),
            Self::Commutator { s } => write!(f, "commutator-s{s}"),
            Self::LogSobolev { p } => write!(f, "log-sobolev-p{p}"),
        }
    }
}

impl FromStr for InequalityId {
    type Err = InequalityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || InequalityError::UnknownInequality(s.to_string());
        if let Some(i) = Interpolation::ALL.iter().find(|i| i.id() == s) {
            return Ok(Self::Interpolation(*i));
        }
        if let Some(rest) = s.strip_prefix("gn-i") {
            let (i, top) = rest.split_once("-s").ok_or_else(unknown)?;
            return Ok(Self::GagliardoNirenberg {
                i: i.parse().map_err(|_| unknown())?,
                s: top.parse().map_err(|_| unknown())?,
            });
        }
        if let Some(order) = s.strip_prefix("commutator-s") {
            return Ok(Self::Commutator { s: order.parse().map_err(|_| unknown())? });
        }
        if let Some(p) = s.strip_prefix("log-sobolev-p") {
            return Ok(Self::LogSobolev { p: p.parse().map_err(|_| unknown())? });
        }
        Err(unknown())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        let ids = [
            "2d-linf",
            "2d-l4-grad",
            "2d-l4-hess",
            "3d-linf",
            "3d-l4",
            "3d-grad",
            "gn-i1-s2",
            "commutator-s3",
            "log-sobolev-p4",
            "log-sobolev-p4.5",
        ];
        for id in ids {
            assert_eq!(id.parse::<InequalityId>().unwrap().to_string(), id);
        }
        assert!(matches!("2d-l5".parse::<InequalityId>(), Err(InequalityError::UnknownInequality(_))));
        assert!("gn-ix-s2".parse::<InequalityId>().is_err());
    }
}
