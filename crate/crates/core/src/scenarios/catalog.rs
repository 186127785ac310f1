//! Initial-condition catalogue.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dynamics::MhdState;
use crate::random::random_solenoidal;
use crate::spectral::{Grid, SpectralVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`")]
    Unknown(String),
    #[error("parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error("scenario `{scenario}` is not available in {dim}D")]
    UnsupportedDimension { scenario: &'static str, dim: usize },
}

/// An initial condition with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    /// `h = 0`; in 2D `u = (−sin x₂, sin x₁)`, a steady Euler flow; in 3D
    /// the Taylor–Green vortex `(sin x₁ cos x₂ cos x₃, −cos x₁ sin x₂ cos x₃, 0)`.
    TaylorGreenEuler,
    /// `u = 0`, `h = (sin x₂, 0[, 0])`.
    SingleModeMagnetic,
    /// `u = (−sin x₂, sin x₁)`, `h = β(−sin x₂, sin 2x₁)`; planar only.
    OrszagTang { beta: f64 },
    /// Independent random divergence-free `u` and `h` with `max|k_i| ≤ band`
    /// and `‖u‖₂ = ‖h‖₂ = amplitude`.
    RandomBand { band: i64, amplitude: f64 },
}

impl Scenario {
    pub fn id(&self) -> &'static str {
        match self {
            Self::TaylorGreenEuler => "taylor-green-euler",
            Self::SingleModeMagnetic => "single-mode-magnetic",
            Self::OrszagTang { .. } => "orszag-tang",
            Self::RandomBand { .. } => "random-band",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::OrszagTang { beta } => write!(f, "orszag-tang beta={beta}"),
            Self::RandomBand { band, amplitude } => write!(f, "random-band band={band} amplitude={amplitude}"),
            other => f.write_str(other.id()),
        }
    }
}

fn bad(name: &str, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::InvalidParameter { name: name.to_string(), reason: reason.into() }
}

fn parse_f64(name: &str, value: &str) -> Result<f64, ScenarioError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| bad(name, format!("`{value}` is not a finite number")))
}

/// Parses `"<id> [name=value ...]"`.
impl FromStr for Scenario {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut words = s.split_whitespace();
        let id = words.next().ok_or_else(|| ScenarioError::Unknown(String::new()))?;
        let mut params = Vec::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| bad(w, "expected name=value"))?;
            params.push((k, v));
        }
        let mut scenario = match id {
            "taylor-green-euler" => Self::TaylorGreenEuler,
            "single-mode-magnetic" => Self::SingleModeMagnetic,
            "orszag-tang" => Self::OrszagTang { beta: 1.0 },
            "random-band" => Self::RandomBand { band: 4, amplitude: 1.0 },
            other => return Err(ScenarioError::Unknown(other.to_string())),
        };
        for (k, v) in params {
            match (&mut scenario, k) {
                (Self::OrszagTang { beta }, "beta") => *beta = parse_f64(k, v)?,
                (Self::RandomBand { band, .. }, "band") => {
                    *band = v.parse().map_err(|_| bad(k, format!("`{v}` is not an integer")))?;
                }
                (Self::RandomBand { amplitude, .. }, "amplitude") => *amplitude = parse_f64(k, v)?,
                _ => return Err(bad(k, format!("not a parameter of {id}"))),
            }
        }
        Ok(scenario)
    }
}

/// Builds the initial state of `scenario` on `grid`; `seed` drives the
/// random scenarios.
pub fn make_ic(scenario: &Scenario, grid: &Arc<Grid>, seed: u64) -> Result<MhdState, ScenarioError> {
    let dim = grid.dim();
    let zero = SpectralVector::zeros(grid);
    let mut state = match *scenario {
        Scenario::TaylorGreenEuler if dim == 2 => {
            MhdState::new(0.0, SpectralVector::from_fn(grid, |x| [-x[1].sin(), x[0].sin(), 0.0]), zero)
        }
        Scenario::TaylorGreenEuler => MhdState::new(
            0.0,
            SpectralVector::from_fn(grid, |x| {
                [x[0].sin() * x[1].cos() * x[2].cos(), -x[0].cos() * x[1].sin() * x[2].cos(), 0.0]
            }),
            zero,
        ),
        Scenario::SingleModeMagnetic => {
            MhdState::new(0.0, zero, SpectralVector::from_fn(grid, |x| [x[1].sin(), 0.0, 0.0]))
        }
        Scenario::OrszagTang { beta } => {
            if dim != 2 {
                return Err(ScenarioError::UnsupportedDimension { scenario: "orszag-tang", dim });
            }
            MhdState::new(
                0.0,
                SpectralVector::from_fn(grid, |x| [-x[1].sin(), x[0].sin(), 0.0]),
                SpectralVector::from_fn(grid, |x| [-beta * x[1].sin(), beta * (2.0 * x[0]).sin(), 0.0]),
            )
        }
        Scenario::RandomBand { band, amplitude } => {
            if band < 1 || band > grid.cutoff() {
                return Err(bad("band", format!("must lie in [1, {}]", grid.cutoff())));
            }
            if !(amplitude > 0.0) {
                return Err(bad("amplitude", "must be > 0"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = random_solenoidal(grid, band, &mut rng).scaled(amplitude);
            let h = random_solenoidal(grid, band, &mut rng).scaled(amplitude);
            MhdState::new(0.0, u, h)
        }
    }
    .expect("fields share the grid");
    state.enforce_invariants();
    Ok(state)
}
