use thiserror::Error;

use super::stepper::{advance, Evolvable};
use super::{MhdState, StepError, StepperConfig, VorticityState};
use crate::diagnostics::{DiagnosticsRecord, DiagnosticsTracker};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    /// Steps between diagnostics records (the final step is always recorded).
    pub diagnostics_cadence: u64,
    /// Threshold for the BKM tail monitor.
    pub epsilon: f64,
    /// A sampled `‖∇×u‖_BMO` above this value stops the run.
    pub bkm_ceiling: f64,
    /// Start of the running sup of the H³ energy; `None` = run start.
    pub m_start: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { diagnostics_cadence: 1, epsilon: 0.1, bkm_ceiling: 1e6, m_start: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlowupReason {
    BkmCeiling { integrand: f64 },
    NonFinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    Completed,
    /// The run stopped early; the returned state is the last good one.
    BlowupSuspected {
        t: f64,
        reason: BlowupReason,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    #[error("step failed at t = {t}: {source}")]
    Step { t: f64, source: StepError },
    #[error("end time {t_end} precedes current time {t}")]
    InvalidHorizon { t: f64, t_end: f64 },
    #[error("observer failed: {0}")]
    Observer(String),
}

/// Receives records and post-step snapshots of a run.
pub trait RunObserver {
    fn on_record(&mut self, record: &DiagnosticsRecord) -> Result<(), String>;

    /// Called after every accepted step.
    fn on_step(&mut self, _state: &MhdState, _tracker: &DiagnosticsTracker) -> Result<(), String> {
        Ok(())
    }
}

impl RunObserver for Vec<DiagnosticsRecord> {
    fn on_record(&mut self, record: &DiagnosticsRecord) -> Result<(), String> {
        self.push(record.clone());
        Ok(())
    }
}

/// Step sizes covering `[t, t_end]` with `dt`, the last one possibly shorter.
fn step_plan(t: f64, t_end: f64, dt: f64) -> (u64, f64) {
    let span = t_end - t;
    let n = (span / dt).round();
    if n >= 1.0 && (n * dt - span).abs() <= 1e-9 * span.max(dt) {
        (n as u64, dt)
    } else {
        let full = (span / dt).floor();
        (full as u64 + 1, span - full * dt)
    }
}

/// A run in progress: state, stepper and accumulated diagnostics.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub state: MhdState,
    pub cfg: StepperConfig,
    pub options: RunOptions,
    pub tracker: DiagnosticsTracker,
}

impl Simulation {
    pub fn new(initial: MhdState, cfg: StepperConfig, options: RunOptions) -> Result<Self, RunError> {
        let tracker = DiagnosticsTracker::new(cfg.nu, options.m_start);
        Self::with_tracker(initial, cfg, options, tracker)
    }

    /// Continues with previously accumulated diagnostics.
    pub fn with_tracker(
        initial: MhdState,
        cfg: StepperConfig,
        options: RunOptions,
        tracker: DiagnosticsTracker,
    ) -> Result<Self, RunError> {
        cfg.validate().map_err(|source| RunError::Step { t: initial.t, source })?;
        Ok(Self { state: initial, cfg, options, tracker })
    }

    fn record(&mut self, observer: &mut dyn RunObserver) -> Result<Option<RunStatus>, RunError> {
        let rec = self.tracker.observe_state(&self.state);
        observer.on_record(&rec).map_err(RunError::Observer)?;
        if !(rec.curl_u_bmo <= self.options.bkm_ceiling) {
            return Ok(Some(RunStatus::BlowupSuspected {
                t: rec.t,
                reason: BlowupReason::BkmCeiling { integrand: rec.curl_u_bmo },
            }));
        }
        Ok(None)
    }

    /// Steps until `t_end`, emitting records at the configured cadence.
    pub fn advance_to(&mut self, t_end: f64, observer: &mut dyn RunObserver) -> Result<RunStatus, RunError> {
        let t0 = self.state.t;
        if t_end < t0 {
            return Err(RunError::InvalidHorizon { t: t0, t_end });
        }
        if t_end == t0 {
            return Ok(RunStatus::Completed);
        }
        if self.tracker.last_time().is_none() {
            if let Some(status) = self.record(observer)? {
                return Ok(status);
            }
        }
        let (n_steps, last_dt) = step_plan(t0, t_end, self.cfg.dt);
        let cadence = self.options.diagnostics_cadence.max(1);
        for i in 1..=n_steps {
            let dt = if i == n_steps { last_dt } else { self.cfg.dt };
            let mut next = match advance(&self.state, &self.cfg, dt) {
                Ok(s) => s,
                Err(StepError::NonFinite { t }) => {
                    return Ok(RunStatus::BlowupSuspected { t, reason: BlowupReason::NonFinite });
                }
                Err(source) => return Err(RunError::Step { t: self.state.t, source }),
            };
            next.t = if i == n_steps { t_end } else { t0 + i as f64 * self.cfg.dt };
            self.state = next;
            self.tracker.steps += 1;
            if self.tracker.steps.is_multiple_of(cadence) || i == n_steps {
                if let Some(status) = self.record(observer)? {
                    return Ok(status);
                }
            }
            observer.on_step(&self.state, &self.tracker).map_err(RunError::Observer)?;
        }
        Ok(RunStatus::Completed)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub state: MhdState,
    pub status: RunStatus,
    pub tracker: DiagnosticsTracker,
}

/// Integrates from `initial` to `t_end`, streaming records to `observer`.
pub fn run(
    initial: MhdState,
    cfg: &StepperConfig,
    t_end: f64,
    options: RunOptions,
    observer: &mut dyn RunObserver,
) -> Result<RunOutcome, RunError> {
    let mut sim = Simulation::new(initial, *cfg, options)?;
    let status = sim.advance_to(t_end, observer)?;
    Ok(RunOutcome { state: sim.state, status, tracker: sim.tracker })
}

/// Integrates the planar vorticity–current system to `t_end`.
pub fn run_vorticity(initial: VorticityState, cfg: &StepperConfig, t_end: f64) -> Result<VorticityState, RunError> {
    cfg.validate().map_err(|source| RunError::Step { t: initial.t, source })?;
    let t0 = initial.time();
    if t_end < t0 {
        return Err(RunError::InvalidHorizon { t: t0, t_end });
    }
    if t_end == t0 {
        return Ok(initial);
    }
    let (n_steps, last_dt) = step_plan(t0, t_end, cfg.dt);
    let mut state = initial;
    for i in 1..=n_steps {
        let dt = if i == n_steps { last_dt } else { cfg.dt };
        state = advance(&state, cfg, dt).map_err(|source| RunError::Step { t: state.t, source })?;
        state.t = if i == n_steps { t_end } else { t0 + i as f64 * cfg.dt };
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_covers_interval() {
        assert_eq!(step_plan(0.0, 1.0, 1e-3), (1000, 1e-3));
        let (n, last) = step_plan(0.0, 1.05, 0.1);
        assert_eq!(n, 11);
        assert!((last - 0.05).abs() < 1e-12);
        let (n, last) = step_plan(0.0, 0.05, 0.1);
        assert_eq!(n, 1);
        assert!((last - 0.05).abs() < 1e-15);
    }
}
