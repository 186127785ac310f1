//! Workflows behind the command-line interface: run, resume, ic and
//! check-inequalities.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use super::config::RunConfig;
use super::snapshot::{write_atomic, Snapshot};
use super::{make_ic, read_snapshot};
use crate::diagnostics::{DiagnosticsRecord, DiagnosticsTracker};
use crate::dynamics::{BlowupReason, MhdState, RunError, RunObserver, RunOptions, RunStatus, Simulation, StepError};
use crate::inequality::{fit_constants, FamilyKind, FieldFamily, InequalityId, InequalityReport};
use crate::spectral::Grid;

pub const DIAG_FILE: &str = "diag.ndjson";
pub const INEQUALITY_FILE: &str = "inequalities.ndjson";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Invalid configuration or input files (exit code 2).
    Config,
    /// The integration became unstable (exit code 3).
    Instability,
    /// Anything else, typically I/O (exit code 1).
    Runtime,
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{message}")]
pub struct DriverError {
    pub kind: ErrorKind,
    pub message: String,
}

impl DriverError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Config, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Runtime, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Config => 2,
            ErrorKind::Instability => 3,
            ErrorKind::Runtime => 1,
        }
    }

    /// Final NDJSON status line for this error.
    pub fn status_line(&self) -> String {
        let kind = match self.kind {
            ErrorKind::Config => "config",
            ErrorKind::Instability => "instability",
            ErrorKind::Runtime => "runtime",
        };
        json!({"status": "error", "kind": kind, "message": self.message}).to_string()
    }
}

fn io_error(context: &str, path: &Path, e: impl std::fmt::Display) -> DriverError {
    DriverError::runtime(format!("{context} {}: {e}", path.display()))
}

/// Output locations inside `out_dir`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputLayout {
    pub dir: PathBuf,
}

impl OutputLayout {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn diag(&self) -> PathBuf {
        self.dir.join(DIAG_FILE)
    }

    pub fn snapshot(&self, step: u64) -> PathBuf {
        self.dir.join(format!("snap_{step}.bin"))
    }

    fn create(&self) -> Result<(), DriverError> {
        fs::create_dir_all(&self.dir).map_err(|e| io_error("cannot create", &self.dir, e))
    }
}

/// Tracker sidecar stored next to `snap_<step>.bin` as `snap_<step>.trk.json`.
pub fn sidecar_path(snapshot: &Path) -> PathBuf {
    snapshot.with_extension("trk.json")
}

/// Diagnostics state needed to continue a run from a snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResumeInfo {
    pub step: u64,
    pub t: f64,
    pub tracker: DiagnosticsTracker,
}

/// Writes `state` and its tracker sidecar atomically.
pub fn write_checkpoint(path: &Path, state: &MhdState, tracker: &DiagnosticsTracker) -> Result<(), DriverError> {
    Snapshot::from_state(state).write(path).map_err(|e| io_error("cannot write", path, e))?;
    let info = ResumeInfo { step: tracker.steps, t: state.t, tracker: tracker.clone() };
    let side = sidecar_path(path);
    let text = serde_json::to_string(&info).expect("tracker serializes");
    write_atomic(&side, text.as_bytes()).map_err(|e| io_error("cannot write", &side, e))
}

/// Appends records to `diag.ndjson` and writes periodic snapshots.
struct RunSink {
    layout: OutputLayout,
    diag: File,
    snapshot_cadence: u64,
    last_snapshot: Option<(u64, PathBuf)>,
}

impl RunSink {
    fn open(layout: OutputLayout, truncate: bool, snapshot_cadence: u64) -> Result<Self, DriverError> {
        layout.create()?;
        let path = layout.diag();
        let diag =
            if truncate { File::create(&path) } else { OpenOptions::new().create(true).append(true).open(&path) }
                .map_err(|e| io_error("cannot open", &path, e))?;
        Ok(Self { layout, diag, snapshot_cadence, last_snapshot: None })
    }

    fn line(&mut self, text: &str) -> std::io::Result<()> {
        let mut buf = String::with_capacity(text.len() + 1);
        buf.push_str(text);
        buf.push('\n');
        self.diag.write_all(buf.as_bytes())
    }

    fn checkpoint(&mut self, state: &MhdState, tracker: &DiagnosticsTracker) -> Result<PathBuf, DriverError> {
        if let Some((step, path)) = &self.last_snapshot {
            if *step == tracker.steps {
                return Ok(path.clone());
            }
        }
        let path = self.layout.snapshot(tracker.steps);
        write_checkpoint(&path, state, tracker)?;
        self.last_snapshot = Some((tracker.steps, path.clone()));
        Ok(path)
    }
}

impl RunObserver for RunSink {
    fn on_record(&mut self, record: &DiagnosticsRecord) -> Result<(), String> {
        self.line(&record.to_ndjson()).map_err(|e| e.to_string())
    }

    fn on_step(&mut self, state: &MhdState, tracker: &DiagnosticsTracker) -> Result<(), String> {
        if tracker.steps.is_multiple_of(self.snapshot_cadence) {
            self.checkpoint(state, tracker).map_err(|e| e.message)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub status: RunStatus,
    pub t: f64,
    pub steps: u64,
    /// Snapshot written at the end of the run (last good state). The status
    /// line carries only its file name so output is independent of `out_dir`.
    pub snapshot: PathBuf,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            RunStatus::Completed => 0,
            RunStatus::BlowupSuspected { .. } => 3,
        }
    }

    pub fn status_line(&self) -> String {
        let snapshot = self.snapshot.file_name().map(|f| f.to_string_lossy().into_owned());
        match self.status {
            RunStatus::Completed => {
                json!({"status": "completed", "t": self.t, "steps": self.steps, "snapshot": snapshot}).to_string()
            }
            RunStatus::BlowupSuspected { t, reason } => {
                let (reason, integrand) = match reason {
                    BlowupReason::BkmCeiling { integrand } => ("bkm_ceiling", Some(integrand)),
                    BlowupReason::NonFinite => ("non_finite", None),
                };
                json!({
                    "status": "blowup_suspected",
                    "reason": reason,
                    "t": t,
                    "integrand": integrand.filter(|v| v.is_finite()),
                    "steps": self.steps,
                    "snapshot": snapshot,
                })
                .to_string()
            }
        }
    }
}

fn run_options(cfg: &RunConfig) -> RunOptions {
    RunOptions {
        diagnostics_cadence: cfg.diagnostics_cadence,
        epsilon: cfg.epsilon_threshold,
        bkm_ceiling: cfg.bkm_ceiling,
        m_start: None,
    }
}

fn drive(mut sim: Simulation, t_end: f64, sink: &mut RunSink) -> Result<RunSummary, DriverError> {
    let result = sim.advance_to(t_end, sink);
    let snapshot = sink.checkpoint(&sim.state, &sim.tracker)?;
    let outcome = match result {
        Ok(status) => Ok(RunSummary { status, t: sim.state.t, steps: sim.tracker.steps, snapshot }),
        Err(RunError::Step { t, source: source @ StepError::CflViolation { .. } }) => Err(DriverError {
            kind: ErrorKind::Instability,
            message: format!("at t = {t}: {source}; last good state in {}", snapshot.display()),
        }),
        Err(RunError::Step { source: source @ StepError::InvalidConfig(_), .. }) => {
            Err(DriverError::config(source.to_string()))
        }
        Err(e) => Err(DriverError::runtime(e.to_string())),
    };
    let line = match &outcome {
        Ok(summary) => summary.status_line(),
        Err(e) => e.status_line(),
    };
    sink.line(&line).map_err(|e| io_error("cannot write", &sink.layout.diag(), e))?;
    outcome
}

fn grid_of(cfg: &RunConfig) -> Result<std::sync::Arc<Grid>, DriverError> {
    Grid::new(cfg.dim, cfg.n_per_axis).map_err(|e| DriverError::config(e.to_string()))
}

/// Runs a configured simulation from its initial condition.
pub fn run_from_config(cfg: &RunConfig) -> Result<RunSummary, DriverError> {
    let grid = grid_of(cfg)?;
    let state = make_ic(&cfg.ic, &grid, cfg.seed).map_err(|e| DriverError::config(format!("ic: {e}")))?;
    let sim =
        Simulation::new(state, cfg.stepper(), run_options(cfg)).map_err(|e| DriverError::config(e.to_string()))?;
    let mut sink = RunSink::open(OutputLayout::new(&cfg.out_dir), true, cfg.snapshot_cadence)?;
    drive(sim, cfg.t_end, &mut sink)
}

/// Continues from `snapshot` to `cfg.t_end`, appending to `diag.ndjson`.
///
/// Grid and time come from the snapshot. The tracker sidecar, when
/// present, continues the diagnostic integrals and the step count.
pub fn resume_from_snapshot(cfg: &RunConfig, snapshot: &Path) -> Result<RunSummary, DriverError> {
    let state = read_snapshot(snapshot).map_err(|e| DriverError::config(format!("{}: {e}", snapshot.display())))?;
    let side = sidecar_path(snapshot);
    let tracker = if side.exists() {
        let text = fs::read_to_string(&side).map_err(|e| io_error("cannot read", &side, e))?;
        let info: ResumeInfo =
            serde_json::from_str(&text).map_err(|e| DriverError::config(format!("{}: {e}", side.display())))?;
        if info.tracker.nu() != cfg.nu {
            return Err(DriverError::config(format!(
                "`nu` = {} differs from the snapshot run's {}",
                cfg.nu,
                info.tracker.nu()
            )));
        }
        info.tracker
    } else {
        DiagnosticsTracker::new(cfg.nu, None)
    };
    if cfg.t_end < state.t {
        return Err(DriverError::config(format!("`t_end` = {} precedes the snapshot time {}", cfg.t_end, state.t)));
    }
    let sim = Simulation::with_tracker(state, cfg.stepper(), run_options(cfg), tracker)
        .map_err(|e| DriverError::config(e.to_string()))?;
    let mut sink = RunSink::open(OutputLayout::new(&cfg.out_dir), false, cfg.snapshot_cadence)?;
    drive(sim, cfg.t_end, &mut sink)
}

/// Writes the initial condition of `cfg` as a snapshot (default
/// `out_dir/snap_0.bin`) and returns its path.
pub fn write_ic(cfg: &RunConfig, path: Option<&Path>) -> Result<PathBuf, DriverError> {
    let grid = grid_of(cfg)?;
    let state = make_ic(&cfg.ic, &grid, cfg.seed).map_err(|e| DriverError::config(format!("ic: {e}")))?;
    let layout = OutputLayout::new(&cfg.out_dir);
    let path = match path {
        Some(p) => p.to_path_buf(),
        None => {
            layout.create()?;
            layout.snapshot(0)
        }
    };
    Snapshot::from_state(&state).write(&path).map_err(|e| io_error("cannot write", &path, e))?;
    Ok(path)
}

/// Parameters of the inequality suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Fields per random family.
    pub count: usize,
    pub n_2d: usize,
    pub band_2d: i64,
    pub n_3d: usize,
    pub band_3d: i64,
    /// Exponent of the logarithmic Sobolev check.
    pub p: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: 0, count: 200, n_2d: 64, band_2d: 8, n_3d: 16, band_3d: 4, p: 4.0 }
    }
}

/// Inequalities evaluated by [`check_inequalities`].
pub const SUITE: [&str; 12] = [
    "2d-linf",
    "2d-l4-grad",
    "2d-l4-hess",
    "3d-linf",
    "3d-l4",
    "3d-grad",
    "gn-i1-s2",
    "gn-i1-s3",
    "gn-i2-s3",
    "commutator-s1",
    "commutator-s2",
    "commutator-s3",
];

/// Amplitudes of the logarithmic Sobolev sweep.
pub const LOG_SOBOLEV_AMPLITUDES: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];

/// Runs the inequality suite plus the logarithmic Sobolev amplitude sweep.
pub fn run_inequality_suite(opts: &SuiteOptions) -> Result<Vec<InequalityReport>, DriverError> {
    let to_config = |e: crate::inequality::InequalityError| DriverError::config(e.to_string());
    let grid_2d = Grid::new(2, opts.n_2d).map_err(|e| DriverError::config(e.to_string()))?;
    let grid_3d = Grid::new(3, opts.n_3d).map_err(|e| DriverError::config(e.to_string()))?;
    let mut reports = Vec::new();
    for id in SUITE {
        let id: InequalityId = id.parse().map_err(to_config)?;
        let three_d = matches!(id, InequalityId::Interpolation(i) if i.dim() == 3);
        let (grid, band, dim) = if three_d { (&grid_3d, opts.band_3d, 3) } else { (&grid_2d, opts.band_2d, 2) };
        let family = FieldFamily::new(FamilyKind::RandomBand, dim, opts.count, opts.seed, band);
        reports.push(fit_constants(&family, &id, grid).map_err(to_config)?);
    }
    let sweep = FieldFamily::new(
        FamilyKind::AmplitudeSweep { amplitudes: LOG_SOBOLEV_AMPLITUDES.to_vec() },
        2,
        LOG_SOBOLEV_AMPLITUDES.len(),
        opts.seed,
        opts.band_2d,
    );
    reports.push(fit_constants(&sweep, &InequalityId::LogSobolev { p: opts.p }, &grid_2d).map_err(to_config)?);
    Ok(reports)
}

/// Whether every sample evaluated and every scaling check passed.
pub fn suite_passed(reports: &[InequalityReport]) -> bool {
    reports.iter().all(|r| r.failures == 0 && r.scaling_check != Some(false))
}

/// Runs the suite and writes `out_dir/inequalities.ndjson`.
pub fn check_inequalities(opts: &SuiteOptions, out_dir: &Path) -> Result<Vec<InequalityReport>, DriverError> {
    let reports = run_inequality_suite(opts)?;
    OutputLayout::new(out_dir).create()?;
    let path = out_dir.join(INEQUALITY_FILE);
    let mut text: String = reports.iter().map(InequalityReport::to_ndjson).collect();
    let status = if suite_passed(&reports) { "completed" } else { "failed" };
    text.push_str(&json!({"status": status, "reports": reports.len()}).to_string());
    text.push('\n');
    fs::write(&path, text).map_err(|e| io_error("cannot write", &path, e))?;
    Ok(reports)
}
