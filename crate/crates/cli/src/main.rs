//! `mhd`: run, resume and inspect pseudo-spectral MHD simulations.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mhd_core::scenarios::driver::{
    check_inequalities, resume_from_snapshot, run_from_config, suite_passed, write_ic, DriverError, SuiteOptions,
};
use mhd_core::scenarios::{ConfigError, RawConfig};
use mhd_core::RunConfig;
use serde_json::json;

#[derive(Parser)]
#[command(name = "mhd", version, about = "Inviscid resistive MHD on the periodic torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured simulation from its initial condition.
    Run(RunArgs),
    /// Continue a run from a snapshot.
    Resume {
        #[command(flatten)]
        run: RunArgs,
        /// Snapshot to continue from.
        #[arg(long)]
        snapshot: PathBuf,
    },
    /// Write the initial condition as a snapshot.
    Ic {
        #[command(flatten)]
        run: RunArgs,
        /// Output path (default: <out>/snap_0.bin).
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Fit the constants of the inequality suite on random field families.
    CheckInequalities {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fields per family.
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Exponent of the logarithmic Sobolev check.
        #[arg(long, default_value_t = 4.0)]
        p: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long = "t-end")]
    t_end: Option<String>,
    /// `N`, `NxN` or `NxNxN`.
    #[arg(long)]
    grid: Option<String>,
    /// Scenario, e.g. `orszag-tang` or `random-band band=4`.
    #[arg(long)]
    ic: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_grid(spec: &str) -> Result<(usize, usize), ConfigError> {
    let bad =
        || ConfigError::Validation { key: "grid".into(), constraint: format!("must be N, NxN or NxNxN, got `{spec}`") };
    let sizes: Vec<usize> = spec.split('x').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    match sizes.as_slice() {
        [n] => Ok((2, *n)),
        [a, b] if a == b => Ok((2, *a)),
        [a, b, c] if a == b && b == c => Ok((3, *a)),
        _ => Err(bad()),
    }
}

impl RunArgs {
    fn resolve(&self, require_ic: bool) -> Result<RunConfig, ConfigError> {
        let mut raw = match &self.config {
            Some(path) => RawConfig::load(path)?,
            None => RawConfig::default(),
        };
        raw.apply_env();
        let flags =
            [("nu", &self.nu), ("dt", &self.dt), ("t_end", &self.t_end), ("ic", &self.ic), ("seed", &self.seed)];
        for (key, value) in flags {
            if let Some(v) = value {
                raw.set(key, v.as_str())?;
            }
        }
        if let Some(spec) = &self.grid {
            let (dim, n) = parse_grid(spec)?;
            raw.set("dim", dim.to_string())?;
            raw.set("n_per_axis", n.to_string())?;
        }
        if let Some(out) = &self.out {
            raw.set("out_dir", out.to_string_lossy())?;
        }
        raw.validate(require_ic)
    }
}

fn config_error(e: ConfigError) -> DriverError {
    DriverError::config(e.to_string())
}

fn execute(command: Command) -> Result<(String, u8), DriverError> {
    match command {
        Command::Run(args) => {
            let cfg = args.resolve(true).map_err(config_error)?;
            let summary = run_from_config(&cfg)?;
            Ok((summary.status_line(), summary.exit_code() as u8))
        }
        Command::Resume { run, snapshot } => {
            let cfg = run.resolve(false).map_err(config_error)?;
            let summary = resume_from_snapshot(&cfg, &snapshot)?;
            Ok((summary.status_line(), summary.exit_code() as u8))
        }
        Command::Ic { run, snapshot } => {
            let cfg = run.resolve(true).map_err(config_error)?;
            let path = write_ic(&cfg, snapshot.as_deref())?;
            Ok((status("completed", &path), 0))
        }
        Command::CheckInequalities { seed, count, p, out } => {
            let opts = SuiteOptions { seed, count, p, ..SuiteOptions::default() };
            let reports = check_inequalities(&opts, &out)?;
            for r in &reports {
                let c = r.fitted_constant.map_or("-".to_string(), |c| format!("{c:.6e}"));
                eprintln!("{:<16} C = {c}  failures = {}", r.inequality_id, r.failures);
            }
            let (state, code) = if suite_passed(&reports) { ("completed", 0) } else { ("failed", 1) };
            Ok((json!({"status": state, "reports": reports.len()}).to_string(), code))
        }
    }
}

fn status(state: &str, path: &Path) -> String {
    let name = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    json!({"status": state, "snapshot": name}).to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok((line, code)) => {
            println!("{line}");
            ExitCode::from(code)
        }
        Err(e) => {
            println!("{}", e.status_line());
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
