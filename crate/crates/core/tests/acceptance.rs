//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use mhd_core::diagnostics::{
    bmo_of_samples, constants_agree, dyadic_sides, energy_balance, gronwall_2d_check, parse_records, GronwallOptions,
};
use mhd_core::dynamics::{run, run_vorticity, RunObserver, RunOptions, RunStatus};
use mhd_core::inequality::{
    fit_constants, fit_fields, FamilyKind, FieldFamily, Fields, InequalityId, InequalityReport,
};
use mhd_core::scenarios::driver::{resume_from_snapshot, run_from_config};
use mhd_core::scenarios::{RawConfig, Snapshot};
use mhd_core::spectral::{curl2d, dealiased_product};
use mhd_core::{
    make_ic, DiagnosticsRecord, DiagnosticsTracker, Grid, MhdState, Scenario, SpectralScalar, StepperConfig,
    VorticityState,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn grid(dim: usize, n: usize) -> Arc<Grid> {
    Grid::new(dim, n).unwrap()
}

fn every_step() -> RunOptions {
    RunOptions { diagnostics_cadence: 1, ..RunOptions::default() }
}

fn run_records(
    state: MhdState,
    cfg: &StepperConfig,
    t_end: f64,
    options: RunOptions,
) -> (MhdState, Vec<DiagnosticsRecord>) {
    let mut records = Vec::new();
    let out = run(state, cfg, t_end, options, &mut records).unwrap();
    assert_eq!(out.status, RunStatus::Completed);
    (out.state, records)
}

fn energy_law() -> Outcome {
    let g = grid(2, 64);
    let ic = make_ic(&Scenario::OrszagTang { beta: 1.0 }, &g, 0).unwrap();
    let (_, records) = run_records(ic, &StepperConfig::new(1.0, 1e-3), 1.0, every_step());
    let worst = energy_balance(&records).unwrap().iter().map(|r| r.relative.abs()).fold(0.0, f64::max);
    outcome(worst <= 1e-5, format!("max relative energy residual {worst:.3e} (tol 1e-5)"))
}

fn exact_decay() -> Outcome {
    let g = grid(2, 64);
    let ic = make_ic(&Scenario::SingleModeMagnetic, &g, 0).unwrap();
    let (end, _) = run_records(ic, &StepperConfig::new(1.0, 1e-3), 1.0, RunOptions::default());
    let decay = (-1.0f64).exp();
    let hx = end.h.component(0).to_physical();
    let hy = end.h.component(1).to_physical();
    let mut err = 0.0f64;
    for idx in 0..g.len() {
        let x = g.coordinates(idx);
        err = err.max((hx[idx] - decay * x[1].sin()).abs()).max(hy[idx].abs());
    }
    outcome(err <= 1e-8, format!("max |h − e^(−t)(sin x₂, 0)| = {err:.3e} at t = 1 (tol 1e-8)"))
}

struct Drift {
    u0: mhd_core::SpectralVector,
    norm0: f64,
    worst: f64,
}

impl RunObserver for Drift {
    fn on_record(&mut self, _: &DiagnosticsRecord) -> Result<(), String> {
        Ok(())
    }

    fn on_step(&mut self, state: &MhdState, _: &DiagnosticsTracker) -> Result<(), String> {
        let d = mhd_core::diagnostics::sobolev_seminorm_vector(&state.u.sub(&self.u0), 0) / self.norm0;
        self.worst = self.worst.max(d);
        Ok(())
    }
}

fn steady_euler() -> Outcome {
    let g = grid(2, 64);
    let ic = make_ic(&Scenario::TaylorGreenEuler, &g, 0).unwrap();
    let norm0 = mhd_core::diagnostics::sobolev_seminorm_vector(&ic.u, 0);
    let mut drift = Drift { u0: ic.u.clone(), norm0, worst: 0.0 };
    let options = RunOptions { diagnostics_cadence: 1000, ..RunOptions::default() };
    run(ic, &StepperConfig::new(1.0, 1e-3), 1.0, options, &mut drift).unwrap();
    outcome(drift.worst <= 1e-8, format!("max ‖u(t) − u(0)‖/‖u(0)‖ = {:.3e} over [0, 1] (tol 1e-8)", drift.worst))
}

fn form_consistency() -> Outcome {
    let g = grid(2, 64);
    let ic = make_ic(&Scenario::OrszagTang { beta: 1.0 }, &g, 0).unwrap();
    let cfg = StepperConfig::new(1.0, 1e-3);
    let vort = run_vorticity(VorticityState::from_primitive(&ic).unwrap(), &cfg, 1.0).unwrap();
    let options = RunOptions { diagnostics_cadence: 1000, ..RunOptions::default() };
    let (end, _) = run_records(ic, &cfg, 1.0, options);
    let omega = curl2d(&end.u).unwrap().to_physical();
    let other = vort.omega.to_physical();
    let diff = omega.iter().zip(&other).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    outcome(diff <= 1e-6, format!("max |ω_primitive − ω_vorticity| = {diff:.3e} at t = 1 (tol 1e-6)"))
}

/// Orszag–Tang records on `[0, 5]` at resistivity `nu` for N = 64 and 128.
struct LongRuns {
    nu: f64,
    coarse: Vec<DiagnosticsRecord>,
    fine: Vec<DiagnosticsRecord>,
}

fn orszag_tang_long(nu: f64) -> LongRuns {
    let records = |n: usize| {
        let ic = make_ic(&Scenario::OrszagTang { beta: 1.0 }, &grid(2, n), 0).unwrap();
        let options = RunOptions { diagnostics_cadence: 10, ..RunOptions::default() };
        run_records(ic, &StepperConfig::new(nu, 1e-3), 5.0, options).1
    };
    LongRuns { nu, coarse: records(64), fine: records(128) }
}

fn gronwall(runs: &[LongRuns]) -> Outcome {
    let opts = GronwallOptions::default();
    let mut pass = true;
    let mut notes = Vec::new();
    for r in runs {
        let a = gronwall_2d_check(&r.coarse, r.nu, opts).unwrap();
        let b = gronwall_2d_check(&r.fine, r.nu, opts).unwrap();
        let finite = a.lhs.iter().chain(&b.lhs).all(|q| q.is_finite());
        let below = a.violations == 0 && b.violations == 0;
        let stable = constants_agree(a.fitted_c, b.fitted_c, 0.2);
        pass &= finite && below && stable;
        let q_max = |l: &[f64]| l.iter().cloned().fold(0.0, f64::max);
        notes.push(format!(
            "ν = {}: C(64) = {:.4e}, C(128) = {:.4e} (±20%: {stable}); finite {finite}; below envelope {below}; Q₀ = {:.2}, max Q = {:.2}/{:.2}",
            r.nu,
            a.fitted_c,
            b.fitted_c,
            a.lhs[0],
            q_max(&a.lhs),
            q_max(&b.lhs)
        ));
    }
    outcome(pass, notes.join("; "))
}

fn bkm_monitor(runs: &[LongRuns]) -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for r in runs {
        for (n, records) in [(64, &r.coarse), (128, &r.fine)] {
            let o = bkm_single(records);
            pass &= o.pass;
            notes.push(format!("ν = {}, N = {n}: {}", r.nu, o.detail));
        }
    }
    outcome(pass, notes.join("; "))
}

fn bkm_single(records: &[DiagnosticsRecord]) -> Outcome {
    let integral: Vec<f64> = records.iter().map(|r| r.bkm_integral).collect();
    let finite = integral.iter().all(|v| v.is_finite());
    let monotone = integral.windows(2).all(|w| w[1] >= w[0]);
    let rate_at = |t: f64| -> f64 {
        let i = records.iter().position(|r| (r.t - t).abs() < 1e-9).expect("record at t");
        let (lo, hi) = if i + 1 < records.len() { (i.saturating_sub(1), i + 1) } else { (i - 1, i) };
        (records[hi].bkm_integral - records[lo].bkm_integral) / (records[hi].t - records[lo].t)
    };
    let (r1, r5) = (rate_at(1.0), rate_at(5.0));
    outcome(
        finite && monotone && r5 <= 3.0 * r1,
        format!(
            "integral(5) = {:.4}; finite {finite}; nondecreasing {monotone}; rate(5)/rate(1) = {:.3} (tol 3)",
            integral.last().unwrap(),
            r5 / r1
        ),
    )
}

fn strict_scaling(report: &InequalityReport) -> bool {
    report.samples.iter().all(|s| match (s.ratio, s.scaling_deviation) {
        (Some(r), Some(d)) => d <= 1e-12 * r.abs() || (r == 0.0 && d <= 1e-15),
        _ => false,
    })
}

fn inequality_suite() -> Outcome {
    let ids = [
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
    let (g2, g3) = (grid(2, 64), grid(3, 16));
    let mut pass = true;
    let mut worst_seed = 0.0f64;
    let mut notes = Vec::new();
    for id in ids {
        let id: InequalityId = id.parse().unwrap();
        let three_d = matches!(id, InequalityId::Interpolation(i) if i.dim() == 3);
        let (g, dim, band) = if three_d { (&g3, 3, 4) } else { (&g2, 2, 8) };
        let a = fit_constants(&FieldFamily::new(FamilyKind::RandomBand, dim, 200, 1, band), &id, g).unwrap();
        let b = fit_constants(&FieldFamily::new(FamilyKind::RandomBand, dim, 200, 2, band), &id, g).unwrap();
        let finite = a.failures == 0 && b.failures == 0 && a.ratios().iter().chain(&b.ratios()).all(|r| r.is_finite());
        let scaling = strict_scaling(&a) && strict_scaling(&b);
        let (ca, cb) = (a.fitted_constant.unwrap_or(f64::NAN), b.fitted_constant.unwrap_or(f64::NAN));
        let dev = (ca - cb).abs() / ca.max(cb);
        worst_seed = worst_seed.max(dev);
        let ok = finite && scaling && dev <= 0.1;
        if !ok {
            notes.push(format!("{id}: finite {finite}, scaling {scaling}, seeds {ca:.4}/{cb:.4}"));
        }
        pass &= ok;
    }
    // Commutator s = 3 under refinement: the same fields on 64² and 128².
    let fields = FieldFamily::new(FamilyKind::RandomBand, 2, 200, 1, 8).vector_fields(&g2).unwrap();
    let g128 = grid(2, 128);
    let fine: Vec<_> = fields.iter().map(|v| v.resample(&g128).unwrap()).collect();
    let id = InequalityId::Commutator { s: 3 };
    let rc = fit_fields(&id, &Fields::Vector(fields));
    let rf = fit_fields(&id, &Fields::Vector(fine));
    let per_sample = rc.ratios().iter().zip(rf.ratios()).map(|(a, b)| (a - b).abs() / a.max(b)).fold(0.0, f64::max);
    let (cc, cf) = (rc.fitted_constant.unwrap(), rf.fitted_constant.unwrap());
    let refine = (cc - cf).abs() / cc.max(cf);
    let refine_ok = refine <= 0.1 && per_sample <= 0.1 && rc.failures == 0 && rf.failures == 0;
    pass &= refine_ok;
    notes.push(format!(
        "worst two-seed deviation {worst_seed:.3} (tol 0.1); commutator s=3 64²→128²: constant {cc:.4}→{cf:.4}, worst per-sample {per_sample:.2e}"
    ));
    outcome(pass, notes.join("; "))
}

fn log_sobolev_sweep() -> Outcome {
    let g = grid(2, 64);
    let family =
        FieldFamily::new(FamilyKind::AmplitudeSweep { amplitudes: vec![1.0, 10.0, 100.0, 1000.0] }, 2, 4, 3, 8);
    let report = fit_constants(&family, &InequalityId::LogSobolev { p: 4.0 }, &g).unwrap();
    let r = report.ratios();
    let bounded = r.len() == 4 && r.iter().all(|v| v.is_finite() && *v >= 0.0);
    let decreasing = bounded && r[3] < r[2];
    outcome(bounded && decreasing, format!("ratios at α = 1, 10, 10², 10³: {r:.4?}"))
}

fn convolution_oracle(f: &SpectralScalar, g: &SpectralScalar) -> Vec<Complex64> {
    let grid = f.grid();
    let (n, cut, dim) = (grid.n() as i64, grid.cutoff(), grid.dim());
    let kept: Vec<(usize, [i64; 3])> =
        (0..grid.len()).map(|i| (i, grid.k_vec(i))).filter(|(_, k)| k.iter().all(|c| c.abs() <= cut)).collect();
    let index =
        |k: &[i64; 3]| -> usize { (0..dim).fold(0usize, |acc, a| acc * n as usize + k[a].rem_euclid(n) as usize) };
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (ip, p) in &kept {
        for (iq, q) in &kept {
            let k = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
            if k.iter().all(|c| c.abs() <= cut) {
                out[index(&k)] += f.coeffs()[*ip] * g.coeffs()[*iq];
            }
        }
    }
    out
}

fn bmo_oracle(values: &[f64], dim: usize, n: usize) -> f64 {
    let mut best = 0.0f64;
    let mut side = n;
    while side >= 4 {
        let starts: Vec<usize> = (0..n).step_by(side).collect();
        let mut origins: Vec<[usize; 3]> = Vec::new();
        for &a in &starts {
            for &b in &starts {
                if dim == 2 {
                    origins.push([a, b, 0]);
                } else {
                    for &c in &starts {
                        origins.push([a, b, c]);
                    }
                }
            }
        }
        for o in origins {
            let mut pts = Vec::new();
            if dim == 2 {
                for a in 0..side {
                    for b in 0..side {
                        pts.push(values[(o[0] + a) * n + o[1] + b]);
                    }
                }
            } else {
                for a in 0..side {
                    for b in 0..side {
                        for c in 0..side {
                            pts.push(values[((o[0] + a) * n + o[1] + b) * n + o[2] + c]);
                        }
                    }
                }
            }
            let mut sum = 0.0;
            for v in &pts {
                sum += v;
            }
            let mean = sum / pts.len() as f64;
            let mut dev = 0.0;
            for v in &pts {
                dev += (v - mean).abs();
            }
            best = best.max(dev / pts.len() as f64);
        }
        side /= 2;
    }
    best
}

fn brute_force_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut conv_err = 0.0f64;
    for dim in [2, 3] {
        let g = grid(dim, 16);
        for _ in 0..3 {
            let f = mhd_core::random::random_scalar(&g, 5, &mut rng);
            let h = mhd_core::random::random_scalar(&g, 5, &mut rng);
            let got = dealiased_product(&f, &h).unwrap();
            let want = convolution_oracle(&f, &h);
            conv_err = conv_err.max(got.coeffs().iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
        }
    }
    let mut bmo_exact = true;
    for (dim, n) in [(2, 8), (2, 16), (2, 32), (3, 8), (3, 16)] {
        assert_eq!(dyadic_sides(n).last(), Some(&4));
        for _ in 0..5 {
            let values: Vec<f64> = (0..n.pow(dim as u32)).map(|_| rng.random_range(-3.0..3.0)).collect();
            bmo_exact &= bmo_of_samples(&values, dim, n) == bmo_oracle(&values, dim, n);
        }
    }
    outcome(
        conv_err <= 1e-12 && bmo_exact,
        format!("product vs convolution max error {conv_err:.3e} (tol 1e-12); BMO exact match {bmo_exact}"),
    )
}

fn write_config(dir: &Path, t_end: f64) -> mhd_core::RunConfig {
    let text = format!(
        "dim = 2\nn_per_axis = 32\nnu = 0.5\ndt = 1e-3\nt_end = {t_end}\nic = orszag-tang\n\
         diagnostics_cadence = 10\nsnapshot_cadence = 100\nout_dir = {}\n",
        dir.display()
    );
    RawConfig::parse(&text).unwrap().validate(true).unwrap()
}

fn infrastructure() -> Outcome {
    let root = tempfile::tempdir().unwrap();
    // Snapshot bytes round trip.
    let g = grid(2, 32);
    let state = make_ic(&Scenario::RandomBand { band: 6, amplitude: 1.0 }, &g, 17).unwrap();
    let snap = Snapshot::from_state(&state);
    let path = root.path().join("rt.bin");
    snap.write(&path).unwrap();
    let back = Snapshot::read(&path).unwrap();
    let bit_exact = back == snap
        && back.payload.iter().zip(&snap.payload).all(|(a, b)| a.to_bits() == b.to_bits())
        && std::fs::read(&path).unwrap() == back.to_bytes();

    // Uninterrupted run to 0.2 against run to 0.1 plus resume.
    let full = root.path().join("full");
    let split = root.path().join("split");
    run_from_config(&write_config(&full, 0.2)).unwrap();
    run_from_config(&write_config(&split, 0.1)).unwrap();
    resume_from_snapshot(&write_config(&split, 0.2), &split.join("snap_100.bin")).unwrap();
    let a = parse_records(&std::fs::read_to_string(full.join("diag.ndjson")).unwrap());
    let b = parse_records(&std::fs::read_to_string(split.join("diag.ndjson")).unwrap());
    let mut worst = 0.0f64;
    let mut matched = 0;
    for r in b.iter().filter(|r| r.t > 0.1 + 1e-9) {
        if let Some(o) = a.iter().find(|o| (o.t - r.t).abs() < 1e-9) {
            matched += 1;
            let pairs = [
                (r.energy, o.energy),
                (r.energy_residual, o.energy_residual),
                (r.hdot1_u, o.hdot1_u),
                (r.hdot3_h, o.hdot3_h),
                (r.curl_u_linf, o.curl_u_linf),
                (r.curl_u_bmo, o.curl_u_bmo),
                (r.bkm_integral, o.bkm_integral),
                (r.m_of_t, o.m_of_t),
                (r.gronwall_lhs.unwrap(), o.gronwall_lhs.unwrap()),
            ];
            for (x, y) in pairs {
                worst = worst.max((x - y).abs() / y.abs().max(1.0));
            }
        }
    }
    let resume_ok = matched == 10 && worst <= 1e-10;

    // Determinism.
    let first = std::fs::read(full.join("diag.ndjson")).unwrap();
    run_from_config(&write_config(&full, 0.2)).unwrap();
    let deterministic = first == std::fs::read(full.join("diag.ndjson")).unwrap();
    outcome(
        bit_exact && resume_ok && deterministic,
        format!(
            "snapshot bit-exact {bit_exact}; resume max deviation {worst:.2e} over {matched} records (tol 1e-10); byte-identical rerun {deterministic}"
        ),
    )
}

fn main() {
    let mut failures = 0;
    let mut report = |n: usize, name: &str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] {n:>2} {name}: {} ({:.1}s)", o.detail, start.elapsed().as_secs_f64());
        if !o.pass {
            failures += 1;
        }
    };
    report(1, "energy law", &energy_law);
    report(2, "exact resistive decay", &exact_decay);
    report(3, "steady Euler invariance", &steady_euler);
    report(4, "primitive vs vorticity form", &form_consistency);
    let long_start = Instant::now();
    let runs = [orszag_tang_long(1.0), orszag_tang_long(0.1)];
    println!("       Orszag–Tang runs on [0, 5] for criteria 5 and 6 took {:.1}s", long_start.elapsed().as_secs_f64());
    report(5, "2D H¹ Grönwall envelope", &|| gronwall(&runs));
    report(6, "BKM monitor", &|| bkm_monitor(&runs));
    report(7, "inequality suite", &inequality_suite);
    report(8, "log-Sobolev sweep", &log_sobolev_sweep);
    report(9, "brute-force oracles", &brute_force_oracles);
    report(10, "snapshot, resume, determinism", &infrastructure);
    println!("acceptance: {} of 10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
