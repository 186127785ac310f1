//! One-step integrators.
//!
//! Only the resistive term is stiff. The integrating-factor scheme advances
//! `w = e^{−νΔ t} v` with classical RK4, so each magnetic mode decays by the
//! exact factor `e^{−ν|k|²dt}`; the IMEX-Euler scheme treats it implicitly.

use super::rhs::{primitive_nonlinear, vorticity_nonlinear};
use super::{MhdState, Scheme, StepError, StepperConfig, VorticityState};
use crate::spectral::SpectralScalar;

/// A set of spectral fields, some of which carry the resistive term.
pub(crate) trait Evolvable: Clone {
    fn time(&self) -> f64;
    fn set_time(&mut self, t: f64);
    /// `self += a * other` on every field.
    fn axpy(&mut self, other: &Self, a: f64);
    /// Applies `m(|k|²)` to every resistive field.
    fn apply_resistive(&mut self, m: &dyn Fn(f64) -> f64);
    /// Nonlinear (non-resistive) tendency and the largest field magnitude.
    fn nonlinear(&self) -> Result<(Self, f64), StepError>;
    fn finalize(&mut self);
    fn is_finite(&self) -> bool;
    fn dx(&self) -> f64;
}

fn multiply_modes(f: &mut SpectralScalar, m: &dyn Fn(f64) -> f64) {
    let grid = std::sync::Arc::clone(f.grid());
    for (c, &k2) in f.coeffs_mut().iter_mut().zip(grid.k_squared()) {
        *c *= m(k2);
    }
}

impl Evolvable for MhdState {
    fn time(&self) -> f64 {
        self.t
    }

    fn set_time(&mut self, t: f64) {
        self.t = t;
    }

    fn axpy(&mut self, other: &Self, a: f64) {
        self.u.add_scaled(&other.u, a);
        self.h.add_scaled(&other.h, a);
    }

    fn apply_resistive(&mut self, m: &dyn Fn(f64) -> f64) {
        for c in self.h.components_mut() {
            multiply_modes(c, m);
        }
    }

    fn nonlinear(&self) -> Result<(Self, f64), StepError> {
        let nl = primitive_nonlinear(&self.u, &self.h);
        Ok((Self { t: self.t, u: nl.du, h: nl.dh }, nl.max_speed))
    }

    fn finalize(&mut self) {
        self.enforce_invariants();
    }

    fn is_finite(&self) -> bool {
        MhdState::is_finite(self)
    }

    fn dx(&self) -> f64 {
        self.grid().dx()
    }
}

impl Evolvable for VorticityState {
    fn time(&self) -> f64 {
        self.t
    }

    fn set_time(&mut self, t: f64) {
        self.t = t;
    }

    fn axpy(&mut self, other: &Self, a: f64) {
        self.omega.add_scaled(&other.omega, a);
        self.current.add_scaled(&other.current, a);
    }

    fn apply_resistive(&mut self, m: &dyn Fn(f64) -> f64) {
        multiply_modes(&mut self.current, m);
    }

    fn nonlinear(&self) -> Result<(Self, f64), StepError> {
        let nl = vorticity_nonlinear(&self.omega, &self.current)?;
        Ok((Self { t: self.t, omega: nl.domega, current: nl.dcurrent }, nl.max_speed))
    }

    fn finalize(&mut self) {
        self.enforce_invariants();
    }

    fn is_finite(&self) -> bool {
        self.omega.is_finite() && self.current.is_finite()
    }

    fn dx(&self) -> f64 {
        self.omega.grid().dx()
    }
}

fn check_cfl(max_speed: f64, dx: f64, cfg: &StepperConfig, dt: f64) -> Result<(), StepError> {
    if max_speed > 0.0 {
        let limit = cfg.cfl_limit * dx / max_speed;
        if dt > limit {
            return Err(StepError::CflViolation { dt, limit });
        }
    }
    Ok(())
}

fn rk4_integrating_factor<S: Evolvable>(v: &S, cfg: &StepperConfig, dt: f64) -> Result<S, StepError> {
    let nu = cfg.nu;
    let half = move |k2: f64| (-nu * k2 * dt * 0.5).exp();
    let full = move |k2: f64| (-nu * k2 * dt).exp();

    let (a, speed) = v.nonlinear()?;
    check_cfl(speed, v.dx(), cfg, dt)?;

    let mut va = v.clone();
    va.axpy(&a, 0.5 * dt);
    va.apply_resistive(&half);
    let (b, _) = va.nonlinear()?;

    let mut ev = v.clone();
    ev.apply_resistive(&half);
    let mut vb = ev.clone();
    vb.axpy(&b, 0.5 * dt);
    let (c, _) = vb.nonlinear()?;

    let mut vc = ev.clone();
    let mut ec = c.clone();
    ec.apply_resistive(&half);
    vc.apply_resistive(&half);
    vc.axpy(&ec, dt);
    let (d, _) = vc.nonlinear()?;

    // E² v + dt/6 (E² a + 2E(b + c) + d)
    let mut acc = a;
    let mut bc = b;
    bc.axpy(&c, 1.0);
    bc.apply_resistive(&half);
    acc.apply_resistive(&full);
    acc.axpy(&bc, 2.0);
    acc.axpy(&d, 1.0);
    let mut out = v.clone();
    out.apply_resistive(&full);
    out.axpy(&acc, dt / 6.0);
    Ok(out)
}

fn imex_euler<S: Evolvable>(v: &S, cfg: &StepperConfig, dt: f64) -> Result<S, StepError> {
    let nu = cfg.nu;
    let (a, speed) = v.nonlinear()?;
    check_cfl(speed, v.dx(), cfg, dt)?;
    let mut out = v.clone();
    out.axpy(&a, dt);
    out.apply_resistive(&move |k2| 1.0 / (1.0 + nu * k2 * dt));
    Ok(out)
}

/// Advances by `dt` (which may be shorter than `cfg.dt` for a final partial
/// step) and re-imposes the state invariants.
pub(crate) fn advance<S: Evolvable>(v: &S, cfg: &StepperConfig, dt: f64) -> Result<S, StepError> {
    let mut out = match cfg.scheme {
        Scheme::IntegratingFactorRk4 => rk4_integrating_factor(v, cfg, dt)?,
        Scheme::ImexEuler => imex_euler(v, cfg, dt)?,
    };
    out.set_time(v.time() + dt);
    out.finalize();
    if !out.is_finite() {
        return Err(StepError::NonFinite { t: out.time() });
    }
    Ok(out)
}

/// Advances a primitive-form state by one step of `cfg.dt`.
pub fn step(state: &MhdState, cfg: &StepperConfig) -> Result<MhdState, StepError> {
    cfg.validate()?;
    advance(state, cfg, cfg.dt)
}

/// Advances a vorticity–current state by one step of `cfg.dt`.
pub fn step_vorticity(state: &VorticityState, cfg: &StepperConfig) -> Result<VorticityState, StepError> {
    cfg.validate()?;
    advance(state, cfg, cfg.dt)
}
