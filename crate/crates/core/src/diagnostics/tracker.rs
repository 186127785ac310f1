//! Online computation of diagnostics records during a run.

use serde::{Deserialize, Serialize};

use super::bmo::bmo_seminorm;
use super::norms::{grid_lp_norm, sobolev_seminorm, sobolev_seminorm_vector};
use super::DiagnosticsRecord;
use crate::dynamics::MhdState;
use crate::spectral::{curl3d, SpectralScalar};

/// Instantaneous quantities of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub energy: f64,
    pub resistive_dissipation: f64,
    pub l2_u: f64,
    pub l2_h: f64,
    pub hdot1_u: f64,
    pub hdot1_h: f64,
    pub hdot2_h: f64,
    pub hdot3_u: f64,
    pub hdot3_h: f64,
    pub curl_u_linf: f64,
    pub curl_u_bmo: f64,
    /// `‖∇×u‖² + ‖∇×h‖²` (planar only).
    pub curl_sq: Option<f64>,
    /// `‖∇(∇×h)‖²` (planar only).
    pub grad_curl_h_sq: Option<f64>,
}

fn sup_norm(f: &SpectralScalar) -> f64 {
    grid_lp_norm(&f.to_physical(), f.grid().dim(), f64::INFINITY)
}

/// Evaluates every instantaneous diagnostic of `state`.
///
/// In 3D the vorticity sup norm and BMO seminorm are sums over the
/// components of `∇×u`.
pub fn sample_state(state: &MhdState, nu: f64) -> Sample {
    let l2_u = sobolev_seminorm_vector(&state.u, 0);
    let l2_h = sobolev_seminorm_vector(&state.h, 0);
    let hdot1_h = sobolev_seminorm_vector(&state.h, 1);
    let (curl_u_linf, curl_u_bmo, curl_sq, grad_curl_h_sq) = if state.dim() == 2 {
        let (omega, current) = state.curls_2d().expect("planar state");
        let curl_sq = sobolev_seminorm(&omega, 0).powi(2) + sobolev_seminorm(&current, 0).powi(2);
        (sup_norm(&omega), bmo_seminorm(&omega), Some(curl_sq), Some(sobolev_seminorm(&current, 1).powi(2)))
    } else {
        let omega = curl3d(&state.u).expect("3D state");
        let linf = omega.components().iter().map(sup_norm).sum();
        let bmo = omega.components().iter().map(bmo_seminorm).sum();
        (linf, bmo, None, None)
    };
    Sample {
        t: state.t,
        energy: 0.5 * (l2_u * l2_u + l2_h * l2_h),
        resistive_dissipation: nu * hdot1_h * hdot1_h,
        l2_u,
        l2_h,
        hdot1_u: sobolev_seminorm_vector(&state.u, 1),
        hdot1_h,
        hdot2_h: sobolev_seminorm_vector(&state.h, 2),
        hdot3_u: sobolev_seminorm_vector(&state.u, 3),
        hdot3_h: sobolev_seminorm_vector(&state.h, 3),
        curl_u_linf,
        curl_u_bmo,
        curl_sq,
        grad_curl_h_sq,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Previous {
    t: f64,
    dissipation: f64,
    bmo: f64,
    grad_h_sq: f64,
    grad_curl_h_sq: f64,
}

/// Running integrals and suprema accumulated along a run.
///
/// Serializable so a resumed run continues the same series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsTracker {
    nu: f64,
    m_start: Option<f64>,
    energy0: f64,
    curl_sq0: Option<f64>,
    previous: Option<Previous>,
    dissipation_integral: f64,
    bkm_integral: f64,
    m_of_t: f64,
    grad_h_sq_integral: f64,
    grad_curl_h_sq_integral: f64,
    /// Steps taken so far by the owning run.
    pub steps: u64,
}

impl DiagnosticsTracker {
    /// `m_start` is the time from which the running sup of
    /// `‖∇³u‖² + ‖∇³h‖²` is taken; `None` means the first sample.
    pub fn new(nu: f64, m_start: Option<f64>) -> Self {
        Self {
            nu,
            m_start,
            energy0: 0.0,
            curl_sq0: None,
            previous: None,
            dissipation_integral: 0.0,
            bkm_integral: 0.0,
            m_of_t: 0.0,
            grad_h_sq_integral: 0.0,
            grad_curl_h_sq_integral: 0.0,
            steps: 0,
        }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Time of the last observed sample.
    pub fn last_time(&self) -> Option<f64> {
        self.previous.map(|p| p.t)
    }

    pub fn observe_state(&mut self, state: &MhdState) -> DiagnosticsRecord {
        let s = sample_state(state, self.nu);
        self.observe(&s)
    }

    pub fn observe(&mut self, s: &Sample) -> DiagnosticsRecord {
        let grad_h_sq = s.hdot1_h * s.hdot1_h;
        let grad_curl_h_sq = s.grad_curl_h_sq.unwrap_or(0.0);
        match self.previous {
            None => {
                self.energy0 = s.energy;
                self.curl_sq0 = s.curl_sq;
            }
            Some(p) => {
                let dt = s.t - p.t;
                self.dissipation_integral += 0.5 * dt * (p.dissipation + s.resistive_dissipation);
                self.bkm_integral += 0.5 * dt * (p.bmo + s.curl_u_bmo);
                self.grad_h_sq_integral += 0.5 * dt * (p.grad_h_sq + grad_h_sq);
                self.grad_curl_h_sq_integral += 0.5 * dt * (p.grad_curl_h_sq + grad_curl_h_sq);
            }
        }
        let m_value = s.hdot3_u * s.hdot3_u + s.hdot3_h * s.hdot3_h;
        if self.m_start.is_none_or(|t_star| s.t >= t_star) {
            self.m_of_t = self.m_of_t.max(m_value);
        }
        self.previous = Some(Previous {
            t: s.t,
            dissipation: s.resistive_dissipation,
            bmo: s.curl_u_bmo,
            grad_h_sq,
            grad_curl_h_sq,
        });
        let (gronwall_lhs, gronwall_envelope) = match (s.curl_sq, self.curl_sq0) {
            (Some(q), Some(q0)) => (
                Some(q + self.nu * self.grad_curl_h_sq_integral),
                Some(q0 * (2.0 / self.nu * self.grad_h_sq_integral).exp()),
            ),
            _ => (None, None),
        };
        DiagnosticsRecord {
            t: s.t,
            nu: self.nu,
            energy: s.energy,
            resistive_dissipation: s.resistive_dissipation,
            energy_residual: s.energy - self.energy0 + self.dissipation_integral,
            l2_u: s.l2_u,
            l2_h: s.l2_h,
            hdot1_u: s.hdot1_u,
            hdot1_h: s.hdot1_h,
            hdot2_h: s.hdot2_h,
            hdot3_u: s.hdot3_u,
            hdot3_h: s.hdot3_h,
            curl_u_linf: s.curl_u_linf,
            curl_u_bmo: s.curl_u_bmo,
            bkm_integral: self.bkm_integral,
            m_of_t: self.m_of_t,
            gronwall_lhs,
            gronwall_envelope,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Grid, SpectralVector};
    use std::f64::consts::PI;

    #[test]
    fn single_mode_sample() {
        let g = Grid::new(2, 32).unwrap();
        let h = SpectralVector::from_fn(&g, |x| [x[1].sin(), 0.0, 0.0]);
        let s = MhdState::new(0.0, SpectralVector::zeros(&g), h).unwrap();
        let r = sample_state(&s, 1.0);
        assert!((r.energy - PI * PI).abs() < 1e-12);
        assert!((r.l2_h - PI * 2f64.sqrt()).abs() < 1e-12);
        assert!((r.resistive_dissipation - 2.0 * PI * PI).abs() < 1e-12);
        assert_eq!(r.curl_u_linf, 0.0);
        assert!((r.curl_sq.unwrap() - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn integrals_accumulate_by_trapezoid() {
        let mut tr = DiagnosticsTracker::new(1.0, None);
        let base = Sample {
            t: 0.0,
            energy: 1.0,
            resistive_dissipation: 0.0,
            l2_u: 0.0,
            l2_h: 0.0,
            hdot1_u: 0.0,
            hdot1_h: 0.0,
            hdot2_h: 0.0,
            hdot3_u: 1.0,
            hdot3_h: 0.0,
            curl_u_linf: 2.0,
            curl_u_bmo: 2.0,
            curl_sq: None,
            grad_curl_h_sq: None,
        };
        tr.observe(&base);
        let r = tr.observe(&Sample { t: 0.5, curl_u_bmo: 4.0, hdot3_u: 0.5, ..base.clone() });
        assert!((r.bkm_integral - 1.5).abs() < 1e-15);
        assert_eq!(r.m_of_t, 1.0);
        assert_eq!(r.energy_residual, 0.0);
        assert!(r.gronwall_lhs.is_none());
    }
}
