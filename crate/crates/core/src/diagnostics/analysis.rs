//! Post-processing of record streams: energy law, BKM integral, running
//! sup of the H³ energy and the planar Grönwall envelope fit.

use serde::Serialize;

use super::{DiagnosticsError, DiagnosticsRecord};

/// Cumulative trapezoid integral of `values` sampled at `times`.
pub fn cumulative_trapezoid(times: &[f64], values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    for i in 0..times.len() {
        if i > 0 {
            acc += 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
        }
        out.push(acc);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyResidual {
    pub t: f64,
    /// `E(tₙ) − E(t₀) + ∫ν‖∇h‖²`.
    pub absolute: f64,
    /// `absolute / E(t₀)` (equal to `absolute` when `E(t₀) = 0`).
    pub relative: f64,
}

/// Discrete energy-law defect at each record.
pub fn energy_balance(records: &[DiagnosticsRecord]) -> Result<Vec<EnergyResidual>, DiagnosticsError> {
    if records.len() < 2 {
        return Err(DiagnosticsError::TooFewRecords { needed: 2, got: records.len() });
    }
    let times: Vec<f64> = records.iter().map(|r| r.t).collect();
    let diss: Vec<f64> = records.iter().map(|r| r.resistive_dissipation).collect();
    let integral = cumulative_trapezoid(&times, &diss);
    let e0 = records[0].energy;
    Ok(records
        .iter()
        .zip(integral)
        .map(|(r, d)| {
            let absolute = r.energy - e0 + d;
            EnergyResidual { t: r.t, absolute, relative: if e0 > 0.0 { absolute / e0 } else { absolute } }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BkmSeries {
    pub t: Vec<f64>,
    /// `∫_{t₀}^{t} ‖∇×u‖_BMO ds`, nondecreasing.
    pub integral: Vec<f64>,
    /// Earliest sampled `T*` with `∫_{T*}^{T} ‖∇×u‖_BMO ds ≤ ε`, `T` the last
    /// sample.
    pub tail_start: Option<f64>,
}

/// Cumulative BKM integral of the vorticity BMO seminorm.
pub fn bkm_accumulate(records: &[DiagnosticsRecord], epsilon: f64) -> BkmSeries {
    let t: Vec<f64> = records.iter().map(|r| r.t).collect();
    let b: Vec<f64> = records.iter().map(|r| r.curl_u_bmo).collect();
    let integral = cumulative_trapezoid(&t, &b);
    let tail_start =
        integral.last().and_then(|&total| integral.iter().position(|&i| total - i <= epsilon).map(|idx| t[idx]));
    BkmSeries { t, integral, tail_start }
}

/// Running sup of `‖∇³u‖² + ‖∇³h‖²` over records with `t ≥ t_star`.
pub fn m_running_sup(records: &[DiagnosticsRecord], t_star: f64) -> Vec<(f64, f64)> {
    running_max(records.iter().filter(|r| r.t >= t_star).map(|r| (r.t, r.hdot3_u.powi(2) + r.hdot3_h.powi(2))))
}

/// Running maximum of a time series.
pub fn running_max(series: impl IntoIterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
    let mut best = f64::NEG_INFINITY;
    series
        .into_iter()
        .map(|(t, v)| {
            best = best.max(v);
            (t, best)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GronwallOptions {
    /// Relative slack on `Q(t) ≤ B_C(t)` absorbing quadrature error.
    pub rel_slack: f64,
}

impl Default for GronwallOptions {
    fn default() -> Self {
        Self { rel_slack: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GronwallReport {
    /// Smallest `C ≥ 0` with `Q(t) ≤ B_C(t)` at every sample; infinite when
    /// `Q` grows while `∫‖∇h‖²` is still zero.
    pub fitted_c: f64,
    pub t: Vec<f64>,
    /// `Q(t) = ‖∇×u‖² + ‖∇×h‖² + ν∫‖∇(∇×h)‖²`.
    pub lhs: Vec<f64>,
    /// `B_C(t)` at the fitted constant.
    pub envelope: Vec<f64>,
    /// Samples with `Q > B_C` beyond the slack (zero unless `fitted_c` is infinite).
    pub violations: usize,
}

/// Fits the planar Grönwall envelope
/// `B_C(t) = Q(t₀) exp{(2C/ν) ∫‖∇h‖²}` to the record stream.
pub fn gronwall_2d_check(
    records: &[DiagnosticsRecord],
    nu: f64,
    opts: GronwallOptions,
) -> Result<GronwallReport, DiagnosticsError> {
    let first = records.first().ok_or(DiagnosticsError::TooFewRecords { needed: 1, got: 0 })?;
    let lhs: Vec<f64> = records
        .iter()
        .map(|r| r.gronwall_lhs.ok_or(DiagnosticsError::MissingField("gronwall_lhs")))
        .collect::<Result<_, _>>()?;
    let q0 = first.gronwall_lhs.expect("checked above");
    if q0 <= 0.0 {
        return Err(DiagnosticsError::NotApplicable("initial vorticity and current vanish".into()));
    }
    let t: Vec<f64> = records.iter().map(|r| r.t).collect();
    let grad_h_sq: Vec<f64> = records.iter().map(|r| r.hdot1_h * r.hdot1_h).collect();
    let integral = cumulative_trapezoid(&t, &grad_h_sq);

    let mut fitted_c = 0.0f64;
    for (&q, &i) in lhs.iter().zip(&integral) {
        let excess = (q / (q0 * (1.0 + opts.rel_slack))).ln();
        if excess <= 0.0 {
            continue;
        }
        if i > 0.0 {
            fitted_c = fitted_c.max(nu * excess / (2.0 * i));
        } else {
            fitted_c = f64::INFINITY;
        }
    }
    let envelope: Vec<f64> =
        integral.iter().map(|&i| if i == 0.0 { q0 } else { q0 * (2.0 * fitted_c / nu * i).exp() }).collect();
    let violations =
        lhs.iter().zip(&envelope).filter(|(q, b)| **q > **b * (1.0 + opts.rel_slack) * (1.0 + 1e-12)).count();
    Ok(GronwallReport { fitted_c, t, lhs, envelope, violations })
}

/// Whether two fitted constants agree within a relative band (`0.2` = ±20%).
pub fn constants_agree(coarse: f64, fine: f64, band: f64) -> bool {
    if coarse == 0.0 && fine == 0.0 {
        return true;
    }
    coarse.is_finite() && fine.is_finite() && (fine - coarse).abs() <= band * coarse.abs().max(fine.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(t: f64) -> DiagnosticsRecord {
        DiagnosticsRecord {
            t,
            nu: 1.0,
            energy: 0.0,
            resistive_dissipation: 0.0,
            energy_residual: 0.0,
            l2_u: 0.0,
            l2_h: 0.0,
            hdot1_u: 0.0,
            hdot1_h: 0.0,
            hdot2_h: 0.0,
            hdot3_u: 0.0,
            hdot3_h: 0.0,
            curl_u_linf: 0.0,
            curl_u_bmo: 0.0,
            bkm_integral: 0.0,
            m_of_t: 0.0,
            gronwall_lhs: None,
            gronwall_envelope: None,
        }
    }

    #[test]
    fn energy_balance_needs_two_records() {
        assert!(energy_balance(&[rec(0.0)]).is_err());
        let res = energy_balance(&[rec(0.0), rec(1.0)]).unwrap();
        assert!(res.iter().all(|r| r.absolute == 0.0));
    }

    #[test]
    fn bkm_constant_integrand_is_exact() {
        let records: Vec<_> = (0..=10).map(|i| DiagnosticsRecord { curl_u_bmo: 2.5, ..rec(i as f64 * 0.3) }).collect();
        let s = bkm_accumulate(&records, 0.1);
        assert!((s.integral.last().unwrap() - 2.5 * 3.0).abs() < 1e-14);
        assert_eq!(s.tail_start, Some(3.0));
        let zero = bkm_accumulate(&[rec(0.0), rec(1.0)], 0.1);
        assert_eq!(zero.integral, vec![0.0, 0.0]);
        assert_eq!(zero.tail_start, Some(0.0));
    }

    #[test]
    fn running_sup_examples() {
        let got: Vec<f64> = running_max([(0.0, 1.0), (1.0, 3.0), (2.0, 2.0), (3.0, 5.0)]).iter().map(|p| p.1).collect();
        assert_eq!(got, vec![1.0, 3.0, 3.0, 5.0]);
        let dec: Vec<f64> = running_max([(0.0, 4.0), (1.0, 3.0), (2.0, 1.0)]).iter().map(|p| p.1).collect();
        assert_eq!(dec, vec![4.0, 4.0, 4.0]);
        let records = vec![DiagnosticsRecord { hdot3_u: 2.0, ..rec(0.0) }];
        assert_eq!(m_running_sup(&records, 0.0), vec![(0.0, 4.0)]);
    }

    #[test]
    fn gronwall_degenerate_and_constant() {
        let zero = vec![DiagnosticsRecord { gronwall_lhs: Some(0.0), ..rec(0.0) }];
        assert!(matches!(
            gronwall_2d_check(&zero, 1.0, GronwallOptions::default()),
            Err(DiagnosticsError::NotApplicable(_))
        ));
        let flat: Vec<_> = (0..5).map(|i| DiagnosticsRecord { gronwall_lhs: Some(2.0), ..rec(i as f64) }).collect();
        let rep = gronwall_2d_check(&flat, 1.0, GronwallOptions::default()).unwrap();
        assert_eq!(rep.fitted_c, 0.0);
        assert_eq!(rep.violations, 0);
        assert!(gronwall_2d_check(&[rec(0.0)], 1.0, GronwallOptions::default()).is_err());
    }

    #[test]
    fn gronwall_fit_recovers_exponential_growth() {
        // Q = e^{t}, ‖∇h‖² = 1, ν = 2: ln Q = t = (2C/ν) t, so C = 1.
        let records: Vec<_> = (0..=20)
            .map(|i| {
                let t = i as f64 * 0.1;
                DiagnosticsRecord { hdot1_h: 1.0, gronwall_lhs: Some(t.exp()), ..rec(t) }
            })
            .collect();
        let rep = gronwall_2d_check(&records, 2.0, GronwallOptions { rel_slack: 0.0 }).unwrap();
        assert!((rep.fitted_c - 1.0).abs() < 1e-12);
        assert_eq!(rep.violations, 0);
        assert!(constants_agree(1.0, 1.15, 0.2));
        assert!(!constants_agree(1.0, 1.3, 0.2));
    }
}
