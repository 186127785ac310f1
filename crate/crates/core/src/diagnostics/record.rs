use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// One time sample of every monitored quantity.
///
/// `gronwall_lhs` is `‖∇×u‖² + ‖∇×h‖² + ν∫‖∇(∇×h)‖²` and
/// `gronwall_envelope` the exponential envelope with unit constant,
/// `(‖∇×u₀‖² + ‖∇×h₀‖²)·exp{(2/ν)∫‖∇h‖²}`; both are planar-only and `None`
/// in 3D.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub nu: f64,
    pub energy: f64,
    pub resistive_dissipation: f64,
    pub energy_residual: f64,
    pub l2_u: f64,
    pub l2_h: f64,
    pub hdot1_u: f64,
    pub hdot1_h: f64,
    pub hdot2_h: f64,
    pub hdot3_u: f64,
    pub hdot3_h: f64,
    pub curl_u_linf: f64,
    pub curl_u_bmo: f64,
    pub bkm_integral: f64,
    pub m_of_t: f64,
    pub gronwall_lhs: Option<f64>,
    pub gronwall_envelope: Option<f64>,
}

/// Decimal with 17 significant digits; non-finite values become `null`.
pub(crate) fn fmt_float(out: &mut String, x: f64) {
    if x.is_finite() {
        write!(out, "{x:.16e}").expect("writing to a String");
    } else {
        out.push_str("null");
    }
}

impl DiagnosticsRecord {
    /// Single NDJSON line (no trailing newline), fields in declaration order.
    pub fn to_ndjson(&self) -> String {
        let fields: [(&str, Option<f64>); 18] = [
            ("t", Some(self.t)),
            ("nu", Some(self.nu)),
            ("energy", Some(self.energy)),
            ("resistive_dissipation", Some(self.resistive_dissipation)),
            ("energy_residual", Some(self.energy_residual)),
            ("l2_u", Some(self.l2_u)),
            ("l2_h", Some(self.l2_h)),
            ("hdot1_u", Some(self.hdot1_u)),
            ("hdot1_h", Some(self.hdot1_h)),
            ("hdot2_h", Some(self.hdot2_h)),
            ("hdot3_u", Some(self.hdot3_u)),
            ("hdot3_h", Some(self.hdot3_h)),
            ("curl_u_linf", Some(self.curl_u_linf)),
            ("curl_u_bmo", Some(self.curl_u_bmo)),
            ("bkm_integral", Some(self.bkm_integral)),
            ("m_of_t", Some(self.m_of_t)),
            ("gronwall_lhs", self.gronwall_lhs),
            ("gronwall_envelope", self.gronwall_envelope),
        ];
        let mut out = String::with_capacity(600);
        out.push('{');
        for (i, (name, value)) in fields.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('"');
            out.push_str(name);
            out.push_str("\":");
            match value {
                Some(v) => fmt_float(&mut out, *v),
                None => out.push_str("null"),
            }
        }
        out.push('}');
        out
    }

    /// Parses one NDJSON line; returns `None` for non-record lines such as
    /// status lines.
    pub fn from_ndjson(line: &str) -> Option<Self> {
        serde_json::from_str(line).ok()
    }
}

/// Reads every record line of an NDJSON document, skipping other lines.
pub fn parse_records(text: &str) -> Vec<DiagnosticsRecord> {
    text.lines().filter_map(DiagnosticsRecord::from_ndjson).collect()
}
