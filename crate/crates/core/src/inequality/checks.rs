//! Per-field evaluation of the inequalities.

use serde::Serialize;

use super::{InequalityError, Interpolation};
use crate::diagnostics::{
    bmo_seminorm, bmo_seminorm_vector, grid_lp_norm, pointwise_magnitude, sobolev_seminorm, sobolev_seminorm_vector,
};
use crate::spectral::{advect, advect_scalar, curl2d, curl3d, derivative_multi, SpectralScalar, SpectralVector};

/// One evaluated inequality: `ratio = lhs / rhs`, `rhs` without constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ratio {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

fn ratio(lhs: f64, rhs: f64) -> Result<Ratio, InequalityError> {
    if !(rhs > 0.0) || !rhs.is_finite() || !lhs.is_finite() {
        return Err(InequalityError::DegenerateField(format!("lhs = {lhs}, rhs = {rhs}")));
    }
    Ok(Ratio { lhs, rhs, ratio: lhs / rhs })
}

fn require_finite(components: &[SpectralScalar]) -> Result<(), InequalityError> {
    if components.iter().all(SpectralScalar::is_finite) {
        Ok(())
    } else {
        Err(InequalityError::DegenerateField("non-finite coefficients".into()))
    }
}

fn require_solenoidal(u: &SpectralVector) -> Result<(), InequalityError> {
    if u.is_divergence_free(1e-10) {
        Ok(())
    } else {
        Err(InequalityError::InvalidParameter("field is not divergence-free".into()))
    }
}

/// All ordered multi-indices of length `order` over `dim` axes.
fn multi_indices(dim: usize, order: u32) -> Vec<Vec<usize>> {
    (0..order).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|j| {
                (0..dim).map(move |a| {
                    let mut next = j.clone();
                    next.push(a);
                    next
                })
            })
            .collect()
    })
}

/// Pointwise Frobenius norm of the full tensor `∇^order u` on the grid.
fn tensor_magnitude(components: &[SpectralScalar], order: u32) -> Vec<f64> {
    let dim = components[0].grid().dim();
    let mut entries = Vec::new();
    for c in components {
        if order == 0 {
            entries.push(c.to_physical());
        } else {
            for j in multi_indices(dim, order) {
                entries.push(derivative_multi(c, &j).to_physical());
            }
        }
    }
    pointwise_magnitude(&entries)
}

fn grid_sup(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Largest `max_i |k_i|` carrying a coefficient above roundoff
/// (`1e-14` relative to the largest one).
pub fn support_band(components: &[SpectralScalar]) -> i64 {
    let peak = components.iter().map(SpectralScalar::max_abs).fold(0.0, f64::max);
    let grid = components[0].grid();
    let mut band = 0;
    for c in components {
        for (idx, z) in c.coeffs().iter().enumerate() {
            if z.norm() > 1e-14 * peak {
                let k = grid.k_vec(idx);
                band = band.max(k.iter().take(grid.dim()).map(|k| k.abs()).max().unwrap_or(0));
            }
        }
    }
    band
}

/// Ratio for one of the six interpolation inequalities of a scalar field.
pub fn check_interpolation(f: &SpectralScalar, which: Interpolation) -> Result<Ratio, InequalityError> {
    let dim = f.grid().dim();
    if dim != which.dim() {
        return Err(InequalityError::DimensionMismatch { expected: which.dim(), got: dim });
    }
    require_finite(std::slice::from_ref(f))?;
    let lhs = match which {
        Interpolation::Linf2d | Interpolation::Linf3d => grid_sup(&f.to_physical()),
        Interpolation::L4Grad2d | Interpolation::L4Hess2d | Interpolation::L43d => {
            grid_lp_norm(&f.to_physical(), dim, 4.0)
        }
        Interpolation::Grad3d => sobolev_seminorm(f, 1),
    };
    let (m, theta) = which.rhs_shape();
    let rhs = sobolev_seminorm(f, 0).powf(1.0 - theta) * sobolev_seminorm(f, m).powf(theta);
    ratio(lhs, rhs)
}

/// Gagliardo–Nirenberg ratio `‖∇ⁱu‖_{2s/i} / (‖u‖_∞^{1−i/s} ‖∇ˢu‖₂^{i/s})`
/// for a scalar (one component) or vector field.
pub fn check_gn(u: &[SpectralScalar], i: u32, s: u32) -> Result<Ratio, InequalityError> {
    if !(1 <= i && i <= s && s <= 4) {
        return Err(InequalityError::InvalidParameter(format!("need 1 <= i <= s <= 4, got i = {i}, s = {s}")));
    }
    if u.is_empty() {
        return Err(InequalityError::DegenerateField("no components".into()));
    }
    require_finite(u)?;
    let dim = u[0].grid().dim();
    let top = u.iter().map(|c| sobolev_seminorm(c, s).powi(2)).sum::<f64>().sqrt();
    let lhs = if i == s { top } else { grid_lp_norm(&tensor_magnitude(u, i), dim, 2.0 * s as f64 / i as f64) };
    let sup = grid_sup(&tensor_magnitude(u, 0));
    let theta = i as f64 / s as f64;
    let rhs = if i == s { top } else { sup.powf(1.0 - theta) * top.powf(theta) };
    ratio(lhs, rhs)
}

/// `‖∇ˢ(u·∇u) − (u·∇)∇ˢu‖₂`, full tensor norm, every product dealiased.
pub fn commutator_norm(u: &SpectralVector, s: u32) -> f64 {
    let dim = u.dim();
    let adv = advect(u, u);
    let mut total = 0.0;
    for j in multi_indices(dim, s) {
        for (a, c) in adv.components().iter().zip(u.components()) {
            let outer = derivative_multi(a, &j);
            let inner = advect_scalar(u, &derivative_multi(c, &j));
            total += sobolev_seminorm(&outer.sub(&inner), 0).powi(2);
        }
    }
    total.sqrt()
}

/// Commutator ratio `‖∇ˢ(u·∇u) − u·∇∇ˢu‖₂ / (‖∇u‖_∞ ‖∇ˢu‖₂)`.
///
/// Exact (alias-free) when twice the field's band fits under the
/// dealiasing cutoff; otherwise [`InequalityError::BandTooWide`].
pub fn check_commutator(u: &SpectralVector, s: u32) -> Result<Ratio, InequalityError> {
    if !(1..=3).contains(&s) {
        return Err(InequalityError::InvalidParameter(format!("commutator order must be 1, 2 or 3, got {s}")));
    }
    require_finite(u.components())?;
    require_solenoidal(u)?;
    let band = support_band(u.components());
    let cutoff = u.grid().cutoff();
    if 2 * band > cutoff {
        return Err(InequalityError::BandTooWide { band, needed: 2 * band, cutoff });
    }
    let rhs = grid_sup(&tensor_magnitude(u.components(), 1)) * sobolev_seminorm_vector(u, s);
    if !(rhs > 0.0) {
        return Err(InequalityError::DegenerateField(format!("rhs = {rhs}")));
    }
    ratio(commutator_norm(u, s), rhs)
}

/// Terms of the logarithmic Sobolev inequality for one field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogSobolevTerms {
    /// `‖∇f‖_∞` (grid max of the Frobenius norm).
    pub lhs: f64,
    pub l2: f64,
    /// `‖∇×f‖_BMO` (component sum in 3D).
    pub curl_bmo: f64,
    /// `Σ_{|α|≤2} ‖∂^α f‖_{L^p}` over distinct multi-indices.
    pub w2p: f64,
    /// `1 + ‖f‖₂ + ‖∇×f‖_BMO ln(1 + ‖f‖_{W^{2,p}})`.
    pub bracket: f64,
    pub ratio: f64,
}

/// Distinct multi-indices of order ≤ 2, as axis lists.
fn low_order_indices(dim: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    out.extend((0..dim).map(|a| vec![a]));
    for a in 0..dim {
        for b in a..dim {
            out.push(vec![a, b]);
        }
    }
    out
}

/// Logarithmic Sobolev terms of a divergence-free field with `p > dim`.
pub fn check_log_sobolev(f: &SpectralVector, p: f64) -> Result<LogSobolevTerms, InequalityError> {
    let dim = f.dim();
    if !(p > dim as f64) {
        return Err(InequalityError::InvalidParameter(format!("need p > {dim}, got {p}")));
    }
    require_finite(f.components())?;
    require_solenoidal(f)?;
    let lhs = grid_sup(&tensor_magnitude(f.components(), 1));
    let l2 = sobolev_seminorm_vector(f, 0);
    let curl_bmo = if dim == 2 {
        bmo_seminorm(&curl2d(f).expect("planar field"))
    } else {
        bmo_seminorm_vector(&curl3d(f).expect("3D field"))
    };
    let w2p: f64 = low_order_indices(dim)
        .iter()
        .map(|alpha| {
            let comps: Vec<Vec<f64>> = f
                .components()
                .iter()
                .map(|c| if alpha.is_empty() { c.to_physical() } else { derivative_multi(c, alpha).to_physical() })
                .collect();
            grid_lp_norm(&pointwise_magnitude(&comps), dim, p)
        })
        .sum();
    let bracket = 1.0 + l2 + curl_bmo * w2p.ln_1p();
    if !bracket.is_finite() || !lhs.is_finite() {
        return Err(InequalityError::DegenerateField(format!("lhs = {lhs}, bracket = {bracket}")));
    }
    Ok(LogSobolevTerms { lhs, l2, curl_bmo, w2p, bracket, ratio: lhs / bracket })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use std::f64::consts::PI;

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(2, 3).len(), 8);
        assert_eq!(multi_indices(3, 2).len(), 9);
        assert_eq!(multi_indices(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(low_order_indices(2).len(), 6);
        assert_eq!(low_order_indices(3).len(), 10);
    }

    #[test]
    fn unit_mode_linf_ratio() {
        let g = Grid::new(2, 32).unwrap();
        let f = SpectralScalar::from_fn(&g, |x| x[0].sin());
        let r = check_interpolation(&f, Interpolation::Linf2d).unwrap();
        assert!((r.ratio - 1.0 / (PI * 2f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn constants_are_degenerate() {
        let g = Grid::new(2, 16).unwrap();
        let zero = SpectralScalar::zeros(&g);
        let one = zero.add_constant(1.0);
        for which in [Interpolation::Linf2d, Interpolation::L4Grad2d, Interpolation::L4Hess2d] {
            assert!(matches!(check_interpolation(&zero, which), Err(InequalityError::DegenerateField(_))));
            assert!(matches!(check_interpolation(&one, which), Err(InequalityError::DegenerateField(_))));
        }
        assert!(matches!(
            check_interpolation(&zero, Interpolation::Linf3d),
            Err(InequalityError::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn gn_endpoint_and_unit_mode() {
        let g = Grid::new(2, 32).unwrap();
        let f = SpectralScalar::from_fn(&g, |x| x[0].sin() + 0.3 * (2.0 * x[1]).cos());
        for s in 1..=4 {
            assert_eq!(check_gn(std::slice::from_ref(&f), s, s).unwrap().ratio, 1.0);
        }
        let sine = SpectralScalar::from_fn(&g, |x| x[0].sin());
        let r = check_gn(std::slice::from_ref(&sine), 1, 2).unwrap();
        assert!((r.ratio - 0.75f64.powf(0.25)).abs() < 1e-14, "{}", r.ratio);
        assert!(check_gn(std::slice::from_ref(&sine), 3, 2).is_err());
        assert!(check_gn(std::slice::from_ref(&sine), 0, 2).is_err());
    }

    #[test]
    fn shear_commutator_vanishes() {
        let g = Grid::new(2, 32).unwrap();
        let u = SpectralVector::from_fn(&g, |x| [0.0, x[0].sin(), 0.0]);
        for s in 1..=3 {
            let r = check_commutator(&u, s).unwrap();
            assert!(r.ratio.abs() < 1e-15, "s = {s}: {}", r.ratio);
        }
        assert!(matches!(check_commutator(&SpectralVector::zeros(&g), 1), Err(InequalityError::DegenerateField(_))));
    }

    #[test]
    fn commutator_rejects_wide_band() {
        let g = Grid::new(2, 32).unwrap();
        let u = SpectralVector::from_fn(&g, |x| [0.0, (7.0 * x[0]).sin(), 0.0]);
        assert!(matches!(
            check_commutator(&u, 1),
            Err(InequalityError::BandTooWide { band: 7, needed: 14, cutoff: 10 })
        ));
    }

    #[test]
    fn log_sobolev_zero_field() {
        let g = Grid::new(2, 16).unwrap();
        let t = check_log_sobolev(&SpectralVector::zeros(&g), 4.0).unwrap();
        assert_eq!((t.lhs, t.bracket, t.ratio), (0.0, 1.0, 0.0));
        assert!(check_log_sobolev(&SpectralVector::zeros(&g), 2.0).is_err());
    }
}
