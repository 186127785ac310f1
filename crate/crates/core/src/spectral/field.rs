use std::sync::Arc;

use num_complex::Complex64;

use super::{Grid, SpectralError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Real periodic scalar field stored as its full set of Fourier coefficients.
///
/// `f(x) = Σ_k coeff(k) e^{i k·x}`, so `coeff(0)` is the mean.
#[derive(Debug, Clone)]
pub struct SpectralScalar {
    grid: Arc<Grid>,
    coeffs: Vec<Complex64>,
}

impl PartialEq for SpectralScalar {
    fn eq(&self, other: &Self) -> bool {
        *self.grid == *other.grid && self.coeffs == other.coeffs
    }
}

impl SpectralScalar {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self { grid: Arc::clone(grid), coeffs: vec![ZERO; grid.len()] }
    }

    pub fn from_coeffs(grid: &Arc<Grid>, coeffs: Vec<Complex64>) -> Result<Self, SpectralError> {
        if coeffs.len() != grid.len() {
            return Err(SpectralError::LengthMismatch { expected: grid.len(), got: coeffs.len() });
        }
        Ok(Self { grid: Arc::clone(grid), coeffs })
    }

    /// Forward transform of physical grid values.
    pub fn from_physical(grid: &Arc<Grid>, values: &[f64]) -> Result<Self, SpectralError> {
        if values.len() != grid.len() {
            return Err(SpectralError::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        let mut coeffs: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        grid.transform(&mut coeffs, true);
        let scale = 1.0 / grid.len() as f64;
        coeffs.iter_mut().for_each(|c| *c *= scale);
        Ok(Self { grid: Arc::clone(grid), coeffs })
    }

    /// Samples `f` at every grid point and transforms.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(&[f64; 3]) -> f64) -> Self {
        let values: Vec<f64> = (0..grid.len()).map(|idx| f(&grid.coordinates(idx))).collect();
        Self::from_physical(grid, &values).expect("length matches grid")
    }

    /// Physical grid values (real part of the inverse transform).
    pub fn to_physical(&self) -> Vec<f64> {
        let mut buf = self.coeffs.clone();
        self.grid.transform(&mut buf, false);
        buf.into_iter().map(|c| c.re).collect()
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of the wavenumber vector `k`.
    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.coeffs[self.grid.index_of(k)]
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// Zeroes every mode outside the dealiasing mask.
    pub fn apply_mask(&mut self) {
        for (c, &kept) in self.coeffs.iter_mut().zip(self.grid.dealias_mask()) {
            if !kept {
                *c = ZERO;
            }
        }
    }

    pub fn masked(mut self) -> Self {
        self.apply_mask();
        self
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Largest `|coeff(-k) - conj(coeff(k))|` over all modes.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.coeffs.len()).fold(0.0, |m, idx| {
            let c = self.grid.conjugate_index(idx);
            m.max((self.coeffs[c] - self.coeffs[idx].conj()).norm())
        })
    }

    /// Replaces the coefficients with their Hermitian-symmetric part.
    pub fn symmetrize(&mut self) {
        let old = self.coeffs.clone();
        for (idx, c) in self.coeffs.iter_mut().enumerate() {
            let j = self.grid.conjugate_index(idx);
            *c = 0.5 * (old[idx] + old[j].conj());
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Σ|f̂(k)|², i.e. the mean of f² over the torus.
    pub fn power(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { grid: Arc::clone(&self.grid), coeffs: self.coeffs.iter().map(|c| c * a).collect() }
    }

    /// `self += a * other`.
    pub fn add_scaled(&mut self, other: &Self, a: f64) {
        debug_assert!(*self.grid == *other.grid);
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += y * a;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, 1.0);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, -1.0);
        out
    }

    /// Adds a constant to the field.
    pub fn add_constant(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Largest coefficient difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Spectral interpolation onto a grid of the same dimension.
    ///
    /// Modes that do not fit on the target grid are dropped; Nyquist modes
    /// are never carried over.
    pub fn resample(&self, target: &Arc<Grid>) -> Result<Self, SpectralError> {
        if target.dim() != self.grid.dim() {
            return Err(SpectralError::DimensionMismatch { expected: self.grid.dim(), got: target.dim() });
        }
        let limit = (self.grid.n().min(target.n()) / 2) as i64;
        let mut out = Self::zeros(target);
        for (idx, c) in self.coeffs.iter().enumerate() {
            let k = self.grid.k_vec(idx);
            if k.iter().take(self.grid.dim()).all(|ki| ki.abs() < limit) {
                out.coeffs[target.index_of(&k)] = *c;
            }
        }
        Ok(out)
    }
}

/// Vector field with one scalar component per spatial dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    components: Vec<SpectralScalar>,
}

impl SpectralVector {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self { components: (0..grid.dim()).map(|_| SpectralScalar::zeros(grid)).collect() }
    }

    pub fn from_components(components: Vec<SpectralScalar>) -> Result<Self, SpectralError> {
        let first = components.first().ok_or(SpectralError::DimensionMismatch { expected: 2, got: 0 })?;
        let grid = Arc::clone(first.grid());
        if components.len() != grid.dim() {
            return Err(SpectralError::DimensionMismatch { expected: grid.dim(), got: components.len() });
        }
        if components.iter().any(|c| **c.grid() != *grid) {
            return Err(SpectralError::GridMismatch);
        }
        Ok(Self { components })
    }

    /// Samples a vector-valued function at every grid point.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(&[f64; 3]) -> [f64; 3]) -> Self {
        let points: Vec<[f64; 3]> = (0..grid.len()).map(|idx| f(&grid.coordinates(idx))).collect();
        let components = (0..grid.dim())
            .map(|a| {
                let vals: Vec<f64> = points.iter().map(|p| p[a]).collect();
                SpectralScalar::from_physical(grid, &vals).expect("length matches grid")
            })
            .collect();
        Self { components }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[SpectralScalar] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [SpectralScalar] {
        &mut self.components
    }

    pub fn component(&self, axis: usize) -> &SpectralScalar {
        &self.components[axis]
    }

    pub fn into_components(self) -> Vec<SpectralScalar> {
        self.components
    }

    pub fn apply_mask(&mut self) {
        self.components.iter_mut().for_each(SpectralScalar::apply_mask);
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(SpectralScalar::is_finite)
    }

    /// Σ_k |v̂(k)|² over all components.
    pub fn power(&self) -> f64 {
        self.components.iter().map(SpectralScalar::power).sum()
    }

    /// Largest `|k · v̂(k)|` over all modes.
    pub fn divergence_defect(&self) -> f64 {
        let grid = self.grid();
        (0..grid.len()).fold(0.0, |m, idx| {
            let k = grid.k_vec(idx);
            let dot: Complex64 = self.components.iter().enumerate().map(|(a, c)| c.coeffs()[idx] * k[a] as f64).sum();
            m.max(dot.norm())
        })
    }

    /// `max|k · v̂| <= tol * max|v̂|` (trivially true for the zero field).
    pub fn is_divergence_free(&self, tol: f64) -> bool {
        self.divergence_defect() <= tol * self.max_abs()
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self { components: self.components.iter().map(|c| c.scaled(a)).collect() }
    }

    pub fn add_scaled(&mut self, other: &Self, a: f64) {
        for (x, y) in self.components.iter_mut().zip(&other.components) {
            x.add_scaled(y, a);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, -1.0);
        out
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.components.iter().zip(&other.components).fold(0.0, |m, (a, b)| m.max(a.max_diff(b)))
    }

    pub fn resample(&self, target: &Arc<Grid>) -> Result<Self, SpectralError> {
        let components = self.components.iter().map(|c| c.resample(target)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_coefficients() {
        let g = Grid::new(2, 16).unwrap();
        let f = SpectralScalar::from_fn(&g, |x| x[0].sin());
        // sin x = (e^{ix} - e^{-ix}) / 2i
        assert!((f.coeff(&[1, 0]) - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((f.coeff(&[-1, 0]) - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!(f.hermitian_defect() < 1e-15);
        assert!(f.mean().abs() < 1e-16);
    }

    #[test]
    fn physical_round_trip() {
        let g = Grid::new(3, 8).unwrap();
        let vals: Vec<f64> = (0..g.len()).map(|i| ((i * 7919) % 101) as f64 / 50.0 - 1.0).collect();
        let back = SpectralScalar::from_physical(&g, &vals).unwrap().to_physical();
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in vals.iter().zip(&back) {
            assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn resample_preserves_band_limited_field() {
        let g16 = Grid::new(2, 16).unwrap();
        let g32 = Grid::new(2, 32).unwrap();
        let f = SpectralScalar::from_fn(&g16, |x| (2.0 * x[0]).sin() * x[1].cos());
        let up = f.resample(&g32).unwrap();
        let direct = SpectralScalar::from_fn(&g32, |x| (2.0 * x[0]).sin() * x[1].cos());
        assert!(up.max_diff(&direct) < 1e-15);
        assert!(up.resample(&g16).unwrap().max_diff(&f) < 1e-15);
    }

    #[test]
    fn vector_rejects_wrong_component_count() {
        let g = Grid::new(3, 8).unwrap();
        let c = SpectralScalar::zeros(&g);
        assert!(SpectralVector::from_components(vec![c.clone(), c]).is_err());
    }
}
