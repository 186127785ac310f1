//! Torus discretization: wavenumber tables, the 2/3-rule dealiasing mask and
//! cached FFT plans.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::SpectralError;

/// Uniform grid on the periodic torus `[0, 2π)^dim`.
///
/// Modes are stored in row-major order with axis 0 slowest. Along each axis
/// index `i` carries wavenumber `i` for `i < n/2` and `i - n` otherwise, so
/// the Nyquist index `n/2` maps to `-n/2`.
pub struct Grid {
    dim: usize,
    n: usize,
    cutoff: i64,
    wavenumbers: Vec<i64>,
    mask: Vec<bool>,
    k_squared: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("dim", &self.dim).field("n", &self.n).field("cutoff", &self.cutoff).finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n == other.n
    }
}

impl Grid {
    pub fn new(dim: usize, n: usize) -> Result<Arc<Self>, SpectralError> {
        if dim != 2 && dim != 3 {
            return Err(SpectralError::InvalidGrid(format!("dim must be 2 or 3, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(SpectralError::InvalidGrid(format!("points per axis must be a power of two >= 8, got {n}")));
        }
        let wavenumbers: Vec<i64> = (0..n).map(|i| if i < n / 2 { i as i64 } else { i as i64 - n as i64 }).collect();
        let cutoff = (n / 3) as i64;
        let total = n.pow(dim as u32);
        let mut mask = Vec::with_capacity(total);
        let mut k_squared = Vec::with_capacity(total);
        for idx in 0..total {
            let mut kept = true;
            let mut k2 = 0.0;
            let mut rem = idx;
            for _ in 0..dim {
                let k = wavenumbers[rem % n];
                rem /= n;
                kept &= k.abs() <= cutoff;
                k2 += (k * k) as f64;
            }
            mask.push(kept);
            k_squared.push(k2);
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Arc::new(Self { dim, n, cutoff, wavenumbers, mask, k_squared, forward, inverse }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Domain period along every axis.
    pub fn length(&self) -> f64 {
        2.0 * PI
    }

    /// Grid spacing.
    pub fn dx(&self) -> f64 {
        self.length() / self.n as f64
    }

    /// Total number of grid points (and of stored modes).
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest kept `|k_i|` under the 2/3 rule.
    pub fn cutoff(&self) -> i64 {
        self.cutoff
    }

    /// Signed wavenumber for a per-axis index.
    pub fn wavenumber(&self, axis_index: usize) -> i64 {
        self.wavenumbers[axis_index]
    }

    /// Per-axis wavenumber table.
    pub fn wavenumbers(&self) -> &[i64] {
        &self.wavenumbers
    }

    /// Per-axis indices of a flat index, axis 0 first.
    pub fn axis_indices(&self, idx: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut rem = idx;
        for axis in (0..self.dim).rev() {
            out[axis] = rem % self.n;
            rem /= self.n;
        }
        out
    }

    /// Wavenumber vector of a flat mode index (unused axes are zero).
    pub fn k_vec(&self, idx: usize) -> [i64; 3] {
        let ai = self.axis_indices(idx);
        let mut k = [0i64; 3];
        for axis in 0..self.dim {
            k[axis] = self.wavenumbers[ai[axis]];
        }
        k
    }

    /// Wavenumber component of a flat mode index along `axis`.
    pub fn k_along(&self, idx: usize, axis: usize) -> i64 {
        let stride = self.n.pow((self.dim - 1 - axis) as u32);
        self.wavenumbers[(idx / stride) % self.n]
    }

    /// Flat index of a wavenumber vector, wrapping negative values.
    pub fn index_of(&self, k: &[i64]) -> usize {
        let n = self.n as i64;
        k.iter().take(self.dim).fold(0usize, |acc, &ki| acc * self.n + ki.rem_euclid(n) as usize)
    }

    /// Flat index of the mode `-k`.
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let ai = self.axis_indices(idx);
        (0..self.dim).fold(0usize, |acc, axis| acc * self.n + (self.n - ai[axis]) % self.n)
    }

    /// `|k|^2` per flat mode index.
    pub fn k_squared(&self) -> &[f64] {
        &self.k_squared
    }

    /// Dealiasing mask per flat mode index (`true` = kept).
    pub fn dealias_mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn is_kept(&self, idx: usize) -> bool {
        self.mask[idx]
    }

    /// Physical coordinates of a flat grid index.
    pub fn coordinates(&self, idx: usize) -> [f64; 3] {
        let ai = self.axis_indices(idx);
        let dx = self.dx();
        let mut x = [0.0; 3];
        for axis in 0..self.dim {
            x[axis] = ai[axis] as f64 * dx;
        }
        x
    }

    /// Unnormalized in-place multidimensional transform.
    pub(crate) fn transform(&self, data: &mut [Complex64], forward: bool) {
        let plan = if forward { &self.forward } else { &self.inverse };
        super::fft::transform_nd(plan.as_ref(), self.dim, self.n, data);
    }
}
