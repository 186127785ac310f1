//! Discrete BMO seminorm over grid-aligned dyadic cubes.
//!
//! For every level `j = 0..=log₂(n) − 2` the torus is tiled by `2^{j·dim}`
//! cubes of `n / 2^j` points per side; the estimator is the largest mean
//! absolute deviation `(1/|Q|) Σ_{x∈Q} |f(x) − f_Q|` over all of them. The
//! smallest cubes have four points per side.

use crate::spectral::{SpectralScalar, SpectralVector};

/// Per-axis side lengths (in points) of the dyadic cubes, coarsest first.
pub fn dyadic_sides(n: usize) -> Vec<usize> {
    let levels = n.trailing_zeros().saturating_sub(1) as usize;
    (0..levels).map(|j| n >> j).collect()
}

/// Mean absolute deviation of the cube with lower corner `origin` and side
/// `side`, visiting points in row-major order.
fn cube_oscillation(values: &[f64], dim: usize, n: usize, origin: [usize; 3], side: usize) -> f64 {
    let count = side.pow(dim as u32);
    let mut idx = Vec::with_capacity(count);
    match dim {
        2 => {
            for a in 0..side {
                let row = (origin[0] + a) * n + origin[1];
                idx.extend(row..row + side);
            }
        }
        _ => {
            for a in 0..side {
                for b in 0..side {
                    let row = ((origin[0] + a) * n + origin[1] + b) * n + origin[2];
                    idx.extend(row..row + side);
                }
            }
        }
    }
    let mut sum = 0.0;
    for &i in &idx {
        sum += values[i];
    }
    let mean = sum / count as f64;
    let mut dev = 0.0;
    for &i in &idx {
        dev += (values[i] - mean).abs();
    }
    dev / count as f64
}

/// BMO estimator of grid samples in row-major `n^dim` layout.
pub fn bmo_of_samples(values: &[f64], dim: usize, n: usize) -> f64 {
    assert_eq!(values.len(), n.pow(dim as u32), "sample count must be n^dim");
    let mut best = 0.0f64;
    for side in dyadic_sides(n) {
        let per_axis = n / side;
        let cubes = per_axis.pow(dim as u32);
        for c in 0..cubes {
            let mut origin = [0usize; 3];
            let mut rem = c;
            for axis in (0..dim).rev() {
                origin[axis] = (rem % per_axis) * side;
                rem /= per_axis;
            }
            best = best.max(cube_oscillation(values, dim, n, origin, side));
        }
    }
    best
}

/// Discrete BMO seminorm of a scalar field.
pub fn bmo_seminorm(f: &SpectralScalar) -> f64 {
    let g = f.grid();
    bmo_of_samples(&f.to_physical(), g.dim(), g.n())
}

/// Sum of the component BMO seminorms of a vector field.
pub fn bmo_seminorm_vector(v: &SpectralVector) -> f64 {
    v.components().iter().map(bmo_seminorm).sum()
}
