use std::sync::Arc;

use mhd_core::diagnostics::{
    bmo_of_samples, cumulative_trapezoid, grid_lp_norm, lp_norm, sobolev_seminorm, sobolev_seminorm_vector,
};
use mhd_core::inequality::{check_commutator, check_interpolation, commutator_norm, Interpolation};
use mhd_core::random::{random_scalar, random_solenoidal};
use mhd_core::scenarios::{RawConfig, Snapshot};
use mhd_core::spectral::{dealiased_product, derivative, leray_project};
use mhd_core::{Grid, SpectralScalar};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid(dim: usize, n: usize) -> Arc<Grid> {
    Grid::new(dim, n).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dims_and_sizes() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((2, 8)), Just((2, 16)), Just((2, 32)), Just((3, 8)), Just((3, 16))]
}

fn shift_half(values: &[f64], dim: usize, n: usize) -> Vec<f64> {
    let h = n / 2;
    let mut out = vec![0.0; values.len()];
    for (idx, v) in values.iter().enumerate() {
        let mut rem = idx;
        let mut coords = [0usize; 3];
        for a in (0..dim).rev() {
            coords[a] = rem % n;
            rem /= n;
        }
        let target = (0..dim).fold(0, |acc, a| acc * n + (coords[a] + h) % n);
        out[target] = *v;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bmo_is_bounded_by_twice_the_sup(seed in any::<u64>(), (dim, n) in dims_and_sizes(), scale in 1e-3f64..1e3) {
        let f = random_scalar(&grid(dim, n), (n / 3) as i64, &mut rng(seed)).scaled(scale);
        let values = f.to_physical();
        let sup = grid_lp_norm(&values, dim, f64::INFINITY);
        prop_assert!(bmo_of_samples(&values, dim, n) <= 2.0 * sup);
    }

    #[test]
    fn bmo_ignores_constants_and_half_period_shifts(seed in any::<u64>(), (dim, n) in dims_and_sizes(), c in -50.0f64..50.0) {
        let f = random_scalar(&grid(dim, n), 2, &mut rng(seed));
        let values = f.to_physical();
        let b = bmo_of_samples(&values, dim, n);
        let shifted: Vec<f64> = values.iter().map(|v| v + c).collect();
        prop_assert!((bmo_of_samples(&shifted, dim, n) - b).abs() <= 1e-12 * (1.0 + c.abs()));
        let moved = shift_half(&values, dim, n);
        prop_assert!((bmo_of_samples(&moved, dim, n) - b).abs() <= 1e-13);
    }

    #[test]
    fn parseval_and_zeroth_seminorm(seed in any::<u64>(), (dim, n) in dims_and_sizes()) {
        let f = random_scalar(&grid(dim, n), (n / 3) as i64, &mut rng(seed)).add_constant(0.7);
        let spectral = sobolev_seminorm(&f, 0);
        let physical = grid_lp_norm(&f.to_physical(), dim, 2.0);
        prop_assert!((spectral - physical).abs() <= 1e-12 * spectral);
        prop_assert_eq!(lp_norm(&f, 2.0).unwrap(), spectral);
    }

    #[test]
    fn derivative_scales_seminorms(seed in any::<u64>(), (dim, n) in dims_and_sizes()) {
        let f = random_scalar(&grid(dim, n), 2, &mut rng(seed));
        let grad_sq: f64 = (0..dim).map(|a| sobolev_seminorm(&derivative(&f, a, 1), 0).powi(2)).sum();
        prop_assert!((grad_sq.sqrt() - sobolev_seminorm(&f, 1)).abs() <= 1e-12 * grad_sq.sqrt());
    }

    #[test]
    fn leray_projection_is_idempotent(seed in any::<u64>(), (dim, n) in dims_and_sizes()) {
        let g = grid(dim, n);
        let mut r = rng(seed);
        let v = mhd_core::SpectralVector::from_components((0..dim).map(|_| random_scalar(&g, 3, &mut r)).collect()).unwrap();
        let p = leray_project(&v);
        prop_assert!(p.is_divergence_free(1e-14));
        prop_assert!(leray_project(&p).max_diff(&p) <= 1e-15 * p.max_abs().max(1.0));
        prop_assert!(sobolev_seminorm_vector(&p, 0) <= sobolev_seminorm_vector(&v, 0) * (1.0 + 1e-14));
    }

    #[test]
    fn product_matches_convolution(seed in any::<u64>(), n in prop_oneof![Just(8usize), Just(16usize)]) {
        let g = grid(2, n);
        let mut r = rng(seed);
        let f = random_scalar(&g, g.cutoff(), &mut r);
        let h = random_scalar(&g, g.cutoff(), &mut r);
        let got = dealiased_product(&f, &h).unwrap();
        let cut = g.cutoff();
        let ni = n as i64;
        for idx in 0..g.len() {
            let k = g.k_vec(idx);
            let mut want = Complex64::new(0.0, 0.0);
            if k[0].abs() <= cut && k[1].abs() <= cut {
                for p0 in -cut..=cut {
                    for p1 in -cut..=cut {
                        let (q0, q1) = (k[0] - p0, k[1] - p1);
                        if q0.abs() <= cut && q1.abs() <= cut {
                            let ip = (p0.rem_euclid(ni) * ni + p1.rem_euclid(ni)) as usize;
                            let iq = (q0.rem_euclid(ni) * ni + q1.rem_euclid(ni)) as usize;
                            want += f.coeffs()[ip] * h.coeffs()[iq];
                        }
                    }
                }
            }
            prop_assert!((got.coeffs()[idx] - want).norm() <= 1e-12);
        }
    }

    #[test]
    fn trapezoid_integral_is_additive(values in prop::collection::vec(0.0f64..10.0, 3..40), split in 1usize..38) {
        let times: Vec<f64> = (0..values.len()).map(|i| 0.1 * i as f64 + 0.01 * (i * i) as f64).collect();
        let split = split.min(values.len() - 2);
        let whole = *cumulative_trapezoid(&times, &values).last().unwrap();
        let left = *cumulative_trapezoid(&times[..=split], &values[..=split]).last().unwrap();
        let right = *cumulative_trapezoid(&times[split..], &values[split..]).last().unwrap();
        prop_assert!((whole - left - right).abs() <= 1e-12 * whole.max(1.0));
        let running = cumulative_trapezoid(&times, &values);
        prop_assert!(running.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn interpolation_ratios_are_amplitude_and_shift_invariant(seed in any::<u64>(), alpha in prop_oneof![Just(-3.0), Just(0.01), Just(1e6)]) {
        let g = grid(2, 32);
        let f = random_scalar(&g, 6, &mut rng(seed));
        // Translation by eight grid cells along the first axis.
        let shift = SpectralScalar::from_coeffs(&g, f.coeffs().iter().enumerate().map(|(idx, c)| {
            let k = g.k_vec(idx)[0] as f64;
            c * Complex64::from_polar(1.0, -k * 8.0 * g.dx())
        }).collect()).unwrap();
        for which in [Interpolation::Linf2d, Interpolation::L4Grad2d, Interpolation::L4Hess2d] {
            let r = check_interpolation(&f, which).unwrap().ratio;
            prop_assert!(r.is_finite() && r > 0.0);
            let scaled = check_interpolation(&f.scaled(alpha), which).unwrap().ratio;
            prop_assert!((scaled - r).abs() <= 1e-12 * r);
            let moved = check_interpolation(&shift, which).unwrap().ratio;
            prop_assert!((moved - r).abs() <= 1e-10 * r);
        }
    }

    #[test]
    fn first_order_commutator_matches_gradient_products(seed in any::<u64>()) {
        // ∂_j(u·∇u_i) − u·∇∂_j u_i = Σ_l ∂_j u_l ∂_l u_i.
        let g = grid(2, 32);
        let u = random_solenoidal(&g, 5, &mut rng(seed));
        let mut total = 0.0;
        for j in 0..2 {
            for i in 0..2 {
                let mut acc = SpectralScalar::zeros(&g);
                for l in 0..2 {
                    acc = acc.add(&dealiased_product(&derivative(u.component(l), j, 1), &derivative(u.component(i), l, 1)).unwrap());
                }
                total += sobolev_seminorm(&acc, 0).powi(2);
            }
        }
        let direct = total.sqrt();
        prop_assert!((commutator_norm(&u, 1) - direct).abs() <= 1e-10 * direct.max(1.0));
        prop_assert!(check_commutator(&u, 1).unwrap().ratio.is_finite());
    }

    #[test]
    fn snapshot_bytes_round_trip(t in -1e6f64..1e6, values in prop::collection::vec(-1e300f64..1e300, 2 * 2 * 64)) {
        let snap = Snapshot { dim: 2, n: 8, t, payload: values };
        let bytes = snap.to_bytes();
        prop_assert_eq!(Snapshot::from_bytes(&bytes).unwrap(), snap);
    }

    #[test]
    fn config_values_round_trip(nu in 1e-6f64..1e3, dt in 1e-6f64..1.0, t_end in 1e-3f64..1e3, cadence in 1u64..10_000) {
        let text = format!("nu = {nu}\ndt = {dt}\nt_end = {t_end}\nic = orszag-tang\ndiagnostics_cadence = {cadence}\n");
        let cfg = RawConfig::parse(&text).unwrap().validate(true).unwrap();
        prop_assert_eq!((cfg.nu, cfg.dt, cfg.t_end, cfg.diagnostics_cadence), (nu, dt, t_end, cadence));
    }
}
