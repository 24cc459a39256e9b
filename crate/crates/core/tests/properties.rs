use proptest::prelude::*;
use shortwave_core::algebra::powerfree_kernel;
use shortwave_core::coefficients::builtin_table;
use shortwave_core::lfun::{builtin_descriptor, Builtin};
use shortwave_core::stats::{rng, summarize};
use shortwave_core::variance::sigma_sq_truncated;
use shortwave_core::voronoi::breve;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn truncated_variance_is_bounded_termwise(delta in 0.01f64..0.99, n in 1usize..2000, which in 0usize..3) {
        let b = [Builtin::TauK(2), Builtin::GaussianIdeals, Builtin::TauK(3)][which];
        let d = builtin_descriptor(b).unwrap();
        let table = builtin_table(b, 2000).unwrap();
        let s = sigma_sq_truncated(&d, &table, delta, n).unwrap();
        let bound: f64 = (1..=n)
            .map(|k| {
                let l = table.lambda(k);
                2.0 / (std::f64::consts::PI.powi(2)) * l * l / (k as f64 * breve(k as u64, &d))
            })
            .sum();
        prop_assert!(s >= 0.0);
        prop_assert!(s <= bound * (1.0 + 1e-12));
        let longer = sigma_sq_truncated(&d, &table, delta, (n + 50).min(2000)).unwrap();
        prop_assert!(longer >= s * (1.0 - 1e-14));
    }

    #[test]
    fn kernel_reassembles_n(n in 1u64..1_000_000_000_000, m in 2u32..=8) {
        let k = powerfree_kernel(n, m).unwrap();
        prop_assert_eq!(k.q as u128 * (k.r as u128).pow(m), n as u128);
    }

    #[test]
    fn draws_depend_only_on_seed_and_index(seed: u64, i in 0u64..1_000_000, x in 10.0f64..1e9) {
        let u = rng::unit(seed, i);
        prop_assert!((0.0..1.0).contains(&u));
        prop_assert_eq!(u, rng::unit(seed, i));
        let pts = rng::uniform_points(seed, x, 8);
        for (j, &p) in pts.iter().enumerate() {
            prop_assert!(p >= x && p < 2.0 * x);
            prop_assert_eq!(p, x * (1.0 + rng::unit(seed, j as u64)));
        }
    }

    #[test]
    fn summary_is_affine_invariant(z in prop::collection::vec(-5.0f64..5.0, 40..200), a in 0.5f64..4.0, b in -3.0f64..3.0) {
        let s = summarize(&z).unwrap();
        prop_assert_eq!(s, summarize(&z).unwrap());
        let t: Vec<f64> = z.iter().map(|v| a * v + b).collect();
        let u = summarize(&t).unwrap();
        prop_assert!((u.mean - (a * s.mean + b)).abs() <= 1e-10 * (1.0 + u.mean.abs()));
        prop_assert!((u.variance - a * a * s.variance).abs() <= 1e-10 * u.variance);
        prop_assert!((u.skewness - s.skewness).abs() <= 1e-8);
        prop_assert!((u.kurtosis - s.kurtosis).abs() <= 1e-8);
        prop_assert!(s.kurtosis >= 1.0 - 1e-12);
    }
}
