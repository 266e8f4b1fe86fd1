//! Property tests for the algebraic invariants.

mod common;

use common::gospa_exhaustive_oracle;
use nfis::metrics::{gospa, gospa_with, AssignmentMethod};
use nfis::special::{dirichlet_ratio, fresnel};
use nfis::steering::{composite_af_angular, tx_array_factor};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn dirichlet_magnitude_bounded(u in -50.0f64..50.0, n in 1u32..2048) {
        let v = dirichlet_ratio(u, n);
        prop_assert!(v.is_finite());
        prop_assert!(v.abs() <= 1.0 + 1e-9, "|D({u},{n})| = {}", v.abs());
    }

    #[test]
    fn fresnel_odd_and_bounded(x in 0.0f64..12.0) {
        let p = fresnel(x).unwrap();
        let m = fresnel(-x).unwrap();
        prop_assert_eq!(p.c_val, -m.c_val);
        prop_assert_eq!(p.s_val, -m.s_val);
        prop_assert!((-0.001..=0.9).contains(&p.c_val), "C({}) = {}", x, p.c_val);
        prop_assert!((-0.001..=0.9).contains(&p.s_val), "S({}) = {}", x, p.s_val);
    }

    #[test]
    fn tx_af_matches_inner_product(obs in -1.5f64..1.5, steer in -1.5f64..1.5, n in 2usize..64) {
        let closed = tx_array_factor(obs, steer, n);
        let direct: num_complex::Complex64 = (0..n).map(|i| {
            let off = i as f64 - (n as f64 - 1.0) / 2.0;
            num_complex::Complex64::from_polar(
                1.0,
                std::f64::consts::PI * off * (steer.sin() - obs.sin()),
            )
        }).sum::<num_complex::Complex64>() / n as f64;
        prop_assert!((closed - direct.re).abs() < 1e-10);
        prop_assert!(direct.im.abs() < 1e-10);
    }

    #[test]
    fn composite_never_exceeds_unity(obs in -1.5f64..1.5, steer in -1.5f64..1.5) {
        let caf = composite_af_angular(obs, steer, 32, 32);
        prop_assert!(caf.abs() <= 1.0 + 1e-9);
        // unity only at the steered direction
        if (obs.sin() - steer.sin()).abs() > 1e-3 {
            prop_assert!(caf.abs() < 1.0);
        }
    }

    #[test]
    fn gospa_symmetric_and_matches_oracle(
        seed in 0u64..10_000,
        n in 0usize..6,
        m in 0usize..6,
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pt = |rng: &mut rand_chacha::ChaCha8Rng| {
            [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]
        };
        let a: Vec<[f64; 2]> = (0..n).map(|_| pt(&mut rng)).collect();
        let b: Vec<[f64; 2]> = (0..m).map(|_| pt(&mut rng)).collect();
        let ab = gospa(&a, &b, 0.5, 2.0, 2.0).unwrap();
        let ba = gospa(&b, &a, 0.5, 2.0, 2.0).unwrap();
        prop_assert!((ab.distance - ba.distance).abs() < 1e-12);
        let (want, miss, fals) = gospa_exhaustive_oracle(&a, &b, 0.5, 2.0);
        let hung = gospa_with(&a, &b, 0.5, 2.0, 2.0, AssignmentMethod::Hungarian).unwrap();
        prop_assert!((hung.distance - want).abs() < 1e-12);
        prop_assert_eq!((hung.n_missed, hung.n_false), (miss, fals));
    }
}
