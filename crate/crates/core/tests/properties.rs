use proptest::prelude::*;

use sphwce::kernel::build_coeffs;
use sphwce::pointset::{load_pointset, random_rotation, random_uniform};
use sphwce::quaderr::{certificate_from_moments, gram_moments, wce, wce_from_moments};
use sphwce::SpaceSpec;

fn space_for(d: usize, pick: u8) -> SpaceSpec {
    match pick % 3 {
        0 => SpaceSpec::log_sobolev(d, 0.75),
        1 => SpaceSpec::log_sobolev(d, 2.0),
        _ => SpaceSpec::sobolev(d, d as f64 / 2.0 + 1.0),
    }
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gram_moments_are_nonnegative(d in 2usize..5, n in 1usize..30, seed in any::<u64>()) {
        let x = random_uniform(d, n, seed).unwrap();
        for m in gram_moments(&x, 40) {
            prop_assert!(m >= -1e-9);
        }
    }

    #[test]
    fn certificate_never_exceeds_wce(d in 2usize..4, n in 1usize..40, seed in any::<u64>(), pick in any::<u8>()) {
        let x = random_uniform(d, n, seed).unwrap();
        let table = build_coeffs(&space_for(d, pick), 200, false).unwrap();
        let m = gram_moments(&x, 200);
        let rep = wce_from_moments(&x, &table, &m);
        let cert = certificate_from_moments(&x, &table, &m).unwrap();
        prop_assert!(cert.bound_sq <= rep.value_sq + 1e-12);
        prop_assert!(cert.bound_sq >= 0.0);
    }

    #[test]
    fn wce_is_rotation_invariant(d in 2usize..4, n in 1usize..30, seed in any::<u64>(), pick in any::<u8>()) {
        let x = random_uniform(d, n, seed).unwrap();
        let y = x.transformed(&random_rotation(d + 1, seed ^ 0x5a5a));
        let sp = space_for(d, pick);
        let a = wce(&x, &sp, 150).unwrap().value_sq;
        let b = wce(&y, &sp, 150).unwrap().value_sq;
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1e-300));
    }

    #[test]
    fn point_files_round_trip(d in 2usize..5, n in 1usize..20, seed in any::<u64>()) {
        let x = random_uniform(d, n, seed).unwrap();
        let mut buf = Vec::new();
        x.write_to(&mut buf).unwrap();
        let y = load_pointset(buf.as_slice(), d).unwrap();
        // Loading renormalises each point, which may move the last bit.
        for (a, b) in x.coords().iter().zip(y.coords()) {
            prop_assert!((a - b).abs() <= 4e-16);
        }
        for (a, b) in x.weights().iter().zip(y.weights()) {
            prop_assert!((a - b).abs() <= 1e-15 * a.abs());
        }
    }
}
