//! Property tests over arbitrary inputs: file-format round trips and the
//! feasibility/optimality of the truncation projection.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use optsgep::io;
use optsgep::linalg::quad_form;
use optsgep::problem::Node;
use optsgep::truncate::truncate;

fn finite_f64() -> impl Strategy<Value = f64> {
    // covers negative zero, subnormals, and extreme magnitudes
    prop_oneof![
        -1e300..1e300_f64,
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        Just(-0.0),
        Just(0.0),
        Just(f64::MIN_POSITIVE),
        Just(-f64::MIN_POSITIVE / 4.0),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Matrices survive a write/read cycle bit-exactly.
    #[test]
    fn matrix_round_trip_bit_exact(values in proptest::collection::vec(finite_f64(), 9)) {
        let m = DMatrix::from_fn(3, 3, |i, j| values[3 * i + j]);
        let path = std::env::temp_dir().join(format!(
            "optsgep-prop-{}-{:x}.csv",
            std::process::id(),
            values.iter().fold(0u64, |acc, v| acc.wrapping_mul(31).wrapping_add(v.to_bits()))
        ));
        io::write_matrix(&path, &m).unwrap();
        let back = io::read_matrix(&path).unwrap();
        std::fs::remove_file(&path).ok();
        for i in 0..3 {
            for j in 0..3 {
                prop_assert_eq!(m[(i, j)].to_bits(), back[(i, j)].to_bits());
            }
        }
    }

    // For any vector with at least one nonzero, truncation returns a unit
    // B-quadratic-form vector whose support is at most k and carries the
    // maximum possible squared mass.
    #[test]
    fn truncate_feasible_and_mass_optimal(
        entries in proptest::collection::vec(-100.0..100.0_f64, 7),
        k in 1usize..=7,
        diag in proptest::collection::vec(0.1..10.0_f64, 7),
    ) {
        prop_assume!(entries.iter().any(|&x| x != 0.0));
        let v = DVector::from_vec(entries.clone());
        let b = DMatrix::from_diagonal(&DVector::from_vec(diag));
        let node = Node::root(7);
        let out = truncate(&v, &node, k, &b).unwrap();

        prop_assert!((quad_form(&b, &out) - 1.0).abs() <= 1e-10);
        let support: Vec<usize> = (0..7).filter(|&i| out[i] != 0.0).collect();
        prop_assert!(support.len() <= k);

        let kept: f64 = support.iter().map(|&i| v[i] * v[i]).sum();
        let mut best = 0.0_f64;
        for mask in 0u32..(1 << 7) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let mass: f64 = (0..7).filter(|&i| mask & (1 << i) != 0).map(|i| v[i] * v[i]).sum();
            best = best.max(mass);
        }
        prop_assert!((kept - best).abs() <= 1e-12 * (1.0 + best));
    }
}
