use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use flowpoly::asm::{asm_dilation_count, check_p_lambda_point, corner_sum_map, enumerate_asm, p_lambda_vertices};
use flowpoly::poset::{order_polynomial, partitions_in_staircase, skew_star};

fn case() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (2usize..=4).prop_flat_map(|n| {
        let parts = partitions_in_staircase(n);
        (Just(n), 0..parts.len()).prop_map(move |(n, k)| (n, parts[k].clone()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Corner sums are affine, so a convex combination of vertices maps to the
    /// same combination of their images, and stays in the order polytope.
    #[test]
    fn corner_sums_respect_convex_combinations(
        (n, lambda) in case(),
        picks in prop::collection::vec((0usize..64, 1i64..5), 1..4),
    ) {
        let vertices = p_lambda_vertices(n, &lambda).unwrap();
        let total: i64 = picks.iter().map(|&(_, w)| w).sum();
        let weight = |w: i64| BigRational::new(BigInt::from(w), BigInt::from(total));
        let mut m = vec![vec![BigRational::zero(); n]; n];
        let mut image = vec![BigRational::zero(); skew_star(n, &lambda).unwrap().len()];
        for &(k, w) in &picks {
            let v = &vertices[k % vertices.len()];
            let g = corner_sum_map(n, &lambda, &v.to_rational()).unwrap();
            for (i, row) in v.to_rational().iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    m[i][j] += x * weight(w);
                }
            }
            for (acc, x) in image.iter_mut().zip(&g) {
                *acc += x * weight(w);
            }
        }
        prop_assert!(check_p_lambda_point(n, &lambda, &m).is_ok());
        prop_assert_eq!(corner_sum_map(n, &lambda, &m).unwrap(), image);
    }

    #[test]
    fn dilations_count_order_preserving_maps((n, lambda) in case(), t in 0u64..4) {
        let p = skew_star(n, &lambda).unwrap();
        prop_assert_eq!(asm_dilation_count(n, &lambda, t).unwrap(), order_polynomial(&p, t + 1));
    }
}

#[test]
fn faces_are_subsets_of_all_asms() {
    let all = enumerate_asm(4);
    for lambda in partitions_in_staircase(4) {
        let face = p_lambda_vertices(4, &lambda).unwrap();
        assert!(face.iter().all(|m| all.binary_search(m).is_ok()));
    }
}

#[test]
fn out_of_staircase_partitions_are_input_errors() {
    for bad in [vec![4], vec![1, 2], vec![3, 3]] {
        let err = p_lambda_vertices(4, &bad).unwrap_err();
        assert!(err.is_input_error(), "{bad:?}: {err}");
    }
}
