use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use flowpoly::planar::{dual_poset, flow_to_order_point, order_to_flow_point, poset_to_flow_graph};
use flowpoly::polynomial::Polynomial;
use flowpoly::poset::{
    count_linear_extensions, find_isomorphism, linear_extensions, order_ideals, order_polynomial,
    order_polynomial_brute_force, partitions_in_staircase, skew_star, zigzag, Poset, PosetFile,
};

fn poset_strategy() -> impl Strategy<Value = Poset> {
    (1usize..=6, prop::collection::vec((0usize..6, 0usize..6), 0..8)).prop_map(|(k, pairs)| {
        let rel: Vec<(usize, usize)> =
            pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).filter(|&(a, b)| a != b && b < k).collect();
        let labels = (0..k).map(|i| format!("x{i}")).collect();
        Poset::from_relations(labels, &rel).unwrap()
    })
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extension_count_matches_listing(p in poset_strategy()) {
        let exts = linear_extensions(&p);
        prop_assert!(exts.iter().all(|e| p.is_linear_extension(e)));
        prop_assert_eq!(count_linear_extensions(&p), BigUint::from(exts.len()));
    }

    #[test]
    fn order_polynomial_matches_brute_force(p in poset_strategy(), m in 0u64..4) {
        prop_assert_eq!(order_polynomial(&p, m), order_polynomial_brute_force(&p, m));
    }

    #[test]
    fn two_colourings_are_ideals(p in poset_strategy()) {
        prop_assert_eq!(order_polynomial(&p, 2), BigUint::from(order_ideals(&p).len()));
    }

    #[test]
    fn order_polynomial_leading_term(p in poset_strategy()) {
        let k = p.len();
        let values: Vec<BigInt> = (1..=k as u64 + 2).map(|m| BigInt::from(order_polynomial(&p, m))).collect();
        // interpolating from m = 1 shifts the variable but keeps the leading coefficient
        let shifted = Polynomial::interpolate(&values);
        prop_assert_eq!(shifted.degree(), k);
        let want = BigRational::new(BigInt::from(count_linear_extensions(&p)), BigInt::from(factorial(k)));
        prop_assert_eq!(shifted.leading_coefficient(), want);
    }

    #[test]
    fn reversed_labels_are_isomorphic(p in poset_strategy()) {
        let k = p.len();
        let perm: Vec<usize> = (0..k).rev().collect();
        let covers: Vec<(usize, usize)> = p.covers().iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        let labels = (0..k).map(|i| format!("y{i}")).collect();
        let q = Poset::new(labels, covers).unwrap();
        let iso = find_isomorphism(&p, &q).expect("isomorphic");
        for &(a, b) in p.covers() {
            prop_assert!(q.less(iso[a], iso[b]));
        }
    }

    #[test]
    fn poset_json_round_trip(p in poset_strategy()) {
        let q = PosetFile::from_json(&PosetFile::from_poset(&p).to_json()).unwrap().poset().unwrap();
        prop_assert_eq!(q.labels(), p.labels());
        prop_assert_eq!(q.covers(), p.covers());
    }

    #[test]
    fn flow_order_maps_invert_on_rational_points(
        idx in 0usize..14,
        raw in prop::collection::vec(0i64..=9, 6),
        denom in 1i64..=9,
    ) {
        let lambda = &partitions_in_staircase(4)[idx];
        let p = skew_star(4, lambda).unwrap();
        let pg = poset_to_flow_graph(&p).unwrap();
        let k = p.len();
        let one = BigRational::one();
        // monotone hull of random values in [0, 1]
        let base: Vec<BigRational> =
            (0..k).map(|x| BigRational::new(raw[x].min(denom).into(), denom.into())).collect();
        let f: Vec<BigRational> = (0..k)
            .map(|x| (0..k).filter(|&y| p.leq(y, x)).map(|y| base[y].clone()).max().unwrap())
            .collect();
        prop_assert!(p.is_order_preserving(&f));
        let fl = order_to_flow_point(&pg, &f, &one).unwrap();
        prop_assert!(fl.iter().all(|x| *x >= BigRational::zero()));
        prop_assert_eq!(flow_to_order_point(&pg, &fl).unwrap(), f);
    }
}

#[test]
fn flow_graphs_of_staircases_read_back_their_posets() {
    for n in 1..=4 {
        for lambda in partitions_in_staircase(n) {
            let p = skew_star(n, &lambda).unwrap();
            let pg = poset_to_flow_graph(&p).unwrap();
            let dp = dual_poset(&pg).unwrap();
            assert!(find_isomorphism(&p, &dp.poset).is_some(), "n={n} λ={lambda:?}");
            assert_eq!(pg.regions.len(), p.len());
        }
    }
}

#[test]
fn zigzag_extensions_are_euler_numbers() {
    let counts: Vec<BigUint> = (1..=7).map(|k| count_linear_extensions(&zigzag(k))).collect();
    let want: Vec<BigUint> = [1u32, 1, 2, 5, 16, 61, 272].map(BigUint::from).to_vec();
    assert_eq!(counts, want);
}

#[test]
fn non_monotone_maps_are_rejected() {
    let p = skew_star(3, &[]).unwrap();
    let pg = poset_to_flow_graph(&p).unwrap();
    let one = BigRational::one();
    let mut f = vec![BigRational::zero(); p.len()];
    // raise a minimal element above everything else
    let x = p.minimal_elements()[0];
    f[x] = one.clone();
    let err = order_to_flow_point(&pg, &f, &one).unwrap_err();
    assert!(err.is_input_error(), "{err}");
}
