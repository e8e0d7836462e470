use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use flowpoly::geometry::affine_dimension_int;
use flowpoly::graph::{coherent, enumerate_routes, prune_inner_vertices, DirectedMultigraph, Framing, GraphFile};
use flowpoly::kostant::{
    compositions, enumerate_integer_flows, flow_ehrhart_polynomial, flow_polytope_volume, kostant_value,
    normalized_leading_term, volume_netflow,
};
use flowpoly::polynomial::Polynomial;
use flowpoly::triangulation::{
    clique_to_flow, dkk_maximal_cliques, flow_polytope_vertices, flow_to_clique, noncrossing_trees, ps_triangulation,
};

/// A path `1 -> 2 -> ... -> n` plus extra forward edges, so every inner vertex
/// has both an incoming and an outgoing edge.
fn graph_strategy() -> impl Strategy<Value = DirectedMultigraph> {
    (3usize..=5, prop::collection::vec((1usize..=5, 1usize..=5), 0..5)).prop_map(|(n, extra)| {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
        for (a, b) in extra {
            let (a, b) = (a.min(b), a.max(b));
            if a != b && b <= n {
                edges.push((a, b));
            }
        }
        DirectedMultigraph::new(n, edges).unwrap()
    })
}

fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn three_volume_computations_agree(g in graph_strategy(), seed in any::<u64>()) {
        prop_assert!(g.is_pruned());
        let f = Framing::random(&g, &mut ChaCha8Rng::seed_from_u64(seed));
        let vol = flow_polytope_volume(&g).unwrap();
        let leaves = ps_triangulation(&g, &f).unwrap();
        let cliques = dkk_maximal_cliques(&g, &f).unwrap();
        prop_assert_eq!(BigUint::from(leaves.len()), vol.clone());
        prop_assert_eq!(BigUint::from(cliques.len()), vol);
        let mut ps: Vec<_> = leaves.iter().map(|l| l.routes.clone()).collect();
        ps.sort();
        prop_assert_eq!(ps, cliques);
    }

    #[test]
    fn leaves_are_cliques_and_flows_index_them(g in graph_strategy(), seed in any::<u64>()) {
        let f = Framing::random(&g, &mut ChaCha8Rng::seed_from_u64(seed));
        let leaves = ps_triangulation(&g, &f).unwrap();
        for leaf in &leaves {
            prop_assert_eq!(leaf.routes.len(), g.flow_dimension() + 1);
            for p in &leaf.routes {
                for q in &leaf.routes {
                    prop_assert!(coherent(&g, &f, p, q));
                }
            }
            let c = flow_to_clique(&g, &f, &leaf.flow).unwrap();
            prop_assert_eq!(clique_to_flow(&leaves, &c).unwrap(), leaf.flow.clone());
        }
        let mut flows: Vec<_> = leaves.iter().map(|l| l.flow.clone()).collect();
        flows.sort();
        prop_assert_eq!(flows, enumerate_integer_flows(&g, &volume_netflow(&g)).unwrap());
    }

    #[test]
    fn ehrhart_leading_term_is_the_volume(g in graph_strategy()) {
        let p = flow_ehrhart_polynomial(&g).unwrap();
        let d = g.flow_dimension();
        prop_assert_eq!(p.degree(), d);
        let vol = BigRational::from_integer(BigInt::from(flow_polytope_volume(&g).unwrap()));
        prop_assert_eq!(normalized_leading_term(&p, d), vol);
        prop_assert_eq!(p.eval_int(0), BigRational::from_integer(1.into()));
    }

    #[test]
    fn vertex_set_has_the_flow_dimension(g in graph_strategy()) {
        let v = flow_polytope_vertices(&g);
        prop_assert_eq!(v.len(), enumerate_routes(&g).len());
        prop_assert_eq!(affine_dimension_int(&v).unwrap(), g.flow_dimension());
    }

    #[test]
    fn kostant_matches_enumeration(g in graph_strategy(), a in prop::collection::vec(0i64..3, 4)) {
        let n = g.vertex_count();
        let mut net: Vec<i64> = a.iter().take(n - 1).copied().collect();
        net.resize(n - 1, 0);
        net.push(-net.iter().sum::<i64>());
        let listed = enumerate_integer_flows(&g, &net).unwrap();
        prop_assert_eq!(kostant_value(&g, &net).unwrap(), BigUint::from(listed.len()));
    }

    #[test]
    fn graph_json_round_trip(g in graph_strategy(), seed in any::<u64>()) {
        let f = Framing::random(&g, &mut ChaCha8Rng::seed_from_u64(seed));
        let file = GraphFile::from_json(&GraphFile::from_graph(&g, Some(&f)).to_json()).unwrap();
        let g2 = file.graph().unwrap();
        prop_assert_eq!(&g2, &g);
        prop_assert_eq!(file.framing(&g2).unwrap(), f);
    }

    #[test]
    fn pruning_is_idempotent(n in 3usize..=6, edges in prop::collection::vec((1usize..=6, 1usize..=6), 1..8)) {
        let edges: Vec<_> = edges
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .filter(|&(a, b)| a != b && b <= n)
            .collect();
        prop_assume!(!edges.is_empty());
        let g = DirectedMultigraph::new(n, edges).unwrap();
        if let Ok(p) = prune_inner_vertices(&g) {
            prop_assert!(p.graph.is_pruned());
            prop_assert_eq!(prune_inner_vertices(&p.graph).unwrap().graph, p.graph.clone());
            prop_assert_eq!(p.graph.vertex_count() + p.removed_vertices.len(), n);
        }
    }

    #[test]
    fn composition_and_tree_counts(total in 0u64..6, parts in 1usize..5) {
        let c = compositions(total, parts);
        prop_assert_eq!(BigUint::from(c.len()), binomial(total + parts as u64 - 1, parts as u64 - 1));
        prop_assert!(c.iter().all(|v| v.iter().sum::<u64>() == total));
        let trees = noncrossing_trees(total as usize + 1, parts);
        prop_assert_eq!(trees.len(), c.len());
    }

    #[test]
    fn interpolation_recovers_integer_polynomials(coeffs in prop::collection::vec(-20i64..20, 1..6)) {
        let p = Polynomial::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect());
        let values: Vec<BigInt> = (0..coeffs.len() as u64 + 2).map(|t| p.eval_int(t).to_integer()).collect();
        prop_assert_eq!(Polynomial::interpolate(&values), p);
    }
}

#[test]
fn complete_graph_volumes() {
    let vols: Vec<BigUint> = (2..=7).map(|n| flow_polytope_volume(&DirectedMultigraph::complete(n)).unwrap()).collect();
    let want: Vec<BigUint> = [1u32, 1, 1, 2, 10, 140].map(BigUint::from).to_vec();
    assert_eq!(vols, want);
}

#[test]
fn unpruned_graphs_are_rejected() {
    let g = DirectedMultigraph::new(4, vec![(1, 2), (2, 4), (1, 3)]).unwrap();
    assert!(!g.is_pruned());
    assert!(flow_polytope_volume(&g).is_err());
    let p = prune_inner_vertices(&g).unwrap();
    assert_eq!(p.removed_vertices, vec![3]);
    assert_eq!(flow_polytope_volume(&p.graph).unwrap(), BigUint::from(1u32));
}
