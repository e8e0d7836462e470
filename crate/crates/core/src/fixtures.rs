//! Built-in graphs and posets used by the verifier and the test suites.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::graph::{DirectedMultigraph, Framing};
use crate::planar::{arc_diagram, poset_to_flow_graph, PlanarGraphData};
use crate::poset::{antichain, chain, partitions_in_staircase, skew_star, zigzag, Poset};

#[derive(Clone, Debug)]
pub struct GraphFixture {
    pub name: String,
    pub graph: DirectedMultigraph,
    pub framing: Framing,
}

#[derive(Clone, Debug)]
pub struct PlanarFixture {
    pub name: String,
    pub data: PlanarGraphData,
}

impl PlanarFixture {
    pub fn as_graph_fixture(&self) -> GraphFixture {
        GraphFixture { name: self.name.clone(), graph: self.data.graph.clone(), framing: self.data.framing.clone() }
    }
}

#[derive(Clone, Debug)]
pub struct PosetFixture {
    pub name: String,
    pub poset: Poset,
}

/// `K_4` through `K_7` with the top-to-bottom framing.
pub fn complete_graphs() -> Vec<GraphFixture> {
    (4..=7)
        .map(|n| {
            let graph = DirectedMultigraph::complete(n);
            let framing = Framing::top_to_bottom(&graph);
            GraphFixture { name: format!("K{n}"), graph, framing }
        })
        .collect()
}

pub fn triangle() -> DirectedMultigraph {
    DirectedMultigraph::new(3, vec![(1, 2), (2, 3), (1, 3)]).expect("valid graph")
}

/// Two doubled edges in a row: `1 => 2 => 3`.
pub fn double_path() -> DirectedMultigraph {
    DirectedMultigraph::new(3, vec![(1, 2), (1, 2), (2, 3), (2, 3)]).expect("valid graph")
}

/// A four-vertex arc diagram whose regions form a small tree:
///
/// ```text
///   e0: 1 -> 4 spans everything
///   e1: 1 -> 2 over e5: 1 -> 2
///   e2: 2 -> 4 over e3: 2 -> 3 and e4: 3 -> 4, and e4 over e6: 3 -> 4
/// ```
///
/// Regions `R1 < R0`, `R2 < R0`, `R4 < R2`, with three linear extensions.
pub fn nested_arcs() -> (DirectedMultigraph, Framing) {
    let g =
        DirectedMultigraph::new(4, vec![(1, 4), (1, 2), (2, 4), (2, 3), (3, 4), (1, 2), (3, 4)]).expect("valid graph");
    let ins = BTreeMap::from([(2, vec![1, 5]), (3, vec![3])]);
    let outs = BTreeMap::from([(2, vec![2, 3]), (3, vec![4, 6])]);
    let f = Framing::new(&g, &ins, &outs).expect("valid framing");
    (g, f)
}

fn partition_name(lambda: &[usize]) -> String {
    let parts: Vec<String> = lambda.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

/// Posets `(δ_n \ λ)^*` for `1 <= n <= max_n` and every `λ` in the staircase.
pub fn staircase_posets(max_n: usize) -> Vec<PosetFixture> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for lambda in partitions_in_staircase(n) {
            let poset = skew_star(n, &lambda).expect("partition fits the staircase");
            out.push(PosetFixture { name: format!("staircase n={n} λ={}", partition_name(&lambda)), poset });
        }
    }
    out
}

/// Chains, antichains and zigzags with `1..=max` elements.
pub fn small_posets(max: usize) -> Vec<PosetFixture> {
    let mut out = Vec::new();
    for k in 1..=max {
        out.push(PosetFixture { name: format!("chain {k}"), poset: chain(k) });
        out.push(PosetFixture { name: format!("antichain {k}"), poset: antichain(k) });
        out.push(PosetFixture { name: format!("zigzag {k}"), poset: zigzag(k) });
    }
    out
}

/// Every poset in the corpus: staircase posets for `n <= 4` and the small
/// families up to six elements.
pub fn poset_fixtures() -> Vec<PosetFixture> {
    let mut out = staircase_posets(4);
    out.extend(small_posets(6));
    out
}

fn from_arcs(name: &str, g: DirectedMultigraph, f: Framing) -> Result<PlanarFixture> {
    Ok(PlanarFixture { name: name.to_string(), data: arc_diagram(&g, &f)? })
}

fn from_poset(p: &PosetFixture) -> Result<PlanarFixture> {
    Ok(PlanarFixture { name: format!("G of {}", p.name), data: poset_to_flow_graph(&p.poset)? })
}

/// Planar graphs with their drawings: the triangle, parallel-edge graphs, the
/// nested-arcs graph, the flow graphs of the staircase posets for `n <= 4`, and
/// of chains, antichains and zigzags up to four elements.
pub fn planar_fixtures() -> Vec<PlanarFixture> {
    let mut out = Vec::new();
    let tri = triangle();
    let tri_f = Framing::top_to_bottom(&tri);
    out.push(from_arcs("triangle", tri, tri_f).expect("triangle is planar"));
    for k in 2..=3 {
        let g = DirectedMultigraph::parallel(k);
        let f = Framing::id_order(&g);
        out.push(from_arcs(&format!("parallel {k}"), g, f).expect("parallel edges are planar"));
    }
    let dp = double_path();
    let dp_f = Framing::id_order(&dp);
    out.push(from_arcs("double path", dp, dp_f).expect("double path is planar"));
    let (g, f) = nested_arcs();
    out.push(from_arcs("nested arcs", g, f).expect("nested arcs are planar"));
    for p in staircase_posets(4).iter().chain(small_posets(4).iter()) {
        out.push(from_poset(p).expect("built-in posets carry planar embeddings"));
    }
    out
}

/// Framed graphs for triangulation checks: the complete graphs and every
/// planar fixture under its planar framing.
pub fn graph_fixtures() -> Vec<GraphFixture> {
    let mut out = complete_graphs();
    out.extend(planar_fixtures().iter().map(PlanarFixture::as_graph_fixture));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::dual_poset;
    use crate::poset::count_linear_extensions;

    #[test]
    fn nested_arcs_poset() {
        let (g, f) = nested_arcs();
        let pg = arc_diagram(&g, &f).unwrap();
        let dp = dual_poset(&pg).unwrap();
        let p = &dp.poset;
        let idx = |l: &str| p.index_of(l).unwrap();
        let mut covers: Vec<(&str, &str)> = p.covers().iter().map(|&(a, b)| (p.label(a), p.label(b))).collect();
        covers.sort();
        assert_eq!(covers, vec![("R1", "R0"), ("R2", "R0"), ("R4", "R2")]);
        assert!(p.less(idx("R4"), idx("R0")));
        assert_eq!(count_linear_extensions(p), 3u32.into());
    }

    #[test]
    fn corpus_sizes() {
        assert_eq!(complete_graphs().len(), 4);
        // Catalan many staircase posets per n
        assert_eq!(staircase_posets(4).len(), 1 + 2 + 5 + 14);
        assert_eq!(poset_fixtures().len(), 22 + 18);
        let planar = planar_fixtures();
        assert_eq!(planar.len(), 5 + 22 + 12);
        for p in &planar {
            assert!(p.data.graph.is_pruned(), "{}", p.name);
        }
    }
}
