//! Triangulations of flow and order polytopes: canonical (by linear
//! extensions), DKK (by maximal cliques of coherent routes) and framed PS (by
//! noncrossing-tree reductions), with the bijections between their indices.

mod bijection;
mod canonical;
mod dkk;
mod ps;

use std::collections::BTreeSet;

use serde::Serialize;

pub use bijection::linext_to_clique;
pub use canonical::{canonical_triangulation, extension_simplex, order_polytope_vertices, CanonicalSimplex};
pub use dkk::{coherence_graph, dkk_maximal_cliques, dkk_triangulation, maximal_cliques};
pub use ps::{
    clique_to_flow, flow_to_clique, framing_change_bijection, noncrossing_trees, ps_triangulation, NoncrossingTree,
    PsLeaf, ReductionState, TraceStep,
};

use crate::geometry::IntPoint;
use crate::graph::{DirectedMultigraph, Route};

/// Sorted set of routes.
pub type Clique = Vec<Route>;

/// Unit route flows of a clique, sorted.
pub fn route_simplex(g: &DirectedMultigraph, clique: &[Route]) -> Vec<IntPoint> {
    let mut v: Vec<IntPoint> = clique.iter().map(|r| r.indicator(g).into_iter().map(|x| x as i64).collect()).collect();
    v.sort();
    v
}

/// Vertices of a flow polytope: unit flows along routes.
pub fn flow_polytope_vertices(g: &DirectedMultigraph) -> Vec<IntPoint> {
    route_simplex(g, &crate::graph::enumerate_routes(g))
}

/// Simplices present in one triangulation but not the other.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TriangulationDiff {
    pub only_left: Vec<Vec<IntPoint>>,
    pub only_right: Vec<Vec<IntPoint>>,
}

impl TriangulationDiff {
    pub fn is_equal(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

/// Compares two triangulations as sets of simplices (vertex order ignored).
pub fn compare_triangulations(a: &[Vec<IntPoint>], b: &[Vec<IntPoint>]) -> TriangulationDiff {
    let key = |s: &Vec<IntPoint>| {
        let mut s = s.clone();
        s.sort();
        s
    };
    let sa: BTreeSet<Vec<IntPoint>> = a.iter().map(key).collect();
    let sb: BTreeSet<Vec<IntPoint>> = b.iter().map(key).collect();
    TriangulationDiff {
        only_left: sa.difference(&sb).cloned().collect(),
        only_right: sb.difference(&sa).cloned().collect(),
    }
}
