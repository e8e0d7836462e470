//! Framed reductions by noncrossing bipartite trees and the triangulation they
//! produce, indexed by integer flows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedMultigraph, EdgeId, Framing, Route, Vertex};
use crate::kostant::{compositions, netflow_of, volume_netflow, IntegerFlow};

use super::Clique;

/// A noncrossing spanning tree between `left` ordered in-edges and `right`
/// ordered out-edges, encoded by the weak composition `b` of `left - 1`:
/// right vertex `q` meets `b[q] + 1` consecutive left vertices, and neighbouring
/// right vertices share one left vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NoncrossingTree {
    pub left: usize,
    pub composition: Vec<u64>,
}

impl NoncrossingTree {
    pub fn new(left: usize, composition: Vec<u64>) -> Result<Self> {
        if left == 0 || composition.is_empty() {
            return Err(Error::input("noncrossing trees need at least one vertex on each side"));
        }
        if composition.iter().sum::<u64>() != left as u64 - 1 {
            return Err(Error::input(format!("composition {composition:?} does not sum to {}", left - 1)));
        }
        Ok(NoncrossingTree { left, composition })
    }

    pub fn right(&self) -> usize {
        self.composition.len()
    }

    /// Edges `(left index, right index)`, right-major, top to bottom.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.left + self.right() - 1);
        let mut p = 0usize;
        for (q, &b) in self.composition.iter().enumerate() {
            for l in p..=p + b as usize {
                out.push((l, q));
            }
            p += b as usize;
        }
        out
    }
}

/// All noncrossing trees with the given side sizes, compositions in colex order.
pub fn noncrossing_trees(left: usize, right: usize) -> Vec<NoncrossingTree> {
    if left == 0 || right == 0 {
        return Vec::new();
    }
    compositions(left as u64 - 1, right).into_iter().map(|composition| NoncrossingTree { left, composition }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct StateEdge {
    tail: Vertex,
    head: Vertex,
    /// Original edges summed into this one, in path order.
    path: Vec<EdgeId>,
    alive: bool,
}

/// One step of a reduction sequence: the vertex and the composition chosen there.
pub type TraceStep = (Vertex, Vec<u64>);

/// A framed graph partway through the reduction sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionState {
    sink: Vertex,
    edges: Vec<StateEdge>,
    in_order: Vec<Vec<usize>>,
    out_order: Vec<Vec<usize>>,
    next_vertex: Vertex,
    flow: IntegerFlow,
    trace: Vec<TraceStep>,
}

impl ReductionState {
    pub fn new(g: &DirectedMultigraph, f: &Framing) -> Result<Self> {
        if !g.is_pruned() {
            return Err(Error::contract("reductions need a pruned graph"));
        }
        let n = g.vertex_count();
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(tail, head))| StateEdge { tail, head, path: vec![e], alive: true })
            .collect();
        let mut in_order = vec![Vec::new(); n + 1];
        let mut out_order = vec![Vec::new(); n + 1];
        for v in g.inner_vertices() {
            in_order[v] = f.in_order(v).to_vec();
            out_order[v] = f.out_order(v).to_vec();
        }
        Ok(ReductionState {
            sink: n,
            edges,
            in_order,
            out_order,
            next_vertex: 2,
            flow: vec![0; g.edge_count()],
            trace: Vec::new(),
        })
    }

    /// The vertex the next reduction must happen at, if any remain.
    pub fn next_vertex(&self) -> Option<Vertex> {
        (self.next_vertex < self.sink).then_some(self.next_vertex)
    }

    /// `(in-degree, out-degree)` of the next vertex.
    pub fn next_shape(&self) -> Option<(usize, usize)> {
        self.next_vertex().map(|v| (self.in_order[v].len(), self.out_order[v].len()))
    }

    pub fn flow(&self) -> &[u64] {
        &self.flow
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    pub fn is_leaf(&self) -> bool {
        self.next_vertex().is_none()
    }

    /// Original-edge paths of the remaining edges, sorted; on a leaf these are
    /// the routes of the simplex.
    pub fn paths(&self) -> Vec<Vec<EdgeId>> {
        let mut v: Vec<Vec<EdgeId>> = self.edges.iter().filter(|e| e.alive).map(|e| e.path.clone()).collect();
        v.sort();
        v
    }

    /// Removes vertex `i` and joins its in- and out-edges along the tree `t`,
    /// recording `t`'s composition as flow on `i`'s out-edges and ordering the
    /// new edges at each head by the inheritance rule.
    pub fn reduce_at_vertex(&self, i: Vertex, t: &NoncrossingTree) -> Result<ReductionState> {
        if self.next_vertex() != Some(i) {
            return Err(Error::contract(format!(
                "reductions go in increasing vertex order; expected {:?}, got {i}",
                self.next_vertex()
            )));
        }
        let ins = &self.in_order[i];
        let outs = &self.out_order[i];
        if t.left != ins.len() || t.right() != outs.len() {
            return Err(Error::contract(format!(
                "tree has shape ({}, {}) but vertex {i} has {} in- and {} out-edges",
                t.left,
                t.right(),
                ins.len(),
                outs.len()
            )));
        }
        let mut next = self.clone();
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); outs.len()];
        for (l, q) in t.edges() {
            let (a, b) = (&self.edges[ins[l]], &self.edges[outs[q]]);
            let mut path = a.path.clone();
            path.extend_from_slice(&b.path);
            blocks[q].push(next.edges.len());
            next.edges.push(StateEdge { tail: a.tail, head: b.head, path, alive: true });
        }
        for &e in ins.iter().chain(outs) {
            next.edges[e].alive = false;
        }
        for (q, &m) in outs.iter().enumerate() {
            let orig = match self.edges[m].path.as_slice() {
                [orig] => *orig,
                _ => return Err(Error::internal("out-edge of the reduced vertex is not an original edge")),
            };
            next.flow[orig] = t.composition[q];
            let s = self.edges[m].head;
            if s < self.sink {
                next.in_order[s] =
                    next.in_order[s].iter().flat_map(|&x| if x == m { blocks[q].clone() } else { vec![x] }).collect();
            }
        }
        next.in_order[i].clear();
        next.out_order[i].clear();
        next.next_vertex = i + 1;
        next.trace.push((i, t.composition.clone()));
        Ok(next)
    }
}

/// A top-dimensional simplex of the framed reduction triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsLeaf {
    pub routes: Clique,
    pub flow: IntegerFlow,
    pub trace: Vec<TraceStep>,
}

fn leaf_of(state: &ReductionState, g: &DirectedMultigraph) -> Result<PsLeaf> {
    let routes = state
        .paths()
        .into_iter()
        .map(|p| Route::new(g, p).map_err(|e| Error::internal(format!("leaf edge is not a route: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(PsLeaf { routes, flow: state.flow.clone(), trace: state.trace.clone() })
}

/// Explores every sequence of tree choices at vertices `2..n-1`; leaves are
/// sorted by their traces.
pub fn ps_triangulation(g: &DirectedMultigraph, f: &Framing) -> Result<Vec<PsLeaf>> {
    let root = ReductionState::new(g, f)?;
    let mut leaves = Vec::new();
    let mut stack = vec![root];
    while let Some(state) = stack.pop() {
        let Some(v) = state.next_vertex() else {
            leaves.push(leaf_of(&state, g)?);
            continue;
        };
        let (l, r) = state.next_shape().expect("vertex remains");
        for t in noncrossing_trees(l, r) {
            stack.push(state.reduce_at_vertex(v, &t)?);
        }
    }
    leaves.sort_by(|a, b| a.trace.cmp(&b.trace));
    Ok(leaves)
}

/// Replays the reduction, choosing at each vertex the tree whose composition is
/// the flow on that vertex's out-edges, and returns the routes of the leaf.
pub fn flow_to_clique(g: &DirectedMultigraph, f: &Framing, flow: &[u64]) -> Result<Clique> {
    if flow.len() != g.edge_count() {
        return Err(Error::FlowNotRealizable("flow has the wrong number of entries".into()));
    }
    if netflow_of(g, flow) != volume_netflow(g) {
        return Err(Error::FlowNotRealizable(format!(
            "netflow must be {:?}, got {:?}",
            volume_netflow(g),
            netflow_of(g, flow)
        )));
    }
    let mut state = ReductionState::new(g, f)?;
    while let Some(v) = state.next_vertex() {
        let composition: Vec<u64> = state.out_order[v].iter().map(|&e| flow[e]).collect();
        let (l, _) = state.next_shape().expect("vertex remains");
        let t = NoncrossingTree::new(l, composition)
            .map_err(|_| Error::FlowNotRealizable(format!("no noncrossing tree at vertex {v} matches the flow")))?;
        state = state.reduce_at_vertex(v, &t)?;
    }
    let leaf = leaf_of(&state, g)?;
    if leaf.flow != flow {
        return Err(Error::internal("replayed reduction does not reproduce the flow"));
    }
    Ok(leaf.routes)
}

/// The flow indexing the leaf with the given routes.
pub fn clique_to_flow(leaves: &[PsLeaf], clique: &[Route]) -> Result<IntegerFlow> {
    let mut sorted = clique.to_vec();
    sorted.sort();
    leaves
        .iter()
        .find(|l| l.routes == sorted)
        .map(|l| l.flow.clone())
        .ok_or_else(|| Error::input("no simplex of the triangulation has this route set"))
}

/// Matches the maximal cliques of two framings through their common flow index.
pub fn framing_change_bijection(g: &DirectedMultigraph, from: &Framing, to: &Framing) -> Result<Vec<(Clique, Clique)>> {
    let source = ps_triangulation(g, from)?;
    let mut pairs = Vec::with_capacity(source.len());
    for leaf in &source {
        pairs.push((leaf.routes.clone(), flow_to_clique(g, to, &leaf.flow)?));
    }
    let mut images: Vec<&Clique> = pairs.iter().map(|(_, b)| b).collect();
    images.sort();
    images.dedup();
    if images.len() != pairs.len() {
        return Err(Error::internal("framing change is not injective"));
    }
    Ok(pairs)
}
