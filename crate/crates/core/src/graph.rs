//! Directed acyclic multigraphs on `1..=n` with forward edges, framings, routes
//! and the coherence relation between routes.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type EdgeId = usize;
/// Vertices are 1-based, as in the drawings: source is `1`, sink is `n`.
pub type Vertex = usize;

/// A loopless multigraph whose edges all point from a smaller to a larger vertex.
///
/// Edge ids are list positions; parallel edges are distinguished only by id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirectedMultigraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl DirectedMultigraph {
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("graph must have at least one vertex"));
        }
        for (id, &(t, h)) in edges.iter().enumerate() {
            if t < 1 || h > n {
                return Err(Error::input(format!("edge {id} = ({t},{h}) has an endpoint outside 1..={n}")));
            }
            if t >= h {
                return Err(Error::input(format!(
                    "edge {id} = ({t},{h}) must point from the smaller to the larger vertex"
                )));
            }
        }
        Ok(DirectedMultigraph { n, edges })
    }

    /// The complete graph `K_n` with edges `(i,j)`, `i<j`, listed lexicographically.
    pub fn complete(n: usize) -> Self {
        let edges = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        DirectedMultigraph { n: n.max(1), edges }
    }

    /// `k` parallel edges from 1 to 2.
    pub fn parallel(k: usize) -> Self {
        DirectedMultigraph { n: 2, edges: vec![(1, 2); k] }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn tail(&self, e: EdgeId) -> Vertex {
        self.edges[e].0
    }

    pub fn head(&self, e: EdgeId) -> Vertex {
        self.edges[e].1
    }

    pub fn sink(&self) -> Vertex {
        self.n
    }

    pub fn is_inner(&self, v: Vertex) -> bool {
        v > 1 && v < self.n
    }

    pub fn inner_vertices(&self) -> impl Iterator<Item = Vertex> {
        2..self.n.max(2)
    }

    /// Edge ids with head `v`, ascending.
    pub fn in_edges(&self, v: Vertex) -> Vec<EdgeId> {
        (0..self.edges.len()).filter(|&e| self.edges[e].1 == v).collect()
    }

    /// Edge ids with tail `v`, ascending.
    pub fn out_edges(&self, v: Vertex) -> Vec<EdgeId> {
        (0..self.edges.len()).filter(|&e| self.edges[e].0 == v).collect()
    }

    pub fn indegree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(_, h)| h == v).count()
    }

    pub fn outdegree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(t, _)| t == v).count()
    }

    /// Every inner vertex has both incoming and outgoing edges.
    pub fn is_pruned(&self) -> bool {
        self.n >= 2
            && !self.edges.is_empty()
            && self.inner_vertices().all(|v| self.indegree(v) > 0 && self.outdegree(v) > 0)
    }

    /// `#E - #V + 1`, the dimension of the flow polytope of a pruned graph.
    pub fn flow_dimension(&self) -> usize {
        (self.edges.len() + 1).saturating_sub(self.n)
    }
}

/// Result of [`prune_inner_vertices`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pruned {
    pub graph: DirectedMultigraph,
    /// `vertex_labels[k - 1]` is the original label of new vertex `k`.
    pub vertex_labels: Vec<Vertex>,
    /// `edge_origin[e]` is the original id of new edge `e`.
    pub edge_origin: Vec<EdgeId>,
    /// Original labels of the removed vertices, in removal order.
    pub removed_vertices: Vec<Vertex>,
}

/// Repeatedly deletes inner vertices lacking incoming or outgoing edges (such
/// edges carry zero flow), then relabels the survivors contiguously.
pub fn prune_inner_vertices(g: &DirectedMultigraph) -> Result<Pruned> {
    let n = g.n;
    if n < 2 {
        return Err(Error::DegenerateGraph);
    }
    let mut alive_v = vec![true; n + 1];
    let mut alive_e = vec![true; g.edges.len()];
    let mut removed = Vec::new();
    loop {
        let mut changed = false;
        for v in 2..n {
            if !alive_v[v] {
                continue;
            }
            let has_in = g.edges.iter().enumerate().any(|(e, &(_, h))| alive_e[e] && h == v);
            let has_out = g.edges.iter().enumerate().any(|(e, &(t, _))| alive_e[e] && t == v);
            if !(has_in && has_out) {
                alive_v[v] = false;
                removed.push(v);
                for (e, &(t, h)) in g.edges.iter().enumerate() {
                    if t == v || h == v {
                        alive_e[e] = false;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !alive_e.iter().any(|&a| a) {
        return Err(Error::DegenerateGraph);
    }
    let vertex_labels: Vec<Vertex> = (1..=n).filter(|&v| alive_v[v]).collect();
    let mut relabel = vec![0; n + 1];
    for (k, &v) in vertex_labels.iter().enumerate() {
        relabel[v] = k + 1;
    }
    let edge_origin: Vec<EdgeId> = (0..g.edges.len()).filter(|&e| alive_e[e]).collect();
    let edges = edge_origin.iter().map(|&e| (relabel[g.edges[e].0], relabel[g.edges[e].1])).collect();
    let graph = DirectedMultigraph::new(vertex_labels.len(), edges)?;
    Ok(Pruned { graph, vertex_labels, edge_origin, removed_vertices: removed })
}

/// Linear orders on the incoming and outgoing edges of every inner vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Framing {
    in_order: Vec<Vec<EdgeId>>,
    out_order: Vec<Vec<EdgeId>>,
    in_rank: Vec<Option<usize>>,
    out_rank: Vec<Option<usize>>,
}

impl Framing {
    /// Builds a framing from explicit orders. Inner vertices missing from a map
    /// fall back to ascending edge id.
    pub fn new(
        g: &DirectedMultigraph,
        in_orders: &BTreeMap<Vertex, Vec<EdgeId>>,
        out_orders: &BTreeMap<Vertex, Vec<EdgeId>>,
    ) -> Result<Self> {
        for &v in in_orders.keys().chain(out_orders.keys()) {
            if !g.is_inner(v) {
                return Err(Error::input(format!("framing given at non-inner vertex {v}")));
            }
        }
        let n = g.vertex_count();
        let mut in_order = vec![Vec::new(); n + 1];
        let mut out_order = vec![Vec::new(); n + 1];
        for v in g.inner_vertices() {
            in_order[v] = match in_orders.get(&v) {
                Some(o) => check_permutation(o, &g.in_edges(v), v, "in")?,
                None => g.in_edges(v),
            };
            out_order[v] = match out_orders.get(&v) {
                Some(o) => check_permutation(o, &g.out_edges(v), v, "out")?,
                None => g.out_edges(v),
            };
        }
        Ok(Self::from_orders(g, in_order, out_order))
    }

    fn from_orders(g: &DirectedMultigraph, in_order: Vec<Vec<EdgeId>>, out_order: Vec<Vec<EdgeId>>) -> Self {
        let mut in_rank = vec![None; g.edge_count()];
        let mut out_rank = vec![None; g.edge_count()];
        for order in &in_order {
            for (k, &e) in order.iter().enumerate() {
                in_rank[e] = Some(k);
            }
        }
        for order in &out_order {
            for (k, &e) in order.iter().enumerate() {
                out_rank[e] = Some(k);
            }
        }
        Framing { in_order, out_order, in_rank, out_rank }
    }

    /// Every order sorted by edge id.
    pub fn id_order(g: &DirectedMultigraph) -> Self {
        let n = g.vertex_count();
        let mut in_order = vec![Vec::new(); n + 1];
        let mut out_order = vec![Vec::new(); n + 1];
        for v in g.inner_vertices() {
            in_order[v] = g.in_edges(v);
            out_order[v] = g.out_edges(v);
        }
        Self::from_orders(g, in_order, out_order)
    }

    /// The order read off a drawing with every edge as an arc above the vertex
    /// line: longer arcs on top, parallel arcs by ascending id.
    pub fn top_to_bottom(g: &DirectedMultigraph) -> Self {
        let n = g.vertex_count();
        let mut in_order = vec![Vec::new(); n + 1];
        let mut out_order = vec![Vec::new(); n + 1];
        for v in g.inner_vertices() {
            let mut ins = g.in_edges(v);
            ins.sort_by_key(|&e| (g.tail(e), e));
            let mut outs = g.out_edges(v);
            outs.sort_by_key(|&e| (std::cmp::Reverse(g.head(e)), e));
            in_order[v] = ins;
            out_order[v] = outs;
        }
        Self::from_orders(g, in_order, out_order)
    }

    /// Independent uniform shuffles of every order.
    pub fn random<R: Rng + ?Sized>(g: &DirectedMultigraph, rng: &mut R) -> Self {
        let n = g.vertex_count();
        let mut in_order = vec![Vec::new(); n + 1];
        let mut out_order = vec![Vec::new(); n + 1];
        for v in g.inner_vertices() {
            let mut ins = g.in_edges(v);
            ins.shuffle(rng);
            let mut outs = g.out_edges(v);
            outs.shuffle(rng);
            in_order[v] = ins;
            out_order[v] = outs;
        }
        Self::from_orders(g, in_order, out_order)
    }

    /// Every framing of `g`; the count is the product of `indeg! * outdeg!`
    /// over inner vertices, so only use this on small graphs.
    pub fn all(g: &DirectedMultigraph) -> Vec<Framing> {
        let n = g.vertex_count();
        let mut slots: Vec<Vec<Vec<EdgeId>>> = Vec::new();
        for v in g.inner_vertices() {
            slots.push(permutations(&g.in_edges(v)));
            slots.push(permutations(&g.out_edges(v)));
        }
        let mut out = Vec::new();
        let mut choice = vec![0usize; slots.len()];
        loop {
            let mut in_order = vec![Vec::new(); n + 1];
            let mut out_order = vec![Vec::new(); n + 1];
            for (k, v) in g.inner_vertices().enumerate() {
                in_order[v] = slots[2 * k][choice[2 * k]].clone();
                out_order[v] = slots[2 * k + 1][choice[2 * k + 1]].clone();
            }
            out.push(Self::from_orders(g, in_order, out_order));
            let mut k = 0;
            loop {
                if k == slots.len() {
                    return out;
                }
                choice[k] += 1;
                if choice[k] < slots[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    /// Incoming edges of `v`, least first. Empty for the source and sink.
    pub fn in_order(&self, v: Vertex) -> &[EdgeId] {
        self.in_order.get(v).map_or(&[], Vec::as_slice)
    }

    pub fn out_order(&self, v: Vertex) -> &[EdgeId] {
        self.out_order.get(v).map_or(&[], Vec::as_slice)
    }

    /// Position of `e` among the incoming edges of its head.
    pub fn in_rank(&self, e: EdgeId) -> Option<usize> {
        self.in_rank.get(e).copied().flatten()
    }

    pub fn out_rank(&self, e: EdgeId) -> Option<usize> {
        self.out_rank.get(e).copied().flatten()
    }

    /// Same orders with the rank of one vertex's incoming edges reversed.
    pub fn with_reversed_in(&self, g: &DirectedMultigraph, v: Vertex) -> Framing {
        let mut in_order = self.in_order.clone();
        in_order[v].reverse();
        Self::from_orders(g, in_order, self.out_order.clone())
    }

    pub fn with_reversed_out(&self, g: &DirectedMultigraph, v: Vertex) -> Framing {
        let mut out_order = self.out_order.clone();
        out_order[v].reverse();
        Self::from_orders(g, self.in_order.clone(), out_order)
    }

    /// Transports a framing of the original graph onto its pruned copy.
    pub fn restrict(&self, pruned: &Pruned) -> Framing {
        let g = &pruned.graph;
        let mut new_id = BTreeMap::new();
        for (e, &orig) in pruned.edge_origin.iter().enumerate() {
            new_id.insert(orig, e);
        }
        let n = g.vertex_count();
        let mut in_order = vec![Vec::new(); n + 1];
        let mut out_order = vec![Vec::new(); n + 1];
        for v in g.inner_vertices() {
            let orig_v = pruned.vertex_labels[v - 1];
            in_order[v] = self.in_order(orig_v).iter().filter_map(|e| new_id.get(e).copied()).collect();
            out_order[v] = self.out_order(orig_v).iter().filter_map(|e| new_id.get(e).copied()).collect();
        }
        Self::from_orders(g, in_order, out_order)
    }
}

fn check_permutation(order: &[EdgeId], expected: &[EdgeId], v: Vertex, side: &str) -> Result<Vec<EdgeId>> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != expected {
        return Err(Error::input(format!(
            "{side}-order at vertex {v} must list exactly the edges {expected:?}, got {order:?}"
        )));
    }
    Ok(order.to_vec())
}

pub(crate) fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first.clone());
            out.push(tail);
        }
    }
    out
}

/// A maximal directed path from vertex 1 to vertex `n`, stored as its edge ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Route(Vec<EdgeId>);

impl Route {
    pub fn new(g: &DirectedMultigraph, edges: Vec<EdgeId>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::input("a route needs at least one edge"));
        }
        if let Some(&bad) = edges.iter().find(|&&e| e >= g.edge_count()) {
            return Err(Error::input(format!("edge id {bad} out of range")));
        }
        if g.tail(edges[0]) != 1 || g.head(*edges.last().unwrap()) != g.sink() {
            return Err(Error::input(format!("{edges:?} does not run from 1 to {}", g.sink())));
        }
        if edges.windows(2).any(|w| g.head(w[0]) != g.tail(w[1])) {
            return Err(Error::input(format!("{edges:?} is not a directed path")));
        }
        Ok(Route(edges))
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.0
    }

    /// `1, ..., n` along the route.
    pub fn vertices(&self, g: &DirectedMultigraph) -> Vec<Vertex> {
        let mut vs = Vec::with_capacity(self.0.len() + 1);
        vs.push(g.tail(self.0[0]));
        vs.extend(self.0.iter().map(|&e| g.head(e)));
        vs
    }

    /// The unit flow along the route, one entry per edge of `g`.
    pub fn indicator(&self, g: &DirectedMultigraph) -> Vec<u64> {
        let mut v = vec![0; g.edge_count()];
        for &e in &self.0 {
            v[e] += 1;
        }
        v
    }

    /// Inverse of [`Route::indicator`] for 0/1 flows of total size one.
    pub fn from_indicator(g: &DirectedMultigraph, flow: &[u64]) -> Result<Self> {
        if flow.len() != g.edge_count() || flow.iter().any(|&x| x > 1) {
            return Err(Error::input("not a 0/1 flow on this graph"));
        }
        let mut edges: Vec<EdgeId> = (0..flow.len()).filter(|&e| flow[e] == 1).collect();
        edges.sort_by_key(|&e| g.tail(e));
        Route::new(g, edges)
    }
}

/// All routes of `g`, lexicographic by edge-id sequence.
pub fn enumerate_routes(g: &DirectedMultigraph) -> Vec<Route> {
    let n = g.vertex_count();
    let mut outs = vec![Vec::new(); n + 1];
    for (e, &(t, _)) in g.edges().iter().enumerate() {
        outs[t].push(e);
    }
    let mut routes = Vec::new();
    let mut stack = Vec::new();
    fn dfs(g: &DirectedMultigraph, outs: &[Vec<EdgeId>], v: Vertex, stack: &mut Vec<EdgeId>, routes: &mut Vec<Route>) {
        if v == g.sink() {
            if !stack.is_empty() {
                routes.push(Route(stack.clone()));
            }
            return;
        }
        for &e in &outs[v] {
            stack.push(e);
            dfs(g, outs, g.head(e), stack, routes);
            stack.pop();
        }
    }
    if n >= 2 {
        dfs(g, &outs, 1, &mut stack, &mut routes);
    }
    routes.sort();
    routes
}

/// Compares two paths that end at `v` under the induced order on paths into
/// `v`: at the last vertex `w` before which they differ, the edges entering `w`
/// are compared in the framing of `w`.
pub fn compare_into(g: &DirectedMultigraph, f: &Framing, v: Vertex, p: &[EdgeId], q: &[EdgeId]) -> Result<Ordering> {
    for path in [p, q] {
        match path.last() {
            Some(&e) if g.head(e) == v => {}
            _ => return Err(Error::contract(format!("path {path:?} does not end at vertex {v}"))),
        }
    }
    if p == q {
        return Ok(Ordering::Equal);
    }
    let (mut i, mut j) = (p.len(), q.len());
    loop {
        if i == 0 || j == 0 {
            return Err(Error::contract(format!("paths {p:?} and {q:?} never diverge")));
        }
        let (a, b) = (p[i - 1], q[j - 1]);
        if a != b {
            let w = g.head(a);
            return match (f.in_rank(a), f.in_rank(b)) {
                (Some(ra), Some(rb)) => Ok(ra.cmp(&rb)),
                _ => Err(Error::contract(format!("paths diverge at non-inner vertex {w}"))),
            };
        }
        i -= 1;
        j -= 1;
    }
}

/// Mirror image of [`compare_into`] for paths starting at `v`.
pub fn compare_outof(g: &DirectedMultigraph, f: &Framing, v: Vertex, p: &[EdgeId], q: &[EdgeId]) -> Result<Ordering> {
    for path in [p, q] {
        match path.first() {
            Some(&e) if g.tail(e) == v => {}
            _ => return Err(Error::contract(format!("path {path:?} does not start at vertex {v}"))),
        }
    }
    if p == q {
        return Ok(Ordering::Equal);
    }
    let mut k = 0;
    loop {
        if k == p.len() || k == q.len() {
            return Err(Error::contract(format!("paths {p:?} and {q:?} never diverge")));
        }
        let (a, b) = (p[k], q[k]);
        if a != b {
            let w = g.tail(a);
            return match (f.out_rank(a), f.out_rank(b)) {
                (Some(ra), Some(rb)) => Ok(ra.cmp(&rb)),
                _ => Err(Error::contract(format!("paths diverge at non-inner vertex {w}"))),
            };
        }
        k += 1;
    }
}

/// Two routes are coherent when, at every shared inner vertex, their incoming
/// segments and outgoing segments are ordered the same way.
pub fn coherent(g: &DirectedMultigraph, f: &Framing, p: &Route, q: &Route) -> bool {
    if p == q {
        return true;
    }
    let mut pos_in_q = vec![None; g.vertex_count() + 1];
    for (s, &e) in q.0.iter().enumerate().skip(1) {
        pos_in_q[g.tail(e)] = Some(s);
    }
    for (t, &e) in p.0.iter().enumerate().skip(1) {
        let v = g.tail(e);
        let Some(s) = pos_in_q[v] else { continue };
        let before = compare_into(g, f, v, &p.0[..t], &q.0[..s]).expect("routes from the source diverge");
        let after = compare_outof(g, f, v, &p.0[t..], &q.0[s..]).expect("routes into the sink diverge");
        if before != Ordering::Equal && after != Ordering::Equal && before != after {
            return false;
        }
    }
    true
}

/// On-disk graph format: `{"n": 4, "edges": [[1,2],...], "framing": {"2": {"in": [...], "out": [...]}}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<BTreeMap<String, VertexOrders>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct VertexOrders {
    #[serde(default, rename = "in")]
    pub in_order: Option<Vec<EdgeId>>,
    #[serde(default, rename = "out")]
    pub out_order: Option<Vec<EdgeId>>,
}

impl GraphFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("graph JSON: {e}")))
    }

    pub fn from_graph(g: &DirectedMultigraph, f: Option<&Framing>) -> Self {
        let framing = f.map(|f| {
            g.inner_vertices()
                .map(|v| {
                    let orders = VertexOrders {
                        in_order: Some(f.in_order(v).to_vec()),
                        out_order: Some(f.out_order(v).to_vec()),
                    };
                    (v.to_string(), orders)
                })
                .collect()
        });
        GraphFile { n: g.vertex_count(), edges: g.edges().iter().map(|&(t, h)| [t, h]).collect(), framing }
    }

    pub fn graph(&self) -> Result<DirectedMultigraph> {
        DirectedMultigraph::new(self.n, self.edges.iter().map(|&[t, h]| (t, h)).collect())
    }

    /// The stored framing, or id-order when the file has none.
    pub fn framing(&self, g: &DirectedMultigraph) -> Result<Framing> {
        let Some(map) = &self.framing else {
            return Ok(Framing::id_order(g));
        };
        let mut ins = BTreeMap::new();
        let mut outs = BTreeMap::new();
        for (key, orders) in map {
            let v: Vertex =
                key.trim().parse().map_err(|_| Error::input(format!("framing key {key:?} is not a vertex number")))?;
            if let Some(o) = &orders.in_order {
                ins.insert(v, o.clone());
            }
            if let Some(o) = &orders.out_order {
                outs.insert(v, o.clone());
            }
        }
        Framing::new(g, &ins, &outs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph file serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DirectedMultigraph {
        // e0: 1->3, e1: 2->3, e2: 1->2, e3: 3->4
        DirectedMultigraph::new(4, vec![(1, 3), (2, 3), (1, 2), (3, 4)]).unwrap()
    }

    #[test]
    fn rejects_backward_edges_and_loops() {
        assert!(DirectedMultigraph::new(3, vec![(2, 1)]).is_err());
        assert!(DirectedMultigraph::new(3, vec![(2, 2)]).is_err());
        assert!(DirectedMultigraph::new(3, vec![(1, 4)]).is_err());
    }

    #[test]
    fn pruning_leaves_complete_graphs_alone() {
        let k5 = DirectedMultigraph::complete(5);
        let p = prune_inner_vertices(&k5).unwrap();
        assert_eq!(p.graph, k5);
        assert!(p.removed_vertices.is_empty());

        let path = DirectedMultigraph::new(3, vec![(1, 2), (2, 3), (2, 3)]).unwrap();
        assert_eq!(prune_inner_vertices(&path).unwrap().graph, path);
    }

    #[test]
    fn pruning_removes_dead_ends() {
        let g = DirectedMultigraph::new(4, vec![(1, 2), (3, 4), (1, 4)]).unwrap();
        let p = prune_inner_vertices(&g).unwrap();
        assert_eq!(p.graph, DirectedMultigraph::new(2, vec![(1, 2)]).unwrap());
        assert_eq!(p.vertex_labels, vec![1, 4]);
        assert_eq!(p.edge_origin, vec![2]);
        let mut removed = p.removed_vertices.clone();
        removed.sort();
        assert_eq!(removed, vec![2, 3]);
    }

    #[test]
    fn pruning_cascades_and_detects_disconnection() {
        // 3 has no out-edge; once it goes, 2 has none either.
        let g = DirectedMultigraph::new(4, vec![(1, 2), (2, 3), (1, 4)]).unwrap();
        let p = prune_inner_vertices(&g).unwrap();
        assert_eq!(p.graph.edges(), &[(1, 2)]);

        let dead = DirectedMultigraph::new(4, vec![(1, 2), (3, 4)]).unwrap();
        assert_eq!(prune_inner_vertices(&dead), Err(Error::DegenerateGraph));
    }

    #[test]
    fn route_counts() {
        assert_eq!(enumerate_routes(&DirectedMultigraph::complete(7)).len(), 32);
        for n in 2..=7 {
            assert_eq!(enumerate_routes(&DirectedMultigraph::complete(n)).len(), 1 << (n - 2));
        }
        assert_eq!(enumerate_routes(&DirectedMultigraph::parallel(2)).len(), 2);
    }

    #[test]
    fn routes_are_sorted_and_valid() {
        let g = DirectedMultigraph::complete(5);
        let routes = enumerate_routes(&g);
        assert!(routes.windows(2).all(|w| w[0] < w[1]));
        for r in &routes {
            assert_eq!(Route::new(&g, r.edges().to_vec()).unwrap(), *r);
            assert_eq!(Route::from_indicator(&g, &r.indicator(&g)).unwrap(), *r);
        }
    }

    #[test]
    fn compare_into_example() {
        let g = sample();
        let ins = BTreeMap::from([(3, vec![0, 1])]);
        let f = Framing::new(&g, &ins, &BTreeMap::new()).unwrap();
        assert_eq!(compare_into(&g, &f, 3, &[0], &[2, 1]).unwrap(), Ordering::Less);
        assert_eq!(compare_into(&g, &f, 3, &[2, 1], &[2, 1]).unwrap(), Ordering::Equal);

        let flipped = BTreeMap::from([(3, vec![1, 0])]);
        let f = Framing::new(&g, &flipped, &BTreeMap::new()).unwrap();
        assert_eq!(compare_into(&g, &f, 3, &[0], &[2, 1]).unwrap(), Ordering::Greater);
    }

    #[test]
    fn compare_rejects_paths_not_ending_at_v() {
        let g = sample();
        let f = Framing::id_order(&g);
        assert!(matches!(compare_into(&g, &f, 3, &[2], &[0]), Err(Error::Contract(_))));
        assert!(matches!(compare_outof(&g, &f, 2, &[3], &[1, 3]), Err(Error::Contract(_))));
    }

    #[test]
    fn framing_validation() {
        let g = sample();
        let bad = BTreeMap::from([(3, vec![0])]);
        assert!(Framing::new(&g, &bad, &BTreeMap::new()).is_err());
        let at_source = BTreeMap::from([(1, vec![])]);
        assert!(Framing::new(&g, &BTreeMap::new(), &at_source).is_err());
    }

    #[test]
    fn k4_routes_are_pairwise_coherent_in_every_framing() {
        let g = DirectedMultigraph::complete(4);
        let routes = enumerate_routes(&g);
        let framings = Framing::all(&g);
        assert_eq!(framings.len(), 4);
        for f in &framings {
            for p in &routes {
                for q in &routes {
                    assert!(coherent(&g, f, p, q));
                }
            }
        }
    }

    #[test]
    fn routes_without_common_inner_vertex_are_coherent() {
        let g = DirectedMultigraph::new(4, vec![(1, 2), (2, 4), (1, 3), (3, 4)]).unwrap();
        let f = Framing::id_order(&g);
        let p = Route::new(&g, vec![0, 1]).unwrap();
        let q = Route::new(&g, vec![2, 3]).unwrap();
        assert!(coherent(&g, &f, &p, &q));
    }

    #[test]
    fn k5_has_incoherent_pairs() {
        let g = DirectedMultigraph::complete(5);
        let f = Framing::top_to_bottom(&g);
        let routes = enumerate_routes(&g);
        let incoherent = routes
            .iter()
            .flat_map(|p| routes.iter().map(move |q| (p, q)))
            .filter(|(p, q)| !coherent(&g, &f, p, q))
            .count();
        assert!(incoherent > 0);
    }

    #[test]
    fn json_round_trip_with_framing() {
        let g = DirectedMultigraph::complete(4);
        let f = Framing::top_to_bottom(&g);
        let file = GraphFile::from_graph(&g, Some(&f));
        let back = GraphFile::from_json(&file.to_json()).unwrap();
        let g2 = back.graph().unwrap();
        assert_eq!(g2, g);
        assert_eq!(back.framing(&g2).unwrap(), f);

        let plain = GraphFile::from_json(r#"{"n": 3, "edges": [[1,2],[2,3]]}"#).unwrap();
        let g3 = plain.graph().unwrap();
        assert_eq!(plain.framing(&g3).unwrap(), Framing::id_order(&g3));
        assert!(GraphFile::from_json(r#"{"n": 3, "edges": [[1,2],[2,3]], "framing": {"x": {}}}"#)
            .unwrap()
            .framing(&g3)
            .is_err());
    }

    #[test]
    fn restrict_framing_to_pruned_graph() {
        let g = DirectedMultigraph::new(5, vec![(1, 2), (1, 3), (2, 3), (3, 5), (2, 5), (1, 4)]).unwrap();
        let f = Framing::top_to_bottom(&g);
        let p = prune_inner_vertices(&g).unwrap();
        let fr = f.restrict(&p);
        assert_eq!(fr, Framing::top_to_bottom(&p.graph));
    }
}
