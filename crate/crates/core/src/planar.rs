//! Planar drawings of flow graphs and the two constructions linking them to
//! posets: the truncated dual of a drawn graph, and the flow graph whose
//! truncated dual is a given drawn poset. Also the affine maps between the
//! flow polytope and the order polytope that these dualities induce.

use std::collections::{BTreeMap, VecDeque};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedMultigraph, EdgeId, Framing};
use crate::poset::{Element, Poset};

/// What lies on one side of an edge: a bounded region, or the part of the
/// outer face below the drawing or above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Bottom,
    Top,
    Region(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Region {
    pub label: String,
    pub boundary: Vec<EdgeId>,
}

/// A flow graph with a planar drawing: its bounded regions and, for every edge,
/// the sides below and above it when the edge is traversed left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarGraphData {
    pub graph: DirectedMultigraph,
    pub framing: Framing,
    pub regions: Vec<Region>,
    /// `(below, above)` per edge id.
    pub edge_sides: Vec<(Side, Side)>,
}

impl PlanarGraphData {
    /// Assembles planar data from explicitly supplied regions and sides.
    pub fn new(
        graph: DirectedMultigraph,
        framing: Framing,
        regions: Vec<Region>,
        edge_sides: Vec<(Side, Side)>,
    ) -> Result<Self> {
        let pg = PlanarGraphData { graph, framing, regions, edge_sides };
        pg.validate()?;
        Ok(pg)
    }

    fn validate(&self) -> Result<()> {
        let g = &self.graph;
        if self.regions.len() != g.flow_dimension() || g.edge_count() + 1 < g.vertex_count() {
            return Err(Error::input(format!(
                "{} regions, but a connected plane graph with {} edges and {} vertices has {}",
                self.regions.len(),
                g.edge_count(),
                g.vertex_count(),
                (g.edge_count() + 1).saturating_sub(g.vertex_count())
            )));
        }
        if self.edge_sides.len() != g.edge_count() {
            return Err(Error::input("edge sides must be given for every edge"));
        }
        for (e, &(below, above)) in self.edge_sides.iter().enumerate() {
            if below == above {
                return Err(Error::input(format!("edge {e} has the same region on both sides")));
            }
            for s in [below, above] {
                if let Side::Region(r) = s {
                    if r >= self.regions.len() {
                        return Err(Error::input(format!("edge {e} refers to unknown region {r}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Value of a potential at a side, with `Bottom = 0` and `Top = top`.
    fn side_value<'a>(
        values: &'a [BigRational],
        top: &'a BigRational,
        zero: &'a BigRational,
        s: Side,
    ) -> &'a BigRational {
        match s {
            Side::Bottom => zero,
            Side::Top => top,
            Side::Region(r) => &values[r],
        }
    }

    /// JSON view for debugging.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.graph.vertex_count(),
            "edges": self.graph.edges(),
            "regions": self.regions,
            "edge_sides": self.edge_sides,
        })
    }
}

/// Checks an arc order and computes the regions of the drawing with every edge
/// an arc above the vertex line, stacked at each inner vertex by the framing
/// (first = top). At the source and sink, arcs with different far ends are
/// stacked longest on top; parallel arcs follow their other end, or edge id.
pub fn arc_diagram(g: &DirectedMultigraph, f: &Framing) -> Result<PlanarGraphData> {
    let m = g.edge_count();
    let n = g.vertex_count();
    // stacking position at each end, smaller = higher
    let mut out_pos = vec![0usize; m];
    let mut in_pos = vec![0usize; m];
    for e in 0..m {
        let (t, h) = (g.tail(e), g.head(e));
        if g.is_inner(t) {
            out_pos[e] = f.out_rank(e).expect("inner vertex is framed");
        }
        if g.is_inner(h) {
            in_pos[e] = f.in_rank(e).expect("inner vertex is framed");
        }
    }
    let mut from_source = g.out_edges(1);
    from_source.sort_by_key(|&e| {
        let h = g.head(e);
        (std::cmp::Reverse(h), if g.is_inner(h) { in_pos[e] } else { e })
    });
    for (k, &e) in from_source.iter().enumerate() {
        out_pos[e] = k;
    }
    let mut into_sink = g.in_edges(n);
    into_sink.sort_by_key(|&e| {
        let t = g.tail(e);
        (t, if g.is_inner(t) { out_pos[e] } else { e })
    });
    for (k, &e) in into_sink.iter().enumerate() {
        in_pos[e] = k;
    }

    // above[a][b]: arc a passes over arc b
    let mut above = vec![vec![false; m]; m];
    for a in 0..m {
        for b in 0..m {
            if a == b {
                continue;
            }
            let (s, t) = g.edges()[a];
            let (s2, t2) = g.edges()[b];
            if t <= s2 || t2 <= s {
                continue;
            }
            if (s < s2 && s2 < t && t < t2) || (s2 < s && s < t2 && t2 < t) {
                return Err(Error::NotPlanar(a.min(b), a.max(b)));
            }
            if !(s <= s2 && t2 <= t) {
                continue; // b contains a; handled when roles swap
            }
            let ok = if s == s2 && t == t2 {
                let o = out_pos[a] < out_pos[b];
                if o != (in_pos[a] < in_pos[b]) {
                    return Err(Error::NotPlanar(a.min(b), a.max(b)));
                }
                o
            } else if s == s2 {
                if out_pos[a] > out_pos[b] {
                    return Err(Error::NotPlanar(a.min(b), a.max(b)));
                }
                true
            } else if t == t2 {
                if in_pos[a] > in_pos[b] {
                    return Err(Error::NotPlanar(a.min(b), a.max(b)));
                }
                true
            } else {
                true
            };
            above[a][b] = ok;
        }
    }
    // parent = lowest arc passing over
    let parent: Vec<Option<EdgeId>> = (0..m)
        .map(|b| {
            let over: Vec<EdgeId> = (0..m).filter(|&a| above[a][b]).collect();
            over.iter().copied().find(|&a| over.iter().all(|&c| c == a || above[c][a]))
        })
        .collect();
    let mut region_of = vec![None; m];
    let mut regions = Vec::new();
    for e in 0..m {
        let mut children: Vec<EdgeId> = (0..m).filter(|&c| parent[c] == Some(e)).collect();
        children.sort_by_key(|&c| g.tail(c));
        let (s, t) = g.edges()[e];
        let mut at = s;
        let mut tiled = !children.is_empty();
        for &c in &children {
            if g.tail(c) != at {
                tiled = false;
                break;
            }
            at = g.head(c);
        }
        if tiled && at == t {
            region_of[e] = Some(regions.len());
            let mut boundary = vec![e];
            boundary.extend(children);
            boundary.sort_unstable();
            regions.push(Region { label: format!("R{e}"), boundary });
        }
    }
    let edge_sides = (0..m)
        .map(|e| {
            let below = region_of[e].map_or(Side::Bottom, Side::Region);
            let above = match parent[e] {
                None => Side::Top,
                Some(p) => region_of[p].map_or(Side::Bottom, Side::Region),
            };
            (below, above)
        })
        .collect();
    PlanarGraphData::new(g.clone(), f.clone(), regions, edge_sides)
}

/// The poset read off a planar drawing, with the edge separating each cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPoset {
    pub poset: Poset,
    /// Element `k` is region `k`; each cover `(x, y)` maps to the edge between them.
    pub cover_edge: BTreeMap<(Element, Element), EdgeId>,
}

/// Regions ordered by "directly above across an edge", closed transitively.
pub fn dual_poset(pg: &PlanarGraphData) -> Result<DualPoset> {
    let labels = pg.regions.iter().map(|r| r.label.clone()).collect();
    let mut relations = Vec::new();
    let mut separating = BTreeMap::new();
    for (e, &(below, above)) in pg.edge_sides.iter().enumerate() {
        if let (Side::Region(x), Side::Region(y)) = (below, above) {
            relations.push((x, y));
            separating.entry((x, y)).or_insert(e);
        }
    }
    let poset = Poset::from_relations(labels, &relations)?;
    let cover_edge = poset
        .covers()
        .iter()
        .map(|&c| (c, separating.get(&c).copied().ok_or_else(|| Error::internal("cover without an edge"))))
        .map(|(c, e)| e.map(|e| (c, e)))
        .collect::<Result<_>>()?;
    Ok(DualPoset { poset, cover_edge })
}

/// Vertex of the augmented Hasse diagram: bottom, an element, or top.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Node {
    Bottom,
    Elem(Element),
    Top,
}

/// Builds the flow graph whose truncated dual is the drawn poset `p`: faces of
/// the Hasse diagram of `p` with a bottom and top adjoined and two extra
/// bottom-to-top edges on the far left and right become vertices, and each
/// Hasse edge `x -> y` becomes an edge with `y` above and `x` below it.
pub fn poset_to_flow_graph(p: &Poset) -> Result<PlanarGraphData> {
    let emb =
        p.embedding().ok_or_else(|| Error::input("poset needs a planar embedding (left-to-right cover orders)"))?;
    let k = p.len();
    let node_id = |v: Node| match v {
        Node::Bottom => k,
        Node::Top => k + 1,
        Node::Elem(x) => x,
    };
    // Edges of the augmented diagram, lower end first. The last two are the
    // left and right bottom-to-top edges.
    let mut hasse: Vec<(Node, Node)> = Vec::new();
    for &x in &emb.bottom {
        hasse.push((Node::Bottom, Node::Elem(x)));
    }
    for &(x, y) in p.covers() {
        hasse.push((Node::Elem(x), Node::Elem(y)));
    }
    for &y in &emb.top {
        hasse.push((Node::Elem(y), Node::Top));
    }
    if k == 0 {
        hasse.push((Node::Bottom, Node::Top));
    }
    let left = hasse.len();
    let right = left + 1;
    hasse.push((Node::Bottom, Node::Top));
    hasse.push((Node::Bottom, Node::Top));
    let find =
        |lo: Node, hi: Node| hasse[..left].iter().position(|&(a, b)| a == lo && b == hi).expect("cover edge exists");

    // Darts: 2e goes up edge e, 2e+1 goes down. Counterclockwise rotation at
    // every node, with north up: upper covers right to left, then lower covers
    // left to right.
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); k + 2];
    for x in 0..k {
        let ups = emb.up[x].iter().rev().map(|&y| 2 * find(Node::Elem(x), Node::Elem(y)));
        let top_dart = p.upper_covers(x).is_empty().then(|| 2 * find(Node::Elem(x), Node::Top));
        let downs = emb.down[x].iter().map(|&w| 2 * find(Node::Elem(w), Node::Elem(x)) + 1);
        let bottom_dart = p.lower_covers(x).is_empty().then(|| 2 * find(Node::Bottom, Node::Elem(x)) + 1);
        rotation[x] = ups.chain(top_dart).chain(downs).chain(bottom_dart).collect();
    }
    let bottom_ups: Vec<usize> = if k == 0 {
        vec![0]
    } else {
        emb.bottom.iter().rev().map(|&x| 2 * find(Node::Bottom, Node::Elem(x))).collect()
    };
    rotation[k] = std::iter::once(2 * right).chain(bottom_ups).chain([2 * left]).collect();
    let top_downs: Vec<usize> =
        if k == 0 { vec![1] } else { emb.top.iter().map(|&y| 2 * find(Node::Elem(y), Node::Top) + 1).collect() };
    rotation[k + 1] = std::iter::once(2 * left + 1).chain(top_downs).chain([2 * right + 1]).collect();

    let dart_tail = |d: usize| {
        let (lo, hi) = hasse[d / 2];
        node_id(if d.is_multiple_of(2) { lo } else { hi })
    };
    let mut position = vec![(0usize, 0usize); 2 * hasse.len()];
    for (v, rot) in rotation.iter().enumerate() {
        for (i, &d) in rot.iter().enumerate() {
            if dart_tail(d) != v {
                return Err(Error::internal("rotation lists a dart at the wrong node"));
            }
            position[d] = (v, i);
        }
    }
    // next dart with the face on the left: reverse, then clockwise neighbour
    let next = |d: usize| {
        let rev = d ^ 1;
        let (v, i) = position[rev];
        let rot = &rotation[v];
        rot[(i + rot.len() - 1) % rot.len()]
    };
    let mut face_of = vec![usize::MAX; 2 * hasse.len()];
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for start in 0..2 * hasse.len() {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut cycle = Vec::new();
        let mut d = start;
        loop {
            if face_of[d] != usize::MAX {
                if d != start {
                    return Err(Error::input("embedding is inconsistent: face tracing does not close"));
                }
                break;
            }
            face_of[d] = id;
            cycle.push(d);
            d = next(d);
        }
        faces.push(cycle);
    }
    let expected_faces = hasse.len() + 2 - (k + 2);
    if faces.len() != expected_faces {
        return Err(Error::input(format!(
            "embedding is not planar: traced {} faces, Euler's formula needs {expected_faces}",
            faces.len()
        )));
    }
    let outer = face_of[2 * left];
    if face_of[2 * right + 1] != outer {
        return Err(Error::input("embedding is inconsistent: the outer edges do not bound one face"));
    }
    let source_face = face_of[2 * left + 1];
    let sink_face = face_of[2 * right];

    // dual edges: one per Hasse edge, from the face west of it to the face east
    let dual: Vec<(usize, usize)> = (0..left).map(|e| (face_of[2 * e], face_of[2 * e + 1])).collect();
    let inner_faces: Vec<usize> = (0..faces.len()).filter(|&f| f != outer).collect();
    // topological order of the inner faces, smallest face id first
    let mut indeg = vec![0usize; faces.len()];
    for &(_, b) in &dual {
        indeg[b] += 1;
    }
    let mut ready: std::collections::BTreeSet<usize> = inner_faces.iter().copied().filter(|&f| indeg[f] == 0).collect();
    let mut order = Vec::new();
    while let Some(f) = ready.pop_first() {
        order.push(f);
        for &(a, b) in &dual {
            if a == f {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.insert(b);
                }
            }
        }
    }
    if order.len() != inner_faces.len() {
        return Err(Error::input("embedding is not upward: the dual graph has a cycle"));
    }
    if order.first() != Some(&source_face) || order.last() != Some(&sink_face) {
        return Err(Error::input("embedding is not upward: left and right faces are not the ends of the dual"));
    }
    let mut vertex_of = vec![0usize; faces.len()];
    for (i, &f) in order.iter().enumerate() {
        vertex_of[f] = i + 1;
    }
    let edges: Vec<(usize, usize)> = dual.iter().map(|&(a, b)| (vertex_of[a], vertex_of[b])).collect();
    let graph = DirectedMultigraph::new(order.len(), edges)?;

    // framing: walk each face from its lowest node; the rising darts form the
    // east boundary (out-edges of the face), the falling darts the west one
    let rises = |d: usize| d.is_multiple_of(2);
    let mut in_orders = BTreeMap::new();
    let mut out_orders = BTreeMap::new();
    for &f in &order {
        let cycle = &faces[f];
        let switches = (0..cycle.len()).filter(|&i| rises(cycle[i]) != rises(cycle[(i + 1) % cycle.len()])).count();
        if switches != 2 {
            return Err(Error::input("embedding is not upward: a face has more than one local minimum"));
        }
        let start = (0..cycle.len())
            .find(|&i| rises(cycle[i]) && !rises(cycle[(i + cycle.len() - 1) % cycle.len()]))
            .expect("face has a rising run");
        let walk: Vec<usize> = (0..cycle.len()).map(|i| cycle[(start + i) % cycle.len()]).collect();
        let is_dual = |d: &usize| d / 2 < left;
        let mut outs: Vec<EdgeId> = walk.iter().filter(|d| rises(**d) && is_dual(d)).map(|d| d / 2).collect();
        outs.reverse();
        let ins: Vec<EdgeId> = walk.iter().filter(|d| !rises(**d) && is_dual(d)).map(|d| d / 2).collect();
        let v = vertex_of[f];
        if graph.is_inner(v) {
            in_orders.insert(v, ins);
            out_orders.insert(v, outs);
        }
    }
    let framing = Framing::new(&graph, &in_orders, &out_orders)?;

    let side = |n: Node, fallback: Side| match n {
        Node::Elem(x) => Side::Region(x),
        _ => fallback,
    };
    let edge_sides: Vec<(Side, Side)> =
        hasse[..left].iter().map(|&(lo, hi)| (side(lo, Side::Bottom), side(hi, Side::Top))).collect();
    let regions = (0..k)
        .map(|x| Region {
            label: p.label(x).to_string(),
            boundary: (0..left).filter(|&e| hasse[e].0 == Node::Elem(x) || hasse[e].1 == Node::Elem(x)).collect(),
        })
        .collect();
    PlanarGraphData::new(graph, framing, regions, edge_sides)
}

fn check_flow(g: &DirectedMultigraph, fl: &[BigRational]) -> Result<BigRational> {
    if fl.len() != g.edge_count() {
        return Err(Error::input("flow has the wrong number of entries"));
    }
    if let Some(e) = fl.iter().position(|x| x.is_negative()) {
        return Err(Error::input(format!("flow is negative on edge {e}")));
    }
    let mut net = vec![BigRational::zero(); g.vertex_count() + 1];
    for (e, &(t, h)) in g.edges().iter().enumerate() {
        net[t] += &fl[e];
        net[h] -= &fl[e];
    }
    if let Some(v) = g.inner_vertices().find(|&v| !net[v].is_zero()) {
        return Err(Error::input(format!("flow is not conserved at vertex {v}")));
    }
    Ok(net[1].clone())
}

/// Sends a flow to the order-polytope point whose value on a region is the
/// flow crossed on the way up from the bottom of the drawing.
pub fn flow_to_order_point(pg: &PlanarGraphData, fl: &[BigRational]) -> Result<Vec<BigRational>> {
    let total = check_flow(&pg.graph, fl)?;
    let r = pg.regions.len();
    let mut value: Vec<Option<BigRational>> = vec![None; r];
    let zero = BigRational::zero();
    let get = |value: &[Option<BigRational>], s: Side| -> Option<BigRational> {
        match s {
            Side::Bottom => Some(zero.clone()),
            Side::Top => Some(total.clone()),
            Side::Region(x) => value[x].clone(),
        }
    };
    let mut queue: VecDeque<EdgeId> = (0..pg.edge_sides.len()).collect();
    let mut stalled = 0;
    while let Some(e) = queue.pop_front() {
        let (below, above) = pg.edge_sides[e];
        match (get(&value, below), get(&value, above)) {
            (Some(_), Some(_)) => {}
            (Some(b), None) => {
                if let Side::Region(y) = above {
                    value[y] = Some(b + &fl[e]);
                }
            }
            (None, Some(a)) => {
                if let Side::Region(x) = below {
                    value[x] = Some(a - &fl[e]);
                }
            }
            (None, None) => {
                queue.push_back(e);
                stalled += 1;
                if stalled > queue.len() {
                    return Err(Error::internal("regions are not connected to the bottom"));
                }
                continue;
            }
        }
        stalled = 0;
    }
    let values: Vec<BigRational> = value.into_iter().map(|v| v.expect("every region reached")).collect();
    if cfg!(debug_assertions) {
        // every edge, not only the spanning ones, must agree
        for (e, &(below, above)) in pg.edge_sides.iter().enumerate() {
            let b = PlanarGraphData::side_value(&values, &total, &zero, below);
            let a = PlanarGraphData::side_value(&values, &total, &zero, above);
            if &(b + &fl[e]) != a {
                return Err(Error::internal(format!("potential is not well defined across edge {e}")));
            }
        }
    }
    Ok(values)
}

/// Sends an order-preserving map `regions -> [0, t]` to the flow whose value on
/// each edge is the jump of the map across it (bottom `= 0`, top `= t`).
pub fn order_to_flow_point(pg: &PlanarGraphData, f: &[BigRational], t: &BigRational) -> Result<Vec<BigRational>> {
    if f.len() != pg.regions.len() {
        return Err(Error::input("order point has the wrong number of entries"));
    }
    let zero = BigRational::zero();
    let fl: Vec<BigRational> = pg
        .edge_sides
        .iter()
        .map(|&(below, above)| {
            PlanarGraphData::side_value(f, t, &zero, above) - PlanarGraphData::side_value(f, t, &zero, below)
        })
        .collect();
    if let Some(e) = fl.iter().position(|x| x.is_negative()) {
        return Err(Error::input(format!("map is not order preserving across edge {e}")));
    }
    let total = check_flow(&pg.graph, &fl).map_err(|e| Error::internal(format!("image is not a flow: {e}")))?;
    if &total != t {
        return Err(Error::internal("image flow has the wrong total"));
    }
    Ok(fl)
}

pub fn rationals(v: &[u64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

/// Converts an integral rational vector back to integers.
pub fn integers(v: &[BigRational]) -> Option<Vec<u64>> {
    v.iter()
        .map(|x| if x.is_integer() && !x.is_negative() { u64::try_from(x.to_integer()).ok() } else { None })
        .collect()
}
