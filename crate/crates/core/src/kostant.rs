//! Integer flows with prescribed netflow, the Kostant partition function, and
//! the volume and Ehrhart values of flow polytopes derived from it.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{DirectedMultigraph, Vertex};
use crate::polynomial::Polynomial;

/// Nonnegative integer flow, one entry per edge id.
pub type IntegerFlow = Vec<u64>;

fn check_netflow(g: &DirectedMultigraph, a: &[i64]) -> Result<()> {
    if a.len() != g.vertex_count() {
        return Err(Error::input(format!("netflow has {} entries, graph has {} vertices", a.len(), g.vertex_count())));
    }
    if a.iter().sum::<i64>() != 0 {
        return Err(Error::input(format!("netflow {a:?} does not sum to zero")));
    }
    Ok(())
}

/// Outflow minus inflow at every vertex.
pub fn netflow_of(g: &DirectedMultigraph, flow: &[u64]) -> Vec<i64> {
    let mut net = vec![0i64; g.vertex_count()];
    for (e, &(t, h)) in g.edges().iter().enumerate() {
        net[t - 1] += flow[e] as i64;
        net[h - 1] -= flow[e] as i64;
    }
    net
}

/// Weak compositions of `total` into `parts` parts, colexicographic
/// (lexicographic in the reversed vector).
pub fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    fn rec(total: u64, parts: usize, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>) {
        if parts == 1 {
            cur.push(total);
            out.push(cur.iter().rev().copied().collect());
            cur.pop();
            return;
        }
        for x in 0..=total {
            cur.push(x);
            rec(total - x, parts - 1, out, cur);
            cur.pop();
        }
    }
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    // Building the reversed vector lexicographically yields colex order.
    rec(total, parts, &mut out, &mut Vec::new());
    out
}

/// Every nonnegative integer flow on `g` with netflow `a` (`a[v-1]` at vertex `v`),
/// sorted lexicographically by edge-id vector.
pub fn enumerate_integer_flows(g: &DirectedMultigraph, a: &[i64]) -> Result<Vec<IntegerFlow>> {
    check_netflow(g, a)?;
    let n = g.vertex_count();
    let outs: Vec<Vec<usize>> = (0..=n).map(|v| if v == 0 { Vec::new() } else { g.out_edges(v) }).collect();
    let mut flow = vec![0u64; g.edge_count()];
    let mut inflow = vec![0i64; n + 1];
    let mut found = Vec::new();

    fn rec(
        g: &DirectedMultigraph,
        a: &[i64],
        outs: &[Vec<usize>],
        v: Vertex,
        flow: &mut Vec<u64>,
        inflow: &mut Vec<i64>,
        found: &mut Vec<IntegerFlow>,
    ) {
        let need = a[v - 1] + inflow[v];
        if v == g.vertex_count() {
            if need == 0 {
                found.push(flow.clone());
            }
            return;
        }
        if need < 0 || (need > 0 && outs[v].is_empty()) {
            return;
        }
        for comp in compositions(need as u64, outs[v].len()) {
            for (&e, &x) in outs[v].iter().zip(&comp) {
                flow[e] = x;
                inflow[g.head(e)] += x as i64;
            }
            rec(g, a, outs, v + 1, flow, inflow, found);
            for (&e, &x) in outs[v].iter().zip(&comp) {
                flow[e] = 0;
                inflow[g.head(e)] -= x as i64;
            }
        }
    }
    rec(g, a, &outs, 1, &mut flow, &mut inflow, &mut found);
    found.sort();
    Ok(found)
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Number of nonnegative integer flows on `g` with netflow `a`, by a memoized
/// sweep over vertices keyed on the inflow still owed to later vertices.
pub fn kostant_value(g: &DirectedMultigraph, a: &[i64]) -> Result<BigUint> {
    check_netflow(g, a)?;
    let n = g.vertex_count();
    // groups[v] = (head, multiplicity) of parallel classes leaving v
    let mut groups: Vec<Vec<(Vertex, u64)>> = vec![Vec::new(); n + 1];
    for &(t, h) in g.edges() {
        match groups[t].iter_mut().find(|(hh, _)| *hh == h) {
            Some(entry) => entry.1 += 1,
            None => groups[t].push((h, 1)),
        }
    }
    let mut memo: HashMap<(Vertex, Vec<i64>), BigUint> = HashMap::new();
    let inflow = vec![0i64; n + 1];
    Ok(kostant_rec(a, &groups, 1, inflow, &mut memo))
}

fn kostant_rec(
    a: &[i64],
    groups: &[Vec<(Vertex, u64)>],
    v: Vertex,
    inflow: Vec<i64>,
    memo: &mut HashMap<(Vertex, Vec<i64>), BigUint>,
) -> BigUint {
    let n = a.len();
    let need = a[v - 1] + inflow[v];
    if v == n {
        return if need == 0 { BigUint::one() } else { BigUint::zero() };
    }
    if need < 0 || (need > 0 && groups[v].is_empty()) {
        return BigUint::zero();
    }
    let key = (v, inflow[v + 1..].to_vec());
    if let Some(x) = memo.get(&key) {
        return x.clone();
    }
    let mut total = BigUint::zero();
    for comp in compositions(need as u64, groups[v].len()) {
        let mut weight = BigUint::one();
        let mut next = inflow.clone();
        next[v] = 0;
        for (&(h, mult), &c) in groups[v].iter().zip(&comp) {
            weight *= binomial(c + mult - 1, mult - 1);
            next[h] += c as i64;
        }
        total += weight * kostant_rec(a, groups, v + 1, next, memo);
    }
    memo.insert(key, total.clone());
    total
}

fn require_pruned(g: &DirectedMultigraph) -> Result<()> {
    if !g.is_pruned() {
        return Err(Error::contract("graph must be pruned (every inner vertex has in- and out-edges)"));
    }
    Ok(())
}

/// The netflow `(0, d_2, ..., d_{n-1}, -sum d_i)` with `d_i = indeg(i) - 1`.
pub fn volume_netflow(g: &DirectedMultigraph) -> Vec<i64> {
    let n = g.vertex_count();
    let mut a = vec![0i64; n];
    for v in g.inner_vertices() {
        a[v - 1] = g.indegree(v) as i64 - 1;
    }
    if n >= 2 {
        a[n - 1] = -a.iter().sum::<i64>();
    }
    a
}

/// The unit netflow scaled by `t`: `(t, 0, ..., 0, -t)`.
pub fn unit_netflow(g: &DirectedMultigraph, t: u64) -> Vec<i64> {
    let n = g.vertex_count();
    let mut a = vec![0i64; n];
    a[0] += t as i64;
    a[n - 1] -= t as i64;
    a
}

/// Normalized volume of the flow polytope of a pruned graph.
pub fn flow_polytope_volume(g: &DirectedMultigraph) -> Result<BigUint> {
    require_pruned(g)?;
    kostant_value(g, &volume_netflow(g))
}

/// Number of integer points in the `t`-th dilate of the flow polytope.
pub fn flow_ehrhart_value(g: &DirectedMultigraph, t: u64) -> Result<BigUint> {
    require_pruned(g)?;
    kostant_value(g, &unit_netflow(g, t))
}

/// Ehrhart polynomial of the flow polytope, fitted on `t = 0..=dim` and
/// checked against the counts at `dim + 1` and `dim + 2`.
pub fn flow_ehrhart_polynomial(g: &DirectedMultigraph) -> Result<Polynomial> {
    require_pruned(g)?;
    let dim = g.flow_dimension() as u64;
    let values = (0..=dim).map(|t| flow_ehrhart_value(g, t).map(BigInt::from)).collect::<Result<Vec<_>>>()?;
    let p = Polynomial::interpolate(&values);
    for t in [dim + 1, dim + 2] {
        let count = BigInt::from(flow_ehrhart_value(g, t)?);
        if p.eval_int(t) != num_rational::BigRational::from_integer(count) {
            return Err(Error::internal(format!("lattice-point counts are not polynomial at t = {t}")));
        }
    }
    Ok(p)
}

/// Leading coefficient times `dim!`; equals the normalized volume.
pub fn normalized_leading_term(p: &Polynomial, dim: usize) -> num_rational::BigRational {
    let fact: BigInt = (1..=dim).map(BigInt::from).product();
    if p.degree() != dim {
        return num_rational::BigRational::zero();
    }
    p.leading_coefficient() * num_rational::BigRational::from_integer(fact)
}
