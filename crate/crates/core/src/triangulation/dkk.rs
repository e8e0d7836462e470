//! Maximal cliques of mutually coherent routes.

use crate::error::{Error, Result};
use crate::geometry::IntPoint;
use crate::graph::{coherent, enumerate_routes, DirectedMultigraph, Framing, Route};

use super::{route_simplex, Clique};

/// Symmetric coherence relation on `routes`.
pub fn coherence_graph(g: &DirectedMultigraph, f: &Framing, routes: &[Route]) -> Vec<Vec<bool>> {
    let k = routes.len();
    let mut adj = vec![vec![false; k]; k];
    for a in 0..k {
        for b in a + 1..k {
            let c = coherent(g, f, &routes[a], &routes[b]);
            adj[a][b] = c;
            adj[b][a] = c;
        }
    }
    adj
}

/// Maximal cliques of an undirected graph by Bron–Kerbosch with pivoting;
/// each clique sorted, the list sorted.
pub fn maximal_cliques(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn rec(adj: &[Vec<bool>], r: &mut Vec<usize>, p: Vec<usize>, x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() {
            if x.is_empty() {
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return;
        }
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| (p.iter().filter(|&&v| adj[u][v]).count(), std::cmp::Reverse(u)))
            .expect("p is nonempty");
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
        let mut p = p;
        let mut x = x;
        for v in candidates {
            r.push(v);
            let p2 = p.iter().copied().filter(|&u| adj[v][u]).collect();
            let x2 = x.iter().copied().filter(|&u| adj[v][u]).collect();
            rec(adj, r, p2, x2, out);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    let mut out = Vec::new();
    rec(adj, &mut Vec::new(), (0..adj.len()).collect(), Vec::new(), &mut out);
    out.sort();
    out
}

/// Maximal cliques of routes under the framing. Every one must have
/// `#E - #V + 2` routes; anything else means the comparator is broken.
pub fn dkk_maximal_cliques(g: &DirectedMultigraph, f: &Framing) -> Result<Vec<Clique>> {
    if !g.is_pruned() {
        return Err(Error::contract("clique enumeration needs a pruned graph"));
    }
    let routes = enumerate_routes(g);
    let adj = coherence_graph(g, f, &routes);
    let expected = g.flow_dimension() + 1;
    let mut cliques = Vec::new();
    for c in maximal_cliques(&adj) {
        if c.len() != expected {
            return Err(Error::internal(format!(
                "coherence relation violates DKK top-dimensionality: clique of {} routes, expected {expected}",
                c.len()
            )));
        }
        cliques.push(c.into_iter().map(|i| routes[i].clone()).collect::<Vec<_>>());
    }
    cliques.sort();
    Ok(cliques)
}

/// Each maximal clique realized as the simplex of its unit route flows.
pub fn dkk_triangulation(g: &DirectedMultigraph, f: &Framing) -> Result<Vec<Vec<IntPoint>>> {
    Ok(dkk_maximal_cliques(g, f)?.iter().map(|c| route_simplex(g, c)).collect())
}
