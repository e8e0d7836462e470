//! The triangulation of an order polytope by linear extensions.

use crate::geometry::IntPoint;
use crate::poset::{linear_extensions, Element, Poset};

/// The simplex of one linear extension `a_1 ... a_k`: its vertices are the
/// indicators of the filters `{a_{m+1}, ..., a_k}` for `m = 0..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalSimplex {
    pub extension: Vec<Element>,
    pub vertices: Vec<IntPoint>,
}

pub fn extension_simplex(p: &Poset, extension: &[Element]) -> CanonicalSimplex {
    let k = p.len();
    let vertices = (0..=k)
        .map(|m| {
            let mut v = vec![0i64; k];
            for &x in &extension[m..] {
                v[x] = 1;
            }
            v
        })
        .collect();
    CanonicalSimplex { extension: extension.to_vec(), vertices }
}

pub fn canonical_triangulation(p: &Poset) -> Vec<CanonicalSimplex> {
    linear_extensions(p).iter().map(|e| extension_simplex(p, e)).collect()
}

/// Vertices of the order polytope: indicators of filters (complements of ideals).
pub fn order_polytope_vertices(p: &Poset) -> Vec<IntPoint> {
    let full = p.full_mask();
    let mut v: Vec<IntPoint> = crate::poset::order_ideal_masks(p)
        .into_iter()
        .map(|ideal| (0..p.len()).map(|x| i64::from((full & !ideal) >> x & 1 == 1)).collect())
        .collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{antichain, chain, staircase_star};

    #[test]
    fn simplex_counts() {
        assert_eq!(canonical_triangulation(&chain(3)).len(), 1);
        assert_eq!(canonical_triangulation(&antichain(2)).len(), 2);
        let d3 = canonical_triangulation(&staircase_star(3));
        assert_eq!(d3.len(), 2);
        assert!(d3.iter().all(|s| s.vertices.len() == 4));
    }

    #[test]
    fn vertices_are_filters() {
        let p = staircase_star(3);
        let verts = order_polytope_vertices(&p);
        assert_eq!(verts.len(), 5);
        for s in canonical_triangulation(&p) {
            assert_eq!(s.vertices[0], vec![1, 1, 1]);
            assert_eq!(s.vertices[3], vec![0, 0, 0]);
            assert!(s.vertices.iter().all(|v| verts.contains(v)));
        }
    }
}
