//! Linear extensions of the dual poset of a drawn graph to maximal cliques.

use crate::error::{Error, Result};
use crate::graph::Route;
use crate::planar::{DualPoset, PlanarGraphData, Side};
use crate::poset::Element;

use super::Clique;

/// For every prefix of the extension, the upper boundary of the union of the
/// prefix's regions with everything below the drawing, read as a route.
pub fn linext_to_clique(pg: &PlanarGraphData, dp: &DualPoset, ext: &[Element]) -> Result<Clique> {
    if !dp.poset.is_linear_extension(ext) {
        return Err(Error::input(format!("{ext:?} is not a linear extension")));
    }
    let g = &pg.graph;
    let mut inside = vec![false; pg.regions.len()];
    let is_in = |inside: &[bool], s: Side| match s {
        Side::Bottom => true,
        Side::Top => false,
        Side::Region(r) => inside[r],
    };
    let mut routes = Vec::with_capacity(ext.len() + 1);
    for m in 0..=ext.len() {
        if m > 0 {
            inside[ext[m - 1]] = true;
        }
        let mut boundary: Vec<usize> = (0..g.edge_count())
            .filter(|&e| {
                let (below, above) = pg.edge_sides[e];
                is_in(&inside, below) && !is_in(&inside, above)
            })
            .collect();
        boundary.sort_by_key(|&e| g.tail(e));
        let route = Route::new(g, boundary)
            .map_err(|e| Error::internal(format!("upper boundary of a prefix is not a route: {e}")))?;
        routes.push(route);
    }
    routes.sort();
    Ok(routes)
}
