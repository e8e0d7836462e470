//! Fixture-by-fixture checks of the correspondences between the triangulations,
//! the bijections and the lattice-point maps. Every check reports a verdict and
//! a short counterexample description on failure.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asm::family_report;
use crate::error::{Error, Result};
use crate::fixtures::{GraphFixture, PlanarFixture};
use crate::geometry::{triangulation_checks, IntPoint, SAMPLE_SEED};
use crate::graph::{coherent, DirectedMultigraph, Framing};
use crate::kostant::{enumerate_integer_flows, flow_polytope_volume, unit_netflow, volume_netflow};
use crate::planar::{dual_poset, flow_to_order_point, integers, order_to_flow_point, rationals, PlanarGraphData};
use crate::poset::{count_linear_extensions, linear_extensions, partitions_in_staircase, Poset};
use crate::triangulation::{
    canonical_triangulation, clique_to_flow, compare_triangulations, dkk_maximal_cliques, dkk_triangulation,
    flow_polytope_vertices, flow_to_clique, framing_change_bijection, linext_to_clique, order_polytope_vertices,
    ps_triangulation, route_simplex, Clique,
};

/// Properties the verifier can check, named as on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    /// The canonical triangulation of the order polytope, carried over to the
    /// flow polytope, is the DKK triangulation of the planar framing.
    Thm2,
    /// Framed PS leaves are the DKK maximal cliques.
    DkkEqPs,
    /// Linear extensions biject onto maximal cliques.
    BijLinext,
    /// Integer flows biject onto PS leaves, and framings change bijectively.
    BijFlow,
    /// The flow/order maps match lattice points of `t·F_G` and `t·O(P)`.
    MapsRoundtrip,
    /// Vertex, dimension, volume and Ehrhart data of the ASM faces agree.
    AsmFamily,
    /// Every emitted triangulation is unimodular, has the right volume and
    /// covers seeded samples exactly once.
    Geometry,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Thm2,
        Property::DkkEqPs,
        Property::BijLinext,
        Property::BijFlow,
        Property::MapsRoundtrip,
        Property::AsmFamily,
        Property::Geometry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Thm2 => "thm2",
            Property::DkkEqPs => "dkk-eq-ps",
            Property::BijLinext => "bij-linext",
            Property::BijFlow => "bij-flow",
            Property::MapsRoundtrip => "maps-roundtrip",
            Property::AsmFamily => "asm-family",
            Property::Geometry => "geometry",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| Error::input(format!("unknown property {s:?}")))
    }
}

/// Verdict on one fixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub fixture: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from_result(fixture: impl Into<String>, r: Result<String>) -> Check {
        match r {
            Ok(detail) => Check { fixture: fixture.into(), passed: true, detail },
            Err(e) => Check { fixture: fixture.into(), passed: false, detail: e.to_string() },
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.fixture, self.detail)
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

fn violation(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(violation(msg()))
    }
}

fn sorted_cliques(mut v: Vec<Clique>) -> Vec<Clique> {
    for c in &mut v {
        c.sort();
    }
    v.sort();
    v
}

fn to_int_point(v: &[BigRational]) -> Result<IntPoint> {
    integers(v)
        .map(|xs| xs.into_iter().map(|x| x as i64).collect())
        .ok_or_else(|| violation("expected an integral point"))
}

/// Canonical simplices sent through the order-to-flow map, compared with the
/// DKK triangulation of the planar framing. Each transported vertex is also
/// sent back to check the two maps invert each other.
pub fn check_canonical_vs_dkk(pf: &PlanarFixture) -> Check {
    Check::from_result(&pf.name, canonical_vs_dkk(&pf.data))
}

fn canonical_vs_dkk(pg: &PlanarGraphData) -> Result<String> {
    let dp = dual_poset(pg)?;
    let one = BigRational::one();
    let mut transported = Vec::new();
    for s in canonical_triangulation(&dp.poset) {
        let mut simplex = Vec::with_capacity(s.vertices.len());
        for v in &s.vertices {
            let point: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            let fl = order_to_flow_point(pg, &point, &one)?;
            let back = flow_to_order_point(pg, &fl)?;
            ensure(back == point, || format!("flow/order maps do not invert each other at {v:?}"))?;
            simplex.push(to_int_point(&fl)?);
        }
        transported.push(simplex);
    }
    let dkk = dkk_triangulation(&pg.graph, &pg.framing)?;
    let diff = compare_triangulations(&transported, &dkk);
    ensure(diff.is_equal(), || {
        format!(
            "{} transported simplices missing from DKK (first {:?}), {} DKK simplices unmatched (first {:?})",
            diff.only_left.len(),
            diff.only_left.first(),
            diff.only_right.len(),
            diff.only_right.first()
        )
    })?;
    Ok(format!("{} simplices agree", dkk.len()))
}

/// How many framings to try per graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FramingChoice {
    /// Only the fixture's own framing.
    Given,
    /// Every framing of the graph.
    All,
    /// The fixture's framing, the id-order framing and `count` seeded random ones.
    Random { count: usize },
}

/// The framings selected by `choice`, labelled for reporting.
pub fn framings_for(g: &DirectedMultigraph, given: &Framing, choice: FramingChoice) -> Vec<(String, Framing)> {
    match choice {
        FramingChoice::Given => vec![("given".into(), given.clone())],
        FramingChoice::All => Framing::all(g).into_iter().enumerate().map(|(k, f)| (format!("#{k}"), f)).collect(),
        FramingChoice::Random { count } => {
            let mut out = vec![("given".to_string(), given.clone())];
            let id = Framing::id_order(g);
            if id != *given {
                out.push(("id-order".into(), id));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
            for k in 0..count {
                out.push((format!("random #{k}"), Framing::random(g, &mut rng)));
            }
            out
        }
    }
}

/// PS leaves against DKK maximal cliques under each selected framing; each
/// leaf is also checked pairwise coherent.
pub fn check_ps_vs_dkk(fx: &GraphFixture, choice: FramingChoice) -> Check {
    let framings = framings_for(&fx.graph, &fx.framing, choice);
    let r = (|| {
        for (label, f) in &framings {
            let leaves = ps_triangulation(&fx.graph, f)?;
            for leaf in &leaves {
                for (a, p) in leaf.routes.iter().enumerate() {
                    for q in &leaf.routes[a + 1..] {
                        ensure(coherent(&fx.graph, f, p, q), || {
                            format!("framing {label}: leaf {:?} has incoherent routes {p:?}, {q:?}", leaf.trace)
                        })?;
                    }
                }
            }
            let ps = sorted_cliques(leaves.into_iter().map(|l| l.routes).collect());
            let dkk = dkk_maximal_cliques(&fx.graph, f)?;
            ensure(ps == dkk, || {
                let only_ps = ps.iter().find(|c| !dkk.contains(c));
                let only_dkk = dkk.iter().find(|c| !ps.contains(c));
                format!(
                    "framing {label}: {} leaves vs {} cliques; leaf not a clique: {only_ps:?}; clique not a leaf: {only_dkk:?}",
                    ps.len(),
                    dkk.len()
                )
            })?;
        }
        Ok(format!("{} framing(s) agree", framings.len()))
    })();
    Check::from_result(&fx.name, r)
}

/// Linear extensions of the dual poset mapped to routes: injective, onto the
/// DKK maximal cliques, and `e(P)` many.
pub fn check_linext_bijection(pf: &PlanarFixture) -> Check {
    let pg = &pf.data;
    let r = (|| {
        let dp = dual_poset(pg)?;
        let exts = linear_extensions(&dp.poset);
        let mut images = BTreeSet::new();
        for e in &exts {
            let mut c = linext_to_clique(pg, &dp, e)?;
            c.sort();
            let labels: Vec<&str> = e.iter().map(|&x| dp.poset.label(x)).collect();
            ensure(images.insert(c), || format!("two extensions share an image, one of them {labels:?}"))?;
        }
        let e_p = count_linear_extensions(&dp.poset);
        ensure(BigUint::from(exts.len()) == e_p, || format!("{} extensions listed, {e_p} counted", exts.len()))?;
        let dkk: BTreeSet<Clique> = dkk_maximal_cliques(&pg.graph, &pg.framing)?.into_iter().collect();
        ensure(images == dkk, || {
            format!(
                "image has {} cliques, DKK has {}; first mismatch {:?}",
                images.len(),
                dkk.len(),
                images.symmetric_difference(&dkk).next()
            )
        })?;
        Ok(format!("e(P) = {e_p} = #maximal cliques"))
    })();
    Check::from_result(&pf.name, r)
}

/// Integer flows with the volume netflow against PS leaves, in both
/// directions, under the fixture's framing.
pub fn check_flow_bijection(fx: &GraphFixture) -> Check {
    let g = &fx.graph;
    let r = (|| {
        let leaves = ps_triangulation(g, &fx.framing)?;
        let flows = enumerate_integer_flows(g, &volume_netflow(g))?;
        ensure(flows.len() == leaves.len(), || format!("{} flows but {} leaves", flows.len(), leaves.len()))?;
        let mut seen = BTreeSet::new();
        for fl in &flows {
            let clique = flow_to_clique(g, &fx.framing, fl)?;
            let back = clique_to_flow(&leaves, &clique)?;
            ensure(back == *fl, || format!("flow {fl:?} comes back as {back:?}"))?;
            ensure(seen.insert(clique), || format!("flow {fl:?} hits an already used clique"))?;
        }
        for leaf in &leaves {
            let fl = clique_to_flow(&leaves, &leaf.routes)?;
            let mut c = flow_to_clique(g, &fx.framing, &fl)?;
            c.sort();
            ensure(c == leaf.routes, || format!("leaf with flow {fl:?} does not come back"))?;
        }
        Ok(format!("{} flows <-> {} cliques", flows.len(), leaves.len()))
    })();
    Check::from_result(&fx.name, r)
}

/// The clique matching between two framings is a bijection between their sets
/// of maximal cliques.
pub fn check_framing_change(fx: &GraphFixture, from: &Framing, to: &Framing, label: &str) -> Check {
    let g = &fx.graph;
    let r = (|| {
        let pairs = framing_change_bijection(g, from, to)?;
        let left = sorted_cliques(pairs.iter().map(|(a, _)| a.clone()).collect());
        let right = sorted_cliques(pairs.iter().map(|(_, b)| b.clone()).collect());
        let dedup = |v: &[Clique]| v.iter().collect::<BTreeSet<_>>().len();
        ensure(dedup(&left) == left.len() && dedup(&right) == right.len(), || "matching repeats a clique".into())?;
        ensure(left == dkk_maximal_cliques(g, from)?, || "matching misses cliques of the first framing".into())?;
        ensure(right == dkk_maximal_cliques(g, to)?, || "matching misses cliques of the second framing".into())?;
        Ok(format!("{} cliques matched", pairs.len()))
    })();
    Check::from_result(format!("{} ({label})", fx.name), r)
}

/// Order-preserving maps `P -> {0..t}`, by exhaustive search.
pub fn order_preserving_maps(p: &Poset, t: u64) -> Vec<Vec<u64>> {
    let k = p.len();
    let mut out = Vec::new();
    let mut cur = vec![0u64; k];
    loop {
        if p.is_order_preserving(&cur) {
            out.push(cur.clone());
        }
        let mut i = 0;
        while i < k && cur[i] == t {
            cur[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        cur[i] += 1;
    }
    out
}

/// For `t = 1, 2`: the flow-to-order map sends integer points of `t·F_G` onto
/// the order-preserving maps into `{0..t}`, and the order-to-flow map undoes it.
pub fn check_maps_roundtrip(pf: &PlanarFixture, ts: &[u64]) -> Check {
    let pg = &pf.data;
    let r = (|| {
        let dp = dual_poset(pg)?;
        let mut counts = Vec::new();
        for &t in ts {
            let tr = BigRational::from_integer(t.into());
            let flows = enumerate_integer_flows(&pg.graph, &unit_netflow(&pg.graph, t))?;
            let mut images = BTreeSet::new();
            for fl in &flows {
                let f = flow_to_order_point(pg, &rationals(fl))?;
                let fi = integers(&f).ok_or_else(|| violation(format!("flow {fl:?} maps to a non-integral point")))?;
                ensure(fi.iter().all(|&x| x <= t) && dp.poset.is_order_preserving(&fi), || {
                    format!("t={t}: flow {fl:?} maps to {fi:?}, not an order-preserving map into 0..={t}")
                })?;
                let back = integers(&order_to_flow_point(pg, &f, &tr)?);
                ensure(back.as_deref() == Some(fl.as_slice()), || format!("t={t}: flow {fl:?} does not round-trip"))?;
                ensure(images.insert(fi), || format!("t={t}: two flows share an image, one is {fl:?}"))?;
            }
            let maps: BTreeSet<Vec<u64>> = order_preserving_maps(&dp.poset, t).into_iter().collect();
            ensure(images == maps, || {
                format!(
                    "t={t}: {} flow images vs {} order maps; first mismatch {:?}",
                    images.len(),
                    maps.len(),
                    images.symmetric_difference(&maps).next()
                )
            })?;
            for m in &maps {
                let fl = order_to_flow_point(pg, &rationals(m), &tr)?;
                let back = integers(&flow_to_order_point(pg, &fl)?);
                ensure(back.as_ref() == Some(m), || format!("t={t}: order map {m:?} does not round-trip"))?;
            }
            counts.push(format!("t={t}: {}", maps.len()));
        }
        Ok(counts.join(", "))
    })();
    Check::from_result(&pf.name, r)
}

/// Family report of `P_λ(n)` for every `λ` inside the staircase.
pub fn check_asm_family(n: usize) -> Vec<Check> {
    partitions_in_staircase(n)
        .into_iter()
        .map(|lambda| {
            let name = format!("n={n} λ={lambda:?}");
            let r = family_report(n, &lambda).and_then(|rep| {
                let line = format!(
                    "{} vertices, dim {} (expected {}), volume {}/{}/{}",
                    rep.vertex_count,
                    rep.dimension,
                    rep.expected_dimension,
                    rep.volume_by_extensions,
                    rep.volume_by_kostant,
                    rep.volume_by_dkk_count
                );
                ensure(rep.all_consistent, || format!("inconsistent: {line}; ehrhart {:?}", rep.ehrhart))?;
                Ok(line)
            });
            Check::from_result(name, r)
        })
        .collect()
}

/// Geometry of the PS and DKK triangulations of a framed graph.
pub fn check_flow_triangulations(fx: &GraphFixture) -> Check {
    let g = &fx.graph;
    let r = (|| {
        let vertices = flow_polytope_vertices(g);
        let expected = flow_polytope_volume(g)?;
        let ps: Vec<Vec<IntPoint>> =
            ps_triangulation(g, &fx.framing)?.iter().map(|l| route_simplex(g, &l.routes)).collect();
        let dkk = dkk_triangulation(g, &fx.framing)?;
        let mut lines = Vec::new();
        for (what, simplices) in [("ps", ps), ("dkk", dkk)] {
            let rep = triangulation_checks(&vertices, &simplices, &expected)?;
            ensure(rep.passed(), || format!("{what}: {}", rep.summary()))?;
            lines.push(format!("{what}: {}", rep.summary()));
        }
        Ok(lines.join("; "))
    })();
    Check::from_result(&fx.name, r)
}

/// Geometry of the canonical triangulation of an order polytope.
pub fn check_order_triangulation(name: &str, p: &Poset) -> Check {
    let r = (|| {
        let simplices: Vec<Vec<IntPoint>> = canonical_triangulation(p).into_iter().map(|s| s.vertices).collect();
        let rep = triangulation_checks(&order_polytope_vertices(p), &simplices, &count_linear_extensions(p))?;
        ensure(rep.passed(), || format!("canonical: {}", rep.summary()))?;
        Ok(format!("canonical: {}", rep.summary()))
    })();
    Check::from_result(name, r)
}
