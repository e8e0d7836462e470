//! End-to-end acceptance suite. Runs every criterion, prints one PASS/FAIL line
//! per criterion (with the failing checks underneath) and exits non-zero if
//! any criterion fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::thread;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use flowpoly::asm::{
    alternating_permutations, asm_dilation_count, corner_sum_map, dyck_paths_bounded, p_lambda_vertices,
    proctor_ehrhart, ASMatrix,
};
use flowpoly::fixtures::{graph_fixtures, planar_fixtures, poset_fixtures, GraphFixture};
use flowpoly::geometry::{affine_dimension_int, triangulation_checks, IntPoint};
use flowpoly::graph::{enumerate_routes, DirectedMultigraph, Framing};
use flowpoly::kostant::{flow_ehrhart_value, flow_polytope_volume};
use flowpoly::planar::poset_to_flow_graph;
use flowpoly::poset::{
    count_linear_extensions, linear_extensions, order_polynomial, partitions_in_staircase, skew_star,
    staircase_partition, staircase_star, staircase_syt_count,
};
use flowpoly::triangulation::{canonical_triangulation, dkk_maximal_cliques, ps_triangulation};
use flowpoly::verify::{
    check_canonical_vs_dkk, check_flow_bijection, check_flow_triangulations, check_framing_change,
    check_linext_bijection, check_maps_roundtrip, check_order_triangulation, check_ps_vs_dkk, framings_for, Check,
    FramingChoice,
};

/// Failures collected while running one criterion.
#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    checks: usize,
}

impl Outcome {
    fn expect(&mut self, cond: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !cond {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        self.checks += 1;
        if got != want {
            self.failures.push(format!("{what}: got {got:?}, expected {want:?}"));
        }
    }

    fn record(&mut self, c: Check) {
        self.checks += 1;
        if !c.passed {
            self.failures.push(c.to_string());
        }
    }

    fn ok<T>(&mut self, what: &str, r: flowpoly::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// `binom(2i, i) / (i + 1)`.
fn catalan(i: u64) -> BigUint {
    let mut c = BigUint::one();
    for k in 0..i {
        c = c * big(2 * (2 * k + 1)) / big(k + 2);
    }
    c
}

fn factorial(n: u64) -> BigUint {
    (1..=n).map(big).product()
}

fn fibonacci(k: usize) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

fn binom2(n: usize) -> usize {
    n * (n - 1) / 2
}

fn complete(n: usize) -> GraphFixture {
    let graph = DirectedMultigraph::complete(n);
    let framing = Framing::top_to_bottom(&graph);
    GraphFixture { name: format!("K{n}"), graph, framing }
}

fn catalan_products() -> Outcome {
    let mut o = Outcome::default();
    let start = Instant::now();
    for n in 3..=6u64 {
        let want: BigUint = (1..=n - 2).map(catalan).product();
        let fx = complete(n as usize + 1);
        let g = &fx.graph;
        if let Some(v) = o.ok("kostant", flow_polytope_volume(g)) {
            o.eq(&format!("kostant volume of {}", fx.name), v, want.clone());
        }
        if let Some(leaves) = o.ok("ps", ps_triangulation(g, &fx.framing)) {
            o.eq(&format!("PS leaves of {}", fx.name), big(leaves.len() as u64), want.clone());
        }
        if let Some(cliques) = o.ok("dkk", dkk_maximal_cliques(g, &fx.framing)) {
            o.eq(&format!("DKK cliques of {}", fx.name), big(cliques.len() as u64), want.clone());
        }
    }
    o.eq(
        "catalan products",
        (3..=6u64).map(|n| (1..=n - 2).map(catalan).product()).collect(),
        vec![big(1), big(2), big(10), big(140)],
    );
    let k7 = DirectedMultigraph::complete(7);
    o.eq("routes of K7", enumerate_routes(&k7).len(), 32);
    o.eq("dimension of F(K7)", k7.flow_dimension(), 15);
    let elapsed = start.elapsed();
    o.expect(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"));
    o
}

/// Pulls the canonical triangulation of `O((δ_n \ λ)^*)` back to `P_λ(n)`
/// through the corner-sum bijection of vertices and checks it there.
fn pulled_back_volume(o: &mut Outcome, n: usize, lambda: &[usize]) -> Option<BigUint> {
    let vertices = o.ok("vertices", p_lambda_vertices(n, lambda))?;
    let mut to_matrix: HashMap<IntPoint, IntPoint> = HashMap::new();
    for m in &vertices {
        let g = o.ok("corner sums", corner_sum_map(n, lambda, &m.to_rational()))?;
        let key: IntPoint = g.iter().map(|x| x.to_integer().to_i64().expect("0 or 1")).collect();
        to_matrix.insert(key, m.as_point());
    }
    let p = o.ok("poset", skew_star(n, lambda))?;
    let simplices: Vec<Vec<IntPoint>> = canonical_triangulation(&p)
        .into_iter()
        .map(|s| s.vertices.iter().map(|v| to_matrix[v].clone()).collect())
        .collect();
    let points: Vec<IntPoint> = vertices.iter().map(ASMatrix::as_point).collect();
    let e_p = count_linear_extensions(&p);
    let rep = o.ok("geometry", triangulation_checks(&points, &simplices, &e_p))?;
    o.expect(rep.passed(), || format!("n={n}: pulled-back triangulation: {}", rep.summary()));
    rep.volume_sum.parse().ok()
}

fn asm_cry_family() -> Outcome {
    let mut o = Outcome::default();
    for (n, vol) in [(3usize, 2u64), (4, 16), (5, 768)] {
        let vertices = o.ok("vertices", p_lambda_vertices(n, &[])).unwrap_or_default();
        o.eq(&format!("n={n} vertex count"), big(vertices.len() as u64), catalan(n as u64));
        let p = staircase_star(n);
        o.eq(&format!("n={n} staircase SYT"), staircase_syt_count(n), big(vol));
        o.eq(&format!("n={n} extensions by listing"), linear_extensions(&p).len() as u64, vol);
        if let Some(pg) = o.ok("flow graph", poset_to_flow_graph(&p)) {
            if let Some(v) = o.ok("kostant", flow_polytope_volume(&pg.graph)) {
                o.eq(&format!("n={n} kostant"), v, big(vol))
            }
        }
        if let Some(v) = pulled_back_volume(&mut o, n, &[]) {
            o.eq(&format!("n={n} normalized volume of the face"), v, big(vol));
        }
        let points: Vec<IntPoint> = vertices.iter().map(ASMatrix::as_point).collect();
        if let Some(d) = o.ok("rank", affine_dimension_int(&points)) {
            o.eq(&format!("n={n} dimension"), d, binom2(n))
        }
    }
    o
}

fn ehrhart_tri_oracle() -> Outcome {
    let mut o = Outcome::default();
    for n in 3..=4 {
        for lambda in partitions_in_staircase(n) {
            let Some(p) = o.ok("poset", skew_star(n, &lambda)) else { continue };
            let Some(pg) = o.ok("flow graph", poset_to_flow_graph(&p)) else { continue };
            for t in 0..=3u64 {
                let what = format!("n={n} λ={lambda:?} t={t}");
                let Some(a) = o.ok(&what, asm_dilation_count(n, &lambda, t)) else { continue };
                o.eq(&format!("{what} order polynomial"), order_polynomial(&p, t + 1), a.clone());
                if let Some(f) = o.ok(&what, flow_ehrhart_value(&pg.graph, t)) {
                    o.eq(&format!("{what} flows"), f, a.clone())
                }
                if lambda.is_empty() {
                    o.eq(&format!("{what} product formula"), proctor_ehrhart(n, t), a);
                }
            }
        }
    }
    o
}

fn canonical_equals_dkk() -> Outcome {
    let mut o = Outcome::default();
    for pf in planar_fixtures() {
        o.record(check_canonical_vs_dkk(&pf));
    }
    o
}

fn ps_equals_dkk() -> Outcome {
    let mut o = Outcome::default();
    for fx in graph_fixtures() {
        let choice =
            if fx.name == "K4" || fx.name == "K5" { FramingChoice::All } else { FramingChoice::Random { count: 5 } };
        o.record(check_ps_vs_dkk(&fx, choice));
    }
    o
}

fn bijections() -> Outcome {
    let mut o = Outcome::default();
    for pf in planar_fixtures() {
        o.record(check_linext_bijection(&pf));
    }
    for fx in graph_fixtures() {
        o.record(check_flow_bijection(&fx));
        for (label, to) in framings_for(&fx.graph, &fx.framing, FramingChoice::Random { count: 5 }) {
            o.record(check_framing_change(&fx, &fx.framing, &to, &label));
            o.record(check_framing_change(&fx, &to, &fx.framing, &format!("{label} back")));
        }
    }
    o
}

fn family_corollaries() -> Outcome {
    let mut o = Outcome::default();
    for n in 3..=5usize {
        let lambda = staircase_partition(n - 1);
        let count = o.ok("vertices", p_lambda_vertices(n, &lambda)).map_or(0, |v| v.len());
        o.eq(&format!("n={n} λ=δ_(n-1) vertices"), count, 1 << (n - 1));
        if let Some(p) = o.ok("poset", skew_star(n, &lambda)) {
            o.eq(&format!("n={n} λ=δ_(n-1) volume"), count_linear_extensions(&p), factorial(n as u64 - 1));
        }
    }
    for (n, vertices, euler_index) in [(4usize, 13u64, 5usize), (5, 34, 7)] {
        let lambda = staircase_partition(n - 2);
        let count = o.ok("vertices", p_lambda_vertices(n, &lambda)).map_or(0, |v| v.len() as u64);
        o.eq(&format!("n={n} λ=δ_(n-2) vertices"), count, vertices);
        o.eq(&format!("n={n} Fibonacci"), fibonacci(2 * n - 1), vertices);
        let euler = alternating_permutations(euler_index);
        if let Some(p) = o.ok("poset", skew_star(n, &lambda)) {
            o.eq(&format!("n={n} λ=δ_(n-2) volume"), count_linear_extensions(&p), big(euler));
            if let Some(pg) = o.ok("flow graph", poset_to_flow_graph(&p)) {
                if let Some(v) = o.ok("kostant", flow_polytope_volume(&pg.graph)) {
                    o.eq("kostant", v, big(euler))
                }
            }
        }
    }
    o.eq("Euler numbers", (alternating_permutations(5), alternating_permutations(7)), (16, 272));
    for n in 2..=6usize {
        for k in 1..=3usize.min(n - 1) {
            let lambda = staircase_partition(n - k);
            let count = o.ok("vertices", p_lambda_vertices(n, &lambda)).map_or(0, |v| v.len());
            o.eq(&format!("n={n} k={k} Dyck paths"), big(count as u64), dyck_paths_bounded(n, k + 1));
        }
    }
    o
}

fn face_dimension() -> Outcome {
    let mut o = Outcome::default();
    let mut cases: Vec<(usize, Vec<usize>)> =
        (1..=4).flat_map(|n| partitions_in_staircase(n).into_iter().map(move |l| (n, l))).collect();
    cases.push((5, vec![2, 1, 1]));
    for (n, lambda) in cases {
        let Some(v) = o.ok("vertices", p_lambda_vertices(n, &lambda)) else { continue };
        let points: Vec<IntPoint> = v.iter().map(ASMatrix::as_point).collect();
        let want = binom2(n) - lambda.iter().sum::<usize>();
        if let Some(d) = o.ok("rank", affine_dimension_int(&points)) {
            o.eq(&format!("n={n} λ={lambda:?}"), d, want)
        }
    }
    o
}

fn triangulation_geometry() -> Outcome {
    let mut o = Outcome::default();
    for fx in graph_fixtures() {
        o.record(check_flow_triangulations(&fx));
    }
    for p in poset_fixtures() {
        o.record(check_order_triangulation(&p.name, &p.poset));
    }
    for n in 3..=4 {
        for lambda in partitions_in_staircase(n) {
            pulled_back_volume(&mut o, n, &lambda);
        }
    }
    o
}

fn lattice_maps() -> Outcome {
    let mut o = Outcome::default();
    for pf in planar_fixtures() {
        o.record(check_maps_roundtrip(&pf, &[1, 2]));
    }
    o
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("Catalan products for complete graphs by three methods", catalan_products),
        ("ASM faces: vertices, volumes and dimensions", asm_cry_family),
        ("Ehrhart values agree across matrices, posets and flows", ehrhart_tri_oracle),
        ("canonical triangulation transports to the planar DKK triangulation", canonical_equals_dkk),
        ("framed PS leaves are the DKK maximal cliques", ps_equals_dkk),
        ("extension, flow and framing-change bijections", bijections),
        ("family corollaries: powers of two, Fibonacci, Euler, Dyck", family_corollaries),
        ("face dimensions by affine rank", face_dimension),
        ("triangulation geometry: unimodular, volume, sampling", triangulation_geometry),
        ("flow/order maps on lattice points", lattice_maps),
    ];
    let results: Vec<(Outcome, Duration)> = thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, run)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let o = run();
                    (o, start.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });
    let mut failed = 0;
    for (k, ((title, _), (o, elapsed))) in criteria.iter().zip(&results).enumerate() {
        let verdict = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {}: {title} ({} checks, {:.1}s)", k + 1, o.checks, elapsed.as_secs_f64());
        for f in o.failures.iter().take(10) {
            println!("    {f}");
        }
        if !o.failures.is_empty() {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
