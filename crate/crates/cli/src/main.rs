//! `flowpoly`: volumes, Ehrhart data, triangulations and verification for flow,
//! order and ASM-face polytopes.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 bad input.

use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::bail;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use flowpoly::asm::family_report;
use flowpoly::fixtures::{graph_fixtures, planar_fixtures, poset_fixtures, GraphFixture, PlanarFixture};
use flowpoly::geometry::{triangulation_checks, IntPoint};
use flowpoly::graph::{enumerate_routes, prune_inner_vertices, DirectedMultigraph, Framing, GraphFile};
use flowpoly::kostant::{flow_ehrhart_polynomial, flow_ehrhart_value, flow_polytope_volume, normalized_leading_term};
use flowpoly::planar::{arc_diagram, poset_to_flow_graph};
use flowpoly::polynomial::Polynomial;
use flowpoly::poset::{count_linear_extensions, order_ideals, order_polynomial, Poset, PosetFile};
use flowpoly::triangulation::{
    canonical_triangulation, dkk_maximal_cliques, flow_polytope_vertices, order_polytope_vertices, ps_triangulation,
    route_simplex,
};
use flowpoly::verify::{
    all_passed, check_asm_family, check_canonical_vs_dkk, check_flow_bijection, check_flow_triangulations,
    check_framing_change, check_linext_bijection, check_maps_roundtrip, check_order_triangulation, check_ps_vs_dkk,
    framings_for, Check, FramingChoice, Property,
};

#[derive(Parser)]
#[command(name = "flowpoly", version, about = "Flow, order and ASM-face polytopes, exactly")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Flow polytope of a graph file.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Order polytope of a poset file.
    #[command(subcommand)]
    Poset(PosetCommand),
    /// Triangulate a flow polytope (ps, dkk) or an order polytope (canonical).
    Triangulate(TriangulateArgs),
    /// Faces of the alternating sign matrix polytope.
    #[command(subcommand)]
    Asm(AsmCommand),
    /// Check a property over the built-in fixtures or a given file.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Normalized volume.
    Volume {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = VolumeMethod::Kostant)]
        method: VolumeMethod,
        /// Compute by all three methods and require agreement.
        #[arg(long)]
        all: bool,
    },
    /// Ehrhart polynomial and its first values.
    Ehrhart {
        path: PathBuf,
        #[arg(long, default_value_t = 4)]
        t_max: u64,
    },
    /// Routes from the source to the sink.
    Routes { path: PathBuf },
}

#[derive(Subcommand)]
enum PosetCommand {
    /// Linear extensions, order ideals and order polynomial values.
    Stats {
        path: PathBuf,
        #[arg(long, default_value_t = 4)]
        m_max: u64,
    },
    /// Ehrhart polynomial of the order polytope.
    Ehrhart {
        path: PathBuf,
        #[arg(long, default_value_t = 4)]
        t_max: u64,
    },
}

#[derive(Subcommand)]
enum AsmCommand {
    /// Vertices, dimension, volume and Ehrhart values of `P_λ(n)`.
    Report {
        #[arg(long)]
        n: usize,
        /// Parts of λ, comma separated; empty for λ = ∅.
        #[arg(long, value_delimiter = ',', default_value = "")]
        lambda: Vec<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VolumeMethod {
    Kostant,
    Ps,
    Dkk,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TriangulationMethod {
    Ps,
    Dkk,
    Canonical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FramingSource {
    /// The framing stored in the graph file (id-order if absent).
    File,
    IdOrder,
    /// The file's framing, rejected unless it comes from a planar arc drawing.
    Planar,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
}

#[derive(Args)]
struct TriangulateArgs {
    /// A graph file, or a poset file for `--method canonical`.
    path: PathBuf,
    #[arg(long, value_enum, default_value_t = TriangulationMethod::Dkk)]
    method: TriangulationMethod,
    #[arg(long, value_enum, default_value_t = FramingSource::File)]
    framing: FramingSource,
    #[arg(long, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
}

#[derive(Args)]
struct VerifyArgs {
    /// thm2, dkk-eq-ps, bij-linext, bij-flow, maps-roundtrip, asm-family or geometry.
    property: String,
    /// Check this graph file instead of the built-in fixtures.
    #[arg(long, conflicts_with = "poset")]
    graph: Option<PathBuf>,
    /// Check the flow graph of this (drawn) poset file instead of the fixtures.
    #[arg(long)]
    poset: Option<PathBuf>,
    /// Use every framing of the graph (`dkk-eq-ps`, `bij-flow`).
    #[arg(long)]
    all_framings: bool,
    /// Seeded random framings per graph (`dkk-eq-ps`, `bij-flow`).
    #[arg(long, default_value_t = 5)]
    random_framings: usize,
    /// Matrix size for `asm-family`; repeatable. Defaults to 3 and 4.
    #[arg(long)]
    n: Vec<usize>,
}

/// `println!` into the output buffer.
macro_rules! say {
    ($out:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        writeln!($out, $($arg)*).expect("writing to a String cannot fail");
    }};
}

/// Errors that are the caller's fault, reported with exit code 2.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input(e: flowpoly::Error) -> anyhow::Error {
    if e.is_input_error() {
        InputError(e.to_string()).into()
    } else {
        e.into()
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {e}", path.display())).into())
}

/// A graph file, pruned if needed, with its framing carried along.
fn load_graph(path: &Path) -> anyhow::Result<(DirectedMultigraph, Framing)> {
    let file = GraphFile::from_json(&read(path)?).map_err(input)?;
    let g = file.graph().map_err(input)?;
    let f = file.framing(&g).map_err(input)?;
    if g.is_pruned() {
        return Ok((g, f));
    }
    let p = prune_inner_vertices(&g).map_err(input)?;
    eprintln!("note: removed vertices {:?} that carry no flow", p.removed_vertices);
    let f = f.restrict(&p);
    Ok((p.graph, f))
}

fn load_poset(path: &Path) -> anyhow::Result<Poset> {
    PosetFile::from_json(&read(path)?).map_err(input)?.poset().map_err(input)
}

fn print_json(out: &mut String, v: &serde_json::Value) {
    say!(out, "{}", serde_json::to_string_pretty(v).expect("JSON value serializes"));
}

fn graph_volume(out: &mut String, path: &Path, method: VolumeMethod, all: bool, as_json: bool) -> anyhow::Result<bool> {
    let (g, f) = load_graph(path)?;
    let methods = if all { vec![VolumeMethod::Kostant, VolumeMethod::Ps, VolumeMethod::Dkk] } else { vec![method] };
    let mut values = Vec::new();
    for m in methods {
        let (name, v) = match m {
            VolumeMethod::Kostant => ("kostant", flow_polytope_volume(&g)?.to_string()),
            VolumeMethod::Ps => ("ps", ps_triangulation(&g, &f)?.len().to_string()),
            VolumeMethod::Dkk => ("dkk", dkk_maximal_cliques(&g, &f)?.len().to_string()),
        };
        values.push((name, v));
    }
    let agree = values.windows(2).all(|w| w[0].1 == w[1].1);
    if as_json {
        let by: serde_json::Map<String, serde_json::Value> =
            values.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        print_json(out, &json!({ "volume": values[0].1, "methods": by, "agree": agree }));
    } else if values.len() == 1 {
        say!(out, "{}", values[0].1);
    } else {
        for (k, v) in &values {
            say!(out, "{k}: {v}");
        }
        say!(out, "{}", if agree { "methods agree" } else { "METHODS DISAGREE" });
    }
    Ok(agree)
}

fn graph_ehrhart(out: &mut String, path: &Path, t_max: u64, as_json: bool) -> anyhow::Result<bool> {
    let (g, _) = load_graph(path)?;
    let p = flow_ehrhart_polynomial(&g)?;
    let values =
        (0..=t_max).map(|t| flow_ehrhart_value(&g, t).map(|v| v.to_string())).collect::<Result<Vec<_>, _>>()?;
    let d = g.flow_dimension();
    let lead = normalized_leading_term(&p, d);
    if as_json {
        print_json(
            out,
            &json!({
                "dimension": d,
                "polynomial": p.to_string(),
                "values": values,
                "normalized_leading_term": lead.to_string(),
            }),
        );
    } else {
        say!(out, "L(t) = {p}");
        say!(out, "dimension {d}, volume {lead}");
        for (t, v) in values.iter().enumerate() {
            say!(out, "L({t}) = {v}");
        }
    }
    Ok(true)
}

fn graph_routes(out: &mut String, path: &Path, as_json: bool) -> anyhow::Result<bool> {
    let (g, _) = load_graph(path)?;
    let routes = enumerate_routes(&g);
    if as_json {
        let listed: Vec<_> = routes.iter().map(|r| json!({ "edges": r.edges(), "vertices": r.vertices(&g) })).collect();
        print_json(out, &json!({ "count": routes.len(), "routes": listed }));
    } else {
        say!(out, "{} routes", routes.len());
        for r in &routes {
            let vs: Vec<String> = r.vertices(&g).iter().map(|v| v.to_string()).collect();
            say!(out, "  edges {:?}  vertices {}", r.edges(), vs.join(" -> "));
        }
    }
    Ok(true)
}

fn poset_stats(out: &mut String, path: &Path, m_max: u64, as_json: bool) -> anyhow::Result<bool> {
    let p = load_poset(path)?;
    let e = count_linear_extensions(&p);
    let ideals = order_ideals(&p).len();
    let omega: Vec<String> = (0..=m_max).map(|m| order_polynomial(&p, m).to_string()).collect();
    if as_json {
        print_json(
            out,
            &json!({
                "elements": p.len(),
                "linear_extensions": e.to_string(),
                "order_ideals": ideals,
                "order_polynomial": omega,
            }),
        );
    } else {
        say!(out, "elements           {}", p.len());
        say!(out, "linear extensions  {e}");
        say!(out, "order ideals       {ideals}");
        for (m, v) in omega.iter().enumerate() {
            say!(out, "Ω(P, {m}) = {v}");
        }
    }
    Ok(true)
}

fn poset_ehrhart(out: &mut String, path: &Path, t_max: u64, as_json: bool) -> anyhow::Result<bool> {
    let p = load_poset(path)?;
    let k = p.len() as u64;
    let fit: Vec<_> = (0..=k).map(|t| order_polynomial(&p, t + 1).into()).collect();
    let poly = Polynomial::interpolate(&fit);
    let values: Vec<String> = (0..=t_max).map(|t| order_polynomial(&p, t + 1).to_string()).collect();
    if as_json {
        print_json(out, &json!({ "polynomial": poly.to_string(), "values": values }));
    } else {
        say!(out, "L(t) = {poly}");
        for (t, v) in values.iter().enumerate() {
            say!(out, "L({t}) = {v}");
        }
    }
    Ok(true)
}

fn points_json(s: &[IntPoint]) -> serde_json::Value {
    json!(s)
}

fn triangulate(out: &mut String, args: &TriangulateArgs, as_json: bool) -> anyhow::Result<bool> {
    let emit_json = as_json || args.emit == Emit::Json;
    if args.method == TriangulationMethod::Canonical {
        let p = load_poset(&args.path)?;
        let simplices = canonical_triangulation(&p);
        let points: Vec<Vec<IntPoint>> = simplices.iter().map(|s| s.vertices.clone()).collect();
        let report = triangulation_checks(&order_polytope_vertices(&p), &points, &count_linear_extensions(&p))?;
        if emit_json {
            let listed: Vec<_> = simplices
                .iter()
                .map(|s| {
                    let ext: Vec<&str> = s.extension.iter().map(|&x| p.label(x)).collect();
                    json!({ "extension": ext, "vertices": points_json(&s.vertices) })
                })
                .collect();
            print_json(out, &json!({ "method": "canonical", "simplices": listed, "checks": report }));
        } else {
            say!(out, "{} simplices", simplices.len());
            for s in &simplices {
                let ext: Vec<&str> = s.extension.iter().map(|&x| p.label(x)).collect();
                say!(out, "  {}", ext.join(" < "));
            }
            say!(out, "{}", report.summary());
        }
        return Ok(report.passed());
    }

    let (g, file_framing) = load_graph(&args.path)?;
    let f = match args.framing {
        FramingSource::File => file_framing,
        FramingSource::IdOrder => Framing::id_order(&g),
        FramingSource::Planar => arc_diagram(&g, &file_framing).map_err(input)?.framing,
    };
    let vertices = flow_polytope_vertices(&g);
    let volume = flow_polytope_volume(&g)?;
    let (listed, simplices): (Vec<serde_json::Value>, Vec<Vec<IntPoint>>) = match args.method {
        TriangulationMethod::Ps => ps_triangulation(&g, &f)?
            .into_iter()
            .map(|l| {
                let s = route_simplex(&g, &l.routes);
                (json!({ "routes": l.routes, "flow": l.flow, "vertices": points_json(&s) }), s)
            })
            .unzip(),
        TriangulationMethod::Dkk => dkk_maximal_cliques(&g, &f)?
            .into_iter()
            .map(|c| {
                let s = route_simplex(&g, &c);
                (json!({ "routes": c, "vertices": points_json(&s) }), s)
            })
            .unzip(),
        TriangulationMethod::Canonical => unreachable!("handled above"),
    };
    let report = triangulation_checks(&vertices, &simplices, &volume)?;
    let method = if args.method == TriangulationMethod::Ps { "ps" } else { "dkk" };
    if emit_json {
        print_json(out, &json!({ "method": method, "simplices": listed, "checks": report }));
    } else {
        say!(out, "{} simplices ({method})", simplices.len());
        for s in &listed {
            say!(out, "  routes {}", s["routes"]);
        }
        say!(out, "{}", report.summary());
    }
    Ok(report.passed())
}

fn parse_lambda(parts: &[String]) -> anyhow::Result<Vec<usize>> {
    parts
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().map_err(|_| InputError(format!("bad part {s:?} in λ")).into()))
        .collect()
}

fn asm_report(out: &mut String, n: usize, lambda: &[String], as_json: bool) -> anyhow::Result<bool> {
    let lambda = parse_lambda(lambda)?;
    let r = family_report(n, &lambda).map_err(input)?;
    if as_json {
        print_json(out, &serde_json::to_value(&r)?);
    } else {
        say!(out, "P_λ({n}) with λ = {:?}", r.lambda);
        say!(out, "vertices   {}", r.vertex_count);
        say!(out, "dimension  {} (expected {})", r.dimension, r.expected_dimension);
        say!(
            out,
            "volume     {} (extensions) / {} (kostant) / {} (maximal cliques)",
            r.volume_by_extensions,
            r.volume_by_kostant,
            r.volume_by_dkk_count
        );
        say!(out, " t  matrices  order-poly  flows  product");
        for row in &r.ehrhart {
            let product = row.product_formula.as_deref().unwrap_or("-");
            say!(
                out,
                "{:>2}  {:>8}  {:>10}  {:>5}  {:>7}",
                row.t,
                row.matrices,
                row.order_polynomial,
                row.flows,
                product
            );
        }
        say!(out, "{}", if r.all_consistent { "consistent" } else { "INCONSISTENT" });
    }
    Ok(r.all_consistent)
}

/// Planar targets for the drawing-based properties.
fn planar_targets(args: &VerifyArgs) -> anyhow::Result<Vec<PlanarFixture>> {
    if let Some(path) = &args.graph {
        let (g, f) = load_graph(path)?;
        let data = arc_diagram(&g, &f).map_err(input)?;
        return Ok(vec![PlanarFixture { name: path.display().to_string(), data }]);
    }
    if let Some(path) = &args.poset {
        let p = load_poset(path)?;
        let data = poset_to_flow_graph(&p).map_err(input)?;
        return Ok(vec![PlanarFixture { name: path.display().to_string(), data }]);
    }
    Ok(planar_fixtures())
}

fn graph_targets(args: &VerifyArgs) -> anyhow::Result<Vec<GraphFixture>> {
    if args.graph.is_some() || args.poset.is_some() {
        if let Some(path) = &args.graph {
            let (graph, framing) = load_graph(path)?;
            return Ok(vec![GraphFixture { name: path.display().to_string(), graph, framing }]);
        }
        return Ok(planar_targets(args)?.iter().map(PlanarFixture::as_graph_fixture).collect());
    }
    Ok(graph_fixtures())
}

fn framing_choice(args: &VerifyArgs, fx: &GraphFixture, user_given: bool) -> FramingChoice {
    if args.all_framings || (!user_given && (fx.name == "K4" || fx.name == "K5")) {
        FramingChoice::All
    } else {
        FramingChoice::Random { count: args.random_framings }
    }
}

fn verify(out: &mut String, args: &VerifyArgs, as_json: bool) -> anyhow::Result<bool> {
    let property: Property = args.property.parse().map_err(input)?;
    let user_given = args.graph.is_some() || args.poset.is_some();
    let mut checks: Vec<Check> = Vec::new();
    match property {
        Property::Thm2 => checks.extend(planar_targets(args)?.iter().map(check_canonical_vs_dkk)),
        Property::BijLinext => checks.extend(planar_targets(args)?.iter().map(check_linext_bijection)),
        Property::MapsRoundtrip => {
            checks.extend(planar_targets(args)?.iter().map(|p| check_maps_roundtrip(p, &[1, 2])))
        }
        Property::DkkEqPs => {
            for fx in graph_targets(args)? {
                checks.push(check_ps_vs_dkk(&fx, framing_choice(args, &fx, user_given)));
            }
        }
        Property::BijFlow => {
            for fx in graph_targets(args)? {
                checks.push(check_flow_bijection(&fx));
                for (label, to) in framings_for(&fx.graph, &fx.framing, framing_choice(args, &fx, user_given)) {
                    checks.push(check_framing_change(&fx, &fx.framing, &to, &label));
                }
            }
        }
        Property::AsmFamily => {
            if user_given {
                bail!(InputError("asm-family takes --n, not a file".into()));
            }
            let ns = if args.n.is_empty() { vec![3, 4] } else { args.n.clone() };
            if let Some(&bad) = ns.iter().find(|&&n| n == 0 || n > 6) {
                bail!(InputError(format!("--n {bad} is outside 1..=6")));
            }
            for n in ns {
                checks.extend(check_asm_family(n));
            }
        }
        Property::Geometry => {
            for fx in graph_targets(args)? {
                checks.push(check_flow_triangulations(&fx));
            }
            if !user_given {
                checks.extend(poset_fixtures().iter().map(|p| check_order_triangulation(&p.name, &p.poset)));
            }
        }
    }
    let ok = all_passed(&checks);
    if as_json {
        print_json(out, &json!({ "property": property.name(), "passed": ok, "checks": checks }));
    } else {
        for c in &checks {
            say!(out, "{c}");
        }
        let failed = checks.iter().filter(|c| !c.passed).count();
        say!(out, "{}: {} of {} passed", property, checks.len() - failed, checks.len());
    }
    Ok(ok)
}

fn run(cli: &Cli, out: &mut String) -> anyhow::Result<bool> {
    let j = cli.json;
    match &cli.command {
        Command::Graph(GraphCommand::Volume { path, method, all }) => graph_volume(out, path, *method, *all, j),
        Command::Graph(GraphCommand::Ehrhart { path, t_max }) => graph_ehrhart(out, path, *t_max, j),
        Command::Graph(GraphCommand::Routes { path }) => graph_routes(out, path, j),
        Command::Poset(PosetCommand::Stats { path, m_max }) => poset_stats(out, path, *m_max, j),
        Command::Poset(PosetCommand::Ehrhart { path, t_max }) => poset_ehrhart(out, path, *t_max, j),
        Command::Triangulate(args) => triangulate(out, args, j),
        Command::Asm(AsmCommand::Report { n, lambda }) => asm_report(out, *n, lambda, j),
        Command::Verify(args) => verify(out, args, j),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(&cli, &mut out);
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let is_input = e.chain().any(|c| c.is::<InputError>());
            eprintln!("error: {}", e.root_cause());
            ExitCode::from(if is_input { 2 } else { 1 })
        }
    }
}
