//! Command-line pipeline: build scenic graphs, generate routes, compute
//! metrics, render SVG, and build R^d flat lattices.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 cap exceeded.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use scenic::graph::{build_curves, build_graph, BoxSpec, Config, Rect, ScenicGraph};
use scenic::io::{
    build_report, render_svg, to_json_string, write_atomic, InputDocument,
    ReportDocument,
};
use scenic::lattice::{build_lattice, densest_flat_route, BoxD, LatticeConfig};
use scenic::routing::{
    apsp, route_acch, route_acu, route_densest_line, route_dpe, route_minmax_hull,
    RequirementOrder, Route, RoutingParams,
};
use scenic::{Error, Result};

#[derive(Parser)]
#[command(
    name = "scenic",
    version,
    about = "Scenic curve arrangements and route generation over colored points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    MinmaxHull,
    DensestLine,
    Acu,
    Acch,
    Dpe,
    All,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::MinmaxHull => "minmax-hull",
            Algorithm::DensestLine => "densest-line",
            Algorithm::Acu => "acu",
            Algorithm::Acch => "acch",
            Algorithm::Dpe => "dpe",
            Algorithm::All => "all",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderPreset {
    Sec2,
    Sec3,
}

impl OrderPreset {
    fn order(self) -> RequirementOrder {
        match self {
            OrderPreset::Sec2 => RequirementOrder::sec2(),
            OrderPreset::Sec3 => RequirementOrder::sec3(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            OrderPreset::Sec2 => "sec2",
            OrderPreset::Sec3 => "sec3",
        }
    }
}

#[derive(clap::Args)]
struct GraphArgs {
    /// Input configuration JSON.
    #[arg(long)]
    input: PathBuf,
    /// Explicit bounding box "xmin,ymin,xmax,ymax" (overrides the input
    /// document).
    #[arg(long, value_name = "X0,Y0,X1,Y1")]
    r#box: Option<String>,
    /// Auto-box expansion factor.
    #[arg(long)]
    expand: Option<f64>,
    /// Absolute tolerance (scaled by the box diagonal).
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(clap::Args)]
struct RouteArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Route algorithm.
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    /// Requirement-priority preset for the comparator ranking.
    #[arg(long, value_enum, default_value = "sec3")]
    order: OrderPreset,
    /// Boundary-shape parameter for densest-line.
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of top-density lines seeding densest-line.
    #[arg(long)]
    top_k: Option<usize>,
    /// Node-selection radius for minmax-hull.
    #[arg(long)]
    distance_bound: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the scenic graph and write it as JSON.
    BuildGraph {
        #[command(flatten)]
        graph: GraphArgs,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate routes and write the full report as JSON.
    Route {
        #[command(flatten)]
        route: RouteArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate routes and write only their metrics.
    Metrics {
        #[command(flatten)]
        route: RouteArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a previously built graph (and optional report) as SVG.
    Render {
        /// Graph JSON produced by build-graph.
        #[arg(long)]
        graph: PathBuf,
        /// Input configuration JSON (draws the sites).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Report JSON produced by route (draws the routes).
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the R^d flat lattice and the densest-flat route.
    Flats {
        /// Input configuration JSON with coords arrays.
        #[arg(long)]
        input: PathBuf,
        /// Ambient dimension.
        #[arg(long)]
        dim: usize,
        /// Maximum intersection depth (defaults to the dimension).
        #[arg(long)]
        depth_limit: Option<usize>,
        /// Cap on generated flats.
        #[arg(long)]
        max_flats: Option<usize>,
        /// Auto-box expansion factor.
        #[arg(long)]
        expand: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_box(s: &str) -> Result<Rect> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Data(format!("--box: {p:?} is not a number")))
        })
        .collect::<Result<_>>()?;
    if parts.len() != 4 || parts[0] >= parts[2] || parts[1] >= parts[3] {
        return Err(Error::Data(
            "--box: expected xmin,ymin,xmax,ymax with min < max".into(),
        ));
    }
    Ok(Rect::new(
        scenic::geometry::Point2::new(parts[0], parts[1]),
        scenic::geometry::Point2::new(parts[2], parts[3]),
    ))
}

fn load_graph(args: &GraphArgs) -> Result<(InputDocument, Config, ScenicGraph)> {
    let doc = InputDocument::from_path(&args.input)?;
    let mut cfg = doc.to_config()?;
    if let Some(spec) = &args.r#box {
        cfg.box_spec = BoxSpec::Explicit(parse_box(spec)?);
    } else if let Some(expand) = args.expand {
        cfg.box_spec = BoxSpec::Auto { expand };
    }
    if let Some(tol) = args.tolerance {
        cfg.eps_abs = tol;
    }
    cfg.validate()?;
    let curves = build_curves(&cfg)?;
    let graph = build_graph(&curves, &cfg)?;
    Ok((doc, cfg, graph))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_routes(args: &RouteArgs) -> Result<(Config, ScenicGraph, ReportDocument)> {
    let (doc, cfg, graph) = load_graph(&args.graph)?;
    let table = apsp(&graph)?;
    let params = RoutingParams {
        distance_bound: args.distance_bound.or(doc.distance_bound),
        site_centroid: Some(cfg.site_centroid()),
        top_k: args.top_k.or(doc.top_k),
        alpha: args.alpha.or(doc.alpha),
    };
    let selected: Vec<Algorithm> = match args.algorithm {
        Algorithm::All => vec![
            Algorithm::MinmaxHull,
            Algorithm::DensestLine,
            Algorithm::Acu,
            Algorithm::Acch,
            Algorithm::Dpe,
        ],
        one => vec![one],
    };
    let run_all = args.algorithm == Algorithm::All;
    let mut results: Vec<(String, Route)> = Vec::new();
    for alg in selected {
        let route = match alg {
            Algorithm::MinmaxHull => route_minmax_hull(&graph, &table, &params),
            Algorithm::DensestLine => match route_densest_line(&graph, &table, &params) {
                Ok(r) => r,
                // under "all", a circles-only graph just drops this row
                Err(Error::NoLineCurves) if run_all => continue,
                Err(e) => return Err(e),
            },
            Algorithm::Acu => route_acu(&graph, &table),
            Algorithm::Acch => route_acch(&graph, &table),
            Algorithm::Dpe => route_dpe(&graph, &table),
            Algorithm::All => unreachable!(),
        };
        results.push((alg.name().to_string(), route));
    }
    let order = args.order.order();
    let report = build_report(&graph, &cfg.points, &results, &order, args.order.name())?;
    Ok((cfg, graph, report))
}

#[derive(Serialize)]
struct FlatOut {
    id: usize,
    dim: usize,
    base: Vec<f64>,
    basis: Vec<Vec<f64>>,
    generators: Vec<(u32, u32)>,
    representative: Vec<f64>,
    incidence: usize,
}

#[derive(Serialize)]
struct FlatsDocument {
    ambient_dim: usize,
    flats: Vec<FlatOut>,
    edges: Vec<(usize, usize)>,
    route: scenic::lattice::FlatRoute,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::BuildGraph { graph, out } => {
            let (_, _, g) = load_graph(&graph)?;
            emit(out.as_ref(), &to_json_string(&g)?)
        }
        Command::Route { route, out } => {
            let (_, _, report) = run_routes(&route)?;
            emit(out.as_ref(), &to_json_string(&report)?)
        }
        Command::Metrics { route, out } => {
            let (_, _, mut report) = run_routes(&route)?;
            for row in &mut report.rows {
                row.steps.clear();
                row.node_sequence.clear();
            }
            emit(out.as_ref(), &to_json_string(&report)?)
        }
        Command::Render {
            graph,
            input,
            report,
            out,
        } => {
            let text = std::fs::read_to_string(&graph).map_err(|e| {
                Error::Data(format!(
                    "{}: cannot read graph JSON (run build-graph first): {e}",
                    graph.display()
                ))
            })?;
            let g: ScenicGraph = serde_json::from_str(&text)
                .map_err(|e| Error::Data(format!("{}: invalid graph JSON: {e}", graph.display())))?;
            let sites = match input {
                Some(path) => InputDocument::from_path(&path)?.to_config()?.points,
                None => vec![],
            };
            let routes: Vec<Route> = match report {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)?;
                    let rep: ReportDocument = serde_json::from_str(&text).map_err(|e| {
                        Error::Data(format!("{}: invalid report JSON: {e}", path.display()))
                    })?;
                    rep.rows
                        .into_iter()
                        .map(|row| Route {
                            steps: row.steps,
                            flags: row.flags,
                        })
                        .collect()
                }
                None => vec![],
            };
            emit(out.as_ref(), &render_svg(&g, &sites, &routes))
        }
        Command::Flats {
            input,
            dim,
            depth_limit,
            max_flats,
            expand,
            out,
        } => {
            let doc = InputDocument::from_path(&input)?;
            let points = doc.to_points_d(dim)?;
            let mut cfg = LatticeConfig {
                depth_limit,
                ..Default::default()
            };
            if let Some(e) = expand {
                cfg.expand = e;
            }
            if let Some(m) = max_flats {
                cfg.max_flats = m;
            }
            if let Some([xmin, ymin, xmax, ymax]) = doc.box_corners {
                if dim == 2 {
                    cfg.bounds = Some(BoxD {
                        min: scenic::lattice::PointD::from_vec(vec![xmin, ymin]),
                        max: scenic::lattice::PointD::from_vec(vec![xmax, ymax]),
                    });
                }
            }
            let lat = build_lattice(&points, &cfg)?;
            let route = densest_flat_route(&lat);
            let docu = FlatsDocument {
                ambient_dim: dim,
                flats: lat
                    .flats
                    .iter()
                    .enumerate()
                    .map(|(i, f)| FlatOut {
                        id: i,
                        dim: f.dim(),
                        base: f.base.iter().cloned().collect(),
                        basis: f
                            .basis
                            .iter()
                            .map(|v| v.iter().cloned().collect())
                            .collect(),
                        generators: f
                            .generators
                            .iter()
                            .map(|p| (p.first, p.second))
                            .collect(),
                        representative: lat.representatives[i].iter().cloned().collect(),
                        incidence: lat.incidence(i),
                    })
                    .collect(),
                edges: lat.edges.iter().copied().collect(),
                route,
            };
            emit(out.as_ref(), &to_json_string(&docu)?)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
