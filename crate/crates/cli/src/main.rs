//! `hyperlay`: compute, score and draw graph layouts.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 bad flags, 3 bad
//! input file, 4 a method that cannot run with the requested geometry or
//! input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperlay::force::{layout_force_with_distances, ForceParams};
use hyperlay::graph::{parse_graph, write_edge_list};
use hyperlay::hmds::{
    run_mds_with_distances, search_alpha, AlphaMode, AlphaSearch, HmdsError, InitMode, ScheduleKind, SgdParams,
    ShuffleMode, StopRule, TraceRow, WeightRule, DEFAULT_TOLERANCE,
};
use hyperlay::layout_file::LayoutFile;
use hyperlay::metrics::{compare_geometries, distortion, stress, QualityReport};
use hyperlay::projection::{layout_from_positions, project_pipeline, DEFAULT_RHO_BASE};
use hyperlay::render::{render_svg, RenderStyle};
use hyperlay::{apsp, generate, Geometry, Graph, GraphKind, InputFormat, Layout};

#[derive(Parser)]
#[command(name = "hyperlay", version, about = "Graph layout in hyperbolic, spherical and Euclidean geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lay out a graph and write a layout file.
    Layout(LayoutArgs),
    /// Draw a layout file in the Poincaré disk as SVG.
    Render(RenderArgs),
    /// Print stress and distortion of a layout file.
    Metrics {
        layout: PathBuf,
    },
    /// Run SGD in all three geometries and print the mean scores.
    Compare {
        graph: PathBuf,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Number of seeds, 0..k.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value_t = 20)]
        iterations: usize,
    },
    /// Write a generated graph as an edge list.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Dot,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Method {
    Project,
    Force,
    Hmds,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Hyperbolic,
    Spherical,
    Euclidean,
}

impl From<GeometryArg> for Geometry {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Hyperbolic => Geometry::Hyperbolic,
            GeometryArg::Spherical => Geometry::Spherical,
            GeometryArg::Euclidean => Geometry::Euclidean,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleArg {
    Exponential,
    InverseT,
    InverseSqrtT,
}

impl From<ScheduleArg> for ScheduleKind {
    fn from(s: ScheduleArg) -> Self {
        match s {
            ScheduleArg::Exponential => ScheduleKind::Exponential,
            ScheduleArg::InverseT => ScheduleKind::InverseT,
            ScheduleArg::InverseSqrtT => ScheduleKind::InverseSqrtT,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ShuffleArg {
    Replacement,
    IndexShuffle,
    Reshuffle,
}

impl From<ShuffleArg> for ShuffleMode {
    fn from(s: ShuffleArg) -> Self {
        match s {
            ShuffleArg::Replacement => ShuffleMode::Replacement,
            ShuffleArg::IndexShuffle => ShuffleMode::IndexShuffle,
            ShuffleArg::Reshuffle => ShuffleMode::Reshuffle,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Random,
    Smart,
}

#[derive(Args)]
struct LayoutArgs {
    graph: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum, default_value = "hmds")]
    method: Method,
    #[arg(long, value_enum, default_value = "hyperbolic")]
    geometry: GeometryArg,
    /// Fixed scale factor on graph distances.
    #[arg(long, conflicts_with = "alpha_search")]
    alpha: Option<f64>,
    /// Pick the scale factor minimizing distortion.
    #[arg(long)]
    alpha_search: bool,
    #[arg(long, value_enum, default_value = "exponential")]
    schedule: ScheduleArg,
    /// Schedule length; for `force`, the pass limit.
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long, value_enum, default_value = "reshuffle")]
    shuffle: ShuffleArg,
    #[arg(long, value_enum, default_value = "random")]
    init: InitArg,
    /// Keep iterating until no node moves more than this.
    #[arg(long)]
    converge: Option<Option<f64>>,
    #[arg(long, env = "HYPERLAY_SEED", default_value_t = 0)]
    seed: u64,
    /// Projection: fraction of the base radius the farthest node reaches.
    #[arg(long, default_value_t = 1.0)]
    coverage: f64,
    #[arg(long, default_value_t = DEFAULT_RHO_BASE)]
    rho_base: f64,
    #[arg(long, short)]
    out: PathBuf,
    /// Also write the per-iteration trace as tab-separated text.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    layout: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    edge_opacity: f64,
    /// Label size at the disk center in pixels; 0 hides labels.
    #[arg(long, default_value_t = 15.0)]
    label_size: f64,
    #[arg(long, default_value_t = 1.0)]
    zoom: f64,
    /// Disk radius in pixels.
    #[arg(long, default_value_t = 400)]
    size: u32,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: KindArg,
    /// Size parameters: n, depth, rows, or `width height`, or `n m`.
    params: Vec<usize>,
    #[arg(long, env = "HYPERLAY_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Path,
    Cycle,
    Grid,
    Lattice,
    Cube,
    Tree,
    RandomTree,
    Random,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Incompatible(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::Incompatible(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Incompatible(m) | Failure::Other(m) => m,
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn input(path: &Path, e: impl ToString) -> Failure {
    Failure::Input(format!("{}: {}", path.display(), e.to_string()))
}

fn hmds_failure(e: HmdsError) -> Failure {
    match e {
        HmdsError::SmartInit(_) | HmdsError::EuclideanSearch => Failure::Incompatible(e.to_string()),
        HmdsError::Graph(_) => Failure::Input(e.to_string()),
        _ => usage(e),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the same directory, so a failed
/// command never leaves a partial file behind.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| Failure::Other(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn load_graph(path: &Path, format: Option<Format>) -> Result<Graph> {
    let format = match format {
        Some(Format::Dot) => InputFormat::Dot,
        Some(Format::Edgelist) => InputFormat::EdgeList,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some("dot" | "gv") => InputFormat::Dot,
            _ => InputFormat::EdgeList,
        },
    };
    parse_graph(&read(path)?, format).map_err(|e| input(path, e))
}

fn load_layout(path: &Path) -> Result<(LayoutFile, Graph, Layout)> {
    let file = LayoutFile::from_json(&read(path)?).map_err(|e| input(path, e))?;
    let g = file.graph().map_err(|e| input(path, e))?;
    let l = file.layout().map_err(|e| input(path, e))?;
    Ok((file, g, l))
}

fn trace_tsv(trace: &[TraceRow]) -> String {
    let mut s = String::from("iteration\tstress\tmax_displacement\n");
    for r in trace {
        s.push_str(&format!("{}\t{}\t{}\n", r.iteration, r.stress, r.max_displacement));
    }
    s
}

fn cmd_layout(a: LayoutArgs) -> Result<()> {
    let geometry = Geometry::from(a.geometry);
    if a.method != Method::Hmds && geometry != Geometry::Hyperbolic {
        return Err(Failure::Incompatible(format!("method `{}` only produces hyperbolic layouts", method_name(a.method))));
    }
    if a.method != Method::Hmds && a.alpha_search {
        return Err(Failure::Incompatible("--alpha-search applies to the hmds method only".into()));
    }
    if a.iterations == Some(0) {
        return Err(usage("--iterations must be at least 1"));
    }
    let g = load_graph(&a.graph, a.format)?;
    let d = apsp(&g).map_err(|e| input(&a.graph, e))?;
    let start = Instant::now();

    let (file, report, trace) = match a.method {
        Method::Project => {
            let source = layout_from_positions(&g)
                .map_err(|_| Failure::Incompatible("the project method needs an input with node positions".into()))?;
            let l = project_pipeline(&source, a.coverage, a.rho_base).map_err(usage)?;
            let l = match a.alpha {
                Some(alpha) => Layout::new(l.coords().clone(), alpha, l.method())
                    .and_then(|x| x.with_polygons(l.polygons().to_vec()))
                    .map_err(usage)?,
                None => l,
            };
            let file = LayoutFile::new(&g, &l, Some(a.seed))
                .and_then(|f| f.with_source(&source, a.rho_base, a.coverage))
                .map_err(|e| Failure::Other(e.to_string()))?;
            (file, report_for(&l, &d, a.seed, 0, start), Vec::new())
        }
        Method::Force => {
            let p = ForceParams {
                max_iterations: a.iterations.unwrap_or(ForceParams::default().max_iterations),
                schedule: a.schedule.into(),
                tolerance: a.converge.flatten().unwrap_or(ForceParams::default().tolerance),
                alpha: a.alpha,
                ..ForceParams::default()
            };
            let run = layout_force_with_distances(&d, &p, a.seed).map_err(hmds_failure)?;
            let file = LayoutFile::new(&g, &run.layout, Some(a.seed)).map_err(|e| Failure::Other(e.to_string()))?;
            (file.with_trace(&run.trace), report_for(&run.layout, &d, a.seed, run.passes, start), run.trace)
        }
        Method::Hmds => {
            let iterations = a.iterations.unwrap_or(SgdParams::default().iterations);
            let mut p = SgdParams {
                schedule: a.schedule.into(),
                iterations,
                shuffle: a.shuffle.into(),
                init: match a.init {
                    InitArg::Random => InitMode::Random,
                    InitArg::Smart => InitMode::Smart,
                },
                alpha: a.alpha.map_or(AlphaMode::Heuristic, AlphaMode::Fixed),
                stop: match a.converge {
                    None => StopRule::FixedIterations,
                    Some(tol) => StopRule::Convergence {
                        tolerance: tol.unwrap_or(DEFAULT_TOLERANCE),
                        max_iterations: 10 * iterations,
                    },
                },
                seed: a.seed,
                ..SgdParams::default()
            };
            if a.alpha_search {
                let (alpha, _) = search_alpha(&d, geometry, &p, AlphaSearch::default()).map_err(hmds_failure)?;
                log::info!("searched alpha = {alpha}");
                p.alpha = AlphaMode::Fixed(alpha);
            }
            let run = run_mds_with_distances(&d, geometry, &p).map_err(hmds_failure)?;
            let report = QualityReport::from_run(&run, &d, p.weight, a.seed).map_err(|e| Failure::Other(e.to_string()))?;
            let file = LayoutFile::new(&g, &run.layout, Some(a.seed)).map_err(|e| Failure::Other(e.to_string()))?;
            (file.with_trace(&run.trace), report, run.trace)
        }
    };

    if let Some(path) = &a.trace_out {
        write_atomic(path, &trace_tsv(&trace))?;
    }
    write_atomic(&a.out, &file.to_json())?;
    println!("{report}");
    Ok(())
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Project => "project",
        Method::Force => "force",
        Method::Hmds => "hmds",
    }
}

fn report_for(l: &Layout, d: &hyperlay::DistanceMatrix, seed: u64, iterations: usize, start: Instant) -> QualityReport {
    QualityReport {
        stress: stress(l, d, WeightRule::InverseSquare, l.alpha()).expect("sizes match"),
        distortion: distortion(l, d).expect("sizes match"),
        geometry: l.geometry(),
        alpha: l.alpha(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        iterations_run: iterations,
        seed,
    }
}

fn cmd_render(a: RenderArgs) -> Result<()> {
    let (_, g, l) = load_layout(&a.layout)?;
    let style = RenderStyle {
        edge_opacity: a.edge_opacity,
        label_base_px: a.label_size,
        zoom: a.zoom,
        disk_px: a.size,
        ..RenderStyle::default()
    };
    style.validate().map_err(usage)?;
    if l.geometry() != Geometry::Hyperbolic {
        log::warn!("{} layout drawn with straight edges", l.geometry());
    }
    let svg = render_svg(&l, &g, &style).map_err(|e| input(&a.layout, e))?;
    write_atomic(&a.out, &svg)
}

fn cmd_metrics(path: &Path) -> Result<()> {
    let (file, g, l) = load_layout(path)?;
    let d = apsp(&g).map_err(|e| input(path, e))?;
    let iterations = file.trace.as_ref().map_or(0, Vec::len);
    let mut report = report_for(&l, &d, file.seed.unwrap_or(0), iterations, Instant::now());
    report.wall_time_seconds = 0.0;
    println!("{report}");
    Ok(())
}

fn cmd_compare(path: &Path, format: Option<Format>, seeds: u64, iterations: usize) -> Result<()> {
    if seeds == 0 || iterations == 0 {
        return Err(usage("--seeds and --iterations must be at least 1"));
    }
    let g = load_graph(path, format)?;
    let seeds: Vec<u64> = (0..seeds).collect();
    let c = compare_geometries(&g, &SgdParams { iterations, ..SgdParams::default() }, &seeds).map_err(hmds_failure)?;
    print!("{}", c.to_tsv());
    println!("best\t{}", c.best);
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let want = |k: usize| -> Result<()> {
        if a.params.len() == k {
            Ok(())
        } else {
            Err(usage(format!("expected {k} size parameter(s), got {}", a.params.len())))
        }
    };
    let p = &a.params;
    let kind = match a.kind {
        KindArg::Cube => want(0).map(|_| GraphKind::Cube),
        KindArg::Path => want(1).map(|_| GraphKind::Path(p[0])),
        KindArg::Cycle => want(1).map(|_| GraphKind::Cycle(p[0])),
        KindArg::Lattice => want(1).map(|_| GraphKind::TriangularLattice { rows: p[0] }),
        KindArg::Tree => want(1).map(|_| GraphKind::BinaryTree { depth: p[0] }),
        KindArg::RandomTree => want(1).map(|_| GraphKind::RandomTree { n: p[0], seed: a.seed }),
        KindArg::Grid => want(2).map(|_| GraphKind::Grid { width: p[0], height: p[1] }),
        KindArg::Random => want(2).map(|_| GraphKind::Random { n: p[0], m: p[1], seed: a.seed }),
    }?;
    let text = write_edge_list(&generate(&kind).map_err(usage)?);
    match &a.out {
        Some(path) => write_atomic(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Layout(a) => cmd_layout(a),
        Command::Render(a) => cmd_render(a),
        Command::Metrics { layout } => cmd_metrics(&layout),
        Command::Compare { graph, format, seeds, iterations } => cmd_compare(&graph, format, seeds, iterations),
        Command::Gen(a) => cmd_gen(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hyperlay: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
