use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hotvis::error::{Error, Result};
use hotvis::eval::{run_experiment, ExperimentPlan};
use hotvis::io::{self, Delimiter, EdgeListOptions};
use hotvis::layout::{compute_layout, Layout, LayoutConfig};
use hotvis::metrics::{metric_report, temporal_closeness, top_percentile};
use hotvis::paths::{extract_causal_paths_capped, window_trajectories, PathCollection, DEFAULT_PARTIAL_PATH_CAP};
use hotvis::svg::{render_svg, RenderStyle};
use hotvis::synthetic::{generate_cluster_graph, ClusterModelParams};

/// Time-aware layouts of temporal networks.
#[derive(Parser)]
#[command(name = "hotvis", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract causal paths (or window trajectories) into a path collection.
    Paths(PathsArgs),
    /// Compute a time-aware layout from a path collection.
    Layout(LayoutArgs),
    /// Draw a layout as SVG.
    Render(RenderArgs),
    /// Evaluate a layout against a path collection.
    Metrics(MetricsArgs),
    /// Generate a temporal network with planted temporal clusters.
    Synth(SynthArgs),
    /// Cross-validate layouts of several maximum orders.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum InputKind {
    Edges,
    Trajectories,
}

#[derive(Clone, Copy, ValueEnum)]
enum DelimiterArg {
    Tab,
    Comma,
    Space,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct PathsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "edges")]
    input_kind: InputKind,
    /// Maximum time difference between consecutive edges (edge input only).
    #[arg(long)]
    delta: Option<u64>,
    #[arg(long, default_value_t = 2)]
    max_order: usize,
    /// Treat every edge row as undirected.
    #[arg(long)]
    undirected: bool,
    #[arg(long, value_enum)]
    delimiter: Option<DelimiterArg>,
    /// Abort when more partial paths than this are active.
    #[arg(long, default_value_t = DEFAULT_PARTIAL_PATH_CAP)]
    cap: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ForceArgs {
    #[arg(long, default_value_t = 1000)]
    iterations: usize,
    /// Force coefficient of order k, as k=value; repeatable.
    #[arg(long = "alpha", value_parser = parse_alpha)]
    alphas: Vec<(usize, f64)>,
    /// Count every distinct path once instead of by frequency.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    uniform_weights: bool,
}

impl ForceArgs {
    fn config(&self, max_order: usize, seed: u64) -> LayoutConfig {
        let mut cfg = LayoutConfig::default()
            .with_max_order(max_order)
            .with_iterations(self.iterations)
            .with_seed(seed);
        cfg.uniform_path_weights = self.uniform_weights;
        for &(k, a) in &self.alphas {
            cfg = cfg.with_alpha(k, a);
        }
        cfg
    }
}

#[derive(Args)]
struct LayoutArgs {
    /// Path collection JSON.
    #[arg(long)]
    paths: PathBuf,
    #[arg(long, default_value_t = 1)]
    max_order: usize,
    #[command(flatten)]
    force: ForceArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to csv for a .csv output file, json otherwise.
    #[arg(long, value_enum)]
    format: Option<LayoutFormat>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    layout: PathBuf,
    /// Temporal edge list whose edges are drawn.
    #[arg(long, conflicts_with = "paths")]
    edges: Option<PathBuf>,
    /// Path collection JSON whose length-1 paths are drawn.
    #[arg(long)]
    paths: Option<PathBuf>,
    /// vertex,colour CSV; integer values pick from a fixed palette.
    #[arg(long)]
    colors: Option<PathBuf>,
    /// File with one vertex name per line to highlight.
    #[arg(long, conflicts_with = "highlight_top")]
    highlight: Option<PathBuf>,
    /// Highlight the top GAMMA percent temporal-closeness vertices (needs --paths).
    #[arg(long, requires = "paths")]
    highlight_top: Option<f64>,
    #[arg(long)]
    circle_gamma: Option<f64>,
    #[arg(long, default_value_t = 800.0)]
    width: f64,
    #[arg(long, default_value_t = 800.0)]
    height: f64,
    #[arg(long, default_value_t = 4.0)]
    node_radius: f64,
    #[arg(long, default_value_t = 1.0)]
    edge_width: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    layout: PathBuf,
    #[arg(long)]
    paths: PathBuf,
    #[arg(long = "gamma", default_values_t = [10.0])]
    gammas: Vec<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 30)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    degree: usize,
    #[arg(long, default_value_t = 2000)]
    sequences: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Timestamp swap attempts; one per sequence by default.
    #[arg(long)]
    swap_attempts: Option<usize>,
    /// Fraction of sequences routed through one hub vertex per cluster.
    #[arg(long, default_value_t = 0.0)]
    hub_fraction: f64,
    #[arg(long)]
    output_edges: PathBuf,
    #[arg(long)]
    output_clusters: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    paths: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2])]
    orders: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    repetitions: usize,
    #[arg(long, default_value_t = 0.7)]
    train_fraction: f64,
    #[arg(long, default_value_t = 10.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    #[command(flatten)]
    force: ForceArgs,
    /// JSON report.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Per-run CSV table.
    #[arg(long)]
    csv: Option<PathBuf>,
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

fn parse_alpha(s: &str) -> std::result::Result<(usize, f64), String> {
    let (k, a) = s.split_once('=').ok_or("expected k=value")?;
    let k: usize = k.trim().parse().map_err(|_| format!("invalid order {k:?}"))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("invalid coefficient {a:?}"))?;
    if k < 2 {
        return Err("alpha applies to orders 2 and above".into());
    }
    Ok((k, a))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn emit(output: Option<&Path>, content: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, content)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn read_layout(path: &Path) -> Result<Layout> {
    let text = read(path)?;
    if is_csv(path) {
        io::read_layout_csv(&text)
    } else {
        io::read_layout_json(&text)
    }
}

fn read_paths(path: &Path) -> Result<PathCollection> {
    io::read_path_collection(&read(path)?)
}

fn cmd_paths(a: &PathsArgs) -> Result<()> {
    let text = read(&a.input)?;
    let pc = match a.input_kind {
        InputKind::Edges => {
            let delta = a
                .delta
                .ok_or_else(|| Error::InvalidArgument("--delta is required for edge input".into()))?;
            let options = EdgeListOptions {
                directed: !a.undirected,
                delimiter: a.delimiter.map(|d| match d {
                    DelimiterArg::Tab => Delimiter::Tab,
                    DelimiterArg::Comma => Delimiter::Comma,
                    DelimiterArg::Space => Delimiter::Whitespace,
                }),
            };
            let graph = io::parse_temporal_edges(&text, options)?;
            extract_causal_paths_capped(&graph, delta, a.max_order, a.cap)?
        }
        InputKind::Trajectories => window_trajectories(&io::parse_paths(&text)?, a.max_order)?,
    };
    emit(a.output.as_deref(), &io::write_path_collection(&pc)?)
}

fn cmd_layout(a: &LayoutArgs) -> Result<()> {
    let pc = read_paths(&a.paths)?;
    let layout = compute_layout(&pc, &a.force.config(a.max_order, a.seed))?;
    let csv = match a.format {
        Some(f) => matches!(f, LayoutFormat::Csv),
        None => a.output.as_deref().is_some_and(is_csv),
    };
    let text = if csv {
        io::write_layout_csv(&layout)?
    } else {
        io::write_layout_json(&layout)?
    };
    emit(a.output.as_deref(), &text)
}

fn cmd_render(a: &RenderArgs) -> Result<()> {
    let layout = read_layout(&a.layout)?;
    let pc = a.paths.as_deref().map(read_paths).transpose()?;
    let edges: Vec<(String, String)> = if let Some(p) = &a.edges {
        let g = io::parse_temporal_edges(&read(p)?, EdgeListOptions::default())?;
        let names = g.vertices();
        g.edges()
            .iter()
            .map(|e| (names.name(e.source).to_string(), names.name(e.target).to_string()))
            .collect()
    } else if let Some(pc) = &pc {
        pc.of_length(1)
            .map(|(p, _)| (pc.vertices().name(p[0]).to_string(), pc.vertices().name(p[1]).to_string()))
            .collect()
    } else {
        Vec::new()
    };
    let color_map = match &a.colors {
        Some(p) => Some(
            io::read_vertex_map(&read(p)?)?
                .into_iter()
                .map(|(v, c)| match c.parse::<usize>() {
                    Ok(i) => (v, PALETTE[i % PALETTE.len()].to_string()),
                    Err(_) => (v, c),
                })
                .collect::<BTreeMap<_, _>>(),
        ),
        None => None,
    };
    let highlight_set = match (&a.highlight, a.highlight_top, &pc) {
        (Some(p), _, _) => Some(io::read_vertex_set(&read(p)?)),
        (None, Some(gamma), Some(pc)) => {
            if !(gamma > 0.0 && gamma <= 100.0) {
                return Err(Error::InvalidArgument(format!("gamma must lie in (0, 100], got {gamma}")));
            }
            let cc = temporal_closeness(pc);
            let top = top_percentile(layout.positions().keys().map(String::as_str), &cc, gamma);
            Some(top.into_iter().map(str::to_string).collect())
        }
        _ => None,
    };
    let style = RenderStyle {
        node_radius: a.node_radius,
        edge_width: a.edge_width,
        color_map,
        highlight_set,
        width: a.width,
        height: a.height,
        barycentre_circle: a.circle_gamma,
    };
    emit(a.output.as_deref(), &render_svg(&layout, &edges, &style)?)
}

fn cmd_metrics(a: &MetricsArgs) -> Result<()> {
    let layout = read_layout(&a.layout)?;
    let pc = read_paths(&a.paths)?;
    let report = metric_report(&layout, &pc, &a.gammas)?;
    emit(a.output.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))
}

fn cmd_synth(a: &SynthArgs) -> Result<()> {
    let params = ClusterModelParams {
        swap_attempts: a.swap_attempts,
        hub_fraction: a.hub_fraction,
        ..ClusterModelParams::new(a.n, a.degree, a.sequences, a.seed)
    };
    let generated = generate_cluster_graph(&params)?;
    emit(Some(&a.output_edges), &io::write_temporal_edges(&generated.graph)?)?;
    if let Some(p) = &a.output_clusters {
        emit(Some(p), &io::write_vertex_map("cluster", &generated.clusters)?)?;
    }
    Ok(())
}

fn cmd_eval(a: &EvalArgs) -> Result<()> {
    let pc = read_paths(&a.paths)?;
    let plan = ExperimentPlan {
        orders: a.orders.clone(),
        repetitions: a.repetitions,
        train_fraction: a.train_fraction,
        gamma: a.gamma,
        base_seed: a.base_seed,
    };
    let report = run_experiment(&pc, &plan, &a.force.config(1, a.base_seed))?;
    if let Some(p) = &a.csv {
        emit(Some(p), &report.to_csv())?;
    }
    emit(a.output.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Paths(a) => cmd_paths(a),
        Command::Layout(a) => cmd_layout(a),
        Command::Render(a) => cmd_render(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Eval(a) => cmd_eval(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_class() as u8)
        }
    }
}
