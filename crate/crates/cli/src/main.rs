use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sfconv::costs::CostSpec;
use sfconv::dynamics::{self, SimConfig};
use sfconv::generators::{self, BaParams, HkParams, RewireParams};
use sfconv::io::{self, IngestOptions, TraceMeta, WeightColumn};
use sfconv::montecarlo::{self, McConfig};
use sfconv::rng::{self, substream};
use sfconv::{spectral, Error, Graph, Result};

#[derive(Parser)]
#[command(name = "sfconv", version, about = "Clustering and convergence of gradient tracking on scale-free graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Grow a BA or HK graph.
    Generate(GenerateArgs),
    /// Degree and clustering statistics.
    Metrics(MetricsArgs),
    /// Algebraic connectivity and Jacobian convergence rate.
    Spectral(SpectralArgs),
    /// Run the gradient-tracking dynamics and write a trace.
    Optimize(OptimizeArgs),
    /// Raise clustering by degree-preserving edge swaps.
    Rewire(RewireArgs),
    /// Run a Monte-Carlo campaign.
    Mc(McArgs),
    /// Convert an edge list into a graph document.
    Ingest(IngestArgs),
    /// One metrics row per graph.
    Scatter(ScatterArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Ba,
    Hk,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Quartic,
    Mlloss,
}

impl Family {
    fn spec(self) -> CostSpec {
        match self {
            Family::Quartic => CostSpec::Quartic,
            Family::Mlloss => CostSpec::MlLoss { m: sfconv::costs::MLLOSS_POINTS },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    Unit,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Konect,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    l: usize,
    #[arg(long, default_value_t = 0)]
    l2: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct SpectralArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    alpha: f64,
    #[arg(long, value_enum)]
    cost: Option<Family>,
    #[arg(long, default_value_t = 0)]
    cost_seed: u64,
    /// Replace the stored weights.
    #[arg(long, value_enum)]
    weights: Option<Weights>,
    #[arg(long, default_value_t = 0.5)]
    wlow: f64,
    #[arg(long, default_value_t = 1.5)]
    whigh: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    cost: Family,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RewireArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    target_c: f64,
    #[arg(long)]
    max_swaps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct McArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long, value_enum)]
    format: Format,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    keep_all_components: bool,
    #[arg(long)]
    use_weights: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScatterArgs {
    #[arg(long, num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    out: PathBuf,
}

fn print_json<S: Serialize>(v: &S) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<()> {
    let mut r = rng::from_seed(a.seed);
    let g: Graph = match a.model {
        Model::Ba if a.l2 > 0 => return Err(Error::InvalidParams("--l2 only applies to --model hk".into())),
        Model::Ba => generators::generate_ba(&BaParams::new(a.n, a.l), &mut r)?,
        Model::Hk => generators::generate_hk(&HkParams::new(a.n, a.l, a.l2), &mut r)?,
    };
    io::write_graph_file(&a.out, &g)
}

#[derive(Serialize)]
struct Metrics {
    n: usize,
    edges: usize,
    average_degree: f64,
    max_degree: usize,
    clustering: f64,
    triangles: u64,
    connected: bool,
}

fn metrics(a: MetricsArgs) -> Result<()> {
    let g = io::read_graph_file(&a.input)?;
    let stats = g.degree_stats();
    let m = Metrics {
        n: g.n(),
        edges: g.edge_count(),
        average_degree: stats.average,
        max_degree: stats.max,
        clustering: g.global_clustering().global,
        triangles: g.triangle_count(),
        connected: g.is_connected(),
    };
    if a.json {
        print_json(&m)
    } else if a.csv {
        println!("n,edges,average_degree,max_degree,clustering,triangles,connected");
        println!("{},{},{},{},{},{},{}", m.n, m.edges, m.average_degree, m.max_degree, m.clustering, m.triangles, m.connected);
        Ok(())
    } else {
        println!("n               {}", m.n);
        println!("edges           {}", m.edges);
        println!("average degree  {:.4}", m.average_degree);
        println!("max degree      {}", m.max_degree);
        println!("clustering      {:.6}", m.clustering);
        println!("triangles       {}", m.triangles);
        println!("connected       {}", m.connected);
        Ok(())
    }
}

fn spectral_cmd(a: SpectralArgs) -> Result<()> {
    let g = io::read_graph_file(&a.input)?;
    let g = match a.weights {
        None => g,
        Some(Weights::Unit) => g.unit_weights(),
        Some(Weights::Random) => g.assign_random_weights(&mut rng::from_seed(a.seed), a.wlow, a.whigh)?,
    };
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let hess = match a.cost {
        None => vec![0.0; g.n()],
        Some(f) => {
            let model = f.spec().sample(g.n(), &mut rng::from_seed(a.cost_seed))?;
            let opt = model.aggregate_optimum()?;
            model.hessians_at(opt.x_star)
        }
    };
    print_json(&spectral::spectral_report(&g, a.alpha, hess)?)
}

fn optimize(a: OptimizeArgs) -> Result<()> {
    let g = io::read_graph_file(&a.input)?;
    let model = a.cost.spec().sample(g.n(), &mut rng::from_seed(substream(a.seed, 0)))?;
    let mut cfg = SimConfig::new(a.alpha, a.steps);
    cfg.h = a.h;
    let trace = dynamics::run(&g, &model, &cfg, &mut rng::from_seed(substream(a.seed, 1)))?;
    std::fs::write(&a.out, io::trace_to_csv(&trace))?;
    let meta = TraceMeta {
        n: g.n(),
        family: model.family().into(),
        config: cfg,
        h: trace.h,
        seed: Some(a.seed),
        diverged: trace.diverged,
        records: trace.len(),
    };
    io::write_json_file(io::meta_path(&a.out), &meta)?;
    if trace.diverged {
        log::warn!("trajectory diverged; trace ends at step {}", trace.recorded_steps.last().unwrap_or(&0));
    }
    println!("final_gap {}", trace.final_gap().unwrap_or(f64::NAN));
    Ok(())
}

fn rewire(a: RewireArgs) -> Result<()> {
    let g = io::read_graph_file(&a.input)?;
    let p = RewireParams::new(a.target_c, a.max_swaps);
    let (out, report) = generators::rewire_increase_clustering(&g, &p, &mut rng::from_seed(a.seed))?;
    io::write_graph_file(&a.out, &out)?;
    print_json(&report)
}

fn mc(a: McArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.config)?;
    let mut cfg: McConfig = serde_json::from_str(&text)?;
    cfg.resolve_paths(a.config.parent().unwrap_or(Path::new(".")));
    let summary = montecarlo::run_mc(&cfg)?;
    montecarlo::write_outputs(&summary, &a.out)?;
    let last = summary.labels[0].mean_trace.len() - 1;
    for v in montecarlo::compare_topologies(&summary, last)? {
        println!("{}\tgap={:e}\tC={:.4}", v.label, v.gap, v.mean_clustering);
    }
    Ok(())
}

fn ingest(a: IngestArgs) -> Result<()> {
    let Format::Konect = a.format;
    let opts = IngestOptions {
        largest_component_only: !a.keep_all_components,
        weight_column: if a.use_weights { WeightColumn::Use } else { WeightColumn::Ignore },
        ..IngestOptions::default()
    };
    let g = io::read_edge_list_file(&a.input, &opts)?;
    io::write_graph_file(&a.out, &g)
}

fn scatter(a: ScatterArgs) -> Result<()> {
    let mut graphs = Vec::with_capacity(a.inputs.len());
    for p in &a.inputs {
        let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        graphs.push((name, io::read_graph_file(p)?));
    }
    let rows = montecarlo::scatter_report(&graphs, a.alpha, &CostSpec::Quartic, 0)?;
    std::fs::write(&a.out, io::scatter_to_csv(&rows))?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Generate(a) => generate(a),
        Cmd::Metrics(a) => metrics(a),
        Cmd::Spectral(a) => spectral_cmd(a),
        Cmd::Optimize(a) => optimize(a),
        Cmd::Rewire(a) => rewire(a),
        Cmd::Mc(a) => mc(a),
        Cmd::Ingest(a) => ingest(a),
        Cmd::Scatter(a) => scatter(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error kind={} msg={msg}", e.kind());
            ExitCode::from(1)
        }
    }
}
