//! `cobalt` command-line pipeline runner.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cobalt_core::evaluation::{evaluate_regression, missingness_sweep};
use cobalt_core::io::{
    node_communities, read_covariates, read_score_table, read_targets, render_layers, write_dot, write_graphml,
    write_regression_csv, NetworkArtifact,
};
use cobalt_core::network::build_network;
use cobalt_core::pruning::prune_mln;
use cobalt_core::selector::{run_cobalt, select_on_network, IterationTrace, StoppingMode};
use cobalt_core::{Network, PipelineConfig, Table};

const TRACE_FORMAT: &str = "cobalt-trace";

#[derive(Parser)]
#[command(name = "cobalt", version, about = "Multi-layer network construction, pruning and layer selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Pipeline configuration (JSON). Missing fields take their defaults.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides every seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for output files, created if absent.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Score CSV to a pruned network file (network.json).
    Build {
        scores: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Layer selection from a score CSV or a network file (trace.json).
    Select {
        /// Score CSV, or a network file from `build` (`.json`).
        input: PathBuf,
        /// Overrides the configured stopping rule.
        #[arg(long, value_parser = parse_stopping)]
        stopping: Option<StoppingMode>,
        #[command(flatten)]
        common: Common,
    },
    /// Missingness sweep over a complete score CSV (sweep.json).
    Sweep {
        scores: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Baseline and community-augmented regression (regression.json/.csv).
    Evaluate {
        scores: PathBuf,
        #[arg(long)]
        covariates: PathBuf,
        #[arg(long)]
        targets: PathBuf,
        /// Selection trace; without it only the baseline is fitted.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// One SVG per layer, nodes colored by community.
    Render {
        network: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// Iteration whose partition is drawn (default: the last).
        #[arg(long)]
        iteration: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Network file to GraphML or DOT, optionally with communities.
    Export {
        network: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        iteration: Option<usize>,
        #[arg(long, value_enum, default_value = "graphml")]
        format: ExportFormat,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Graphml,
    Dot,
}

fn parse_stopping(s: &str) -> Result<StoppingMode, String> {
    s.parse().map_err(|e: cobalt_core::Error| e.to_string())
}

/// Trace file: the selection records plus what produced them.
#[derive(serde::Serialize, serde::Deserialize)]
struct TraceFile {
    format: String,
    stopping: StoppingMode,
    seed: u64,
    layers: Vec<cobalt_core::LayerId>,
    /// 1-based iteration with the highest modularity.
    best_iteration: Option<usize>,
    #[serde(flatten)]
    trace: IterationTrace<f64>,
}

impl Common {
    fn config(&self) -> anyhow::Result<PipelineConfig> {
        let cfg = match &self.config {
            Some(p) => PipelineConfig::load(p).with_context(|| format!("config {}", p.display()))?,
            None => PipelineConfig::default(),
        };
        Ok(match self.seed {
            Some(s) => cfg.with_seed(s),
            None => cfg,
        })
    }

    fn write(&self, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
        let path = self.out_dir.join(name);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

fn open(path: &Path) -> anyhow::Result<fs::File> {
    fs::File::open(path).with_context(|| format!("opening {}", path.display()))
}

fn read_table(path: &Path) -> anyhow::Result<Table> {
    read_score_table(open(path)?).with_context(|| format!("reading {}", path.display()))
}

fn read_network(path: &Path) -> anyhow::Result<(Network, NetworkArtifact)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let art = NetworkArtifact::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok((art.to_network()?, art))
}

fn read_trace(path: &Path) -> anyhow::Result<TraceFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: TraceFile =
        serde_json::from_str(&text).map_err(cobalt_core::Error::from).with_context(|| format!("parsing {}", path.display()))?;
    if file.format != TRACE_FORMAT {
        bail!(cobalt_core::Error::InvalidInput(format!("{} is not a {TRACE_FORMAT} file", path.display())));
    }
    Ok(file)
}

fn json<S: serde::Serialize>(value: &S) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value).map_err(cobalt_core::Error::from)? + "\n")
}

fn pick_iteration(trace: &IterationTrace<f64>, iteration: Option<usize>) -> anyhow::Result<usize> {
    let n = trace.records.len();
    match iteration {
        None if n > 0 => Ok(n - 1),
        Some(k) if (1..=n).contains(&k) => Ok(k - 1),
        _ => bail!(cobalt_core::Error::InvalidInput(format!(
            "iteration {} is not in the trace (1..={n})",
            iteration.map_or("last".into(), |k| k.to_string())
        ))),
    }
}

fn build(scores: &Path, common: &Common) -> anyhow::Result<()> {
    let cfg = common.config()?;
    let table = read_table(scores)?;
    let (net, report) = prune_mln(&build_network(&table)?, &cfg.pruning)?;
    let before: usize = report.universes.iter().map(|u| u.edges_before).sum();
    let path = common.write("network.json", &NetworkArtifact::from_network(&net, Some(report)).to_json()?)?;
    println!(
        "{}: {} layers, {} nodes, {} edges kept of {}",
        path.display(),
        net.layers().len(),
        net.node_count(),
        net.edge_count(),
        before
    );
    Ok(())
}

fn select(input: &Path, stopping: Option<StoppingMode>, common: &Common) -> anyhow::Result<()> {
    let mut cfg = common.config()?;
    if let Some(s) = stopping {
        cfg.selector.stopping = s;
    }
    let trace = if input.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let (net, _) = read_network(input)?;
        select_on_network(&net, &cfg.leiden, cfg.selector.stopping)?.1
    } else {
        run_cobalt(&read_table(input)?, &cfg.cobalt())?.trace
    };
    for r in &trace.records {
        let rows: Vec<serde_json::Value> = r
            .partition
            .vertices()
            .iter()
            .zip(r.partition.membership())
            .map(|(v, c)| serde_json::json!({ "entity": v.entity, "layer": v.layer, "community": c }))
            .collect();
        common.write(&format!("partitions/iteration_{:02}.json", r.iteration), &json(&rows)?)?;
    }
    let file = TraceFile {
        format: TRACE_FORMAT.into(),
        stopping: cfg.selector.stopping,
        seed: cfg.leiden.seed,
        layers: trace.layers(),
        best_iteration: trace.best_iteration().map(|i| i + 1),
        trace,
    };
    let path = common.write("trace.json", &json(&file)?)?;
    println!("{}: {} iterations", path.display(), file.trace.records.len());
    for r in &file.trace.records {
        let cost = r.cost.as_ref().map_or("-".to_string(), |c| {
            format!("A={:.4} CS={:.4} cost={:.4}", c.availability, c.community_similarity, c.cost)
        });
        println!("  {:>3} {:<20} Q={:.4} {cost}", r.iteration, r.layer.as_str(), r.modularity);
    }
    Ok(())
}

fn sweep(scores: &Path, common: &Common) -> anyhow::Result<()> {
    let cfg = common.config()?;
    let report = missingness_sweep(&read_table(scores)?, &cfg.sweep, &cfg.cobalt())?;
    let path = common.write("sweep.json", &json(&report)?)?;
    let failed = report.entries.iter().filter(|e| e.failed()).count();
    println!("{}: {} ratios plus reference, {failed} failed", path.display(), report.entries.len());
    Ok(())
}

fn evaluate(
    scores: &Path,
    covariates: &Path,
    targets: &Path,
    trace: Option<&Path>,
    common: &Common,
) -> anyhow::Result<()> {
    let cfg = common.config()?;
    let table = read_table(scores)?;
    let cov = read_covariates(open(covariates)?).with_context(|| format!("reading {}", covariates.display()))?;
    let tgt = read_targets(open(targets)?).with_context(|| format!("reading {}", targets.display()))?;
    let partitions = match trace {
        Some(p) => read_trace(p)?.trace.records.iter().map(|r| (r.iteration, r.partition.entity_projection())).collect(),
        None => Vec::new(),
    };
    let report = evaluate_regression(&table, &cov, &tgt, &partitions, &cfg.regression)?;
    for s in &report.skipped {
        eprintln!("warning: skipped {s}");
    }
    let path = common.write("regression.json", &json(&report)?)?;
    let mut csv = Vec::new();
    write_regression_csv(&report, &mut csv)?;
    common.write("regression.csv", &String::from_utf8(csv)?)?;
    println!("{}: {} rows, {} skipped", path.display(), report.rows.len(), report.skipped.len());
    Ok(())
}

fn communities_for(net: &Network, trace: &Path, iteration: Option<usize>) -> anyhow::Result<Vec<Option<usize>>> {
    let file = read_trace(trace)?;
    let k = pick_iteration(&file.trace, iteration)?;
    Ok(node_communities(net, &file.trace.records[k].partition))
}

fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn render(network: &Path, trace: &Path, iteration: Option<usize>, common: &Common) -> anyhow::Result<()> {
    let cfg = common.config()?;
    let (net, _) = read_network(network)?;
    let communities = communities_for(&net, trace, iteration)?;
    let panels = render_layers(&net, &communities, cfg.leiden.seed, &cfg.layout)?;
    for (i, (layer, svg)) in panels.iter().enumerate() {
        let path = common.write(&format!("svg/{:02}_{}.svg", i + 1, file_stem(layer.as_str())), svg)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn export(
    network: &Path,
    trace: Option<&Path>,
    iteration: Option<usize>,
    format: ExportFormat,
    common: &Common,
) -> anyhow::Result<()> {
    let (net, _) = read_network(network)?;
    let communities = trace.map(|t| communities_for(&net, t, iteration)).transpose()?;
    let (name, text) = match format {
        ExportFormat::Graphml => ("network.graphml", write_graphml(&net, communities.as_deref())?),
        ExportFormat::Dot => ("network.dot", write_dot(&net, communities.as_deref())),
    };
    println!("{}", common.write(name, &text)?.display());
    Ok(())
}

fn init_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("COBALT_THREADS") else {
        return Ok(());
    };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => bail!(cobalt_core::Error::InvalidInput(format!("COBALT_THREADS must be a positive integer, found `{raw}`"))),
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    init_threads()?;
    match &cli.command {
        Command::Build { scores, common } => build(scores, common),
        Command::Select { input, stopping, common } => select(input, *stopping, common),
        Command::Sweep { scores, common } => sweep(scores, common),
        Command::Evaluate { scores, covariates, targets, trace, common } => {
            evaluate(scores, covariates, targets, trace.as_deref(), common)
        }
        Command::Render { network, trace, iteration, common } => render(network, trace, *iteration, common),
        Command::Export { network, trace, iteration, format, common } => {
            export(network, trace.as_deref(), *iteration, *format, common)
        }
    }
}

/// 3 for numerical failures, 2 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    let numerical = err.chain().any(|e| e.downcast_ref::<cobalt_core::Error>().is_some_and(cobalt_core::Error::is_numerical));
    if numerical {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
