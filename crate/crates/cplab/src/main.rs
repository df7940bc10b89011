//! Thin command-line front end. All real work lives in the library; see the
//! crate examples for programmatic use.
//!
//! Exit codes: 0 on success, 2 on validation errors (bad flags or bad
//! values), 1 on runtime errors (I/O).

use clap::{Args, Parser, Subcommand};
use cplab::analysis::PatternGraph;
use cplab::catalan::gamma_bounds;
use cplab::experiment::{
    run_cell, write_histogram_csv, write_summary_csv, ExperimentError, ExperimentSpec, MetricSet,
    PatternSpec,
};
use cplab::graph::{build_graph_with, degree_histogram, CatalanPairGraph, EdgeAlgorithm};
use cplab::oracle::{exact_model_expectations, exact_pair_probability, is_valid_quadruple_small};
use cplab::sampler::{sample_representative, ColoringModel, RngStream};
use cplab::{summarize, Quadruple};
use num_rational::BigRational;
use serde_json::json;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cplab",
    version,
    about = "Random Catalan-pair graphs: samplers, exact small-size oracles, and Monte Carlo experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one colored representative and its interlacement graph
    Sample(SampleArgs),
    /// Run a seeded Monte Carlo experiment over a grid of sizes
    Experiment(ExperimentArgs),
    /// Exact two-sided bracket for the isolated-vertex constant
    Gamma(GammaArgs),
    /// Exact small-size computations
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Count copies of a pattern in a supplied or sampled graph
    CountSubgraphs(CountArgs),
}

#[derive(Args)]
struct SampleArgs {
    /// Number of arcs (vertices of the graph)
    #[arg(long)]
    n: usize,
    /// RNG seed; falls back to $CPLAB_SEED, then 0
    #[arg(long)]
    seed: Option<u64>,
    /// RNG stream index
    #[arg(long, default_value_t = 0)]
    stream: u64,
    /// Coloring model: fair | biased:<p> | fixed:<m>
    #[arg(long, default_value = "fair", value_parser = parse_model)]
    model: ColoringModel,
    /// Edge detection: quadratic | sweep (identical output)
    #[arg(long, default_value = "quadratic", value_parser = parse_algorithm)]
    algorithm: EdgeAlgorithm,
    /// Write the JSON here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write this graph's degree histogram as `degree,count` CSV
    #[arg(long)]
    degrees_out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Sizes: comma list and/or `start:end:step` ranges, e.g. 100:3000:100
    #[arg(long)]
    n: String,
    /// Trials per size
    #[arg(long)]
    trials: usize,
    /// RNG seed; falls back to $CPLAB_SEED, then 0
    #[arg(long)]
    seed: Option<u64>,
    /// Coloring model: fair | biased:<p> | fixed:<m>
    #[arg(long, default_value = "fair", value_parser = parse_model)]
    model: ColoringModel,
    /// Comma list of metrics: edges, isolated, isolated_by_m, components,
    /// degrees, spans, pattern; or `all` for everything parameter-free
    #[arg(long, default_value = "all")]
    metrics: String,
    /// Span range `alpha:beta` for the spans metric
    #[arg(long)]
    span_range: Option<String>,
    /// Pattern edge list for the pattern metric, e.g. "1-2,2-3"
    #[arg(long)]
    pattern: Option<String>,
    /// Count induced copies of the pattern
    #[arg(long)]
    induced: bool,
    /// Output format
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,
    /// Output path; required for csv, stdout default for json
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cap the rayon thread pool (output is identical regardless)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct GammaArgs {
    /// Truncation index of the partial sum (at least 2)
    #[arg(long = "M")]
    truncation: usize,
    /// Decimal digits for the rendered bracket
    #[arg(long, default_value_t = 10)]
    digits: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exact expected edges and isolated vertices at n <= 5
    Expectations(ExpectationsArgs),
    /// Exact probability that a uniform matching contains the given arcs
    Pair(PairArgs),
    /// Good/valid checks for a two-sided arc specification at n <= 6
    Quadruple(QuadrupleArgs),
}

#[derive(Args)]
struct ExpectationsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "fair", value_parser = parse_model)]
    model: ColoringModel,
    /// Optional pattern whose expected count to include
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    induced: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PairArgs {
    /// Matching size (n <= 10)
    #[arg(long)]
    n: usize,
    /// Arcs as `a-b` pairs, e.g. "2-11,4-7"
    #[arg(long)]
    arcs: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QuadrupleArgs {
    #[arg(long)]
    n: usize,
    /// Top arcs as `a-b` pairs
    #[arg(long, default_value = "")]
    top: String,
    /// Bottom arcs as `a-b` pairs
    #[arg(long, default_value = "")]
    bottom: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    /// Pattern edge list, e.g. "1-2,2-3"
    #[arg(long)]
    pattern: String,
    /// Count induced copies
    #[arg(long)]
    induced: bool,
    /// Read the graph from this JSON file instead of sampling
    #[arg(long, conflicts_with_all = ["n", "seed", "stream", "model"])]
    graph: Option<PathBuf>,
    /// Sample a graph of this size
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    stream: u64,
    #[arg(long, default_value = "fair", value_parser = parse_model)]
    model: ColoringModel,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Validation(String),
    Runtime(String),
}

fn validation<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Validation(e.to_string())
}

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

fn experiment_error(e: ExperimentError) -> CliError {
    match e {
        ExperimentError::Io(io) => CliError::Runtime(io.to_string()),
        other => CliError::Validation(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sample(args) => cmd_sample(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Gamma(args) => cmd_gamma(args),
        Command::Oracle(OracleCommand::Expectations(args)) => cmd_expectations(args),
        Command::Oracle(OracleCommand::Pair(args)) => cmd_pair(args),
        Command::Oracle(OracleCommand::Quadruple(args)) => cmd_quadruple(args),
        Command::CountSubgraphs(args) => cmd_count(args),
    }
}

fn parse_model(s: &str) -> Result<ColoringModel, String> {
    if s == "fair" {
        return Ok(ColoringModel::Fair);
    }
    if let Some(p) = s.strip_prefix("biased:") {
        let p: f64 = p.parse().map_err(|_| format!("bad probability: {p}"))?;
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(format!("probability {p} is not in [0, 1]"));
        }
        return Ok(ColoringModel::Biased(p));
    }
    if let Some(m) = s.strip_prefix("fixed:") {
        let m: usize = m.parse().map_err(|_| format!("bad red pair count: {m}"))?;
        return Ok(ColoringModel::FixedRed(m));
    }
    Err(format!(
        "unknown model '{s}' (expected fair | biased:<p> | fixed:<m>)"
    ))
}

fn parse_algorithm(s: &str) -> Result<EdgeAlgorithm, String> {
    match s {
        "quadratic" => Ok(EdgeAlgorithm::Quadratic),
        "sweep" => Ok(EdgeAlgorithm::Sweep),
        other => Err(format!("unknown algorithm '{other}'")),
    }
}

/// Accepts `a,b,c` lists and `start:end:step` ranges, possibly mixed.
fn parse_sizes(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for token in s.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        if token.contains(':') {
            let parts: Vec<&str> = token.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("range '{token}' is not start:end:step"));
            }
            let nums: Vec<usize> = parts
                .iter()
                .map(|p| p.trim().parse().map_err(|_| format!("bad size in '{token}'")))
                .collect::<Result<_, _>>()?;
            let (start, end, step) = (nums[0], nums[1], nums[2]);
            if step == 0 {
                return Err("range step must be positive".into());
            }
            let mut v = start;
            while v <= end {
                out.push(v);
                v += step;
            }
        } else {
            out.push(token.parse().map_err(|_| format!("bad size '{token}'"))?);
        }
    }
    if out.is_empty() {
        return Err("no sizes given".into());
    }
    Ok(out)
}

/// Arc lists like "2-11,4-7"; an empty string is an empty list.
fn parse_arcs(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    let mut arcs = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (a, b) = part
            .split_once('-')
            .ok_or_else(|| CliError::Validation(format!("arc '{part}' is not a-b")))?;
        let a: usize = a.trim().parse().map_err(validation)?;
        let b: usize = b.trim().parse().map_err(validation)?;
        arcs.push((a.min(b), a.max(b)));
    }
    Ok(arcs)
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("CPLAB_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Validation(format!("CPLAB_SEED='{text}' is not a u64"))),
        Err(_) => Ok(0),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path).map_err(runtime)?);
            writeln!(file, "{text}").map_err(runtime)
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn cmd_sample(args: SampleArgs) -> Result<(), CliError> {
    let seed = resolve_seed(args.seed)?;
    let mut rng = RngStream::new(seed, args.stream).rng();
    let rep = sample_representative(args.n, &args.model, &mut rng).map_err(validation)?;
    let graph = build_graph_with(&rep, args.algorithm);
    if let Some(path) = &args.degrees_out {
        let hist: std::collections::BTreeMap<usize, u64> = degree_histogram(&graph)
            .into_iter()
            .map(|(k, v)| (k, v as u64))
            .collect();
        let mut file = BufWriter::new(File::create(path).map_err(runtime)?);
        write_histogram_csv(&mut file, "degree", &hist).map_err(runtime)?;
    }
    let doc = json!({
        "n": args.n,
        "seed": seed,
        "stream": args.stream,
        "model": args.model.to_string(),
        "representative": rep,
        "graph": graph,
    });
    emit(&args.out, &serde_json::to_string_pretty(&doc).map_err(runtime)?)
}

fn build_metric_set(args: &ExperimentArgs) -> Result<MetricSet, CliError> {
    let mut set = MetricSet::default();
    let mut want_spans = args.span_range.is_some();
    let mut want_pattern = args.pattern.is_some();
    for name in args.metrics.split(',') {
        match name.trim() {
            "" => {}
            "all" => {
                let std = MetricSet::standard();
                set.edges = std.edges;
                set.isolated = std.isolated;
                set.isolated_by_m = std.isolated_by_m;
                set.components = std.components;
                set.degrees = std.degrees;
            }
            "edges" => set.edges = true,
            "isolated" => set.isolated = true,
            "isolated_by_m" => set.isolated_by_m = true,
            "components" => set.components = true,
            "degrees" => set.degrees = true,
            "spans" => want_spans = true,
            "pattern" => want_pattern = true,
            other => {
                return Err(CliError::Validation(format!("unknown metric '{other}'")));
            }
        }
    }
    if want_spans {
        let range = args
            .span_range
            .as_deref()
            .ok_or_else(|| CliError::Validation("spans metric needs --span-range a:b".into()))?;
        let (a, b) = range
            .split_once(':')
            .ok_or_else(|| CliError::Validation(format!("span range '{range}' is not a:b")))?;
        let alpha: usize = a.trim().parse().map_err(validation)?;
        let beta: usize = b.trim().parse().map_err(validation)?;
        set.spans = Some((alpha, beta));
    }
    if want_pattern {
        let text = args
            .pattern
            .as_deref()
            .ok_or_else(|| CliError::Validation("pattern metric needs --pattern".into()))?;
        set.pattern = Some(PatternSpec {
            pattern: PatternGraph::parse(text).map_err(validation)?,
            induced: args.induced,
        });
    }
    Ok(set)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), CliError> {
    if let Some(threads) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(runtime)?;
    }
    let spec = ExperimentSpec {
        n_values: parse_sizes(&args.n).map_err(CliError::Validation)?,
        trials_per_n: args.trials,
        model: args.model,
        seed: resolve_seed(args.seed)?,
        metrics: build_metric_set(&args)?,
    };
    spec.validate().map_err(experiment_error)?;
    match args.format.as_str() {
        "json" => {
            let output = cplab::experiment::run_experiment(&spec).map_err(experiment_error)?;
            emit(
                &args.out,
                &serde_json::to_string_pretty(&output).map_err(runtime)?,
            )
        }
        "csv" => {
            let path = args
                .out
                .as_deref()
                .ok_or_else(|| CliError::Validation("csv format needs --out <path>".into()))?;
            run_experiment_csv(&spec, path)
        }
        other => Err(CliError::Validation(format!("unknown format '{other}'"))),
    }
}

/// Streams the record CSV size by size; summaries and histogram totals land
/// in `summary_<n>.csv`, `degrees_<n>.csv`, and `isolated_by_m_<n>.csv`
/// next to the record file.
fn run_experiment_csv(spec: &ExperimentSpec, records_path: &Path) -> Result<(), CliError> {
    let dir = records_path.parent().unwrap_or_else(|| Path::new("."));
    let dir = if dir.as_os_str().is_empty() {
        Path::new(".")
    } else {
        dir
    };
    let mut records_file = BufWriter::new(File::create(records_path).map_err(runtime)?);
    let columns = spec.metrics.scalar_columns();
    write!(records_file, "n,trial,seed").map_err(runtime)?;
    for c in &columns {
        write!(records_file, ",{c}").map_err(runtime)?;
    }
    writeln!(records_file).map_err(runtime)?;
    for &n in &spec.n_values {
        let cell = run_cell(spec, n).map_err(experiment_error)?;
        for r in &cell {
            write!(records_file, "{},{},{}", r.n, r.trial, spec.seed).map_err(runtime)?;
            for c in &columns {
                match r.scalar(c) {
                    Some(v) => write!(records_file, ",{v}").map_err(runtime)?,
                    None => write!(records_file, ",").map_err(runtime)?,
                }
            }
            writeln!(records_file).map_err(runtime)?;
        }
        if cell.len() >= 2 {
            let summary = summarize(&cell).map_err(validation)?;
            let mut file = BufWriter::new(
                File::create(dir.join(format!("summary_{n}.csv"))).map_err(runtime)?,
            );
            write_summary_csv(&mut file, &summary).map_err(runtime)?;
        }
        if spec.metrics.degrees {
            let total =
                cplab::experiment::total_histogram(cell.iter().filter_map(|r| r.degrees.as_ref()));
            let mut file = BufWriter::new(
                File::create(dir.join(format!("degrees_{n}.csv"))).map_err(runtime)?,
            );
            write_histogram_csv(&mut file, "degree", &total).map_err(runtime)?;
        }
        if spec.metrics.isolated_by_m {
            let total = cplab::experiment::total_histogram(
                cell.iter().filter_map(|r| r.isolated_by_m.as_ref()),
            );
            let mut file = BufWriter::new(
                File::create(dir.join(format!("isolated_by_m_{n}.csv"))).map_err(runtime)?,
            );
            write_histogram_csv(&mut file, "m", &total).map_err(runtime)?;
        }
    }
    Ok(())
}

fn cmd_gamma(args: GammaArgs) -> Result<(), CliError> {
    let bracket = gamma_bounds(args.truncation).map_err(validation)?;
    let doc = json!({
        "M": bracket.truncation(),
        "lower": rational_string(bracket.lower()),
        "upper": rational_string(bracket.upper()),
        "lower_decimal": bracket.lower_decimal(args.digits),
        "upper_decimal": bracket.upper_decimal(args.digits),
    });
    emit(&args.out, &serde_json::to_string_pretty(&doc).map_err(runtime)?)
}

fn cmd_expectations(args: ExpectationsArgs) -> Result<(), CliError> {
    let patterns = match &args.pattern {
        Some(text) => vec![(PatternGraph::parse(text).map_err(validation)?, args.induced)],
        None => Vec::new(),
    };
    let exact = exact_model_expectations(args.n, &args.model, &patterns).map_err(validation)?;
    let doc = json!({
        "n": exact.n,
        "model": args.model.to_string(),
        "expected_edges": rational_string(&exact.expected_edges),
        "expected_isolated": rational_string(&exact.expected_isolated),
        "patterns": exact.expected_patterns.iter().map(|p| json!({
            "pattern": p.pattern,
            "induced": p.induced,
            "expected": rational_string(&p.expected),
        })).collect::<Vec<_>>(),
    });
    emit(&args.out, &serde_json::to_string_pretty(&doc).map_err(runtime)?)
}

fn cmd_pair(args: PairArgs) -> Result<(), CliError> {
    let arcs = parse_arcs(&args.arcs)?;
    let probability = exact_pair_probability(args.n, &arcs).map_err(validation)?;
    let doc = json!({
        "n": args.n,
        "arcs": arcs,
        "probability": rational_string(&probability),
    });
    emit(&args.out, &serde_json::to_string_pretty(&doc).map_err(runtime)?)
}

fn cmd_quadruple(args: QuadrupleArgs) -> Result<(), CliError> {
    let top = parse_arcs(&args.top)?;
    let bottom = parse_arcs(&args.bottom)?;
    let quadruple = Quadruple::from_endpoints(args.n, &top, &bottom).map_err(validation)?;
    let valid = is_valid_quadruple_small(&quadruple).map_err(validation)?;
    let profile = quadruple.profile();
    let doc = json!({
        "n": args.n,
        "top": top,
        "bottom": bottom,
        "good": quadruple.is_good(),
        "valid": valid,
        "profile": { "f": profile.f, "g": profile.g },
    });
    emit(&args.out, &serde_json::to_string_pretty(&doc).map_err(runtime)?)
}

fn cmd_count(args: CountArgs) -> Result<(), CliError> {
    let pattern = PatternGraph::parse(&args.pattern).map_err(validation)?;
    let (graph, source) = match &args.graph {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(runtime)?;
            let graph: CatalanPairGraph = serde_json::from_str(&text).map_err(validation)?;
            (graph, json!({ "graph_file": path }))
        }
        None => {
            let n = args
                .n
                .ok_or_else(|| CliError::Validation("need --graph <file> or --n <size>".into()))?;
            let seed = resolve_seed(args.seed)?;
            let mut rng = RngStream::new(seed, args.stream).rng();
            let rep = sample_representative(n, &args.model, &mut rng).map_err(validation)?;
            (
                cplab::build_graph(&rep),
                json!({
                    "n": n,
                    "seed": seed,
                    "stream": args.stream,
                    "model": args.model.to_string(),
                }),
            )
        }
    };
    let count = cplab::count_pattern(&graph, &pattern, args.induced).map_err(validation)?;
    let doc = json!({
        "pattern": pattern.to_string(),
        "induced": args.induced,
        "count": count,
        "source": source,
    });
    emit(&args.out, &serde_json::to_string_pretty(&doc).map_err(runtime)?)
}
