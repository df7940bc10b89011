//! Reproducible Monte Carlo experiments: sample graphs for a grid of sizes,
//! evaluate the requested metrics per trial, and aggregate per-size
//! summaries.
//!
//! Trial `t` at size `n` always draws from the stream derived from
//! `(seed, n, t)`, so records are identical no matter how many threads run
//! them, and any single record can be regenerated from the file alone.

use crate::analysis::{count_pattern, summarize, AnalysisError, PatternGraph, SummaryStats};
use crate::graph::{
    arc_span_counts, build_graph, components, degree_histogram, isolated_stats, GraphError,
};
use crate::sampler::{sample_representative, ColoringModel, RngStream, SamplerError};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("experiment needs at least one size")]
    NoSizes,
    #[error("experiment needs at least one trial per size")]
    NoTrials,
    #[error("no metrics requested")]
    NoMetrics,
    #[error("span range {alpha}..={beta} is invalid")]
    BadSpanRange { alpha: usize, beta: usize },
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A pattern to count on every sampled graph.
#[derive(Debug, Clone)]
pub struct PatternSpec {
    pub pattern: PatternGraph,
    pub induced: bool,
}

/// Which statistics to evaluate per trial.
#[derive(Debug, Clone, Default)]
pub struct MetricSet {
    pub edges: bool,
    pub isolated: bool,
    pub isolated_by_m: bool,
    pub components: bool,
    pub degrees: bool,
    pub spans: Option<(usize, usize)>,
    pub pattern: Option<PatternSpec>,
}

impl MetricSet {
    /// Every metric that needs no extra parameters.
    pub fn standard() -> Self {
        Self {
            edges: true,
            isolated: true,
            isolated_by_m: true,
            components: true,
            degrees: true,
            spans: None,
            pattern: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        !(self.edges
            || self.isolated
            || self.isolated_by_m
            || self.components
            || self.degrees
            || self.spans.is_some()
            || self.pattern.is_some())
    }

    /// Scalar CSV columns this set produces, in canonical order.
    pub fn scalar_columns(&self) -> Vec<&'static str> {
        let mut cols = Vec::new();
        if self.edges {
            cols.push("edges");
        }
        if self.isolated {
            cols.push("isolated");
        }
        if self.components {
            cols.push("largest_component");
            cols.push("second_component");
        }
        if self.spans.is_some() {
            cols.push("spans");
        }
        if self.pattern.is_some() {
            cols.push("pattern");
        }
        cols
    }
}

/// Full description of one experiment; equal specs produce byte-identical
/// output.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub n_values: Vec<usize>,
    pub trials_per_n: usize,
    pub model: ColoringModel,
    pub seed: u64,
    pub metrics: MetricSet,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.n_values.is_empty() {
            return Err(ExperimentError::NoSizes);
        }
        if self.trials_per_n == 0 {
            return Err(ExperimentError::NoTrials);
        }
        if self.metrics.is_empty() {
            return Err(ExperimentError::NoMetrics);
        }
        if let Some((alpha, beta)) = self.metrics.spans {
            if alpha < 1 || alpha > beta {
                return Err(ExperimentError::BadSpanRange { alpha, beta });
            }
        }
        for &n in &self.n_values {
            if n == 0 {
                return Err(ExperimentError::Sampler(SamplerError::SizeZero));
            }
            self.model.validate(n).map_err(ExperimentError::Sampler)?;
        }
        Ok(())
    }
}

/// Raw metric values for one sampled graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub n: usize,
    pub trial: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isolated: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub largest_component: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_component: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spans: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<BTreeMap<usize, u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isolated_by_m: Option<BTreeMap<usize, u64>>,
}

impl RunRecord {
    pub const SCALAR_METRICS: [&'static str; 6] = [
        "edges",
        "isolated",
        "largest_component",
        "second_component",
        "spans",
        "pattern",
    ];

    pub fn empty(n: usize, trial: usize) -> Self {
        Self {
            n,
            trial,
            edges: None,
            isolated: None,
            largest_component: None,
            second_component: None,
            spans: None,
            pattern: None,
            degrees: None,
            isolated_by_m: None,
        }
    }

    pub fn scalar(&self, name: &str) -> Option<u64> {
        match name {
            "edges" => self.edges,
            "isolated" => self.isolated,
            "largest_component" => self.largest_component,
            "second_component" => self.second_component,
            "spans" => self.spans,
            "pattern" => self.pattern,
            _ => None,
        }
    }
}

/// Samples one graph and evaluates the requested metrics.
pub fn run_trial(spec: &ExperimentSpec, n: usize, trial: usize) -> Result<RunRecord, ExperimentError> {
    let mut rng = RngStream::for_trial(spec.seed, n, trial).rng();
    let rep = sample_representative(n, &spec.model, &mut rng)?;
    let g = build_graph(&rep);
    let m = &spec.metrics;
    let mut record = RunRecord::empty(n, trial);
    if m.edges {
        record.edges = Some(g.edge_count() as u64);
    }
    if m.isolated || m.isolated_by_m {
        let (total, by_m) = isolated_stats(&g);
        if m.isolated {
            record.isolated = Some(total as u64);
        }
        if m.isolated_by_m {
            record.isolated_by_m = Some(by_m.into_iter().map(|(k, v)| (k, v as u64)).collect());
        }
    }
    if m.components {
        let sizes = components(&g);
        record.largest_component = Some(sizes[0] as u64);
        record.second_component = Some(sizes.get(1).copied().unwrap_or(0) as u64);
    }
    if m.degrees {
        record.degrees = Some(
            degree_histogram(&g)
                .into_iter()
                .map(|(k, v)| (k, v as u64))
                .collect(),
        );
    }
    if let Some((alpha, beta)) = m.spans {
        record.spans = Some(arc_span_counts(&g, alpha, beta)? as u64);
    }
    if let Some(ps) = &m.pattern {
        record.pattern = Some(count_pattern(&g, &ps.pattern, ps.induced)?);
    }
    Ok(record)
}

/// All trials for one size, in trial order. Trials run in parallel; the
/// result does not depend on the thread count.
pub fn run_cell(spec: &ExperimentSpec, n: usize) -> Result<Vec<RunRecord>, ExperimentError> {
    (0..spec.trials_per_n)
        .into_par_iter()
        .map(|trial| run_trial(spec, n, trial))
        .collect()
}

/// Records plus per-size summaries for a whole experiment.
#[derive(Debug, Serialize)]
pub struct ExperimentOutput {
    pub seed: u64,
    pub model: String,
    pub records: Vec<RunRecord>,
    pub summaries: Vec<SummaryStats>,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput, ExperimentError> {
    spec.validate()?;
    let mut records = Vec::with_capacity(spec.n_values.len() * spec.trials_per_n);
    let mut summaries = Vec::new();
    for &n in &spec.n_values {
        let cell = run_cell(spec, n)?;
        if cell.len() >= 2 {
            summaries.push(summarize(&cell)?);
        }
        records.extend(cell);
    }
    Ok(ExperimentOutput {
        seed: spec.seed,
        model: spec.model.to_string(),
        records,
        summaries,
    })
}

/// Record rows: `n,trial,seed` then one column per requested scalar metric.
pub fn write_records_csv<W: Write>(
    out: &mut W,
    spec: &ExperimentSpec,
    records: &[RunRecord],
) -> std::io::Result<()> {
    let columns = spec.metrics.scalar_columns();
    write!(out, "n,trial,seed")?;
    for c in &columns {
        write!(out, ",{c}")?;
    }
    writeln!(out)?;
    for r in records {
        write!(out, "{},{},{}", r.n, r.trial, spec.seed)?;
        for c in &columns {
            match r.scalar(c) {
                Some(v) => write!(out, ",{v}")?,
                None => write!(out, ",")?,
            }
        }
        writeln!(out)?;
    }
    Ok(())
}

/// One row per metric: `metric,mean,sd,stderr,trials`.
pub fn write_summary_csv<W: Write>(out: &mut W, summary: &SummaryStats) -> std::io::Result<()> {
    writeln!(out, "metric,mean,sd,stderr,trials")?;
    for m in &summary.metrics {
        writeln!(
            out,
            "{},{},{},{},{}",
            m.metric, m.mean, m.sd, m.stderr, m.trials
        )?;
    }
    Ok(())
}

/// Histogram sidecar: `<key>,count` rows with counts totalled over trials.
pub fn write_histogram_csv<W: Write>(
    out: &mut W,
    key_name: &str,
    histogram: &BTreeMap<usize, u64>,
) -> std::io::Result<()> {
    writeln!(out, "{key_name},count")?;
    for (key, count) in histogram {
        writeln!(out, "{key},{count}")?;
    }
    Ok(())
}

/// Sums per-trial histograms into one totalled histogram.
pub fn total_histogram<'a, I>(histograms: I) -> BTreeMap<usize, u64>
where
    I: IntoIterator<Item = &'a BTreeMap<usize, u64>>,
{
    let mut total = BTreeMap::new();
    for h in histograms {
        for (&k, &v) in h {
            *total.entry(k).or_insert(0) += v;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> ExperimentSpec {
        ExperimentSpec {
            n_values: vec![2, 4],
            trials_per_n: 50,
            model: ColoringModel::Fair,
            seed: 12345,
            metrics: MetricSet::standard(),
        }
    }

    #[test]
    fn identical_specs_reproduce_identical_output() {
        let a = run_experiment(&small_spec()).unwrap();
        let b = run_experiment(&small_spec()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn thread_count_does_not_change_records() {
        let spec = small_spec();
        let parallel = run_experiment(&spec).unwrap();
        let serial: Vec<RunRecord> = spec
            .n_values
            .iter()
            .flat_map(|&n| (0..spec.trials_per_n).map(move |t| (n, t)))
            .map(|(n, t)| run_trial(&spec, n, t).unwrap())
            .collect();
        assert_eq!(parallel.records, serial);
    }

    #[test]
    fn records_are_ordered_and_complete() {
        let out = run_experiment(&small_spec()).unwrap();
        assert_eq!(out.records.len(), 100);
        let keys: Vec<(usize, usize)> = out.records.iter().map(|r| (r.n, r.trial)).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        assert_eq!(out.summaries.len(), 2);
    }

    #[test]
    fn n1_forces_edges_zero_isolated_one() {
        let spec = ExperimentSpec {
            n_values: vec![1],
            trials_per_n: 10_000,
            model: ColoringModel::Fair,
            seed: 7,
            metrics: MetricSet {
                edges: true,
                isolated: true,
                ..MetricSet::default()
            },
        };
        let out = run_experiment(&spec).unwrap();
        assert!(out.records.iter().all(|r| r.edges == Some(0)));
        assert!(out.records.iter().all(|r| r.isolated == Some(1)));
        let summary = &out.summaries[0];
        assert_eq!(summary.metric("edges").unwrap().mean, 0.0);
        assert_eq!(summary.metric("isolated").unwrap().mean, 1.0);
        // n = 1 has ln n = 0; the edges ratio must simply be absent.
        assert!(summary.metric("edges_per_nlogn").is_none());
        assert_eq!(summary.metric("isolated_per_n").unwrap().mean, 1.0);
    }

    #[test]
    fn validation_errors() {
        let mut spec = small_spec();
        spec.n_values.clear();
        assert!(matches!(spec.validate(), Err(ExperimentError::NoSizes)));

        let mut spec = small_spec();
        spec.trials_per_n = 0;
        assert!(matches!(spec.validate(), Err(ExperimentError::NoTrials)));

        let mut spec = small_spec();
        spec.metrics = MetricSet::default();
        assert!(matches!(spec.validate(), Err(ExperimentError::NoMetrics)));

        let mut spec = small_spec();
        spec.metrics.spans = Some((3, 2));
        assert!(matches!(
            spec.validate(),
            Err(ExperimentError::BadSpanRange { .. })
        ));

        let mut spec = small_spec();
        spec.model = ColoringModel::FixedRed(3);
        assert!(matches!(spec.validate(), Err(ExperimentError::Sampler(_))));
    }

    #[test]
    fn csv_layout() {
        let spec = ExperimentSpec {
            n_values: vec![2],
            trials_per_n: 2,
            model: ColoringModel::Fair,
            seed: 9,
            metrics: MetricSet {
                edges: true,
                components: true,
                ..MetricSet::default()
            },
        };
        let out = run_experiment(&spec).unwrap();
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &spec, &out.records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,trial,seed,edges,largest_component,second_component"
        );
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().starts_with("2,0,9,"));
    }

    #[test]
    fn histogram_totals() {
        let a = BTreeMap::from([(0usize, 2u64), (1, 1)]);
        let b = BTreeMap::from([(1usize, 4u64), (3, 1)]);
        let total = total_histogram([&a, &b]);
        assert_eq!(total, BTreeMap::from([(0, 2), (1, 5), (3, 1)]));
    }
}
