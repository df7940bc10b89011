//! Subgraph and induced-subgraph counting, two-sided arc specifications
//! (quadruples) with their gap profiles, good-pair counting, and the
//! statistical aggregation used by the experiment harness.

use crate::experiment::RunRecord;
use crate::graph::{interlaces, CatalanPairGraph};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Pattern counting refuses patterns with more vertices than this; the
/// automorphism count is brute-forced over all vertex permutations.
pub const PATTERN_VERTEX_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("pattern has {v} vertices; the cap is {cap}")]
    PatternCapExceeded { v: usize, cap: usize },
    #[error("pattern must have at least one vertex")]
    EmptyPattern,
    #[error("pattern edge ({a}, {b}) is not a pair of distinct vertices in 1..={v}")]
    BadPatternEdge { a: usize, b: usize, v: usize },
    #[error("cannot parse pattern edge list: {0}")]
    PatternParse(String),
    #[error("quadruple arc {arc:?} leaves the range 1..=2n")]
    QuadrupleArcOutOfRange { arc: (usize, usize) },
    #[error("arc starts must be strictly increasing on each side")]
    QuadrupleNotIncreasing,
    #[error("need at least two records to summarize, got {got}")]
    NotEnoughRecords { got: usize },
    #[error("records mix different sizes ({first} and {second})")]
    MixedSizes { first: usize, second: usize },
}

/// A small fixed graph to count copies of. The automorphism count is
/// computed once at construction by scanning all vertex permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>, // 0-based, a < b, sorted
    adjacency: Vec<Vec<usize>>,
    automorphism_count: u64,
    connected: bool,
    bipartite: bool,
}

impl PatternGraph {
    /// Builds a pattern from 1-based edge pairs over vertices `1..=v`.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, AnalysisError> {
        if vertex_count == 0 {
            return Err(AnalysisError::EmptyPattern);
        }
        if vertex_count > PATTERN_VERTEX_CAP {
            return Err(AnalysisError::PatternCapExceeded {
                v: vertex_count,
                cap: PATTERN_VERTEX_CAP,
            });
        }
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b || a < 1 || b < 1 || a > vertex_count || b > vertex_count {
                return Err(AnalysisError::BadPatternEdge {
                    a,
                    b,
                    v: vertex_count,
                });
            }
            normalized.push((a.min(b) - 1, a.max(b) - 1));
        }
        normalized.sort_unstable();
        normalized.dedup();
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(a, b) in &normalized {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let mut pattern = Self {
            vertex_count,
            edges: normalized,
            adjacency,
            automorphism_count: 0,
            connected: false,
            bipartite: false,
        };
        pattern.automorphism_count = pattern.count_automorphisms();
        pattern.connected = pattern.check_connected();
        pattern.bipartite = pattern.check_bipartite();
        Ok(pattern)
    }

    /// Parses an edge list such as `"1-2,2-3"`; the vertex count is the
    /// largest label mentioned.
    pub fn parse(text: &str) -> Result<Self, AnalysisError> {
        let mut edges = Vec::new();
        let mut max_label = 0;
        for part in text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (a, b) = part
                .split_once('-')
                .ok_or_else(|| AnalysisError::PatternParse(part.to_string()))?;
            let a: usize = a
                .trim()
                .parse()
                .map_err(|_| AnalysisError::PatternParse(part.to_string()))?;
            let b: usize = b
                .trim()
                .parse()
                .map_err(|_| AnalysisError::PatternParse(part.to_string()))?;
            max_label = max_label.max(a).max(b);
            edges.push((a, b));
        }
        if edges.is_empty() {
            return Err(AnalysisError::PatternParse(text.to_string()));
        }
        Self::from_edges(max_label, &edges)
    }

    /// Path on `v` vertices.
    pub fn path(v: usize) -> Result<Self, AnalysisError> {
        let edges: Vec<(usize, usize)> = (1..v).map(|i| (i, i + 1)).collect();
        Self::from_edges(v, &edges)
    }

    /// Cycle on `v >= 3` vertices.
    pub fn cycle(v: usize) -> Result<Self, AnalysisError> {
        let mut edges: Vec<(usize, usize)> = (1..v).map(|i| (i, i + 1)).collect();
        edges.push((v, 1));
        Self::from_edges(v, &edges)
    }

    pub fn single_edge() -> Self {
        Self::from_edges(2, &[(1, 2)]).expect("K2 is a valid pattern")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn automorphism_count(&self) -> u64 {
        self.automorphism_count
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartite
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    fn count_automorphisms(&self) -> u64 {
        let v = self.vertex_count;
        let mut perm: Vec<usize> = (0..v).collect();
        let mut count = 0u64;
        loop {
            let preserves = self.edges.iter().all(|&(a, b)| {
                let (pa, pb) = (perm[a], perm[b]);
                self.has_edge(pa, pb)
            });
            // Edge count is preserved by any bijection mapping edges to
            // edges, so checking one direction suffices.
            if preserves {
                count += 1;
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        count
    }

    fn check_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn check_bipartite(&self) -> bool {
        let mut side = vec![2u8; self.vertex_count];
        for start in 0..self.vertex_count {
            if side[start] != 2 {
                continue;
            }
            side[start] = 0;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &self.adjacency[v] {
                    if side[w] == 2 {
                        side[w] = 1 - side[v];
                        stack.push(w);
                    } else if side[w] == side[v] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            return write!(f, "{} vertices, no edges", self.vertex_count);
        }
        let parts: Vec<String> = self
            .edges
            .iter()
            .map(|&(a, b)| format!("{}-{}", a + 1, b + 1))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Lexicographic next permutation; returns false once exhausted.
fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Number of unordered copies of `pattern` in `g`: injective embeddings
/// preserving adjacency (and non-adjacency when `induced`), divided exactly
/// by the pattern's automorphism count.
pub fn count_pattern(
    g: &CatalanPairGraph,
    pattern: &PatternGraph,
    induced: bool,
) -> Result<u64, AnalysisError> {
    if pattern.vertex_count() > PATTERN_VERTEX_CAP {
        return Err(AnalysisError::PatternCapExceeded {
            v: pattern.vertex_count(),
            cap: PATTERN_VERTEX_CAP,
        });
    }
    let order = embedding_order(pattern);
    let mut image = vec![usize::MAX; pattern.vertex_count()];
    let mut used = vec![false; g.n()];
    let mut embeddings: u128 = 0;
    embed(
        g,
        pattern,
        induced,
        &order,
        0,
        &mut image,
        &mut used,
        &mut embeddings,
    );
    let aut = pattern.automorphism_count() as u128;
    assert!(
        embeddings % aut == 0,
        "embedding count {embeddings} not divisible by |Aut| = {aut}"
    );
    Ok(u64::try_from(embeddings / aut).expect("count fits in u64"))
}

/// Visit order that keeps each vertex adjacent to an earlier one whenever
/// the pattern allows it, so candidates can be drawn from neighbor lists.
fn embedding_order(pattern: &PatternGraph) -> Vec<usize> {
    let v = pattern.vertex_count();
    let mut order = Vec::with_capacity(v);
    let mut placed = vec![false; v];
    while order.len() < v {
        let next = (0..v)
            .filter(|&p| !placed[p])
            .find(|&p| pattern.adjacency[p].iter().any(|&q| placed[q]))
            .or_else(|| (0..v).find(|&p| !placed[p]))
            .expect("some vertex remains");
        placed[next] = true;
        order.push(next);
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn embed(
    g: &CatalanPairGraph,
    pattern: &PatternGraph,
    induced: bool,
    order: &[usize],
    depth: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
    embeddings: &mut u128,
) {
    if depth == order.len() {
        *embeddings += 1;
        return;
    }
    let p = order[depth];
    let anchored = pattern.adjacency[p]
        .iter()
        .copied()
        .find(|&q| image[q] != usize::MAX);
    let try_candidate = |cand: usize,
                             g: &CatalanPairGraph,
                             image: &mut Vec<usize>,
                             used: &mut Vec<bool>,
                             embeddings: &mut u128| {
        if used[cand] || g.degree(cand) < pattern.degree(p) {
            return;
        }
        let consistent = order[..depth].iter().all(|&q| {
            let wanted = pattern.has_edge(p, q);
            let have = g.has_edge(cand, image[q]);
            if induced {
                wanted == have
            } else {
                !wanted || have
            }
        });
        if consistent {
            image[p] = cand;
            used[cand] = true;
            embed(g, pattern, induced, order, depth + 1, image, used, embeddings);
            used[cand] = false;
            image[p] = usize::MAX;
        }
    };
    match anchored {
        Some(q) => {
            for &cand in g.neighbors(image[q]) {
                try_candidate(cand, g, image, used, embeddings);
            }
        }
        None => {
            for cand in 0..g.n() {
                try_candidate(cand, g, image, used, embeddings);
            }
        }
    }
}

/// A two-sided arc specification: top arcs `(x_i, x_i + k_i)` and bottom
/// arcs `(y_j, y_j + l_j)` given by their endpoints, with strictly
/// increasing starts on each side. Spans here are endpoint differences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadruple {
    n: usize,
    top: Vec<(usize, usize)>,
    bottom: Vec<(usize, usize)>,
}

impl Quadruple {
    /// Builds a quadruple from endpoint pairs `(start, end)`.
    pub fn from_endpoints(
        n: usize,
        top: &[(usize, usize)],
        bottom: &[(usize, usize)],
    ) -> Result<Self, AnalysisError> {
        for side in [top, bottom] {
            for &(a, b) in side {
                if a < 1 || a >= b || b > 2 * n {
                    return Err(AnalysisError::QuadrupleArcOutOfRange { arc: (a, b) });
                }
            }
            if side.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(AnalysisError::QuadrupleNotIncreasing);
            }
        }
        Ok(Self {
            n,
            top: top.to_vec(),
            bottom: bottom.to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn top_arcs(&self) -> &[(usize, usize)] {
        &self.top
    }

    pub fn bottom_arcs(&self) -> &[(usize, usize)] {
        &self.bottom
    }

    /// Free-point counts `(f_0..f_s, g_0..g_t)`. On each side, a non-endpoint
    /// point belongs to the innermost arc of that side strictly containing
    /// it (class 0 if there is none); endpoints of either side are counted
    /// nowhere.
    pub fn profile(&self) -> QuadrupleProfile {
        QuadrupleProfile {
            f: side_profile(self.n, &self.top, &self.bottom),
            g: side_profile(self.n, &self.bottom, &self.top),
        }
    }

    /// The three syntactic conditions: arcs in range (guaranteed by
    /// construction), all endpoint values pairwise at least 2 apart, and no
    /// same-side crossing.
    pub fn is_good(&self) -> bool {
        let mut endpoints: Vec<usize> = Vec::with_capacity(2 * (self.top.len() + self.bottom.len()));
        for &(a, b) in self.top.iter().chain(self.bottom.iter()) {
            endpoints.push(a);
            endpoints.push(b);
        }
        endpoints.sort_unstable();
        if endpoints.windows(2).any(|w| w[1] - w[0] < 2) {
            return false;
        }
        for side in [&self.top, &self.bottom] {
            for (i, &x) in side.iter().enumerate() {
                for &y in &side[i + 1..] {
                    if interlaces(x, y) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn side_profile(n: usize, own: &[(usize, usize)], other: &[(usize, usize)]) -> Vec<usize> {
    let mut endpoint = vec![false; 2 * n + 1];
    for &(a, b) in own.iter().chain(other.iter()) {
        endpoint[a] = true;
        endpoint[b] = true;
    }
    let mut counts = vec![0usize; own.len() + 1];
    for p in 1..=2 * n {
        if endpoint[p] {
            continue;
        }
        let mut class = 0;
        let mut best_span = usize::MAX;
        for (i, &(a, b)) in own.iter().enumerate() {
            if a < p && p < b && b - a < best_span {
                best_span = b - a;
                class = i + 1;
            }
        }
        counts[class] += 1;
    }
    counts
}

/// Free-point counts of a quadruple's regions, top side then bottom side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadrupleProfile {
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

/// `g(k, l)`: the number of positions `(x, y)` at which a top arc of span
/// `k` and a bottom arc of span `l` interlace and form a good quadruple.
/// Only interlacing placements within the distance constraints are scanned.
pub fn count_good_pairs(n: usize, k: usize, l: usize) -> usize {
    let two_n = (2 * n) as i64;
    let (k_i, l_i) = (k as i64, l as i64);
    let mut count = 0usize;
    for x in 1..=(two_n - k_i).max(0) {
        // x < y < x + k < y + l
        let lo = (x + 1).max(x + k_i - l_i + 1);
        let hi = (x + k_i - 1).min(two_n - l_i);
        for y in lo..=hi {
            count += good_interlacing_pair(n, x as usize, k, y as usize, l) as usize;
        }
        // y < x < y + l < x + k
        let lo = 1.max(x - l_i + 1);
        let hi = (x - 1).min(x + k_i - l_i - 1);
        for y in lo..=hi {
            count += good_interlacing_pair(n, x as usize, k, y as usize, l) as usize;
        }
    }
    count
}

fn good_interlacing_pair(n: usize, x: usize, k: usize, y: usize, l: usize) -> bool {
    if x + k > 2 * n || y + l > 2 * n {
        return false;
    }
    if !interlaces((x, x + k), (y, y + l)) {
        return false;
    }
    Quadruple::from_endpoints(n, &[(x, x + k)], &[(y, y + l)])
        .map(|q| q.is_good())
        .unwrap_or(false)
}

/// Per-metric aggregate over the trials of one experiment cell.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MetricSummary {
    pub metric: String,
    pub mean: f64,
    pub sd: f64,
    pub stderr: f64,
    pub trials: usize,
}

/// Summaries for all metrics of one `n`, including the derived ratios
/// `edges/(n ln n)`, `isolated/n`, and the component-size ratios.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SummaryStats {
    pub n: usize,
    pub trials: usize,
    pub metrics: Vec<MetricSummary>,
}

impl SummaryStats {
    pub fn metric(&self, name: &str) -> Option<&MetricSummary> {
        self.metrics.iter().find(|m| m.metric == name)
    }
}

/// Mean, sample standard deviation, and standard error per metric, plus the
/// derived per-`n` ratios (natural log). Requires at least two records, all
/// with the same `n`.
pub fn summarize(records: &[RunRecord]) -> Result<SummaryStats, AnalysisError> {
    if records.len() < 2 {
        return Err(AnalysisError::NotEnoughRecords { got: records.len() });
    }
    let n = records[0].n;
    if let Some(other) = records.iter().find(|r| r.n != n) {
        return Err(AnalysisError::MixedSizes {
            first: n,
            second: other.n,
        });
    }
    let mut metrics = Vec::new();
    for name in RunRecord::SCALAR_METRICS {
        let values: Option<Vec<f64>> = records
            .iter()
            .map(|r| r.scalar(name).map(|v| v as f64))
            .collect();
        let Some(values) = values else { continue };
        metrics.push(metric_summary(name, &values));
    }
    // Derived ratios: dividing by a per-n constant scales mean, sd and
    // stderr alike.
    let mut ratios = Vec::new();
    for summary in &metrics {
        let scale = match summary.metric.as_str() {
            "edges" if n >= 2 => Some(("edges_per_nlogn", n as f64 * (n as f64).ln())),
            "isolated" => Some(("isolated_per_n", n as f64)),
            "largest_component" => Some(("largest_component_per_n", n as f64)),
            "second_component" => Some(("second_component_per_n", n as f64)),
            _ => None,
        };
        if let Some((name, denom)) = scale {
            ratios.push(MetricSummary {
                metric: name.to_string(),
                mean: summary.mean / denom,
                sd: summary.sd / denom,
                stderr: summary.stderr / denom,
                trials: summary.trials,
            });
        }
    }
    metrics.extend(ratios);
    Ok(SummaryStats {
        n,
        trials: records.len(),
        metrics,
    })
}

fn metric_summary(name: &str, values: &[f64]) -> MetricSummary {
    let trials = values.len();
    let mean = values.iter().sum::<f64>() / trials as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let sd = (ss / (trials as f64 - 1.0)).sqrt();
    MetricSummary {
        metric: name.to_string(),
        mean,
        sd,
        stderr: sd / (trials as f64).sqrt(),
        trials,
    }
}
