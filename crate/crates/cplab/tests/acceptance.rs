//! Acceptance suite: one test per shipping criterion, each printing a
//! PASS/FAIL line. Run with
//! `cargo test -p cplab --test acceptance -- --nocapture` to see the lines.

use cplab::analysis::{summarize, PatternGraph, SummaryStats};
use cplab::catalan::{gamma_bounds, ValidPair};
use cplab::experiment::{run_cell, ExperimentSpec, MetricSet, PatternSpec};
use cplab::graph::{build_graph, components, degree_histogram, isolated_stats};
use cplab::matching::{enumerate_matchings, is_noncrossing, Matching};
use cplab::oracle::{exact_model_expectations, exact_pair_probability};
use cplab::sampler::{
    sample_matching, sample_representative, Color, ColoredRepresentative, ColoringModel, RngStream,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::BTreeMap;
use std::sync::OnceLock;

const SEED: u64 = 271828;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {id:02} [{name}]: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id:02} [{name}] failed: {detail}");
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Criterion 1: the closed-form arc-containment probability equals the
/// enumeration fraction, exactly, over a generated suite of valid pairs for
/// every n <= 8, including the worked pair ((2,4),(5,2)) at n = 8.
#[test]
fn criterion_01_exact_probability_identity() {
    let paper_pair = ValidPair::new(8, &[2, 4], &[5, 2]).unwrap();
    let mut pass = paper_pair.match_probability() == ratio(1, 143)
        && exact_pair_probability(8, &paper_pair.arcs()).unwrap() == ratio(1, 143);
    let mut checked = 1usize;
    let mut rng = RngStream::new(SEED, 1).rng();
    for n in 1..=8usize {
        for _ in 0..40 {
            // A random subset of a random matching's arcs is always a valid
            // pair.
            let matching = sample_matching(n, &mut rng);
            let arcs: Vec<(usize, usize)> = matching
                .arcs()
                .into_iter()
                .filter(|_| rng.random_bool(0.5))
                .collect();
            let lefts: Vec<usize> = arcs.iter().map(|&(a, _)| a).collect();
            let halves: Vec<usize> = arcs.iter().map(|&(a, b)| (b - a + 1) / 2).collect();
            let pair = ValidPair::new(n, &lefts, &halves).expect("sub-matching is valid");
            if pair.match_probability() != exact_pair_probability(n, &arcs).unwrap() {
                pass = false;
            }
            checked += 1;
        }
    }
    report(
        1,
        "exact probability identity",
        pass && checked >= 200,
        &format!("{checked} valid pairs compared exactly, zero tolerance"),
    );
}

/// Criterion 2: the exact bracket at truncation 10^4 lies inside
/// [0.30234, 0.30238].
#[test]
fn criterion_02_gamma_bracket() {
    let bracket = gamma_bounds(10_000).unwrap();
    let pass =
        bracket.lower() >= &ratio(30234, 100_000) && bracket.upper() <= &ratio(30238, 100_000);
    report(
        2,
        "gamma bracket",
        pass,
        &format!(
            "0.30234 <= {} and {} <= 0.30238",
            bracket.lower_decimal(7),
            bracket.upper_decimal(7)
        ),
    );
}

/// Criterion 3: chi-square over all 42 matchings of size 5 with 2.1e5 draws
/// stays below the 99.9% quantile (df = 41) in at least 19 of 20 runs.
#[test]
fn criterion_03_sampler_uniformity() {
    let all = enumerate_matchings(5).unwrap();
    let index: std::collections::HashMap<String, usize> = all
        .iter()
        .enumerate()
        .map(|(i, m)| (m.to_string(), i))
        .collect();
    let draws = 210_000usize;
    let critical = ChiSquared::new(41.0).unwrap().inverse_cdf(0.999);
    let passes = (0..20u64)
        .into_par_iter()
        .filter(|&run| {
            let mut rng = RngStream::new(SEED, 100 + run).rng();
            let mut counts = vec![0u64; all.len()];
            for _ in 0..draws {
                counts[index[&sample_matching(5, &mut rng).to_string()]] += 1;
            }
            let expected = draws as f64 / all.len() as f64;
            let stat: f64 = counts
                .iter()
                .map(|&o| {
                    let d = o as f64 - expected;
                    d * d / expected
                })
                .sum();
            stat < critical
        })
        .count();
    report(
        3,
        "sampler uniformity",
        passes >= 19,
        &format!("{passes}/20 runs below the 99.9% quantile ({critical:.2})"),
    );
}

/// Criterion 4: Monte Carlo means at n = 2 over 1e6 trials match the exact
/// model expectations E[e] = 1/4 and E[I] = 3/2 within 4 standard errors.
#[test]
fn criterion_04_small_n_exact_model() {
    let spec = ExperimentSpec {
        n_values: vec![2],
        trials_per_n: 1_000_000,
        model: ColoringModel::Fair,
        seed: SEED,
        metrics: MetricSet {
            edges: true,
            isolated: true,
            ..MetricSet::default()
        },
    };
    let records = run_cell(&spec, 2).unwrap();
    let summary = summarize(&records).unwrap();
    let exact = exact_model_expectations(2, &ColoringModel::Fair, &[]).unwrap();
    let mut detail = String::new();
    let mut pass = true;
    for (metric, truth) in [
        ("edges", exact.expected_edges.to_f64().unwrap()),
        ("isolated", exact.expected_isolated.to_f64().unwrap()),
    ] {
        let m = summary.metric(metric).unwrap();
        pass &= (m.mean - truth).abs() <= 4.0 * m.stderr;
        detail.push_str(&format!(
            "{metric}: mean {:.6} vs exact {truth} (stderr {:.6}); ",
            m.mean, m.stderr
        ));
    }
    report(4, "small-n exact model", pass, detail.trim_end());
}

/// Shared 100-trial experiment over n in {500, 1000, 2000, 3000} used by
/// criteria 5, 6, and 7.
fn growth_summaries() -> &'static Vec<(usize, SummaryStats)> {
    static DATA: OnceLock<Vec<(usize, SummaryStats)>> = OnceLock::new();
    DATA.get_or_init(|| {
        let spec = ExperimentSpec {
            n_values: vec![500, 1000, 2000, 3000],
            trials_per_n: 100,
            model: ColoringModel::Fair,
            seed: SEED,
            metrics: MetricSet {
                edges: true,
                isolated: true,
                components: true,
                ..MetricSet::default()
            },
        };
        spec.n_values
            .iter()
            .map(|&n| (n, summarize(&run_cell(&spec, n).unwrap()).unwrap()))
            .collect()
    })
}

/// Criterion 5: mean isolated fraction at n = 3000 over 100 trials lies in
/// [0.292, 0.312].
#[test]
fn criterion_05_isolated_vertex_law() {
    let data = growth_summaries();
    let summary = &data.iter().find(|(n, _)| *n == 3000).unwrap().1;
    let mean = summary.metric("isolated_per_n").unwrap().mean;
    report(
        5,
        "isolated-vertex law",
        (0.292..=0.312).contains(&mean),
        &format!("mean I/n = {mean:.5} at n = 3000, band [0.292, 0.312]"),
    );
}

/// Criterion 6: mean largest-component fraction at n = 3000 lies in
/// [0.50, 0.60].
#[test]
fn criterion_06_largest_component() {
    let data = growth_summaries();
    let summary = &data.iter().find(|(n, _)| *n == 3000).unwrap().1;
    let mean = summary.metric("largest_component_per_n").unwrap().mean;
    report(
        6,
        "largest component",
        (0.50..=0.60).contains(&mean),
        &format!("mean L_max/n = {mean:.4} at n = 3000, band [0.50, 0.60]"),
    );
}

/// Criterion 7: mean e/(n ln n) lies in [0.20, 0.35] at n = 3000 and
/// increases strictly across n in {500, 1000, 2000, 3000}.
#[test]
fn criterion_07_edge_growth() {
    let data = growth_summaries();
    let ratios: Vec<(usize, f64)> = data
        .iter()
        .map(|(n, s)| (*n, s.metric("edges_per_nlogn").unwrap().mean))
        .collect();
    let at_3000 = ratios.last().unwrap().1;
    let in_band = (0.20..=0.35).contains(&at_3000);
    let increasing = ratios.windows(2).all(|w| w[0].1 < w[1].1);
    let detail = ratios
        .iter()
        .map(|(n, r)| format!("{n}: {r:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    report(
        7,
        "edge growth",
        in_band && increasing,
        &format!("e/(n ln n) means {detail}; strictly increasing = {increasing}"),
    );
}

/// Criterion 8: the log-log slope of the mean induced 3-path count against
/// n over {250, 500, 1000, 2000} (50 trials each) lies in [1.25, 1.75].
#[test]
fn criterion_08_induced_subgraph_scaling() {
    let sizes = [250usize, 500, 1000, 2000];
    let spec = ExperimentSpec {
        n_values: sizes.to_vec(),
        trials_per_n: 50,
        model: ColoringModel::Fair,
        seed: SEED,
        metrics: MetricSet {
            pattern: Some(PatternSpec {
                pattern: PatternGraph::path(3).unwrap(),
                induced: true,
            }),
            ..MetricSet::default()
        },
    };
    let points: Vec<(f64, f64)> = sizes
        .iter()
        .map(|&n| {
            let summary = summarize(&run_cell(&spec, n).unwrap()).unwrap();
            ((n as f64).ln(), summary.metric("pattern").unwrap().mean.ln())
        })
        .collect();
    let xbar = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let ybar = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let slope = points
        .iter()
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum::<f64>()
        / points.iter().map(|(x, _)| (x - xbar) * (x - xbar)).sum::<f64>();
    report(
        8,
        "induced-subgraph scaling",
        (1.25..=1.75).contains(&slope),
        &format!("log-log slope of mean induced 3-path count = {slope:.3}, band [1.25, 1.75]"),
    );
}

/// Generic odd-cycle check: a graph is bipartite iff BFS 2-coloring never
/// conflicts.
fn two_colorable(g: &cplab::CatalanPairGraph) -> bool {
    let mut color = vec![2u8; g.n()];
    for start in 0..g.n() {
        if color[start] != 2 {
            continue;
        }
        color[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if color[w] == 2 {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    return false;
                }
            }
        }
    }
    true
}

/// Criterion 9: structural invariants over 1e4 sampled graphs at n = 200.
#[test]
fn criterion_09_structural_invariants() {
    let n = 200usize;
    let failures: usize = (0..10_000u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = RngStream::new(SEED, 10_000 + trial).rng();
            let rep = sample_representative(n, &ColoringModel::Fair, &mut rng).unwrap();
            let reds = rep.colors().iter().filter(|&&c| c == Color::Red).count();
            if reds % 2 != 0 || (2 * n - reds) % 2 != 0 {
                return 1;
            }
            if is_noncrossing(&rep.top().arcs()) != Ok(true)
                || is_noncrossing(&rep.bottom().arcs()) != Ok(true)
            {
                return 1;
            }
            let g = build_graph(&rep);
            if g.edges().iter().any(|&(u, v)| g.side(u) == g.side(v)) {
                return 1;
            }
            if !two_colorable(&g) {
                return 1;
            }
            let hist = degree_histogram(&g);
            let degree_sum: usize = hist.iter().map(|(d, c)| d * c).sum();
            if degree_sum != 2 * g.edge_count() {
                return 1;
            }
            let (isolated, by_m) = isolated_stats(&g);
            if by_m.values().sum::<usize>() != isolated {
                return 1;
            }
            if components(&g).iter().sum::<usize>() != n {
                return 1;
            }
            0
        })
        .sum();
    report(
        9,
        "structural invariant suite",
        failures == 0,
        &format!("{failures} violations over 10000 sampled graphs at n = 200"),
    );
}

/// Criterion 10: the 9-vertex worked representative reproduces its graph
/// exactly.
#[test]
fn criterion_10_golden_example() {
    let colors: Vec<Color> = "RRBRBBRRRRRBBRBRBB"
        .chars()
        .map(|c| if c == 'R' { Color::Red } else { Color::Blue })
        .collect();
    let all_pairs = [
        (1, 7),
        (2, 4),
        (3, 5),
        (6, 12),
        (8, 9),
        (10, 16),
        (11, 14),
        (13, 18),
        (15, 17),
    ];
    let class_matching = |color: Color| {
        let points: Vec<usize> = (0..colors.len())
            .filter(|&i| colors[i] == color)
            .map(|i| i + 1)
            .collect();
        let pairs: Vec<(usize, usize)> = all_pairs
            .iter()
            .filter(|(a, _)| points.contains(a))
            .map(|&(a, b)| {
                let rank = |p| points.iter().position(|&q| q == p).unwrap() + 1;
                (rank(a), rank(b))
            })
            .collect();
        Matching::from_pairs(&pairs).unwrap()
    };
    let rep = ColoredRepresentative::new(
        colors.clone(),
        class_matching(Color::Red),
        class_matching(Color::Blue),
    )
    .unwrap();
    let g = build_graph(&rep);

    // Vertex ids: u1..u5 = 0..5 (top by left endpoint), v1..v4 = 5..9.
    let u = |i: usize| i - 1;
    let v = |j: usize| 5 + j - 1;
    let mut expected_edges = vec![
        (u(1), v(2)),
        (u(2), v(1)),
        (u(4), v(2)),
        (u(4), v(3)),
        (u(4), v(4)),
        (u(5), v(2)),
        (u(5), v(3)),
    ];
    expected_edges.sort_unstable();

    let quadruple_edge = g
        .vertex_by_arc((6, 12))
        .zip(g.vertex_by_arc((10, 16)))
        .map(|(v2, u4)| g.has_edge(u4, v2) && (u4, v2) == (u(4), v(2)))
        .unwrap_or(false);
    let (isolated, by_m) = isolated_stats(&g);
    let pass = g.n() == 9
        && g.edge_count() == 7
        && g.edges() == expected_edges
        && quadruple_edge
        && components(&g) == vec![6, 2, 1]
        && isolated == 1
        && by_m == BTreeMap::from([(1, 1)])
        && degree_histogram(&g) == BTreeMap::from([(0, 1), (1, 4), (2, 2), (3, 2)]);
    report(
        10,
        "golden example",
        pass,
        "9 vertices, 7 edges, edge (6,10,12,16) = u4-v2, components (6,2,1), I = 1 at half-length 1, degrees {0:1, 1:4, 2:2, 3:2}",
    );
}
