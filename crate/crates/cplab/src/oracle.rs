//! Exhaustive exact computation over the full model at small sizes: the
//! ground truth the rest of the crate is tested against.
//!
//! Everything here is nested exhaustive loops over exact rationals, with no
//! pruning beyond the hard size caps. Slow and obviously correct is the
//! point.

use crate::analysis::{count_pattern, PatternGraph, Quadruple};
use crate::graph::{build_graph, isolated_stats};
use crate::matching::{enumerate_matchings, Matching, MatchingError};
use crate::sampler::{Color, ColoredRepresentative, ColoringModel, SamplerError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Matching-enumeration probe cap (matches the enumeration module).
pub const PAIR_PROBABILITY_CAP: usize = 10;
/// Full-model enumeration cap: `2^{2n-1}` colorings times matching pairs.
pub const MODEL_EXPECTATION_CAP: usize = 5;
/// Witness-search cap for quadruple validity.
pub const QUADRUPLE_VALIDITY_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("size {n} exceeds the oracle cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
}

/// Exact fraction of the `C_n` matchings that contain every queried arc.
/// Unsatisfiable arc sets (crossings, odd gaps) simply give probability 0.
pub fn exact_pair_probability(
    n: usize,
    arcs: &[(usize, usize)],
) -> Result<BigRational, OracleError> {
    if n > PAIR_PROBABILITY_CAP {
        return Err(OracleError::CapExceeded {
            n,
            cap: PAIR_PROBABILITY_CAP,
        });
    }
    for &(a, b) in arcs {
        for point in [a, b] {
            if point < 1 || point > 2 * n {
                return Err(OracleError::Matching(MatchingError::PointOutOfRange {
                    point,
                }));
            }
        }
    }
    let all = enumerate_matchings(n)?;
    let hits = all
        .iter()
        .filter(|m| m.contains_arcs(arcs).unwrap_or(false))
        .count();
    Ok(BigRational::new(
        BigInt::from(hits),
        BigInt::from(all.len()),
    ))
}

/// Expected count of one pattern under the model, exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternExpectation {
    pub pattern: String,
    pub induced: bool,
    pub expected: BigRational,
}

/// Exact model-level expectations obtained by enumerating every coloring
/// with its probability and every matching pair uniformly.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactExpectation {
    pub n: usize,
    pub model: ColoringModel,
    pub expected_edges: BigRational,
    pub expected_isolated: BigRational,
    pub expected_patterns: Vec<PatternExpectation>,
}

/// Enumerates the whole model at size `n <= 5`: every admissible coloring
/// weighted exactly, then every (top, bottom) matching pair uniformly.
pub fn exact_model_expectations(
    n: usize,
    model: &ColoringModel,
    patterns: &[(PatternGraph, bool)],
) -> Result<ExactExpectation, OracleError> {
    if n == 0 || n > MODEL_EXPECTATION_CAP {
        return Err(OracleError::CapExceeded {
            n,
            cap: MODEL_EXPECTATION_CAP,
        });
    }
    model.validate(n)?;
    let matchings_by_size: Vec<Vec<Matching>> = (0..=n)
        .map(|k| enumerate_matchings(k))
        .collect::<Result<_, _>>()?;
    let mut expected_edges = BigRational::zero();
    let mut expected_isolated = BigRational::zero();
    let mut expected_patterns: Vec<BigRational> = vec![BigRational::zero(); patterns.len()];
    for mask in 0..(1u32 << (2 * n)) {
        let colors: Vec<Color> = (0..2 * n)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    Color::Red
                } else {
                    Color::Blue
                }
            })
            .collect();
        let Some(coloring_probability) = coloring_probability(&colors, model) else {
            continue;
        };
        let reds = colors.iter().filter(|&&c| c == Color::Red).count();
        let tops = &matchings_by_size[reds / 2];
        let bottoms = &matchings_by_size[n - reds / 2];
        let pair_weight = &coloring_probability
            / BigRational::from_integer(BigInt::from(tops.len() * bottoms.len()));
        for top in tops {
            for bottom in bottoms {
                let rep =
                    ColoredRepresentative::new(colors.clone(), top.clone(), bottom.clone())?;
                let g = build_graph(&rep);
                expected_edges += &pair_weight * BigRational::from_integer(g.edge_count().into());
                let (isolated, _) = isolated_stats(&g);
                expected_isolated += &pair_weight * BigRational::from_integer(isolated.into());
                for (slot, (pattern, induced)) in patterns.iter().enumerate() {
                    let count = count_pattern(&g, pattern, *induced)
                        .expect("pattern validated at construction");
                    expected_patterns[slot] +=
                        &pair_weight * BigRational::from_integer(count.into());
                }
            }
        }
    }
    Ok(ExactExpectation {
        n,
        model: *model,
        expected_edges,
        expected_isolated,
        expected_patterns: patterns
            .iter()
            .zip(expected_patterns)
            .map(|((pattern, induced), expected)| PatternExpectation {
                pattern: pattern.to_string(),
                induced: *induced,
                expected,
            })
            .collect(),
    })
}

/// Exact probability of one full coloring under the model, or `None` if the
/// coloring cannot occur (odd class sizes, or the wrong red count).
fn coloring_probability(colors: &[Color], model: &ColoringModel) -> Option<BigRational> {
    let reds = colors.iter().filter(|&&c| c == Color::Red).count();
    if reds % 2 != 0 {
        return None;
    }
    let point_count = colors.len();
    match *model {
        ColoringModel::Fair => {
            // The first 2n-1 coins are free, the last point is forced.
            Some(BigRational::new(
                BigInt::one(),
                BigInt::from(2u32).pow(point_count as u32 - 1),
            ))
        }
        ColoringModel::Biased(p) => {
            let p = BigRational::from_float(p).expect("validated finite probability");
            let q = BigRational::one() - &p;
            let mut probability = BigRational::one();
            for &c in &colors[..point_count - 1] {
                probability *= if c == Color::Red { &p } else { &q };
            }
            Some(probability)
        }
        ColoringModel::FixedRed(m) => {
            if reds != 2 * m {
                return None;
            }
            let total = num_integer::binomial(
                BigInt::from(point_count),
                BigInt::from(2 * m),
            );
            Some(BigRational::new(BigInt::one(), total))
        }
    }
}

/// Whether some representative realizes every specified arc of the
/// quadruple, by exhaustive search over colorings and matching completions.
pub fn is_valid_quadruple_small(q: &Quadruple) -> Result<bool, OracleError> {
    let n = q.n();
    if n == 0 || n > QUADRUPLE_VALIDITY_CAP {
        return Err(OracleError::CapExceeded {
            n,
            cap: QUADRUPLE_VALIDITY_CAP,
        });
    }
    let matchings_by_size: Vec<Vec<Matching>> = (0..=n)
        .map(|k| enumerate_matchings(k))
        .collect::<Result<_, _>>()?;
    for mask in 0..(1u32 << (2 * n)) {
        let reds = (mask as u32).count_ones() as usize;
        if reds % 2 != 0 {
            continue;
        }
        let is_red = |point: usize| mask & (1 << (point - 1)) != 0;
        if !q.top_arcs().iter().all(|&(a, b)| is_red(a) && is_red(b)) {
            continue;
        }
        if !q.bottom_arcs().iter().all(|&(a, b)| !is_red(a) && !is_red(b)) {
            continue;
        }
        let red_class: Vec<usize> = (1..=2 * n).filter(|&p| is_red(p)).collect();
        let blue_class: Vec<usize> = (1..=2 * n).filter(|&p| !is_red(p)).collect();
        let top_ok = class_has_witness(&red_class, q.top_arcs(), &matchings_by_size);
        let bottom_ok = class_has_witness(&blue_class, q.bottom_arcs(), &matchings_by_size);
        if top_ok && bottom_ok {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Some matching on the class contains all required arcs (given in global
/// point coordinates).
fn class_has_witness(
    class: &[usize],
    required: &[(usize, usize)],
    matchings_by_size: &[Vec<Matching>],
) -> bool {
    let rank = |p: usize| class.iter().position(|&q| q == p).map(|i| i + 1);
    let mut class_arcs = Vec::with_capacity(required.len());
    for &(a, b) in required {
        match (rank(a), rank(b)) {
            (Some(ra), Some(rb)) => class_arcs.push((ra, rb)),
            _ => return false,
        }
    }
    matchings_by_size[class.len() / 2]
        .iter()
        .any(|m| m.contains_arcs(&class_arcs).unwrap_or(false))
}
