//! Uniform random generation of non-crossing matchings and of colored
//! representatives under the fair-coin model and its biased / fixed-count
//! variants.
//!
//! Matchings are drawn by the cycle lemma: shuffle `k` open and `k + 1`
//! close marks, rotate to the unique dominating rotation, and decode the
//! first `2k` symbols. This is exactly uniform over the `C_k` matchings in
//! O(k) time, with no acceptance loop.
//!
//! All randomness flows through [`RngStream`], a `(seed, stream_index)`
//! pair backed by ChaCha streams, so parallel trials are reproducible
//! without coordination.

use crate::matching::{decode_balanced, BalancedWord, Matching};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplerError {
    #[error("coloring probability {p} is not in [0, 1]")]
    InvalidProbability { p: f64 },
    #[error("fixed red pair count {m} exceeds the matching size {n}")]
    FixedRedTooLarge { m: usize, n: usize },
    #[error("the model needs at least one arc (n >= 1)")]
    SizeZero,
    #[error("color classes ({red} red, {blue} blue) do not fit matchings of sizes {top} and {bottom}")]
    ColorClassMismatch {
        red: usize,
        blue: usize,
        top: usize,
        bottom: usize,
    },
}

/// How the `2n` points are colored before the two matchings are placed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColoringModel {
    /// First `2n - 1` points are fair coins; the last point restores parity.
    Fair,
    /// Same procedure with a biased coin. `Biased(0.5)` is distributed
    /// identically to `Fair`.
    Biased(f64),
    /// A uniformly random set of exactly `2m` points is red.
    FixedRed(usize),
}

impl ColoringModel {
    pub fn validate(&self, n: usize) -> Result<(), SamplerError> {
        match *self {
            ColoringModel::Fair => Ok(()),
            ColoringModel::Biased(p) => {
                if p.is_finite() && (0.0..=1.0).contains(&p) {
                    Ok(())
                } else {
                    Err(SamplerError::InvalidProbability { p })
                }
            }
            ColoringModel::FixedRed(m) => {
                if m <= n {
                    Ok(())
                } else {
                    Err(SamplerError::FixedRedTooLarge { m, n })
                }
            }
        }
    }
}

impl std::fmt::Display for ColoringModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColoringModel::Fair => write!(f, "fair"),
            ColoringModel::Biased(p) => write!(f, "biased:{p}"),
            ColoringModel::FixedRed(m) => write!(f, "fixed:{m}"),
        }
    }
}

/// Point color; red points carry the top matching, blue the bottom one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Blue,
}

pub fn color_string(colors: &[Color]) -> String {
    colors
        .iter()
        .map(|c| match c {
            Color::Red => 'R',
            Color::Blue => 'B',
        })
        .collect()
}

/// A reproducible randomness source: a 64-bit seed plus a stream index.
/// Identical pairs reproduce identical draws; distinct stream indices give
/// independent streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    /// Stream for one experiment trial, mixing `n` and the trial index into
    /// the stream id so every `(n, trial)` cell draws independently.
    pub fn for_trial(seed: u64, n: usize, trial: usize) -> Self {
        let stream_index = splitmix64(splitmix64(n as u64) ^ (trial as u64));
        Self { seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// SplitMix64 finalizer; a strong 64-bit mixer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws a matching of size `k` uniformly from all `C_k` of them.
pub fn sample_matching<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Matching {
    if k == 0 {
        return decode_balanced(&BalancedWord::new(Vec::new()).unwrap());
    }
    // k opens and k + 1 closes, shuffled uniformly.
    let mut marks = vec![true; k];
    marks.extend(std::iter::repeat(false).take(k + 1));
    marks.shuffle(rng);
    // The unique dominating rotation starts right after the first position
    // at which the prefix sum attains its minimum.
    let mut balance: isize = 0;
    let mut min_balance = isize::MAX;
    let mut min_at = 0usize;
    for (i, &open) in marks.iter().enumerate() {
        balance += if open { 1 } else { -1 };
        if balance < min_balance {
            min_balance = balance;
            min_at = i + 1;
        }
    }
    let total = marks.len();
    let start = min_at % total;
    let opens: Vec<bool> = (0..2 * k).map(|i| marks[(start + i) % total]).collect();
    debug_assert!(!marks[(start + 2 * k) % total], "rotation ends in a close");
    let word = BalancedWord::new(opens).expect("cycle lemma rotation is balanced");
    decode_balanced(&word)
}

/// Colors `2n` points according to the model. Under `Fair` and `Biased` the
/// final point is forced so both color counts come out even; `FixedRed`
/// picks the red set uniformly.
pub fn sample_coloring<R: Rng + ?Sized>(
    n: usize,
    model: &ColoringModel,
    rng: &mut R,
) -> Result<Vec<Color>, SamplerError> {
    if n == 0 {
        return Err(SamplerError::SizeZero);
    }
    model.validate(n)?;
    let point_count = 2 * n;
    match *model {
        ColoringModel::Fair => Ok(parity_forced_coloring(point_count, 0.5, rng)),
        ColoringModel::Biased(p) => Ok(parity_forced_coloring(point_count, p, rng)),
        ColoringModel::FixedRed(m) => {
            let mut colors = vec![Color::Blue; point_count];
            for idx in rand::seq::index::sample(rng, point_count, 2 * m) {
                colors[idx] = Color::Red;
            }
            Ok(colors)
        }
    }
}

fn parity_forced_coloring<R: Rng + ?Sized>(point_count: usize, p: f64, rng: &mut R) -> Vec<Color> {
    let mut colors = Vec::with_capacity(point_count);
    let mut reds = 0usize;
    for _ in 0..point_count - 1 {
        let color = if rng.random_bool(p) {
            reds += 1;
            Color::Red
        } else {
            Color::Blue
        };
        colors.push(color);
    }
    colors.push(if reds % 2 == 1 { Color::Red } else { Color::Blue });
    colors
}

/// One representative of a Catalan-pair graph: a 2-coloring of `2n` points,
/// a top matching on the red points and a bottom matching on the blue ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredRepresentative {
    n: usize,
    colors: Vec<Color>,
    top: Matching,
    bottom: Matching,
    /// combined_partner[i] is the 0-based global partner of 0-based point i.
    combined_partner: Vec<usize>,
}

impl ColoredRepresentative {
    /// Assembles a representative, embedding each matching onto its color
    /// class in position order.
    pub fn new(colors: Vec<Color>, top: Matching, bottom: Matching) -> Result<Self, SamplerError> {
        let point_count = colors.len();
        if point_count == 0 || point_count % 2 != 0 {
            return Err(SamplerError::SizeZero);
        }
        let red: Vec<usize> = (0..point_count).filter(|&i| colors[i] == Color::Red).collect();
        let blue: Vec<usize> = (0..point_count).filter(|&i| colors[i] == Color::Blue).collect();
        if red.len() != top.point_count() || blue.len() != bottom.point_count() {
            return Err(SamplerError::ColorClassMismatch {
                red: red.len(),
                blue: blue.len(),
                top: top.size(),
                bottom: bottom.size(),
            });
        }
        let mut combined_partner = vec![usize::MAX; point_count];
        for (class, matching) in [(&red, &top), (&blue, &bottom)] {
            for idx in 0..class.len() {
                let partner_idx = matching.partner(idx + 1) - 1;
                combined_partner[class[idx]] = class[partner_idx];
            }
        }
        Ok(Self {
            n: point_count / 2,
            colors,
            top,
            bottom,
            combined_partner,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color_string(&self) -> String {
        color_string(&self.colors)
    }

    pub fn top(&self) -> &Matching {
        &self.top
    }

    pub fn bottom(&self) -> &Matching {
        &self.bottom
    }

    /// Global partner of a 1-based point.
    pub fn partner_of(&self, point: usize) -> usize {
        self.combined_partner[point - 1] + 1
    }

    /// Top arcs as global 1-based point pairs, by left endpoint.
    pub fn top_point_arcs(&self) -> Vec<(usize, usize)> {
        self.class_arcs(Color::Red, &self.top)
    }

    /// Bottom arcs as global point pairs, by left endpoint.
    pub fn bottom_point_arcs(&self) -> Vec<(usize, usize)> {
        self.class_arcs(Color::Blue, &self.bottom)
    }

    fn class_arcs(&self, color: Color, matching: &Matching) -> Vec<(usize, usize)> {
        let class: Vec<usize> = (0..self.colors.len())
            .filter(|&i| self.colors[i] == color)
            .collect();
        matching
            .arcs()
            .into_iter()
            .map(|(a, b)| (class[a - 1] + 1, class[b - 1] + 1))
            .collect()
    }
}

impl Serialize for ColoredRepresentative {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ColoredRepresentative", 4)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("colors", &self.color_string())?;
        s.serialize_field("top", &self.top)?;
        s.serialize_field("bottom", &self.bottom)?;
        s.end()
    }
}

/// Samples a coloring and two independent uniform matchings, one per color
/// class.
pub fn sample_representative<R: Rng + ?Sized>(
    n: usize,
    model: &ColoringModel,
    rng: &mut R,
) -> Result<ColoredRepresentative, SamplerError> {
    if n == 0 {
        return Err(SamplerError::SizeZero);
    }
    let colors = sample_coloring(n, model, rng)?;
    let reds = colors.iter().filter(|&&c| c == Color::Red).count();
    debug_assert!(reds % 2 == 0, "color parity is forced by construction");
    let top = sample_matching(reds / 2, rng);
    let bottom = sample_matching(n - reds / 2, rng);
    ColoredRepresentative::new(colors, top, bottom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::enumerate_matchings;
    use std::collections::HashMap;

    fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
        RngStream::new(seed, stream).rng()
    }

    #[test]
    fn size_one_matching_is_forced() {
        let mut rng = rng_for(1, 0);
        for _ in 0..50 {
            assert_eq!(sample_matching(1, &mut rng).arcs(), vec![(1, 2)]);
        }
    }

    #[test]
    fn size_zero_matching_is_empty() {
        let mut rng = rng_for(1, 1);
        assert_eq!(sample_matching(0, &mut rng).arcs(), vec![]);
    }

    #[test]
    fn size_two_frequencies() {
        // Two matchings of size 2; each should appear with frequency
        // 0.5 +- 0.01 over 1e5 draws (a 6-sigma band).
        let mut rng = rng_for(7, 0);
        let draws = 100_000;
        let nested = (0..draws)
            .filter(|_| sample_matching(2, &mut rng).partner(1) == 4)
            .count();
        let freq = nested as f64 / draws as f64;
        assert!((freq - 0.5).abs() < 0.01, "nested frequency {freq}");
    }

    #[test]
    fn uniformity_chi_square_size_4() {
        // 14 categories, 5000 draws per category expected.
        let k = 4;
        let all = enumerate_matchings(k).unwrap();
        let index: HashMap<String, usize> = all
            .iter()
            .enumerate()
            .map(|(i, m)| (m.to_string(), i))
            .collect();
        let draws = 5000 * all.len();
        let mut counts = vec![0u64; all.len()];
        let mut rng = rng_for(42, 3);
        for _ in 0..draws {
            counts[index[&sample_matching(k, &mut rng).to_string()]] += 1;
        }
        let expected = draws as f64 / all.len() as f64;
        let stat: f64 = counts
            .iter()
            .map(|&o| {
                let diff = o as f64 - expected;
                diff * diff / expected
            })
            .sum();
        let critical = crate::test_support::chi_square_quantile(all.len() - 1, 0.999);
        assert!(stat < critical, "chi-square {stat} >= {critical}");
    }

    #[test]
    fn matching_arc_frequency_matches_exact_probability() {
        // Frequency of a size-8 matching containing arcs (2,11) and (4,7):
        // exactly 1/143, checked to 3 sigma over 1e5 draws.
        let p = 1.0 / 143.0;
        let draws = 100_000;
        let mut rng = rng_for(11, 0);
        let hits = (0..draws)
            .filter(|_| {
                sample_matching(8, &mut rng)
                    .contains_arcs(&[(2, 11), (4, 7)])
                    .unwrap()
            })
            .count();
        let freq = hits as f64 / draws as f64;
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        assert!(
            (freq - p).abs() < 3.0 * sigma,
            "freq {freq} vs {p} (sigma {sigma})"
        );
    }

    #[test]
    fn colorings_have_even_classes() {
        let mut rng = rng_for(5, 9);
        let models = [
            ColoringModel::Fair,
            ColoringModel::Biased(0.3),
            ColoringModel::Biased(0.99),
            ColoringModel::FixedRed(3),
        ];
        for model in models {
            for _ in 0..500 {
                let colors = sample_coloring(5, &model, &mut rng).unwrap();
                let reds = colors.iter().filter(|&&c| c == Color::Red).count();
                assert_eq!(reds % 2, 0, "model {model}");
                assert_eq!((colors.len() - reds) % 2, 0);
            }
        }
    }

    #[test]
    fn fair_n1_is_a_fair_coin_on_pairs() {
        let mut rng = rng_for(19, 2);
        let draws = 10_000;
        let rr = (0..draws)
            .filter(|_| {
                sample_coloring(1, &ColoringModel::Fair, &mut rng).unwrap() == vec![Color::Red; 2]
            })
            .count();
        let freq = rr as f64 / draws as f64;
        assert!((freq - 0.5).abs() < 0.02, "RR frequency {freq}");
    }

    #[test]
    fn biased_one_forces_all_red() {
        let mut rng = rng_for(3, 3);
        let colors = sample_coloring(3, &ColoringModel::Biased(1.0), &mut rng).unwrap();
        assert_eq!(colors, vec![Color::Red; 6]);
    }

    #[test]
    fn fixed_red_count_is_exact() {
        let mut rng = rng_for(3, 4);
        for _ in 0..200 {
            let colors = sample_coloring(4, &ColoringModel::FixedRed(1), &mut rng).unwrap();
            let reds = colors.iter().filter(|&&c| c == Color::Red).count();
            assert_eq!(reds, 2);
        }
        assert_eq!(
            sample_coloring(4, &ColoringModel::FixedRed(5), &mut rng),
            Err(SamplerError::FixedRedTooLarge { m: 5, n: 4 })
        );
    }

    #[test]
    fn invalid_probability_rejected() {
        let mut rng = rng_for(0, 0);
        assert!(matches!(
            sample_coloring(2, &ColoringModel::Biased(1.5), &mut rng),
            Err(SamplerError::InvalidProbability { .. })
        ));
        assert!(matches!(
            sample_coloring(2, &ColoringModel::Biased(f64::NAN), &mut rng),
            Err(SamplerError::InvalidProbability { .. })
        ));
    }

    #[test]
    fn representative_n1_structure() {
        let mut rng = rng_for(23, 0);
        for _ in 0..20 {
            let rep = sample_representative(1, &ColoringModel::Fair, &mut rng).unwrap();
            assert!(rep.color_string() == "RR" || rep.color_string() == "BB");
            assert_eq!(rep.partner_of(1), 2);
            assert_eq!(rep.partner_of(2), 1);
        }
    }

    #[test]
    fn rbrb_coloring_forces_crossing_arcs() {
        // With coloring RBRB each class has one pair, so both matchings are
        // forced: red arc (1,3), blue arc (2,4).
        let mut rng = rng_for(29, 1);
        let mut seen = false;
        for _ in 0..200 {
            let rep = sample_representative(2, &ColoringModel::Fair, &mut rng).unwrap();
            if rep.color_string() == "RBRB" {
                seen = true;
                assert_eq!(rep.top_point_arcs(), vec![(1, 3)]);
                assert_eq!(rep.bottom_point_arcs(), vec![(2, 4)]);
                assert_eq!(rep.partner_of(1), 3);
                assert_eq!(rep.partner_of(2), 4);
            }
        }
        assert!(seen, "RBRB should appear among 200 fair draws");
    }

    #[test]
    fn identical_streams_reproduce_identical_draws() {
        let make = |seed, stream| {
            let mut rng = rng_for(seed, stream);
            sample_representative(40, &ColoringModel::Fair, &mut rng).unwrap()
        };
        let a = serde_json::to_string(&make(99, 7)).unwrap();
        let b = serde_json::to_string(&make(99, 7)).unwrap();
        assert_eq!(a, b);
        let c = serde_json::to_string(&make(99, 8)).unwrap();
        assert_ne!(a, c, "distinct streams should diverge at n = 40");
    }

    #[test]
    fn representative_rejects_mismatched_classes() {
        let top = sample_matching(1, &mut rng_for(0, 0));
        let bottom = sample_matching(1, &mut rng_for(0, 1));
        let err = ColoredRepresentative::new(vec![Color::Red; 4], top, bottom);
        assert!(matches!(err, Err(SamplerError::ColorClassMismatch { .. })));
    }

    #[test]
    fn biased_half_distributes_like_fair() {
        // Two-sample chi-square homogeneity test over edge counts at n = 6.
        let n = 6;
        let draws = 20_000;
        let sample_counts = |model: ColoringModel, stream: u64| {
            let mut rng = rng_for(4242, stream);
            let mut counts = std::collections::BTreeMap::<usize, [f64; 2]>::new();
            let slot = if stream == 0 { 0 } else { 1 };
            for _ in 0..draws {
                let rep = sample_representative(n, &model, &mut rng).unwrap();
                let edges = crate::graph::build_graph(&rep).edge_count();
                counts.entry(edges).or_insert([0.0; 2])[slot] += 1.0;
            }
            counts
        };
        let mut table = sample_counts(ColoringModel::Fair, 0);
        for (edges, cell) in sample_counts(ColoringModel::Biased(0.5), 1) {
            table.entry(edges).or_insert([0.0; 2])[1] += cell[1];
        }
        // Merge sparse bins (expected count < 5) into one tail bin.
        let mut bins: Vec<[f64; 2]> = Vec::new();
        let mut tail = [0.0f64; 2];
        for cell in table.values() {
            if (cell[0] + cell[1]) / 2.0 < 5.0 {
                tail[0] += cell[0];
                tail[1] += cell[1];
            } else {
                bins.push(*cell);
            }
        }
        if tail[0] + tail[1] > 0.0 {
            bins.push(tail);
        }
        let grand: f64 = 2.0 * draws as f64;
        let mut stat = 0.0;
        for cell in &bins {
            let row_total = cell[0] + cell[1];
            for sample in 0..2 {
                let expected = row_total * (draws as f64) / grand;
                let diff = cell[sample] - expected;
                stat += diff * diff / expected;
            }
        }
        let critical = crate::test_support::chi_square_quantile(bins.len() - 1, 0.999);
        assert!(
            stat < critical,
            "homogeneity stat {stat} >= {critical} over {} bins",
            bins.len()
        );
    }
}
