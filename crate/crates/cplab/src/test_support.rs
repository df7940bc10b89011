//! Shared fixtures and statistical helpers for the unit tests.

use crate::matching::Matching;
use crate::sampler::{Color, ColoredRepresentative};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Upper `p` quantile of the chi-square distribution with `df` degrees of
/// freedom, e.g. `chi_square_quantile(41, 0.999)`.
pub fn chi_square_quantile(df: usize, p: f64) -> f64 {
    ChiSquared::new(df as f64).unwrap().inverse_cdf(p)
}

/// The 9-vertex worked representative: colors RRBRBBRRRRRBBRBRBB with
/// matching pairs (1,7),(2,4),(3,5),(6,12),(8,9),(10,16),(11,14),(13,18),
/// (15,17). Its graph has 7 edges, components (6,2,1), and one isolated
/// vertex of half-length 1.
pub fn worked_example() -> ColoredRepresentative {
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
    let class_points = |color: Color| -> Vec<usize> {
        (0..colors.len())
            .filter(|&i| colors[i] == color)
            .map(|i| i + 1)
            .collect()
    };
    let to_class_matching = |points: &[usize]| {
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
    let top = to_class_matching(&class_points(Color::Red));
    let bottom = to_class_matching(&class_points(Color::Blue));
    ColoredRepresentative::new(colors, top, bottom).unwrap()
}
