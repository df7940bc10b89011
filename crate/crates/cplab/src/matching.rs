//! Non-crossing perfect matchings on `2k` collinear points: representation,
//! validation, decoding from balanced words, exhaustive enumeration, and arc
//! queries.
//!
//! Matchings store the full partner sequence so partner lookup is O(1);
//! serialized form is the balanced-word string (e.g. `"(())()"`).

use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Enumeration refuses sizes above this; `C_10 = 16796` is the intended
/// ceiling for brute-force use.
pub const ENUMERATION_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("word is not balanced at symbol {position}")]
    Unbalanced { position: usize },
    #[error("word contains a character other than '(' and ')'")]
    BadSymbol,
    #[error("point {point} is out of range 1..=2k")]
    PointOutOfRange { point: usize },
    #[error("pairs do not form a perfect matching: point {point} appears {count} times")]
    NotAMatching { point: usize, count: usize },
    #[error("arcs {first:?} and {second:?} cross")]
    CrossingArcs {
        first: (usize, usize),
        second: (usize, usize),
    },
    #[error("enumeration size {requested} exceeds the cap {cap}")]
    EnumerationCapExceeded { requested: usize, cap: usize },
}

/// A word of `2k` open/close marks with every prefix balance nonnegative and
/// total balance zero. `true` is an open mark.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BalancedWord {
    opens: Vec<bool>,
}

impl BalancedWord {
    pub fn new(opens: Vec<bool>) -> Result<Self, MatchingError> {
        let mut balance: isize = 0;
        for (i, &open) in opens.iter().enumerate() {
            balance += if open { 1 } else { -1 };
            if balance < 0 {
                return Err(MatchingError::Unbalanced { position: i + 1 });
            }
        }
        if balance != 0 {
            return Err(MatchingError::Unbalanced {
                position: opens.len(),
            });
        }
        Ok(Self { opens })
    }

    pub fn opens(&self) -> &[bool] {
        &self.opens
    }

    /// Number of points, `2k`.
    pub fn point_count(&self) -> usize {
        self.opens.len()
    }
}

impl FromStr for BalancedWord {
    type Err = MatchingError;

    fn from_str(s: &str) -> Result<Self, MatchingError> {
        let mut opens = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '(' => opens.push(true),
                ')' => opens.push(false),
                _ => return Err(MatchingError::BadSymbol),
            }
        }
        Self::new(opens)
    }
}

impl fmt::Display for BalancedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &open in &self.opens {
            f.write_str(if open { "(" } else { ")" })?;
        }
        Ok(())
    }
}

/// A non-crossing perfect matching of `2k` points by arcs. Points are
/// 1-based in the public interface.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    /// partner[i] is the 0-based partner of 0-based point i.
    partner: Vec<usize>,
}

impl Matching {
    /// Number of arcs, `k`.
    pub fn size(&self) -> usize {
        self.partner.len() / 2
    }

    /// Number of points, `2k`.
    pub fn point_count(&self) -> usize {
        self.partner.len()
    }

    /// Partner of a 1-based point.
    pub fn partner(&self, point: usize) -> usize {
        assert!(
            (1..=self.point_count()).contains(&point),
            "point {point} out of range"
        );
        self.partner[point - 1] + 1
    }

    /// All arcs as 1-based pairs `(a, b)` with `a < b`, by left endpoint.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::with_capacity(self.size());
        for i in 0..self.point_count() {
            let j = self.partner[i];
            if i < j {
                arcs.push((i + 1, j + 1));
            }
        }
        arcs
    }

    /// True iff every queried 1-based pair is an arc of this matching.
    pub fn contains_arcs(&self, arcs: &[(usize, usize)]) -> Result<bool, MatchingError> {
        for &(a, b) in arcs {
            for point in [a, b] {
                if point < 1 || point > self.point_count() {
                    return Err(MatchingError::PointOutOfRange { point });
                }
            }
            if self.partner(a) != b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Builds a matching from explicit point pairs, validating that they
    /// form a perfect non-crossing matching on `1..=2k`.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self, MatchingError> {
        let point_count = 2 * pairs.len();
        let mut partner = vec![usize::MAX; point_count];
        let mut seen = vec![0usize; point_count + 1];
        for &(a, b) in pairs {
            for point in [a, b] {
                if point < 1 || point > point_count {
                    return Err(MatchingError::PointOutOfRange { point });
                }
                seen[point] += 1;
            }
        }
        for point in 1..=point_count {
            if seen[point] != 1 {
                return Err(MatchingError::NotAMatching {
                    point,
                    count: seen[point],
                });
            }
        }
        for &(a, b) in pairs {
            if a == b {
                return Err(MatchingError::NotAMatching { point: a, count: 2 });
            }
            partner[a - 1] = b - 1;
            partner[b - 1] = a - 1;
        }
        let matching = Self { partner };
        if let Some((first, second)) = matching.find_crossing() {
            return Err(MatchingError::CrossingArcs { first, second });
        }
        Ok(matching)
    }

    /// First crossing pair of arcs, if any, via a single stack sweep.
    fn find_crossing(&self) -> Option<((usize, usize), (usize, usize))> {
        let mut stack: Vec<usize> = Vec::new(); // 0-based open points
        for i in 0..self.point_count() {
            let j = self.partner[i];
            if j > i {
                stack.push(i);
            } else {
                // Closing the arc (j, i): a non-crossing close must match the
                // top of the stack.
                match stack.pop() {
                    Some(top) if top == j => {}
                    Some(top) => {
                        return Some(((top + 1, self.partner[top] + 1), (j + 1, i + 1)));
                    }
                    None => unreachable!("involution guarantees a pending open"),
                }
            }
        }
        None
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        encode_balanced(self).fmt(f)
    }
}

impl Serialize for Matching {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Pairs each open mark with the close that empties it from the stack. The
/// result is non-crossing by construction.
pub fn decode_balanced(word: &BalancedWord) -> Matching {
    let mut partner = vec![0usize; word.point_count()];
    let mut stack = Vec::new();
    for (i, &open) in word.opens().iter().enumerate() {
        if open {
            stack.push(i);
        } else {
            let j = stack.pop().expect("word is balanced");
            partner[i] = j;
            partner[j] = i;
        }
    }
    Matching { partner }
}

/// Inverse of [`decode_balanced`]: point `i` carries an open mark iff its
/// partner lies to its right.
pub fn encode_balanced(m: &Matching) -> BalancedWord {
    let opens = (1..=m.point_count()).map(|p| m.partner(p) > p).collect();
    BalancedWord::new(opens).expect("matching encodes to a balanced word")
}

/// True iff no two pairs interlace. The input must be a perfect matching on
/// `{1..2k}`; anything else is rejected.
pub fn is_noncrossing(pairs: &[(usize, usize)]) -> Result<bool, MatchingError> {
    match Matching::from_pairs(pairs) {
        Ok(_) => Ok(true),
        Err(MatchingError::CrossingArcs { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// All `C_k` matchings of size `k`, in lexicographic order of their balanced
/// words (with `'(' < ')'`). This is the brute-force oracle ordering.
pub fn enumerate_matchings(k: usize) -> Result<Vec<Matching>, MatchingError> {
    if k > ENUMERATION_CAP {
        return Err(MatchingError::EnumerationCapExceeded {
            requested: k,
            cap: ENUMERATION_CAP,
        });
    }
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(2 * k);
    fill_words(&mut word, k, 0, 0, &mut out);
    Ok(out)
}

fn fill_words(word: &mut Vec<bool>, k: usize, opens_used: usize, balance: usize, out: &mut Vec<Matching>) {
    if word.len() == 2 * k {
        let w = BalancedWord::new(word.clone()).expect("constructed balanced");
        out.push(decode_balanced(&w));
        return;
    }
    // '(' sorts before ')', so trying the open mark first yields lex order.
    if opens_used < k {
        word.push(true);
        fill_words(word, k, opens_used + 1, balance + 1, out);
        word.pop();
    }
    if balance > 0 {
        word.push(false);
        fill_words(word, k, opens_used, balance - 1, out);
        word.pop();
    }
}
