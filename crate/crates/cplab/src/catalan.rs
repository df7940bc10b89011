//! Exact Catalan-number arithmetic, arc-containment probabilities for a
//! single uniform non-crossing matching, and the isolated-vertex constant.
//!
//! Everything here is computed with unbounded integers and exact rationals;
//! floating point only ever appears as a rendering of an exact value or in
//! the explicitly asymptotic helpers.
//!
//! Arc-size vocabulary used throughout the crate: an arc of *half-length* `m`
//! connects points `x` and `x + 2m - 1` (so `2m - 2` points lie strictly
//! between its endpoints); an arc of *span* `k` connects points `i` and
//! `i + k`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Hard cap on `m` for the definitional `gamma_term` sum. The quadratic cost
/// is fine up to a few thousand terms; `gamma_bounds` uses a linear path.
pub const GAMMA_TERM_CAP: usize = 20_000;

/// The `n`th Catalan number `binomial(2n, n) / (n + 1)`, exactly.
pub fn catalan(n: usize) -> BigUint {
    let binom = num_integer::binomial(BigUint::from(2 * n), BigUint::from(n));
    binom / BigUint::from(n + 1)
}

/// `C_0, C_1, ..., C_n` via the exact ratio step `C_{m+1} = C_m (4m+2)/(m+2)`.
pub fn catalan_sequence(n: usize) -> Vec<BigUint> {
    let mut seq = Vec::with_capacity(n + 1);
    seq.push(BigUint::one());
    for m in 0..n {
        let next = (seq[m].clone() * BigUint::from(4 * m + 2)) / BigUint::from(m + 2);
        seq.push(next);
    }
    seq
}

/// `C_0, ..., C_n` via the convolution recurrence
/// `C_{m+1} = sum_i C_i C_{m-i}` — an independent route used to cross-check
/// the binomial formula.
pub fn catalan_convolution_sequence(n: usize) -> Vec<BigUint> {
    let mut seq: Vec<BigUint> = vec![BigUint::one()];
    for m in 0..n {
        let mut acc = BigUint::zero();
        for i in 0..=m {
            acc += &seq[i] * &seq[m - i];
        }
        seq.push(acc);
    }
    seq
}

/// Floating-point estimate `4^n / (sqrt(pi) n^{3/2})` of `C_n`, evaluated in
/// log space so it does not overflow for large `n`.
pub fn catalan_asymptotic(n: usize) -> f64 {
    assert!(n >= 1, "asymptotic estimate requires n >= 1");
    let nf = n as f64;
    (nf * 4f64.ln() - 0.5 * std::f64::consts::PI.ln() - 1.5 * nf.ln()).exp()
}

/// Natural log of the exact `C_n`, accurate for any `n` that fits in memory.
pub fn catalan_ln(n: usize) -> f64 {
    ln_biguint(&catalan(n))
}

/// Natural log of an exact nonzero big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log of zero");
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53-bit mantissa fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Why a requested arc specification is not a valid pair.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("left endpoints and half-lengths differ in count ({lefts} vs {halves})")]
    LengthMismatch { lefts: usize, halves: usize },
    #[error("left endpoints must be strictly increasing (position {index})")]
    NotIncreasing { index: usize },
    #[error("arc {index} leaves the range 1..=2n")]
    OutOfRange { index: usize },
    #[error("point {point} is an endpoint of two specified arcs")]
    DuplicateEndpoint { point: usize },
    #[error("specified arcs {first} and {second} cross")]
    Crossing { first: usize, second: usize },
}

/// A set of pairwise non-crossing arcs on `2n` points that can be extended to
/// a full non-crossing perfect matching. Arc `i` connects `x_i` and
/// `x_i + 2k_i - 1` where `k_i` is its half-length; all points are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidPair {
    n: usize,
    left_endpoints: Vec<usize>,
    half_lengths: Vec<usize>,
}

impl ValidPair {
    /// Checks the three validity conditions in order (ranges, distinct
    /// endpoints, no crossing) and reports the first violation.
    pub fn new(
        n: usize,
        left_endpoints: &[usize],
        half_lengths: &[usize],
    ) -> Result<Self, PairError> {
        if left_endpoints.len() != half_lengths.len() {
            return Err(PairError::LengthMismatch {
                lefts: left_endpoints.len(),
                halves: half_lengths.len(),
            });
        }
        for i in 1..left_endpoints.len() {
            if left_endpoints[i] <= left_endpoints[i - 1] {
                return Err(PairError::NotIncreasing { index: i });
            }
        }
        // Condition 1: 1 <= x_i < x_i + 2k_i - 1 <= 2n.
        for i in 0..left_endpoints.len() {
            let (x, k) = (left_endpoints[i], half_lengths[i]);
            if x < 1 || k < 1 || x + 2 * k - 1 > 2 * n {
                return Err(PairError::OutOfRange { index: i });
            }
        }
        // Condition 2: all 2s endpoint values distinct.
        let mut seen = vec![false; 2 * n + 1];
        for i in 0..left_endpoints.len() {
            for point in [
                left_endpoints[i],
                left_endpoints[i] + 2 * half_lengths[i] - 1,
            ] {
                if seen[point] {
                    return Err(PairError::DuplicateEndpoint { point });
                }
                seen[point] = true;
            }
        }
        // Condition 3: no i < j with x_i < x_j < end_i < end_j.
        for i in 0..left_endpoints.len() {
            let end_i = left_endpoints[i] + 2 * half_lengths[i] - 1;
            for j in (i + 1)..left_endpoints.len() {
                let end_j = left_endpoints[j] + 2 * half_lengths[j] - 1;
                if left_endpoints[j] < end_i && end_i < end_j {
                    return Err(PairError::Crossing {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Self {
            n,
            left_endpoints: left_endpoints.to_vec(),
            half_lengths: half_lengths.to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of specified arcs.
    pub fn arc_count(&self) -> usize {
        self.left_endpoints.len()
    }

    /// Endpoint pair `(x_i, x_i + 2k_i - 1)` of arc `i`.
    pub fn arc(&self, i: usize) -> (usize, usize) {
        let (x, k) = (self.left_endpoints[i], self.half_lengths[i]);
        (x, x + 2 * k - 1)
    }

    /// All specified arcs as endpoint pairs, in left-endpoint order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.arc_count()).map(|i| self.arc(i)).collect()
    }

    /// Half-sizes `(m_0, ..., m_s)` of the free regions left by the
    /// specified arcs. Region `i >= 1` holds the free points whose innermost
    /// enclosing arc is arc `i`; region `0` holds the free points enclosed by
    /// no arc. The half-sizes always sum to `n - s`.
    pub fn gap_profile(&self) -> GapProfile {
        let s = self.arc_count();
        let two_n = 2 * self.n;
        let mut endpoint = vec![false; two_n + 1];
        for i in 0..s {
            let (a, b) = self.arc(i);
            endpoint[a] = true;
            endpoint[b] = true;
        }
        let mut counts = vec![0usize; s + 1];
        for p in 1..=two_n {
            if endpoint[p] {
                continue;
            }
            // Innermost enclosing arc = minimal span among those containing p.
            let mut region = 0;
            let mut best_span = usize::MAX;
            for i in 0..s {
                let (a, b) = self.arc(i);
                if a < p && p < b && b - a < best_span {
                    best_span = b - a;
                    region = i + 1;
                }
            }
            counts[region] += 1;
        }
        let halves: Vec<usize> = counts
            .iter()
            .map(|&c| {
                debug_assert!(c % 2 == 0, "free regions of a valid pair are even");
                c / 2
            })
            .collect();
        debug_assert_eq!(halves.iter().sum::<usize>(), self.n - s);
        GapProfile { half_sizes: halves }
    }

    /// Probability that a uniform non-crossing perfect matching of size `n`
    /// contains every specified arc: `prod_i C_{m_i} / C_n`, exactly.
    pub fn match_probability(&self) -> BigRational {
        let profile = self.gap_profile();
        let mut numer = BigUint::one();
        for &m in &profile.half_sizes {
            numer *= catalan(m);
        }
        BigRational::new(BigInt::from(numer), BigInt::from(catalan(self.n)))
    }
}

/// Free-region half-sizes `(m_0, ..., m_s)` of a valid pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapProfile {
    half_sizes: Vec<usize>,
}

impl GapProfile {
    pub fn half_sizes(&self) -> &[usize] {
        &self.half_sizes
    }
}

/// Term `gamma_m = 4 * 16^{-m} * sum_{b=0}^{m-1} binom(2m-2, 2b) C_{m-1-b} C_b`
/// of the isolated-vertex constant, exactly.
pub fn gamma_term(m: usize) -> BigRational {
    assert!(m >= 1, "gamma_m is defined for m >= 1");
    assert!(m <= GAMMA_TERM_CAP, "gamma_term cap exceeded");
    let cats = catalan_sequence(m - 1);
    let nn = 2 * m - 2;
    let mut binom = BigUint::one(); // binom(2m-2, 2b), starting at 2b = 0
    let mut sum = BigUint::zero();
    for b in 0..m {
        sum += &binom * &cats[m - 1 - b] * &cats[b];
        if b + 1 < m {
            // Advance binom(nn, 2b) -> binom(nn, 2b+2); both divisions exact.
            binom = binom * BigUint::from(nn - 2 * b) / BigUint::from(2 * b + 1);
            binom = binom * BigUint::from(nn - 2 * b - 1) / BigUint::from(2 * b + 2);
        }
    }
    BigRational::new(
        BigInt::from(sum * BigUint::from(4u32)),
        BigInt::from(BigUint::from(16u32).pow(m as u32)),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("truncation index must be at least 2 (the tail bound divides by M - 1)")]
    TruncationTooSmall,
}

/// Exact two-sided bracket for the isolated-vertex constant obtained by
/// truncating its series at `M` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaPartialSum {
    truncation: usize,
    lower: BigRational,
    upper: BigRational,
}

impl GammaPartialSum {
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// `sum_{m=1}^{M} gamma_m`, a lower bound for the constant.
    pub fn lower(&self) -> &BigRational {
        &self.lower
    }

    /// `lower + 1/(4(M-1))`, an upper bound for the constant.
    pub fn upper(&self) -> &BigRational {
        &self.upper
    }

    /// Lower bound rounded *down* to `digits` decimal places, so the printed
    /// bracket still contains the exact one.
    pub fn lower_decimal(&self, digits: usize) -> String {
        decimal_floor(&self.lower, digits)
    }

    /// Upper bound rounded *up* to `digits` decimal places.
    pub fn upper_decimal(&self, digits: usize) -> String {
        decimal_ceil(&self.upper, digits)
    }
}

/// Exact bracket `[sum_{m=1}^{M} gamma_m, sum + 1/(4(M-1))]` for the
/// isolated-vertex constant.
///
/// The partial sum is accumulated over the common denominator `16^M` using
/// `sum_b binom(2m-2, 2b) C_{m-1-b} C_b = C_{m-1} C_m` (checked exactly
/// against [`gamma_term`] in the test suite), which keeps the cost linear in
/// `M` instead of quadratic.
pub fn gamma_bounds(truncation: usize) -> Result<GammaPartialSum, GammaError> {
    if truncation < 2 {
        return Err(GammaError::TruncationTooSmall);
    }
    let mut c_prev = BigUint::one(); // C_{m-1}
    let mut c_cur = BigUint::one(); // C_m
    let mut numer = BigUint::zero(); // sum_m 4 C_{m-1} C_m 16^{M-m}, by Horner
    for m in 1..=truncation {
        numer = (numer << 4) + BigUint::from(4u32) * &c_prev * &c_cur;
        let c_next = (&c_cur * BigUint::from(4 * m + 2)) / BigUint::from(m + 2);
        c_prev = std::mem::replace(&mut c_cur, c_next);
    }
    let denom = BigUint::one() << (4 * truncation); // 16^M
    let lower = BigRational::new(BigInt::from(numer), BigInt::from(denom));
    let upper = &lower + BigRational::new(BigInt::one(), BigInt::from(4 * (truncation - 1)));
    Ok(GammaPartialSum {
        truncation,
        lower,
        upper,
    })
}

/// Decimal rendering of a nonnegative rational, rounded down to `digits`
/// fractional digits.
pub fn decimal_floor(r: &BigRational, digits: usize) -> String {
    assert!(!r.is_negative());
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r.numer() * &scale) / r.denom(); // truncation = floor for r >= 0
    format_scaled(&scaled, digits)
}

/// Decimal rendering of a nonnegative rational, rounded up.
pub fn decimal_ceil(r: &BigRational, digits: usize) -> String {
    assert!(!r.is_negative());
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (r.numer() * &scale + r.denom() - BigInt::one()) / r.denom();
    format_scaled(&scaled, digits)
}

fn format_scaled(scaled: &BigInt, digits: usize) -> String {
    let ten_pow = BigInt::from(10u32).pow(digits as u32);
    let int_part = scaled / &ten_pow;
    let frac_part = scaled % &ten_pow;
    if digits == 0 {
        int_part.to_string()
    } else {
        format!("{}.{:0>width$}", int_part, frac_part.to_string(), width = digits)
    }
}
