//! Bracket the isolated-vertex density constant with exact rationals: the
//! truncated series is a lower bound and adding the tail bound 1/(4(M-1))
//! gives an upper bound.
//!
//! ```bash
//! cargo run -p cplab --example gamma_bracket
//! ```

use cplab::catalan::{gamma_bounds, gamma_term};

fn main() {
    println!("first series terms:");
    for m in 1..=5 {
        println!("  gamma_{m} = {}", gamma_term(m));
    }
    println!("\nbrackets by truncation:");
    for truncation in [2usize, 10, 100, 1_000, 10_000] {
        let bracket = gamma_bounds(truncation).unwrap();
        println!(
            "  M = {truncation:>6}:  [{}, {}]",
            bracket.lower_decimal(8),
            bracket.upper_decimal(8)
        );
    }
    println!("\nThe constant is 0.3023...; brackets only, never a point estimate.");
}
