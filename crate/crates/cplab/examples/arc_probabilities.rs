//! Exact probability that a uniform non-crossing matching contains a given
//! set of arcs: the closed form (product of Catalan numbers over the free
//! regions divided by C_n) against brute-force enumeration.
//!
//! ```bash
//! cargo run -p cplab --example arc_probabilities
//! ```

use cplab::oracle::exact_pair_probability;
use cplab::ValidPair;

fn main() {
    // Arcs (2,11) and (4,7) on 16 points: the free regions hold 6, 4 and 2
    // points, so the probability is C_3 C_2 C_1 / C_8 = 10/1430 = 1/143.
    let pair = ValidPair::new(8, &[2, 4], &[5, 2]).unwrap();
    println!("arcs {:?} on 2n = 16 points", pair.arcs());
    println!("  gap profile (m_0..m_s): {:?}", pair.gap_profile().half_sizes());
    println!("  closed form:  {}", pair.match_probability());
    println!(
        "  enumeration:  {}",
        exact_pair_probability(8, &pair.arcs()).unwrap()
    );

    // The probability that point 1 is matched to point 2k sums to 1 over k.
    let n = 5;
    println!("\npartner distribution of point 1 at n = {n}:");
    for k in 1..=n {
        let pair = ValidPair::new(n, &[1], &[k]).unwrap();
        println!("  partner {}: {}", 2 * k, pair.match_probability());
    }

    // Crossing specifications are rejected outright.
    match ValidPair::new(3, &[1, 3], &[2, 2]) {
        Err(reason) => println!("\narcs (1,4) and (3,6): {reason}"),
        Ok(_) => unreachable!(),
    }
}
