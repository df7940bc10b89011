//! Enumerate all non-crossing perfect matchings of small sizes and check
//! the counts against the Catalan numbers.
//!
//! ```bash
//! cargo run -p cplab --example enumerate_matchings
//! ```

use cplab::{catalan, enumerate_matchings};

fn main() {
    for k in 0..=6 {
        let all = enumerate_matchings(k).expect("k is under the enumeration cap");
        println!("size {k}: {} matchings (C_{k} = {})", all.len(), catalan(k));
        if k == 3 {
            for m in &all {
                println!("    {m}  arcs {:?}", m.arcs());
            }
        }
    }
}
