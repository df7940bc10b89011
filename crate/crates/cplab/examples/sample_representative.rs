//! Draw one colored representative, build its interlacement graph, and
//! print both as the JSON the CLI emits.
//!
//! ```bash
//! cargo run -p cplab --example sample_representative
//! ```

use cplab::graph::{build_graph, components, degree_histogram, isolated_stats};
use cplab::sampler::{sample_representative, ColoringModel, RngStream};

fn main() {
    let mut rng = RngStream::new(7, 0).rng();
    let rep = sample_representative(9, &ColoringModel::Fair, &mut rng).unwrap();
    println!("representative: {}", serde_json::to_string(&rep).unwrap());

    let graph = build_graph(&rep);
    println!("graph:          {}", serde_json::to_string(&graph).unwrap());
    println!("\nedges: {}", graph.edge_count());
    println!("component sizes: {:?}", components(&graph));
    let (isolated, by_half_length) = isolated_stats(&graph);
    println!("isolated: {isolated} (by half-length {by_half_length:?})");
    println!("degree histogram: {:?}", degree_histogram(&graph));

    // The biased and fixed-red variants share the same machinery.
    let rep = sample_representative(9, &ColoringModel::Biased(0.8), &mut rng).unwrap();
    println!("\nbiased 0.8 coloring: {}", rep.color_string());
    let rep = sample_representative(9, &ColoringModel::FixedRed(2), &mut rng).unwrap();
    println!("fixed 2 red pairs:   {}", rep.color_string());
}
