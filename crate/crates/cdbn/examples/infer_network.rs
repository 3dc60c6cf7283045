//! Infer a network from simulated interventional data and print the
//! posterior edge-probability matrix alongside the ground truth.
//!
//! Run with: `cargo run --release --example infer_network`

use cdbn::data::{InterventionDirection, InterventionKind};
use cdbn::inference;
use cdbn::simulate::{self, SimulationConfig};
use cdbn::{InterventionScheme, NetworkPrior};

fn main() -> cdbn::Result<()> {
    // Ground truth: the bundled 15-node topology with seeded coefficients.
    let (names, topology) = simulate::bundled_topology();
    let mut graph = simulate::sample_coefficients(&topology, names.len(), 7);
    graph.noise_scale = vec![0.5; names.len()];

    // Four conditions (no inhibitor; A; B; both), 8 time points, generated
    // under the combined perfect + fixed-effect regime.
    let scheme = InterventionScheme::new(
        InterventionKind::PerfectFixedEffect,
        InterventionDirection::Out,
    );
    let cfg = SimulationConfig::four_condition(8, 0, 1, scheme, 7);
    let (data, design) = simulate::simulate_dataset(&graph, &names, &cfg)?;

    // Exact model averaging over all parent sets with |γ| ≤ 2.
    let prior = NetworkPrior::flat(data.num_nodes());
    let (probs, posteriors) = inference::infer_network(&data, &design, &prior, 2)?;

    println!("posterior edge probabilities (rows = parents):");
    print!("     ");
    for name in &names {
        print!("{name:>6}");
    }
    println!();
    for (i, name) in names.iter().enumerate() {
        print!("{name:>4} ");
        for j in 0..names.len() {
            print!("{:>6.2}", probs.get(i, j));
        }
        println!();
    }

    println!("\nedges at probability ≥ 1/2 (* = true edge):");
    for (i, j) in probs.thresholded(0.5) {
        let mark = if graph.coefficient(i, j) != 0.0 {
            "*"
        } else {
            " "
        };
        println!(
            "  {} → {}  p = {:.3} {mark}",
            names[i],
            names[j],
            probs.get(i, j)
        );
    }

    // The top parent sets for one node, with their posterior mass.
    let node = data.node_index("M").unwrap();
    println!("\ntop parent sets for node M:");
    for (pset, prob, _) in posteriors[node].top_models(5) {
        let parents: Vec<&str> = pset.parents().iter().map(|&i| names[i].as_str()).collect();
        println!("  {{{}}}  p = {prob:.3}", parents.join(", "));
    }
    Ok(())
}
