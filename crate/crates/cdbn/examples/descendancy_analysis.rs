//! Causal-fit evaluation without ground-truth edges: does the inferred
//! network place the right nodes *downstream* of an inhibited target?
//!
//! The reference set `D` is read off the data alone — nodes whose levels
//! shift significantly between the untreated and inhibited conditions —
//! and the inferred network is scored by how well its thresholded
//! descendant sets recover `D` as the threshold sweeps 1 → 0.
//!
//! Run with: `cargo run --release --example descendancy_analysis`

use cdbn::data::{InterventionDirection, InterventionKind};
use cdbn::evaluate::{self, DescendancyMode};
use cdbn::inference;
use cdbn::simulate::{self, SimulationConfig};
use cdbn::{InterventionScheme, NetworkPrior};

fn main() -> cdbn::Result<()> {
    let (names, topology) = simulate::bundled_topology();
    let p = names.len();
    let mut graph = simulate::sample_coefficients(&topology, p, 35);
    graph.noise_scale = vec![0.5; p];

    // Longer time courses than the edge-recovery study: the per-node
    // paired t-tests that ground the reference set need the extra pairs.
    let target = 0; // node A, one of the two inhibited hubs
    let scheme = InterventionScheme::new(
        InterventionKind::PerfectFixedEffect,
        InterventionDirection::Out,
    );
    let cfg = SimulationConfig::four_condition(24, 0, 1, scheme, 35);
    let (data, design) = simulate::simulate_dataset(&graph, &names, &cfg)?;

    // Reference downstream set: paired t-test per node, untreated (cond 0)
    // vs the condition inhibiting A (cond 1), α = 0.05.
    let (downstream, warnings) = evaluate::descendancy_sets(&data, target, 0, 1, 0.05);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let show = |set: &std::collections::BTreeSet<usize>| {
        set.iter()
            .map(|&k| names[k].as_str())
            .collect::<Vec<_>>()
            .join(", ")
    };
    println!(
        "data-derived downstream set of {}: {{{}}}",
        names[target],
        show(&downstream)
    );

    // Infer the network, then score descendant recovery.
    let prior = NetworkPrior::flat(p);
    let (probs, _) = inference::infer_network(&data, &design, &prior, 2)?;

    let half = evaluate::descendants_at(&probs, target, 0.5);
    println!("inferred descendants at τ = 1/2:  {{{}}}", show(&half));

    for (label, mode) in [
        (
            "descendants (directed reachability)",
            DescendancyMode::Descendants,
        ),
        ("children only", DescendancyMode::Children),
    ] {
        let curve = evaluate::roc_descendancy(&probs, target, &downstream, mode)?;
        println!("causal-fit AUC, {label:36} = {:.3}", curve.auc);
    }
    Ok(())
}
