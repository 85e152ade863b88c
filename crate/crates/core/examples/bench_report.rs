//! Runs both builders on generated programs and compares measured counters
//! with the model.

use krab_callgraph::bench::{run_bench, Shape};

fn main() {
    let report = run_bench(&Shape::ALL, &[64, 128, 256, 512], 42).unwrap();
    print!("{}", report.to_csv());

    println!("\nchain doubling ratios of weighted_steps:");
    let chain: Vec<_> = report
        .rows
        .iter()
        .filter(|r| r.shape == Shape::Chain)
        .collect();
    for pair in chain.windows(2) {
        println!(
            "  {} -> {}: {:.3}",
            pair[0].n,
            pair[1].n,
            pair[1].weighted_steps as f64 / pair[0].weighted_steps as f64
        );
    }
}
