//! Draw graphs, solve them exactly and compare with the greedy peel.
//!
//! `cargo run --release --example sample_and_solve -- 90 0.5 1`

use std::time::Instant;

use tsparsity::graphs::gnp_sample;
use tsparsity::solver::{greedy_peel, sampler_start_hint, sparsity_exact_with, SolveOptions};
use tsparsity::{RateParams, Threshold};

fn main() -> tsparsity::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(70);
    let p: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let t: Threshold = args
        .get(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(Threshold::integer(1));
    let params = RateParams::new(p)?;
    let opts = SolveOptions {
        start: Some(sampler_start_hint(n, &params, t)),
        ..SolveOptions::default()
    };
    println!("n = {n}, p = {p}, t = {t}");
    println!("seed  edges  greedy  exact  nodes      ms");
    for seed in 0..8 {
        let g = gnp_sample(n, p, seed)?;
        let clock = Instant::now();
        let exact = sparsity_exact_with(&g, t, &opts);
        let ms = clock.elapsed().as_millis();
        let greedy = greedy_peel(&g, t);
        println!(
            "{seed:<5} {:<6} {:<7} {:<6} {:<10} {ms}",
            g.edge_count(),
            greedy.size,
            exact.size,
            exact.nodes_explored
        );
    }
    Ok(())
}
