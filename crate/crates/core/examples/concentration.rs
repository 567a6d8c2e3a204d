//! Monte Carlo check of two-point concentration.
//!
//! `cargo run --release --example concentration -- 100 0 50 4`
//! (n, t, samples, workers)

use tsparsity::experiments::{concentration_csv, run_concentration, ExperimentConfig};
use tsparsity::solver::DEFAULT_BUDGET;
use tsparsity::{RateParams, Threshold};

fn main() -> tsparsity::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: u64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let config = ExperimentConfig {
        n: arg(0, 80) as usize,
        params: RateParams::new(0.5)?,
        t: Threshold::integer(arg(1, 1)),
        delta: 0.3,
        samples: arg(2, 20),
        master_seed: 2024,
        solver_budget: DEFAULT_BUDGET,
        workers: arg(3, 4) as usize,
    };
    let s = run_concentration(&config)?;
    println!(
        "alpha_hat = {:.4}, interval [{}, {}], mode {:?}",
        s.alpha_hat, s.predicted.k_minus, s.predicted.k_plus, s.mode
    );
    println!(
        "hit rate {:?}, widened {:?}, unsolved {}",
        s.hit_rate, s.widened_hit_rate, s.unsolved
    );
    print!("{}", concentration_csv(&s));
    Ok(())
}
