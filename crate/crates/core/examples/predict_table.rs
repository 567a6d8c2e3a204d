//! Predicted t-sparsity numbers next to the t-dependence numbers.

use tsparsity::predict::{alpha_dependence, concentration_interval, sparse_dependence_gap};
use tsparsity::{RateParams, Threshold};

fn main() -> tsparsity::Result<()> {
    let delta = 0.3;
    for p in [0.1, 0.5, 0.9] {
        let params = RateParams::new(p)?;
        println!("p = {p}");
        println!(
            "  {:>9} {:>2} {:>10} {:>9} {:>10} {:>8}",
            "n", "t", "alpha_hat", "interval", "dependent", "gap"
        );
        for n in [1_000u64, 100_000, 10_000_000] {
            for t in 0..=3u64 {
                let th = Threshold::integer(t);
                let Ok(iv) = concentration_interval(n, th, &params, delta) else {
                    continue;
                };
                let a = tsparsity::predict::alpha_hat_sparse(n, th, &params)?;
                let d = alpha_dependence(n, t, &params)?;
                println!(
                    "  {n:>9} {t:>2} {a:>10.4} {:>9} {d:>10.4} {:>8.4}",
                    format!("[{},{}]", iv.k_minus, iv.k_plus),
                    sparse_dependence_gap(t, &params)
                );
            }
        }
    }
    Ok(())
}
