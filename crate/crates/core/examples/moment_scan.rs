//! Where the expected number of t-sparse k-sets drops below one.

use tsparsity::experiments::moment_scan;
use tsparsity::predict::alpha_hat_sparse;
use tsparsity::{RateParams, Threshold};

fn main() -> tsparsity::Result<()> {
    let n = 10_000;
    let params = RateParams::new(0.5)?;
    for t in 0..=2u64 {
        let th = Threshold::integer(t);
        let scan = moment_scan(n, &params, th, 10..=45)?;
        let alpha = alpha_hat_sparse(n, th, &params)?;
        println!(
            "t = {t}: crossing at k = {:?}, alpha_hat = {alpha:.4}",
            scan.k_star
        );
        for row in scan
            .rows
            .iter()
            .filter(|r| r.k.abs_diff(scan.k_star.unwrap_or(0)) <= 2)
        {
            println!(
                "  k = {:>2}  ln E = {:>10.4}  bounds = [{}, {}]",
                row.k,
                row.log_e_exact,
                row.log_e_lower.map_or("-".into(), |v| format!("{v:.4}")),
                row.log_e_upper.map_or("-".into(), |v| format!("{v:.4}"))
            );
        }
    }
    Ok(())
}
