//! Overlap bounds by regime and the resulting Janson bound along n.

use tsparsity::moments::{janson_bound_with, OverlapContext, RatioForm};
use tsparsity::predict::concentration_interval;
use tsparsity::{RateParams, Threshold};

fn main() -> tsparsity::Result<()> {
    let params = RateParams::new(0.5)?;
    let t = Threshold::ZERO;
    println!(
        "{:>8} {:>3} {:>10} {:>14} {:>18} {:>18}",
        "n", "k", "ln E", "ln Δ̄ (exact)", "bound (exact)", "bound (displayed)"
    );
    for n in [1_000u64, 10_000, 100_000, 1_000_000] {
        let k = concentration_interval(n, t, &params, 0.3)?.k_minus as u64;
        let ctx = OverlapContext::new(n, k, t, &params, 0.2, 0.1)?;
        let exact = janson_bound_with(&ctx)?;
        let shown = janson_bound_with(&ctx.clone().with_ratio(RatioForm::Displayed))?;
        println!(
            "{n:>8} {k:>3} {:>10.4} {:>14.4} {:>18.6e} {:>18.6e}",
            exact.log_e, exact.log_delta_bar, exact.log_bound, shown.log_bound
        );
    }

    let ctx = OverlapContext::new(10_000, 20, t, &params, 0.2, 0.1)?;
    println!("\nn = 10000, k = 20: ln f(ℓ) upper bounds");
    for row in janson_bound_with(&ctx)?.rows {
        println!(
            "  ℓ = {:>2}  regime {}  {:>10.4}",
            row.ell, row.regime, row.log_f_upper
        );
    }
    Ok(())
}
