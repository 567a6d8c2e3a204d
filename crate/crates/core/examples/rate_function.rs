//! Rate function, exact binomial lower tails and their sandwich bounds.

use tsparsity::rates::{
    binom_cdf_log, binom_tail_bounds, lambda_star, psi_solve, RateParams, TailQuery,
    SPARSE_LOWER_CONSTANT,
};

fn main() -> tsparsity::Result<()> {
    let params = RateParams::new(0.5)?;
    println!("x      Λ*(x)");
    for i in 0..=10 {
        let x = i as f64 / 10.0;
        println!("{x:<6} {:.12}", lambda_star(x, &params));
    }

    println!("\nN     r    lower          exact          upper");
    for &(n, r) in &[(50u64, 10.0), (200, 40.0), (1000, 300.0), (2000, 999.0)] {
        let q = TailQuery::new(n, r, params);
        let b = binom_tail_bounds(&q, SPARSE_LOWER_CONSTANT)?;
        println!(
            "{n:<5} {r:<4} {:<14.6} {:<14.6} {:.6}",
            b.log_lower,
            binom_cdf_log(&q),
            b.log_upper
        );
    }

    println!("\np     ψ(ξ=0.1)  ψ(ξ=0.5)");
    for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let r = RateParams::new(p)?;
        println!(
            "{p:<5} {:<9.6} {:.6}",
            psi_solve(&r, 0.1)?,
            psi_solve(&r, 0.5)?
        );
    }
    Ok(())
}
