//! Log-space arithmetic and the saddle-point binomial mass.

use std::f64::consts::PI;

use statrs::function::factorial;

/// `ln(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(sum e^x)` over a slice, reduced in slice order.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// `ln(1 - e^a)` for `a <= 0`.
pub fn log1m_exp(a: f64) -> f64 {
    if a > -std::f64::consts::LN_2 {
        (-a.exp_m1()).ln()
    } else {
        (-a.exp()).ln_1p()
    }
}

pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    factorial::ln_binomial(n, k)
}

pub fn ln_factorial(n: u64) -> f64 {
    factorial::ln_factorial(n)
}

/// `ln n! - ln(sqrt(2 pi n) (n/e)^n)`.
fn stirling_error(n: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n == 0 {
        return 0.0;
    }
    let x = n as f64;
    if n <= 15 {
        return factorial::ln_factorial(n) - (x + 0.5) * x.ln() + x - 0.5 * (2.0 * PI).ln();
    }
    let xx = x * x;
    (S0 - (S1 - (S2 - (S3 - S4 / xx) / xx) / xx) / xx) / x
}

/// Deviance term `x ln(x/m) + m - x`, evaluated without cancellation.
fn deviance(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// `ln Pr(Bin(trials, p) = x)` with relative accuracy near machine precision.
pub fn binomial_log_pmf(x: u64, trials: u64, p: f64) -> f64 {
    let q = 1.0 - p;
    if x > trials {
        return f64::NEG_INFINITY;
    }
    if x == 0 {
        return trials as f64 * (-p).ln_1p();
    }
    if x == trials {
        return trials as f64 * p.ln();
    }
    let n = trials as f64;
    let xf = x as f64;
    let rest = n - xf;
    stirling_error(trials)
        - stirling_error(x)
        - stirling_error(trials - x)
        - deviance(xf, n * p)
        - deviance(rest, n * q)
        + 0.5 * (n / (2.0 * PI * xf * rest)).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_exp_basics() {
        assert!((log_add_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, -3.0), -3.0);
        assert!((log_sum_exp(&[1f64.ln(), 2f64.ln(), 3f64.ln()]) - 6f64.ln()).abs() < 1e-15);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn log1m_exp_both_branches() {
        // 1 - e^a = -a - a^2/2 - ... for tiny a
        assert!((log1m_exp(-1e-12) - (1e-12f64).ln()).abs() < 1e-11);
        for a in [-0.1f64, -0.5, -1.0, -30.0] {
            let direct = (1.0 - a.exp()).ln();
            let tol = 1e-10 * direct.abs().max(1.0);
            assert!((log1m_exp(a) - direct).abs() < tol, "{a}");
        }
    }

    #[test]
    fn pmf_matches_direct_product() {
        // C(10,3) 0.3^3 0.7^7
        let direct = (120.0 * 0.3f64.powi(3) * 0.7f64.powi(7)).ln();
        assert!((binomial_log_pmf(3, 10, 0.3) - direct).abs() < 1e-13);
        let direct = (0.5f64).powi(20).ln() + (184756f64).ln();
        assert!((binomial_log_pmf(10, 20, 0.5) - direct).abs() < 1e-13);
    }

    #[test]
    fn pmf_sums_to_one() {
        for &(n, p) in &[(50u64, 0.1), (300, 0.45), (1000, 0.9)] {
            let terms: Vec<f64> = (0..=n).map(|x| binomial_log_pmf(x, n, p)).collect();
            assert!(log_sum_exp(&terms).abs() < 1e-12, "n={n} p={p}");
        }
    }
}
