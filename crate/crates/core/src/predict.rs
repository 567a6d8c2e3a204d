//! Closed-form location of the t-sparsity number of `G(n,p)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::logspace::ln_factorial;
use crate::rates::RateParams;
use crate::threshold::Threshold;

/// `x ln x` with `0 ln 0 = 0`.
fn x_ln_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `log_b log_b(np)`, defined when `log_b(np) > 1`.
fn iterated_log(n: u64, params: &RateParams) -> Result<f64> {
    let inner = params.log_b(n as f64 * params.p());
    if !(inner > 1.0) {
        return Err(Error::domain(format!(
            "prediction outside formula validity: log_b(np) = {inner} must exceed 1"
        )));
    }
    Ok(params.log_b(inner))
}

/// Predicted t-sparsity number
/// `2 log_b n + (t-2) log_b log_b(np) - t log_b t + t log_b(2bpe) + 2 log_b(e/2) + 1`.
pub fn alpha_hat_sparse(n: u64, t: Threshold, params: &RateParams) -> Result<f64> {
    let ll = iterated_log(n, params)?;
    let t = t.to_f64();
    let lb = params.ln_b();
    Ok(
        2.0 * params.log_b(n as f64) + (t - 2.0) * ll - x_ln_x(t) / lb
            + t * params.log_b(2.0 * params.b() * params.p() * E)
            + 2.0 * params.log_b(E / 2.0)
            + 1.0,
    )
}

/// Predicted t-dependence number (maximum induced degree at most `t`):
/// `... + log_b(t^t / t!^2) + t log_b(2bp/e) + ...`.
pub fn alpha_dependence(n: u64, t: u64, params: &RateParams) -> Result<f64> {
    let ll = iterated_log(n, params)?;
    let tf = t as f64;
    let lb = params.ln_b();
    let ratio = (x_ln_x(tf) - 2.0 * ln_factorial(t)) / lb;
    Ok(2.0 * params.log_b(n as f64)
        + (tf - 2.0) * ll
        + ratio
        + tf * params.log_b(2.0 * params.b() * params.p() / E)
        + 2.0 * params.log_b(E / 2.0)
        + 1.0)
}

/// `2 log_b(t! e^t / t^t)`, the gap between the sparse and dependent predictions.
pub fn sparse_dependence_gap(t: u64, params: &RateParams) -> f64 {
    let tf = t as f64;
    2.0 * (ln_factorial(t) + tf - x_ln_x(tf)) / params.ln_b()
}

/// Two candidate values of the t-sparsity number.
///
/// `k_minus = floor(α̂ - δ)` and `k_plus = floor(α̂ + δ)`; `k_plus_ceil`
/// carries the ceiling convention `ceil(α̂ + δ)` used for the first-moment
/// upper count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcentrationInterval {
    pub k_minus: i64,
    pub k_plus: i64,
    pub k_plus_ceil: i64,
}

impl ConcentrationInterval {
    pub fn contains(&self, value: i64) -> bool {
        self.k_minus <= value && value <= self.k_plus
    }

    /// The interval grown by `by` on both sides.
    pub fn widened(&self, by: i64) -> ConcentrationInterval {
        ConcentrationInterval {
            k_minus: self.k_minus - by,
            k_plus: self.k_plus + by,
            k_plus_ceil: self.k_plus_ceil + by,
        }
    }

    pub fn width(&self) -> i64 {
        self.k_plus - self.k_minus + 1
    }
}

pub fn concentration_interval(
    n: u64,
    t: Threshold,
    params: &RateParams,
    delta: f64,
) -> Result<ConcentrationInterval> {
    if !(delta > 0.0) {
        return Err(Error::domain(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let a = alpha_hat_sparse(n, t, params)?;
    Ok(interval_around(a, delta))
}

pub(crate) fn interval_around(alpha_hat: f64, delta: f64) -> ConcentrationInterval {
    ConcentrationInterval {
        k_minus: (alpha_hat - delta).floor() as i64,
        k_plus: (alpha_hat + delta).floor() as i64,
        k_plus_ceil: (alpha_hat + delta).ceil() as i64,
    }
}

/// Coarse references valid in other regimes of `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReference {
    /// `2 log_b(np)`: first-order size when `t = o(ln np)`.
    pub small_t_upper: f64,
    /// `t / p`: first-order size when `t` grows faster than `ln np`.
    pub large_t_value: f64,
}

pub fn regime_reference(n: u64, t: Threshold, params: &RateParams) -> Result<RegimeReference> {
    let np = n as f64 * params.p();
    if !(np > 1.0) {
        return Err(Error::domain(format!(
            "regime reference needs np > 1, got {np}"
        )));
    }
    Ok(RegimeReference {
        small_t_upper: 2.0 * params.log_b(np),
        large_t_value: t.to_f64() / params.p(),
    })
}

/// Flat prediction record `(n, p, t, delta, alpha_hat, k_minus, k_plus)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub n: u64,
    pub p: f64,
    pub t: Threshold,
    pub delta: f64,
    pub alpha_hat: f64,
    pub k_minus: i64,
    pub k_plus: i64,
}

impl Prediction {
    pub fn new(n: u64, t: Threshold, params: &RateParams, delta: f64) -> Result<Self> {
        let alpha_hat = alpha_hat_sparse(n, t, params)?;
        let iv = concentration_interval(n, t, params, delta)?;
        Ok(Prediction {
            n,
            p: params.p(),
            t,
            delta,
            alpha_hat,
            k_minus: iv.k_minus,
            k_plus: iv.k_plus,
        })
    }

    pub fn interval(&self) -> ConcentrationInterval {
        interval_around(self.alpha_hat, self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> RateParams {
        RateParams::new(0.5).unwrap()
    }

    /// Independent evaluation of the independence-number formula
    /// `2 log_b n - 2 log_b log_b(np) + 2 log_b(e/2) + 1`.
    fn alpha_independence(n: f64, p: f64) -> f64 {
        let lb = -(1.0 - p).ln();
        let log_b = |x: f64| x.ln() / lb;
        2.0 * log_b(n) - 2.0 * log_b(log_b(n * p)) + 2.0 * log_b(E / 2.0) + 1.0
    }

    #[test]
    fn alpha_hat_values() {
        let r = half();
        let a0 = alpha_hat_sparse(10_000, Threshold::ZERO, &r).unwrap();
        assert!((a0 - 21.2227).abs() < 1e-3, "{a0}");
        let a1 = alpha_hat_sparse(10_000, Threshold::integer(1), &r).unwrap();
        assert!((a1 - 27.2845).abs() < 1e-3, "{a1}");
        for &(n, p) in &[(100.0, 0.5), (1e4, 0.1), (1e6, 0.9)] {
            let rp = RateParams::new(p).unwrap();
            let a = alpha_hat_sparse(n as u64, Threshold::ZERO, &rp).unwrap();
            assert!((a - alpha_independence(n, p)).abs() < 1e-12);
        }
    }

    #[test]
    fn validity_guard() {
        // log_2(4 * 0.5) = 1 is not > 1
        let e = alpha_hat_sparse(4, Threshold::ZERO, &half()).unwrap_err();
        assert!(e.to_string().contains("formula validity"));
        assert!(alpha_dependence(4, 0, &half()).is_err());
    }

    #[test]
    fn dependence_values() {
        let r = half();
        let d0 = alpha_dependence(10_000, 0, &r).unwrap();
        let a0 = alpha_hat_sparse(10_000, Threshold::ZERO, &r).unwrap();
        assert!((d0 - a0).abs() < 1e-12);
        let d1 = alpha_dependence(10_000, 1, &r).unwrap();
        assert!((d1 - 24.3990).abs() < 1e-3, "{d1}");
        let a1 = alpha_hat_sparse(10_000, Threshold::integer(1), &r).unwrap();
        assert!((a1 - d1 - 2.0 * std::f64::consts::LOG2_E).abs() < 1e-4);
    }

    #[test]
    fn interval_examples() {
        let r = half();
        let iv = concentration_interval(10_000, Threshold::ZERO, &r, 0.3).unwrap();
        assert_eq!((iv.k_minus, iv.k_plus), (20, 21));
        assert_eq!(iv.k_plus_ceil, 22);
        let iv = concentration_interval(10_000, Threshold::integer(1), &r, 0.3).unwrap();
        assert_eq!((iv.k_minus, iv.k_plus), (26, 27));
        // 21.22 +- 0.1 stays inside [21, 22)
        let iv = concentration_interval(10_000, Threshold::ZERO, &r, 0.1).unwrap();
        assert_eq!(iv.width(), 1);
        assert!(concentration_interval(10_000, Threshold::ZERO, &r, 0.0).is_err());
    }

    #[test]
    fn regime_reference_examples() {
        let r = half();
        let a = regime_reference(10_000, Threshold::ZERO, &r).unwrap();
        assert!((a.small_t_upper - 2.0 * 5000f64.log2()).abs() < 1e-12);
        assert!((a.small_t_upper - 24.575).abs() < 1e-3);
        assert_eq!(a.large_t_value, 0.0);
        let b = regime_reference(10_000, Threshold::integer(3), &r).unwrap();
        let c = regime_reference(10_000, Threshold::integer(6), &r).unwrap();
        assert_eq!(c.large_t_value, 2.0 * b.large_t_value);
        assert_eq!(b.small_t_upper, a.small_t_upper);
        assert!(regime_reference(1, Threshold::ZERO, &r).is_err());
    }

    #[test]
    fn prediction_record() {
        let pr = Prediction::new(10_000, Threshold::ZERO, &half(), 0.3).unwrap();
        assert_eq!((pr.k_minus, pr.k_plus), (20, 21));
        let json = serde_json::to_string(&pr).unwrap();
        let back: Prediction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, pr);
    }
}
