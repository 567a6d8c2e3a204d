//! First and second moments of the number of t-sparse `k`-sets in `G(n,p)`.
//!
//! `E = C(n,k) Pr(A sparse)` is computed exactly from the binomial CDF. The
//! pair-correlation sum `Δ = Σ_ℓ f(ℓ)`, `f(ℓ) = C(n,k) C(k,ℓ) C(n-k,k-ℓ) p(k,ℓ)`
//! over overlap sizes `ℓ`, is bounded term by term in three regimes split at
//! `λ₁ = εk/2` and `λ₂ = (1-ε)k`:
//!
//! 1. `ℓ < λ₁`: `f(ℓ) <= 2 E² s_ℓ` with
//!    `s_ℓ = C(k,ℓ)² ℓ! b^{C(ℓ,2)} / n^ℓ`.
//! 2. `λ₁ <= ℓ < λ₂`: the counting ratio is bounded by `2^{2k+1} (k/n)^ℓ` and
//!    the two-set probability by Chernoff bounds on the overlap and on the
//!    private edges of each set, all with the exact rate function.
//! 3. `ℓ >= λ₂`: conditioning on the overlap edge count splits `p(k,ℓ)` at
//!    `μ` into `p₁` and `p₂`, each bounded separately.
//!
//! Regimes 1 and 2 can use either the exact counting ratio
//! `C(k,ℓ) C(n-k,k-ℓ) / C(n,k)` or the closed-form inequalities above
//! ([`RatioForm`]). The closed forms hold only for large `n` and are loose by
//! many orders of magnitude at `n <= 10⁶`, so the exact ratio is the default.
//! Either way Δ̄ overestimates Δ, so [`janson_bound`] is a valid but weaker
//! form of the Janson inequality.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::{ln_binomial, ln_factorial, log_add_exp, log_sum_exp};
use crate::rates::{
    binom_cdf_log, lambda_star, log_lower_tail_bound, pairs, psi_solve, sparse_prob, RateParams,
    SparseMode, TailQuery,
};
use crate::threshold::Threshold;

pub const DEFAULT_EPS: f64 = 0.2;
pub const DEFAULT_XI: f64 = 0.1;

/// Logarithms of the expected number of t-sparse `k`-sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub n: u64,
    pub k: u64,
    pub t: Threshold,
    pub p: f64,
    pub log_e_exact: f64,
    /// Present when `1 <= t <= p(k-1)`.
    pub log_e_upper: Option<f64>,
    pub log_e_lower: Option<f64>,
}

pub fn log_expected_count(
    n: u64,
    k: u64,
    t: Threshold,
    params: &RateParams,
) -> Result<MomentReport> {
    if k < 2 || k > n {
        return Err(Error::domain(format!(
            "expected count needs 2 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let comb = ln_binomial(n, k);
    let exact = comb + sparse_prob(k, t, params, SparseMode::Exact)?;
    let upper = sparse_prob(k, t, params, SparseMode::Upper)
        .ok()
        .map(|v| comb + v);
    let lower = sparse_prob(k, t, params, SparseMode::Lower)
        .ok()
        .map(|v| comb + v);
    Ok(MomentReport {
        n,
        k,
        t,
        p: params.p(),
        log_e_exact: exact,
        log_e_upper: upper,
        log_e_lower: lower,
    })
}

fn ln_s(n: u64, k: u64, ell: u64, params: &RateParams) -> f64 {
    2.0 * ln_binomial(k, ell) + ln_factorial(ell) - ell as f64 * (n as f64).ln()
        + pairs(ell) as f64 * params.ln_b()
}

/// `ln s_ℓ = 2 ln C(k,ℓ) + ln ℓ! - ℓ ln n + C(ℓ,2) ln b`.
pub fn s_ell(n: u64, k: u64, ell: u64, params: &RateParams) -> Result<f64> {
    if ell < 2 || ell > k {
        return Err(Error::domain(format!(
            "s_ell needs 2 <= l <= k, got l = {ell}, k = {k}"
        )));
    }
    Ok(ln_s(n, k, ell, params))
}

/// `ln[C(k,ℓ) C(n-k,k-ℓ) / C(n,k)]`, the exact share of `k`-sets meeting a
/// fixed one in exactly `ℓ` vertices.
pub fn log_overlap_ratio(n: u64, k: u64, ell: u64) -> f64 {
    ln_binomial(k, ell) + ln_binomial(n - k, k - ell) - ln_binomial(n, k)
}

/// `ln[2 C(k,ℓ)² ℓ! / n^ℓ]`, the small-overlap bound on [`log_overlap_ratio`].
pub fn log_overlap_ratio_small(n: u64, k: u64, ell: u64) -> f64 {
    std::f64::consts::LN_2 + 2.0 * ln_binomial(k, ell) + ln_factorial(ell)
        - ell as f64 * (n as f64).ln()
}

/// `ln[2^{2k+1} (k/n)^ℓ]`, the mid-overlap bound on [`log_overlap_ratio`].
pub fn log_overlap_ratio_mid(n: u64, k: u64, ell: u64) -> f64 {
    (2 * k + 1) as f64 * std::f64::consts::LN_2 + ell as f64 * (k as f64 / n as f64).ln()
}

/// Counting factor used in the small- and mid-overlap regimes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatioForm {
    /// `ln C(k,ℓ) + ln C(n-k,k-ℓ) - ln C(n,k)` evaluated directly.
    #[default]
    Exact,
    /// `2 C(k,ℓ)² ℓ! / n^ℓ` below `λ₁`, `2^{2k+1} (k/n)^ℓ` up to `λ₂`.
    Displayed,
}

impl std::str::FromStr for RatioForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(RatioForm::Exact),
            "displayed" => Ok(RatioForm::Displayed),
            other => Err(Error::Invalid(format!(
                "unknown ratio form '{other}' (expected exact|displayed)"
            ))),
        }
    }
}

impl std::fmt::Display for RatioForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RatioForm::Exact => "exact",
            RatioForm::Displayed => "displayed",
        })
    }
}

/// Bookkeeping for two `k`-sets overlapping in `ℓ` vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapScenario {
    pub k: u64,
    pub ell: u64,
    pub t: Threshold,
    pub eps: f64,
    pub xi: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub psi: f64,
    /// `tk/2 - (k-ℓ)(k+ℓ-1) ψ p / 2` before flooring and clamping.
    pub mu_raw: f64,
    /// `max{0, floor(mu_raw)}`.
    pub mu: u64,
    /// Edge slots of one set outside the overlap, `(k-ℓ)(k+ℓ-1)/2`.
    pub cross_pairs: u64,
    /// Edge slots inside the overlap, `C(ℓ,2)`.
    pub overlap_pairs: u64,
    /// `kt / (ℓ(ℓ-1))`.
    pub x_overlap: f64,
    /// `kt / (k(k-1) - ℓ(ℓ-1))`.
    pub x_cross: f64,
}

impl OverlapScenario {
    pub fn new(
        k: u64,
        ell: u64,
        t: Threshold,
        params: &RateParams,
        eps: f64,
        xi: f64,
    ) -> Result<Self> {
        let psi = psi_solve(params, xi)?;
        Self::with_psi(k, ell, t, params, eps, xi, psi)
    }

    fn with_psi(
        k: u64,
        ell: u64,
        t: Threshold,
        params: &RateParams,
        eps: f64,
        xi: f64,
        psi: f64,
    ) -> Result<Self> {
        if !(eps > 0.0 && eps < 0.25) {
            return Err(Error::domain(format!(
                "regime parameter must satisfy 0 < eps < 1/4, got {eps}"
            )));
        }
        if k < 2 || ell < 1 || ell >= k {
            return Err(Error::domain(format!(
                "overlap needs 1 <= l <= k - 1, got l = {ell}, k = {k}"
            )));
        }
        let kf = k as f64;
        let half_kt = kf * t.to_f64() / 2.0;
        let cross_pairs = (k - ell) * (k + ell - 1) / 2;
        let overlap_pairs = pairs(ell);
        let mu_raw = half_kt - cross_pairs as f64 * psi * params.p();
        let ll1 = (ell * (ell - 1)) as f64;
        Ok(OverlapScenario {
            k,
            ell,
            t,
            eps,
            xi,
            lambda1: eps * kf / 2.0,
            lambda2: (1.0 - eps) * kf,
            psi,
            mu_raw,
            mu: mu_raw.floor().max(0.0) as u64,
            cross_pairs,
            overlap_pairs,
            x_overlap: if ll1 > 0.0 {
                kf * t.to_f64() / ll1
            } else {
                f64::INFINITY
            },
            x_cross: kf * t.to_f64() / ((k * (k - 1)) as f64 - ll1),
        })
    }

    pub fn regime(&self) -> u8 {
        let l = self.ell as f64;
        if l < self.lambda1 {
            1
        } else if l < self.lambda2 {
            2
        } else {
            3
        }
    }

    fn require_large_overlap(&self) -> Result<()> {
        if (self.ell as f64) < self.lambda2 {
            return Err(Error::domain(format!(
                "large-overlap bound needs l >= (1 - eps) k = {}, got l = {}",
                self.lambda2, self.ell
            )));
        }
        Ok(())
    }
}

/// `ln p₁ <= -C(ℓ,2) Λ*(μ / C(ℓ,2))`; `-inf` when `mu_raw < 0` (empty range,
/// covered entirely by the `p₂` bound).
pub fn log_p1_upper(s: &OverlapScenario, params: &RateParams) -> Result<f64> {
    s.require_large_overlap()?;
    if s.mu_raw < 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let slots = s.overlap_pairs as f64;
    if s.mu as f64 > params.p() * slots {
        return Err(Error::domain(format!(
            "p1 bound hypothesis mu <= p C(l,2) violated (mu = {}, p C(l,2) = {})",
            s.mu,
            params.p() * slots
        )));
    }
    Ok(-slots * lambda_star(s.mu as f64 / slots, params))
}

/// `ln p₂ <= -C(ℓ,2) Λ*(kt/(ℓ(ℓ-1))) - cross_pairs (2 - 2ξ) ln b`.
pub fn log_p2_upper(s: &OverlapScenario, params: &RateParams) -> Result<f64> {
    s.require_large_overlap()?;
    let slots = s.overlap_pairs as f64;
    let half_kt = s.k as f64 * s.t.to_f64() / 2.0;
    if half_kt > params.p() * slots {
        return Err(Error::domain(format!(
            "p2 bound hypothesis tk/2 <= p C(l,2) violated (tk/2 = {half_kt}, p C(l,2) = {})",
            params.p() * slots
        )));
    }
    Ok(-slots * lambda_star(s.x_overlap, params)
        - s.cross_pairs as f64 * (2.0 - 2.0 * s.xi) * params.ln_b())
}

/// Upper bound on `ln f(ℓ)` together with the regime that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapBound {
    pub ell: u64,
    pub regime: u8,
    pub log_f_upper: f64,
}

/// Quantities shared by every overlap size of one `(n, k, t)` configuration.
#[derive(Clone, Debug)]
pub struct OverlapContext {
    pub n: u64,
    pub k: u64,
    pub t: Threshold,
    pub params: RateParams,
    pub eps: f64,
    pub xi: f64,
    pub psi: f64,
    /// `ln Pr(a fixed k-set is t-sparse)`.
    pub log_pr_sparse: f64,
    pub log_e: f64,
    pub ratio: RatioForm,
}

impl OverlapContext {
    pub fn new(
        n: u64,
        k: u64,
        t: Threshold,
        params: &RateParams,
        eps: f64,
        xi: f64,
    ) -> Result<Self> {
        let report = log_expected_count(n, k, t, params)?;
        let psi = psi_solve(params, xi)?;
        Ok(OverlapContext {
            n,
            k,
            t,
            params: *params,
            eps,
            xi,
            psi,
            log_pr_sparse: report.log_e_exact - ln_binomial(n, k),
            log_e: report.log_e_exact,
            ratio: RatioForm::Exact,
        })
    }

    pub fn with_ratio(mut self, ratio: RatioForm) -> Self {
        self.ratio = ratio;
        self
    }

    pub fn scenario(&self, ell: u64) -> Result<OverlapScenario> {
        OverlapScenario::with_psi(
            self.k,
            ell,
            self.t,
            &self.params,
            self.eps,
            self.xi,
            self.psi,
        )
    }

    /// Smallest overlap size in the large-overlap regime.
    pub fn lambda2_index(&self) -> u64 {
        ((1.0 - self.eps) * self.k as f64).ceil() as u64
    }

    pub fn bound(&self, ell: u64) -> Result<OverlapBound> {
        let s = self.scenario(ell)?;
        let (n, k) = (self.n, self.k);
        let pr = &self.params;
        let regime = s.regime();
        let exact = self.ratio == RatioForm::Exact;
        let counting = |displayed: f64| {
            if exact {
                log_overlap_ratio(n, k, ell)
            } else {
                displayed
            }
        };
        let log_f_upper = match regime {
            1 => {
                2.0 * self.log_e
                    + counting(log_overlap_ratio_small(n, k, ell))
                    + pairs(ell) as f64 * pr.ln_b()
            }
            2 => {
                let half_kt = k as f64 * self.t.to_f64() / 2.0;
                let inner = log_lower_tail_bound(s.overlap_pairs as f64, half_kt, pr);
                let private = log_lower_tail_bound(s.cross_pairs as f64, half_kt, pr);
                2.0 * self.log_e
                    + counting(log_overlap_ratio_mid(n, k, ell))
                    + inner
                    + 2.0 * private
                    - 2.0 * self.log_pr_sparse
            }
            _ => {
                let count = ln_binomial(n, k) + ln_binomial(k, ell) + ln_binomial(n - k, k - ell);
                count + log_add_exp(log_p1_upper(&s, pr)?, log_p2_upper(&s, pr)?)
            }
        };
        Ok(OverlapBound {
            ell,
            regime,
            log_f_upper,
        })
    }
}

pub fn overlap_upper(
    n: u64,
    k: u64,
    ell: u64,
    t: Threshold,
    params: &RateParams,
    eps: f64,
    xi: f64,
) -> Result<OverlapBound> {
    OverlapContext::new(n, k, t, params, eps, xi)?.bound(ell)
}

/// Outcome of the Janson computation for one `(n, k, t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JansonReport {
    pub log_e: f64,
    /// `ln Δ̄`, the log of the summed overlap bounds.
    pub log_delta_bar: f64,
    /// `ln Pr(no t-sparse k-set) <= -E² / (E + Δ̄)`.
    pub log_bound: f64,
    pub rows: Vec<OverlapBound>,
}

/// `-E²/(E + Δ̄)` given `ln E` and `ln Δ̄`; `0` once `E` underflows.
pub fn janson_exponent(log_e: f64, log_delta_bar: f64) -> f64 {
    if log_e == f64::NEG_INFINITY {
        return 0.0;
    }
    -(2.0 * log_e - log_add_exp(log_e, log_delta_bar)).exp()
}

pub fn janson_bound(
    n: u64,
    k: u64,
    t: Threshold,
    params: &RateParams,
    eps: f64,
    xi: f64,
) -> Result<JansonReport> {
    janson_bound_with(&OverlapContext::new(n, k, t, params, eps, xi)?)
}

pub fn janson_bound_with(ctx: &OverlapContext) -> Result<JansonReport> {
    let k = ctx.k;
    let rows: Vec<OverlapBound> = (1..k)
        .into_par_iter()
        .map(|ell| ctx.bound(ell))
        .collect::<Result<_>>()?;
    let terms: Vec<f64> = rows.iter().map(|r| r.log_f_upper).collect();
    let log_delta_bar = log_sum_exp(&terms);
    Ok(JansonReport {
        log_e: ctx.log_e,
        log_delta_bar,
        log_bound: janson_exponent(ctx.log_e, log_delta_bar),
        rows,
    })
}

/// `ln Pr(Bin(C(k,2), p) <= floor(kt/2))` for the overlap-free comparison.
pub fn log_pr_sparse(k: u64, t: Threshold, params: &RateParams) -> f64 {
    binom_cdf_log(&TailQuery::new(pairs(k), t.edge_quota(k) as f64, *params))
}
