//! Bernoulli large-deviation rate function and binomial lower tails.
//!
//! Every probability here is a natural logarithm. `f64::NEG_INFINITY` stands
//! for probability zero and `f64::INFINITY` is the rate outside `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::{binomial_log_pmf, log1m_exp};
use crate::threshold::Threshold;

/// Default additive constant for the lower mode of [`sparse_prob`].
///
/// The bound is `exp(-C(k,2) Λ*(t/(k-1)) - ln(k)/2 + ln c0)`. The value below
/// is certified by the test suite on grids where `kt/2` is integral; it is
/// not a universal constant.
pub const SPARSE_LOWER_CONSTANT: f64 = 0.1;

const PSI_TOLERANCE: f64 = 1e-12;
const PSI_MAX_ITER: usize = 200;

/// Edge probability `p` with the derived constants `q = 1 - p`, `b = 1/q`
/// and `ln b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct RateParams {
    p: f64,
    q: f64,
    b: f64,
    ln_b: f64,
}

impl RateParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!(
                "edge probability must satisfy 0 < p < 1, got {p}"
            )));
        }
        let q = 1.0 - p;
        Ok(RateParams {
            p,
            q,
            b: 1.0 / q,
            ln_b: -(-p).ln_1p(),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn ln_b(&self) -> f64 {
        self.ln_b
    }

    /// `log_b(x)`.
    pub fn log_b(&self, x: f64) -> f64 {
        x.ln() / self.ln_b
    }
}

impl TryFrom<f64> for RateParams {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        RateParams::new(p)
    }
}

impl From<RateParams> for f64 {
    fn from(r: RateParams) -> f64 {
        r.p
    }
}

/// `Pr(Bin(trials, p) <= threshold)`.
#[derive(Clone, Copy, Debug)]
pub struct TailQuery {
    pub trials: u64,
    pub threshold: f64,
    pub params: RateParams,
}

impl TailQuery {
    pub fn new(trials: u64, threshold: f64, params: RateParams) -> Self {
        TailQuery {
            trials,
            threshold,
            params,
        }
    }
}

/// Λ*(x) = x ln(x/p) + (1-x) ln((1-x)/q) on `[0, 1]`, `+inf` elsewhere.
pub fn lambda_star(x: f64, params: &RateParams) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return f64::INFINITY;
    }
    if x == 0.0 {
        return params.ln_b;
    }
    if x == 1.0 {
        return -params.p.ln();
    }
    let v = x * (x / params.p).ln() + (1.0 - x) * ((1.0 - x) / params.q).ln();
    // rounding can leave a -1e-17 residue next to the minimum
    v.max(0.0)
}

/// Chernoff exponent `-N Λ*(r/N)` for the lower tail, or `0` when `r` is at
/// or above the mean (the bound is then trivial).
pub fn log_lower_tail_bound(trials: f64, threshold: f64, params: &RateParams) -> f64 {
    if trials <= 0.0 || threshold >= trials * params.p {
        return 0.0;
    }
    if threshold < 0.0 {
        return f64::NEG_INFINITY;
    }
    -trials * lambda_star(threshold / trials, params)
}

/// Exact `ln Pr(Bin(N, p) <= floor(r))`.
///
/// The mass at the anchor term comes from the saddle-point expansion; the
/// remaining terms are accumulated by the pmf ratio recurrence, summing away
/// from the mode so the series decreases geometrically. Above the mode the
/// complementary upper tail is summed instead.
pub fn binom_cdf_log(query: &TailQuery) -> f64 {
    let n = query.trials;
    let r = query.threshold;
    if r.is_nan() || r < 0.0 {
        return f64::NEG_INFINITY;
    }
    if n == 0 || r >= n as f64 {
        return 0.0;
    }
    let r = r.floor() as u64;
    let p = query.params.p;
    let q = query.params.q;
    let mode = ((n + 1) as f64 * p).floor() as u64;

    if r <= mode {
        let anchor = binomial_log_pmf(r, n, p);
        let mut sum = 1.0;
        let mut term = 1.0;
        let mut i = r;
        while i > 0 {
            term *= i as f64 * q / ((n - i + 1) as f64 * p);
            sum += term;
            if term < sum * 1e-18 {
                break;
            }
            i -= 1;
        }
        (anchor + sum.ln()).min(0.0)
    } else {
        let start = r + 1;
        let anchor = binomial_log_pmf(start, n, p);
        let mut sum = 1.0;
        let mut term = 1.0;
        let mut i = start;
        while i < n {
            term *= (n - i) as f64 * p / ((i + 1) as f64 * q);
            sum += term;
            if term < sum * 1e-18 {
                break;
            }
            i += 1;
        }
        log1m_exp((anchor + sum.ln()).min(0.0))
    }
}

/// Natural-log endpoints of the two-sided binomial tail sandwich.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBounds {
    pub log_lower: f64,
    pub log_upper: f64,
}

/// `c · max{r^-1/2, (N-r)^-1/2} · e^{-NΛ*(r/N)} <= Pr(X <= r) <= e^{-NΛ*(r/N)}`.
///
/// `lower_constant` is the caller's `c`; the upper side holds for every
/// admissible query, the lower side only for a small enough `c`.
pub fn binom_tail_bounds(query: &TailQuery, lower_constant: f64) -> Result<TailBounds> {
    let n = query.trials as f64;
    let r = query.threshold;
    if !(lower_constant > 0.0) {
        return Err(Error::domain(format!(
            "tail bound constant must be positive, got {lower_constant}"
        )));
    }
    if r < 1.0 {
        return Err(Error::domain(format!(
            "tail bound hypothesis 1 <= r violated (r = {r})"
        )));
    }
    if r > n - 1.0 {
        return Err(Error::domain(format!(
            "tail bound hypothesis r <= N - 1 violated (r = {r}, N = {n})"
        )));
    }
    if r > n * query.params.p {
        return Err(Error::domain(format!(
            "tail bound hypothesis r <= Np violated (r = {r}, Np = {})",
            n * query.params.p
        )));
    }
    let log_upper = -n * lambda_star(r / n, &query.params);
    let prefactor = (-0.5 * r.ln()).max(-0.5 * (n - r).ln());
    Ok(TailBounds {
        log_lower: lower_constant.ln() + prefactor + log_upper,
        log_upper,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SparseMode {
    Exact,
    Upper,
    Lower,
}

impl std::str::FromStr for SparseMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(SparseMode::Exact),
            "upper" => Ok(SparseMode::Upper),
            "lower" => Ok(SparseMode::Lower),
            _ => Err(Error::Invalid(format!("unknown mode {s:?}"))),
        }
    }
}

/// Number of vertex pairs in a `k`-set.
pub fn pairs(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// `ln Pr(a fixed k-set of G(n,p) induces average degree <= t)`.
///
/// Exact mode reduces to `Pr(Bin(C(k,2), p) <= floor(kt/2))`. The bound modes
/// require `1 <= t <= p(k-1)`; the lower mode uses [`SPARSE_LOWER_CONSTANT`].
pub fn sparse_prob(k: u64, t: Threshold, params: &RateParams, mode: SparseMode) -> Result<f64> {
    sparse_prob_with(k, t, params, mode, SPARSE_LOWER_CONSTANT)
}

/// [`sparse_prob`] with an explicit lower-mode constant `c0`.
pub fn sparse_prob_with(
    k: u64,
    t: Threshold,
    params: &RateParams,
    mode: SparseMode,
    c0: f64,
) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain(format!("sparse_prob needs k >= 2, got {k}")));
    }
    let slots = pairs(k);
    if mode == SparseMode::Exact {
        let quota = t.edge_quota(k);
        return Ok(binom_cdf_log(&TailQuery::new(slots, quota as f64, *params)));
    }
    let tf = t.to_f64();
    if tf < 1.0 {
        return Err(Error::domain(format!(
            "sparse-set bound hypothesis t >= 1 violated (t = {t})"
        )));
    }
    let cap = params.p * (k - 1) as f64;
    if tf > cap {
        return Err(Error::domain(format!(
            "sparse-set bound hypothesis t <= p(k-1) violated (t = {t}, p(k-1) = {cap})"
        )));
    }
    let upper = -(slots as f64) * lambda_star(tf / (k - 1) as f64, params);
    match mode {
        SparseMode::Upper => Ok(upper),
        _ => {
            if !(c0 > 0.0) {
                return Err(Error::domain(format!(
                    "lower constant must be positive, got {c0}"
                )));
            }
            Ok(upper - 0.5 * (k as f64).ln() + c0.ln())
        }
    }
}

/// The unique `ψ ∈ (0,1)` with `Λ*(ψ p) = (1 - ξ) ln b`, by bisection.
pub fn psi_solve(params: &RateParams, xi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::domain(format!(
            "tilt parameter must satisfy 0 < xi < 1, got {xi}"
        )));
    }
    let target = (1.0 - xi) * params.ln_b;
    // g(ψ) = Λ*(ψp) - target is strictly decreasing on [0, 1].
    let g = |psi: f64| lambda_star(psi * params.p, params) - target;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..PSI_MAX_ITER {
        if hi - lo <= PSI_TOLERANCE {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Exact and first-order rate shift when the argument `t/(k-1)` is scaled by `1 + ε`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCheck {
    /// `Λ*((1+ε)t/(k-1)) - Λ*(t/(k-1))`.
    pub exact_shift: f64,
    /// `-(ε t / k) ln(p k / t)`.
    pub approx_shift: f64,
}

impl ExpansionCheck {
    pub fn relative_error(&self) -> f64 {
        ((self.exact_shift - self.approx_shift) / self.approx_shift).abs()
    }
}

pub fn lambda_expansion_check(
    t: f64,
    k: u64,
    params: &RateParams,
    eps: f64,
) -> Result<ExpansionCheck> {
    if !(-1.0..=1.0).contains(&eps) {
        return Err(Error::domain(format!(
            "expansion needs |eps| <= 1, got {eps}"
        )));
    }
    if k < 2 {
        return Err(Error::domain(format!("expansion needs k >= 2, got {k}")));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("expansion needs t > 0, got {t}")));
    }
    let km1 = (k - 1) as f64;
    if t > params.p * km1 {
        return Err(Error::domain(format!(
            "expansion hypothesis t <= p(k-1) violated (t = {t}, p(k-1) = {})",
            params.p * km1
        )));
    }
    let base = t / km1;
    let exact_shift = lambda_star((1.0 + eps) * base, params) - lambda_star(base, params);
    let kf = k as f64;
    let approx_shift = -(eps * t / kf) * (params.p * kf / t).ln();
    Ok(ExpansionCheck {
        exact_shift,
        approx_shift,
    })
}
