//! First-moment sandwich, Monte Carlo set probabilities and the Janson trend.

use proptest::prelude::*;
use tsparsity::graphs::{gnp_sample, subset_stats};
use tsparsity::moments::{janson_bound, log_expected_count, OverlapScenario};
use tsparsity::predict::concentration_interval;
use tsparsity::rates::{pairs, sparse_prob, SparseMode};
use tsparsity::{RateParams, Threshold};

#[test]
fn expected_count_sandwich() {
    let mut checked = 0;
    for n in [100u64, 10_000, 1_000_000] {
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let params = RateParams::new(p).unwrap();
            for t in 1..=3u64 {
                for k in 2..=60u64.min(n) {
                    if (t as f64) > p * (k - 1) as f64 {
                        continue;
                    }
                    let r = log_expected_count(n, k, Threshold::integer(t), &params).unwrap();
                    let (lo, hi) = (r.log_e_lower.unwrap(), r.log_e_upper.unwrap());
                    assert!(r.log_e_exact <= hi + 1e-9, "n={n} p={p} t={t} k={k}");
                    if (k * t) % 2 == 0 {
                        assert!(
                            lo <= r.log_e_exact,
                            "n={n} p={p} t={t} k={k}: {lo} > {}",
                            r.log_e_exact
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 500);
}

#[test]
fn fixed_set_probability_by_simulation() {
    const DRAWS: u64 = 10_000;
    for (n, k, t, p) in [
        (10usize, 5u64, 0u64, 0.5),
        (12, 6, 1, 0.5),
        (14, 8, 2, 0.3),
        (14, 7, 3, 0.7),
    ] {
        let params = RateParams::new(p).unwrap();
        let th = Threshold::integer(t);
        let set: Vec<usize> = (0..k as usize).collect();
        let hits = (0..DRAWS)
            .filter(|&s| {
                let g = gnp_sample(n, p, 0xfeed_0000 + s).unwrap();
                subset_stats(&g, &set).unwrap().edges as u64 <= th.edge_quota(k)
            })
            .count() as f64;
        let freq = hits / DRAWS as f64;
        let prob = sparse_prob(k, th, &params, SparseMode::Exact)
            .unwrap()
            .exp();
        let se = (prob * (1.0 - prob) / DRAWS as f64).sqrt();
        assert!(
            (freq - prob).abs() <= 3.0 * se,
            "n={n} k={k} t={t}: {freq} vs {prob}"
        );
    }
}

#[test]
fn janson_bound_falls_with_n() {
    let params = RateParams::new(0.5).unwrap();
    let mut last = f64::INFINITY;
    for n in [1_000u64, 10_000, 100_000] {
        let k = concentration_interval(n, Threshold::ZERO, &params, 0.3)
            .unwrap()
            .k_minus as u64;
        let j = janson_bound(n, k, Threshold::ZERO, &params, 0.2, 0.1).unwrap();
        assert!(j.log_bound < last, "n={n}: {} >= {last}", j.log_bound);
        assert!(j.log_bound < 0.0);
        last = j.log_bound;
    }
}

proptest! {
    #[test]
    fn overlap_slots_are_conserved(k in 2u64..400, frac in 0.0f64..1.0, p in 0.05f64..0.95, t in 0u64..5, xi in 0.05f64..0.95) {
        let ell = 1 + ((k - 2) as f64 * frac) as u64;
        let params = RateParams::new(p).unwrap();
        let s = OverlapScenario::new(k, ell, Threshold::integer(t), &params, 0.2, xi).unwrap();
        prop_assert_eq!(s.overlap_pairs + s.cross_pairs, pairs(k));
        prop_assert!(s.lambda1 < s.lambda2);
        prop_assert!((s.mu as f64) <= (k * t) as f64 / 2.0);
    }
}
