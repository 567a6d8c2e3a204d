//! Exact solver against independent enumeration and the brute-force pipeline.

use proptest::prelude::*;
use tsparsity::experiments::{run_concentration_with, ExperimentConfig, SolverKind};
use tsparsity::graphs::{gnp_sample, is_t_sparse, Graph};
use tsparsity::solver::{greedy_peel, sparsity_bruteforce, sparsity_exact};
use tsparsity::{RateParams, Threshold};

/// Largest `s` such that some `s`-subset spans at most `s * t / 2` edges,
/// found by enumerating subsets per size with an adjacency matrix.
fn enumerate_sparsity(g: &Graph, num: u64, den: u64) -> usize {
    let n = g.n();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| g.has_edge(u, v)).collect())
        .collect();
    fn any_subset(
        adj: &[Vec<bool>],
        size: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        edges: u64,
        num: u64,
        den: u64,
    ) -> bool {
        if chosen.len() == size {
            return 2 * edges * den <= num * size as u64;
        }
        for v in start..adj.len() {
            if adj.len() - v < size - chosen.len() {
                break;
            }
            let add = chosen.iter().filter(|&&u| adj[u][v]).count() as u64;
            chosen.push(v);
            let hit = any_subset(adj, size, v + 1, chosen, edges + add, num, den);
            chosen.pop();
            if hit {
                return true;
            }
        }
        false
    }
    (1..=n)
        .rev()
        .find(|&s| any_subset(&adj, s, 0, &mut Vec::new(), 0, num, den))
        .unwrap_or(0)
}

#[test]
fn enumeration_agrees_on_random_graphs() {
    for seed in 0..60u64 {
        let n = 6 + (seed % 7) as usize;
        let p = [0.2, 0.5, 0.8][(seed % 3) as usize];
        let g = gnp_sample(n, p, seed).unwrap();
        for (num, den) in [(0u64, 1u64), (1, 1), (3, 2), (2, 1), (3, 1)] {
            let t: Threshold = format!("{num}/{den}").parse().unwrap();
            let res = sparsity_exact(&g, t, u64::MAX);
            assert!(res.optimal);
            assert_eq!(
                res.size,
                enumerate_sparsity(&g, num, den),
                "seed {seed} t {t}"
            );
            assert!(is_t_sparse(&g, &res.witness, t).unwrap());
        }
    }
}

#[test]
fn named_graphs() {
    let pet = Graph::petersen();
    assert_eq!(sparsity_exact(&pet, Threshold::ZERO, u64::MAX).size, 4);
    assert_eq!(enumerate_sparsity(&pet, 0, 1), 4);
    assert_eq!(
        enumerate_sparsity(&pet, 1, 1),
        sparsity_exact(&pet, Threshold::integer(1), u64::MAX).size
    );
    let c7 = Graph::cycle(7);
    for t in 0..3u64 {
        assert_eq!(
            sparsity_exact(&c7, Threshold::integer(t), u64::MAX).size,
            enumerate_sparsity(&c7, t, 1)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_matches_bruteforce(seed in any::<u64>(), n in 1usize..16, p in 0.05f64..0.95, num in 0u64..8, den in 1u64..4) {
        let g = gnp_sample(n, p, seed).unwrap();
        let t = Threshold::new(num, den).unwrap();
        let exact = sparsity_exact(&g, t, u64::MAX);
        let brute = sparsity_bruteforce(&g, t).unwrap();
        prop_assert_eq!(exact.size, brute.size);
        prop_assert!(is_t_sparse(&g, &exact.witness, t).unwrap());
        prop_assert!(is_t_sparse(&g, &brute.witness, t).unwrap());
        prop_assert!(greedy_peel(&g, t).size <= exact.size);
    }
}

fn config(n: usize, p: f64, t: u64, samples: u64, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        n,
        params: RateParams::new(p).unwrap(),
        t: Threshold::integer(t),
        delta: 0.3,
        samples,
        master_seed: seed,
        solver_budget: u64::MAX,
        workers: 4,
    }
}

#[test]
fn pipeline_matches_bruteforce_pipeline() {
    for (n, p, t) in [
        (12usize, 0.5, 0u64),
        (14, 0.5, 1),
        (14, 0.2, 2),
        (13, 0.8, 3),
    ] {
        let cfg = config(n, p, t, 40, n as u64 * 31 + t);
        let exact = run_concentration_with(&cfg, SolverKind::Exact).unwrap();
        let brute = run_concentration_with(&cfg, SolverKind::Bruteforce).unwrap();
        assert_eq!(exact, brute, "n={n} p={p} t={t}");
    }
}

#[test]
fn independence_numbers_at_twenty_vertices() {
    let cfg = config(20, 0.5, 0, 100, 99);
    let exact = run_concentration_with(&cfg, SolverKind::Exact).unwrap();
    let brute = run_concentration_with(&cfg, SolverKind::Bruteforce).unwrap();
    assert_eq!(exact.histogram, brute.histogram);
    assert_eq!(exact.solved, 100);
}
