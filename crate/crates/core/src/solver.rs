//! Largest t-sparse vertex set: exact search, exhaustive oracle, greedy peel.
//!
//! The exact solver sweeps candidate sizes `k` and, for each, decides whether
//! some `k`-set induces at most `floor(kt/2)` edges. Feasibility is monotone
//! in `k`: deleting a maximum-degree vertex from a t-sparse set never raises
//! its average degree. A feasible `k` followed by an infeasible `k + 1`
//! therefore certifies the optimum, whichever size the sweep starts from.
//!
//! The decision procedure branches include/exclude on the candidate with the
//! fewest edges into the partial set. A node is pruned when the candidates
//! cannot fill the set, or when a lower bound on the edges still to come
//! exceeds the remaining quota. The bound covers the candidates greedily by
//! cliques: taking `r` vertices of one clique costs at least their edges into
//! the partial set plus `C(r, 2)`, so the cheapest completion is the sum of
//! the smallest marginal costs `deg + j` over all cliques.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{bits, words_for, Graph};
use crate::rates::{pairs, RateParams};
use crate::threshold::Threshold;

/// Node budget used when the caller does not set one.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// Largest graph the exhaustive oracle accepts.
pub const BRUTEFORCE_MAX_N: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparsityResult {
    pub size: usize,
    pub witness: Vec<usize>,
    pub edges: usize,
    /// The search was exhausted, so no larger t-sparse set exists.
    pub optimal: bool,
    pub nodes_explored: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub budget: u64,
    /// First size the sweep decides; `None` starts from `n`.
    pub start: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: DEFAULT_BUDGET,
            start: None,
        }
    }
}

/// Sweep start for graphs drawn from `G(n, p)`:
/// `min(n, floor(2 log_b(np)) + ceil(t * ceil(log_b log_b(np))) + 2)`.
///
/// Only a starting point; the answer never depends on it.
pub fn sampler_start_hint(n: usize, params: &RateParams, t: Threshold) -> usize {
    let lnp = params.log_b(n as f64 * params.p());
    if !(lnp > 1.0) {
        return n;
    }
    let ll = params.log_b(lnp).ceil();
    let hint = (2.0 * lnp).floor() + (t.to_f64() * ll).ceil() + 2.0;
    (hint.max(1.0) as usize).min(n)
}

enum Decision {
    Found(Vec<usize>),
    Infeasible,
    Exhausted,
}

struct Search<'g> {
    g: &'g Graph,
    k: usize,
    quota: u64,
    nodes: u64,
    budget: u64,
}

#[derive(Clone, Copy)]
struct Cand {
    v: usize,
    /// Edges from `v` into the partial set.
    deg: u64,
}

impl Search<'_> {
    fn completion_bound(&self, cand: &[Cand], need: usize, slack: u64) -> bool {
        let words = self.g.words();
        // clique cover: members of each clique and their common neighbourhood
        let mut common: Vec<u64> = Vec::new();
        let mut fill: Vec<u64> = Vec::new();
        let mut marginal: Vec<u64> = Vec::with_capacity(cand.len());
        for c in cand {
            let row = self.g.row(c.v);
            let slot =
                (0..fill.len()).find(|&i| common[i * words + c.v / 64] >> (c.v % 64) & 1 == 1);
            match slot {
                Some(i) => {
                    for (a, b) in common[i * words..(i + 1) * words].iter_mut().zip(row) {
                        *a &= b;
                    }
                    marginal.push(c.deg + fill[i]);
                    fill[i] += 1;
                }
                None => {
                    common.extend_from_slice(row);
                    fill.push(1);
                    marginal.push(c.deg);
                }
            }
        }
        // candidates arrive in ascending `deg`, so within a clique the j-th
        // member (0-based) already carries the smallest available `deg + j`
        if need < marginal.len() {
            marginal.select_nth_unstable(need - 1);
        }
        let mut total = 0u64;
        for &m in &marginal[..need] {
            total += m;
            if total > slack {
                return true;
            }
        }
        false
    }

    fn dfs(&mut self, chosen: &mut Vec<usize>, edges: u64, mut cand: Vec<Cand>) -> Decision {
        loop {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Decision::Exhausted;
            }
            let need = self.k - chosen.len();
            if need == 0 {
                return Decision::Found(chosen.clone());
            }
            let slack = self.quota - edges;
            cand.retain(|c| c.deg <= slack);
            if cand.len() < need {
                return Decision::Infeasible;
            }
            // stable: ties keep ascending vertex order
            cand.sort_by_key(|c| c.deg);
            if self.completion_bound(&cand, need, slack) {
                return Decision::Infeasible;
            }
            let pick = cand.remove(0);
            let row = self.g.row(pick.v);
            let child_slack = slack - pick.deg;
            let child: Vec<Cand> = cand
                .iter()
                .map(|c| Cand {
                    v: c.v,
                    deg: c.deg + (row[c.v / 64] >> (c.v % 64) & 1),
                })
                .filter(|c| c.deg <= child_slack)
                .collect();
            chosen.push(pick.v);
            match self.dfs(chosen, edges + pick.deg, child) {
                Decision::Infeasible => {}
                other => return other,
            }
            chosen.pop();
        }
    }
}

/// Decides whether some `k`-set has at most `t`-average degree.
fn decide(g: &Graph, t: Threshold, k: usize, nodes: &mut u64, budget: u64) -> Decision {
    let n = g.n();
    if k > n {
        return Decision::Infeasible;
    }
    let quota = t.edge_quota(k as u64);
    if quota >= pairs(k as u64) {
        return Decision::Found((0..k).collect());
    }
    let mut search = Search {
        g,
        k,
        quota,
        nodes: *nodes,
        budget,
    };
    let cand = (0..n).map(|v| Cand { v, deg: 0 }).collect();
    let out = search.dfs(&mut Vec::with_capacity(k), 0, cand);
    *nodes = search.nodes;
    out
}

fn finish(
    g: &Graph,
    mut witness: Vec<usize>,
    optimal: bool,
    nodes: u64,
    t0: Instant,
) -> SparsityResult {
    witness.sort_unstable();
    let edges = induced_edges(g, &witness);
    SparsityResult {
        size: witness.len(),
        witness,
        edges,
        optimal,
        nodes_explored: nodes,
        elapsed: t0.elapsed(),
    }
}

fn induced_edges(g: &Graph, s: &[usize]) -> usize {
    let mut set = vec![0u64; words_for(g.n())];
    for &v in s {
        set[v / 64] |= 1 << (v % 64);
    }
    bits(&set).map(|u| g.degree_into(u, &set)).sum::<usize>() / 2
}

/// Exact t-sparsity number within a node budget.
pub fn sparsity_exact(g: &Graph, t: Threshold, budget: u64) -> SparsityResult {
    sparsity_exact_with(
        g,
        t,
        &SolveOptions {
            budget,
            start: None,
        },
    )
}

pub fn sparsity_exact_with(g: &Graph, t: Threshold, opts: &SolveOptions) -> SparsityResult {
    let t0 = Instant::now();
    let n = g.n();
    let lower = greedy_peel(g, t);
    let mut best = lower.witness;
    let mut nodes = 0u64;
    let floor_k = best.len();
    if floor_k == n {
        return finish(g, best, true, nodes, t0);
    }
    let start = opts.start.unwrap_or(n).clamp(floor_k, n);

    let climb = |from: usize, best: &mut Vec<usize>, nodes: &mut u64| -> bool {
        let mut k = from;
        loop {
            match decide(g, t, k, nodes, opts.budget) {
                Decision::Found(w) => *best = w,
                Decision::Infeasible => return true,
                Decision::Exhausted => return false,
            }
            k += 1;
        }
    };

    let optimal = if start == floor_k {
        climb(floor_k + 1, &mut best, &mut nodes)
    } else {
        match decide(g, t, start, &mut nodes, opts.budget) {
            Decision::Found(w) => {
                best = w;
                climb(start + 1, &mut best, &mut nodes)
            }
            Decision::Exhausted => false,
            Decision::Infeasible => {
                let mut k = start - 1;
                loop {
                    if k == floor_k {
                        break true;
                    }
                    match decide(g, t, k, &mut nodes, opts.budget) {
                        Decision::Found(w) => {
                            best = w;
                            break true;
                        }
                        Decision::Infeasible => k -= 1,
                        Decision::Exhausted => break false,
                    }
                }
            }
        }
    };
    finish(g, best, optimal, nodes, t0)
}

/// Exhaustive search over all `2^n` subsets.
pub fn sparsity_bruteforce(g: &Graph, t: Threshold) -> Result<SparsityResult> {
    let t0 = Instant::now();
    let n = g.n();
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::Guard(format!(
            "brute force refuses n = {n} > {BRUTEFORCE_MAX_N}"
        )));
    }
    let adj: Vec<u32> = (0..n).map(|u| g.row(u)[0] as u32).collect();
    let total = 1usize << n;
    let mut edges = vec![0u16; total];
    let mut best_mask = 0usize;
    let mut best_size = 0u32;
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let e = edges[rest] + (adj[low] & rest as u32).count_ones() as u16;
        edges[mask] = e;
        let size = mask.count_ones();
        if size > best_size && t.admits(size as u64, e as u64) {
            best_size = size;
            best_mask = mask;
        }
    }
    let witness: Vec<usize> = (0..n).filter(|&i| best_mask >> i & 1 == 1).collect();
    Ok(finish(g, witness, true, total as u64, t0))
}

/// Deletes a maximum-degree vertex (lowest index on ties) until the rest is
/// t-sparse. A lower bound only.
pub fn greedy_peel(g: &Graph, t: Threshold) -> SparsityResult {
    let t0 = Instant::now();
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|u| g.degree(u)).collect();
    let mut size = n;
    let mut edges = g.edge_count();
    let mut steps = 0u64;
    while !t.admits(size as u64, edges as u64) {
        let v = (0..n)
            .filter(|&u| alive[u])
            .max_by(|&a, &b| deg[a].cmp(&deg[b]).then(b.cmp(&a)))
            .expect("non-empty set is never rejected at size 0");
        alive[v] = false;
        size -= 1;
        edges -= deg[v];
        for u in g.neighbors(v) {
            if alive[u] {
                deg[u] -= 1;
            }
        }
        steps += 1;
    }
    let witness: Vec<usize> = (0..n).filter(|&u| alive[u]).collect();
    let mut r = finish(g, witness, false, steps, t0);
    r.elapsed = t0.elapsed();
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{gnp_sample, is_t_sparse};

    fn t(x: u64) -> Threshold {
        Threshold::integer(x)
    }

    fn exact(g: &Graph, th: Threshold) -> SparsityResult {
        let r = sparsity_exact(g, th, DEFAULT_BUDGET);
        assert!(r.optimal);
        assert!(is_t_sparse(g, &r.witness, th).unwrap());
        assert_eq!(r.witness.len(), r.size);
        r
    }

    #[test]
    fn small_named_graphs() {
        for th in [0, 1, 3] {
            assert_eq!(exact(&Graph::empty(5), t(th)).size, 5);
        }
        assert_eq!(exact(&Graph::complete(5), t(2)).size, 3);
        let c5 = Graph::cycle(5);
        assert_eq!(exact(&c5, t(1)).size, 3);
        assert_eq!(exact(&c5, t(0)).size, 2);
        assert_eq!(exact(&Graph::petersen(), t(0)).size, 4);
        assert_eq!(exact(&Graph::empty(1), t(0)).size, 1);
        assert_eq!(exact(&Graph::empty(0), t(0)).size, 0);
    }

    #[test]
    fn bruteforce_named_graphs() {
        let bf = |g: &Graph, x| sparsity_bruteforce(g, t(x)).unwrap().size;
        assert_eq!(bf(&Graph::empty(1), 0), 1);
        assert_eq!(bf(&Graph::complete(3), 0), 1);
        assert_eq!(bf(&Graph::complete(3), 2), 3);
        assert_eq!(bf(&Graph::complete(5), 2), 3);
        assert_eq!(bf(&Graph::cycle(5), 1), 3);
        assert_eq!(bf(&Graph::petersen(), 0), 4);
        let big = Graph::empty(25);
        assert!(matches!(
            sparsity_bruteforce(&big, t(0)),
            Err(Error::Guard(_))
        ));
    }

    #[test]
    fn greedy_traces() {
        assert_eq!(greedy_peel(&Graph::empty(6), t(0)).size, 6);
        let r = greedy_peel(&Graph::complete(5), t(2));
        assert_eq!(r.size, 3);
        // ties go to the lowest index, so 0 and 1 are peeled first
        assert_eq!(r.witness, vec![2, 3, 4]);
        assert_eq!(greedy_peel(&Graph::cycle(5), t(1)).size, 3);
        assert!(!greedy_peel(&Graph::cycle(5), t(1)).optimal);
    }

    #[test]
    fn half_integer_threshold() {
        // K4 minus an edge: 5 edges on 4 vertices, average 2.5
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let th = Threshold::new(5, 2).unwrap();
        assert_eq!(exact(&g, th).size, 4);
        let th = Threshold::new(12, 5).unwrap();
        assert_eq!(exact(&g, th).size, 3);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let g = gnp_sample(60, 0.5, 3).unwrap();
        let r = sparsity_exact(&g, t(0), 5);
        assert!(!r.optimal);
        assert!(is_t_sparse(&g, &r.witness, t(0)).unwrap());
        let full = sparsity_exact(&g, t(0), DEFAULT_BUDGET);
        assert!(full.optimal);
        assert!(r.size <= full.size);
    }

    #[test]
    fn start_hint_does_not_change_answer() {
        let g = gnp_sample(40, 0.5, 17).unwrap();
        let base = exact(&g, t(1)).size;
        for start in [1, 3, base - 1, base, base + 1, 20, 40, 400] {
            let r = sparsity_exact_with(
                &g,
                t(1),
                &SolveOptions {
                    budget: DEFAULT_BUDGET,
                    start: Some(start),
                },
            );
            assert!(r.optimal);
            assert_eq!(r.size, base, "start {start}");
        }
    }

    #[test]
    fn hint_formula() {
        let r = RateParams::new(0.5).unwrap();
        // floor(2 log2 50) = 11, ceil(log2 log2 50) = 3
        assert_eq!(sampler_start_hint(100, &r, t(0)), 13);
        assert_eq!(sampler_start_hint(100, &r, t(1)), 16);
        assert_eq!(sampler_start_hint(3, &r, t(0)), 3);
    }
}
