//! The t-sparsity number of dense random graphs.
//!
//! A vertex set is *t-sparse* when the subgraph it induces has average degree
//! at most `t`; the t-sparsity number of a graph is the order of its largest
//! t-sparse set, generalising the independence number (`t = 0`).
//!
//! The crate is organised by capability:
//!
//! * [`rates`]: the Bernoulli rate function Λ*, exact and bounded binomial
//!   lower tails, and the sparse-set probability of a fixed `k`-set.
//! * [`predict`]: closed-form location of the t-sparsity number of `G(n,p)`
//!   and its two-point concentration interval.
//! * [`graphs`]: bitset graphs, seeded `G(n,p)` sampling, edge-list I/O.
//! * [`solver`]: exact branch-and-bound, brute force and greedy peeling.
//! * [`moments`]: first moments and the overlap decomposition behind the
//!   Janson lower-tail bound.
//! * [`experiments`]: reproducible Monte Carlo concentration runs and
//!   first-moment scans with CSV/JSONL export.
//! * [`cli`]: the argument parser behind the `tsparsity` binary.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod graphs;
pub mod logspace;
pub mod moments;
pub mod predict;
pub mod rates;
pub mod solver;
pub mod threshold;

pub use error::{Error, Result};
pub use graphs::Graph;
pub use rates::RateParams;
pub use threshold::Threshold;
