//! Monte Carlo concentration runs and first-moment scans with flat-file export.
//!
//! Sample `i` of a run uses the graph seed [`sample_seed`]`(master, i)`, so a
//! run is reproducible from its config alone. Samples are solved on a rayon
//! pool of `workers` threads and collected back in index order; the summary
//! only depends on the config.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::ops::RangeInclusive;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::gnp_sample;
use crate::moments::log_expected_count;
use crate::predict::{alpha_hat_sparse, interval_around, ConcentrationInterval};
use crate::rates::RateParams;
use crate::solver::{sampler_start_hint, sparsity_bruteforce, sparsity_exact_with, SolveOptions};
use crate::threshold::Threshold;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Graph seed for sample `index`: the SplitMix64 output function applied to
/// `master + (index + 1) * 0x9e3779b97f4a7c15`.
///
/// The multiplier is odd and the finalizer is a bijection on 64-bit words,
/// so distinct indices under one master seed never share a graph seed.
pub fn sample_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub params: RateParams,
    pub t: Threshold,
    pub delta: f64,
    pub samples: u64,
    pub master_seed: u64,
    pub solver_budget: u64,
    /// Thread count; never affects results, so it is left out of exports.
    #[serde(skip, default = "one")]
    pub workers: usize,
}

fn one() -> usize {
    1
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Invalid("samples must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Invalid("workers must be at least 1".into()));
        }
        if !(self.delta > 0.0) {
            return Err(Error::domain(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

/// Which solver answers each sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Exact,
    /// Exhaustive enumeration; only for `n <= 24`.
    Bruteforce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub index: u64,
    pub seed: u64,
    /// `None` when the node budget ran out before optimality was proved.
    pub size: Option<usize>,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationSummary {
    pub config: ExperimentConfig,
    pub alpha_hat: f64,
    pub predicted: ConcentrationInterval,
    /// Observed t-sparsity number -> number of solved samples.
    pub histogram: BTreeMap<usize, u64>,
    pub solved: u64,
    pub unsolved: u64,
    /// Share of solved samples in `[k_minus, k_plus]`; `None` if none solved.
    pub hit_rate: Option<f64>,
    /// Same for `[k_minus - 1, k_plus + 1]`.
    pub widened_hit_rate: Option<f64>,
    /// Most frequent value, smallest on ties.
    pub mode: Option<usize>,
}

pub fn run_samples(config: &ExperimentConfig, kind: SolverKind) -> Result<Vec<SampleOutcome>> {
    config.validate()?;
    let opts = SolveOptions {
        budget: config.solver_budget,
        start: Some(sampler_start_hint(config.n, &config.params, config.t)),
    };
    let one = |index: u64| -> Result<SampleOutcome> {
        let seed = sample_seed(config.master_seed, index);
        let g = gnp_sample(config.n, config.params.p(), seed)?;
        let res = match kind {
            SolverKind::Exact => sparsity_exact_with(&g, config.t, &opts),
            SolverKind::Bruteforce => sparsity_bruteforce(&g, config.t)?,
        };
        Ok(SampleOutcome {
            index,
            seed,
            size: res.optimal.then_some(res.size),
            nodes: res.nodes_explored,
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| (0..config.samples).into_par_iter().map(one).collect())
}

pub fn summarize(
    config: &ExperimentConfig,
    outcomes: &[SampleOutcome],
) -> Result<ConcentrationSummary> {
    let alpha_hat = alpha_hat_sparse(config.n as u64, config.t, &config.params)?;
    let predicted = interval_around(alpha_hat, config.delta);
    let wide = predicted.widened(1);
    let mut histogram = BTreeMap::new();
    for size in outcomes.iter().filter_map(|o| o.size) {
        *histogram.entry(size).or_insert(0u64) += 1;
    }
    let solved: u64 = histogram.values().sum();
    let rate = |iv: &ConcentrationInterval| {
        (solved > 0).then(|| {
            let hits: u64 = histogram
                .iter()
                .filter(|(&v, _)| iv.contains(v as i64))
                .map(|(_, &c)| c)
                .sum();
            hits as f64 / solved as f64
        })
    };
    let mode = histogram
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(&v, _)| v);
    Ok(ConcentrationSummary {
        config: config.clone(),
        alpha_hat,
        predicted,
        hit_rate: rate(&predicted),
        widened_hit_rate: rate(&wide),
        histogram,
        solved,
        unsolved: outcomes.len() as u64 - solved,
        mode,
    })
}

pub fn run_concentration(config: &ExperimentConfig) -> Result<ConcentrationSummary> {
    run_concentration_with(config, SolverKind::Exact)
}

pub fn run_concentration_with(
    config: &ExperimentConfig,
    kind: SolverKind,
) -> Result<ConcentrationSummary> {
    // fail before sampling when the prediction is undefined
    alpha_hat_sparse(config.n as u64, config.t, &config.params)?;
    let outcomes = run_samples(config, kind)?;
    summarize(config, &outcomes)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub k: u64,
    pub log_e_exact: f64,
    pub log_e_upper: Option<f64>,
    pub log_e_lower: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentScan {
    pub n: u64,
    pub params: RateParams,
    pub t: Threshold,
    pub rows: Vec<ScanRow>,
    /// First `k` with `log_e_exact < 0` directly after a row with
    /// `log_e_exact >= 0`; `None` if the sign never flips in range.
    pub k_star: Option<u64>,
}

pub fn moment_scan(
    n: u64,
    params: &RateParams,
    t: Threshold,
    k_range: RangeInclusive<u64>,
) -> Result<MomentScan> {
    let (lo, hi) = (*k_range.start(), *k_range.end());
    if lo < 2 || hi > n || lo > hi {
        return Err(Error::domain(format!(
            "scan range must lie within [2, n = {n}], got {lo}..={hi}"
        )));
    }
    let rows = k_range
        .map(|k| {
            let r = log_expected_count(n, k, t, params)?;
            Ok(ScanRow {
                k,
                log_e_exact: r.log_e_exact,
                log_e_upper: r.log_e_upper,
                log_e_lower: r.log_e_lower,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let k_star = rows
        .windows(2)
        .find(|w| w[0].log_e_exact >= 0.0 && w[1].log_e_exact < 0.0)
        .map(|w| w[1].k);
    Ok(MomentScan {
        n,
        params: *params,
        t,
        rows,
        k_star,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(Error::Invalid(format!(
                "unknown format '{other}' (expected csv|jsonl)"
            ))),
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with one row per histogram bucket; config columns follow the fixed
/// leading columns.
pub fn concentration_csv(s: &ConcentrationSummary) -> String {
    let c = &s.config;
    let mut out = String::from(
        "value,count,predicted_low,predicted_high,hit_rate,widened_hit_rate,unsolved,alpha_hat,n,p,t,delta,samples,seed,budget\n",
    );
    for (value, count) in &s.histogram {
        writeln!(
            out,
            "{value},{count},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            s.predicted.k_minus,
            s.predicted.k_plus,
            opt(s.hit_rate),
            opt(s.widened_hit_rate),
            s.unsolved,
            s.alpha_hat,
            c.n,
            c.params.p(),
            c.t,
            c.delta,
            c.samples,
            c.master_seed,
            c.solver_budget
        )
        .unwrap();
    }
    out
}

pub fn scan_csv(scan: &MomentScan) -> String {
    let mut out = String::from("k,log_e_exact,log_e_upper,log_e_lower,n,p,t\n");
    for r in &scan.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.k,
            r.log_e_exact,
            opt(r.log_e_upper),
            opt(r.log_e_lower),
            scan.n,
            scan.params.p(),
            scan.t
        )
        .unwrap();
    }
    out
}

fn jsonl<T: Serialize>(value: &T) -> Result<String> {
    let mut line = serde_json::to_string(value)?;
    line.push('\n');
    Ok(line)
}

pub fn render_summary(s: &ConcentrationSummary, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(concentration_csv(s)),
        Format::Jsonl => jsonl(s),
    }
}

pub fn render_scan(scan: &MomentScan, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(scan_csv(scan)),
        Format::Jsonl => jsonl(scan),
    }
}

fn write_to(path: &Path, text: &str) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn export_summary(
    s: &ConcentrationSummary,
    format: Format,
    path: impl AsRef<Path>,
) -> Result<()> {
    write_to(path.as_ref(), &render_summary(s, format)?)
}

pub fn export_scan(scan: &MomentScan, format: Format, path: impl AsRef<Path>) -> Result<()> {
    write_to(path.as_ref(), &render_scan(scan, format)?)
}

/// Reads back every record of a JSONL export, skipping blank lines.
pub fn read_jsonl<T: for<'de> Deserialize<'de>, R: BufRead>(input: R) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?);
    }
    Ok(out)
}
