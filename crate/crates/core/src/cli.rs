//! Command-line front end.
//!
//! Every subcommand first echoes its resolved configuration as `# key = value`
//! lines on standard output, then writes its table either after them or, with
//! `--out`, to the named file. Usage errors exit with status 2, failures
//! inside the library with status 1.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::error::Error;
use crate::experiments::{self, ExperimentConfig, Format};
use crate::graphs::{gnp_sample, read_graph, to_edge_list};
use crate::moments::{janson_bound_with, OverlapContext, RatioForm, DEFAULT_EPS, DEFAULT_XI};
use crate::predict::{alpha_dependence, Prediction};
use crate::rates::{
    binom_cdf_log, binom_tail_bounds, lambda_expansion_check, lambda_star, psi_solve, sparse_prob,
    RateParams, SparseMode, TailQuery, SPARSE_LOWER_CONSTANT,
};
use crate::solver::{
    greedy_peel, sparsity_bruteforce, sparsity_exact_with, SolveOptions, DEFAULT_BUDGET,
};
use crate::threshold::Threshold;

#[derive(Parser, Debug)]
#[command(
    name = "tsparsity",
    version,
    about = "t-sparsity number of G(n,p): rates, predictions, moments, exact solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rate function, binomial tails, sparse-set probabilities, tilt level.
    Rates(RatesArgs),
    /// Predicted t-sparsity number and its two-point interval.
    Predict(PredictArgs),
    /// Draw a G(n,p) graph as an edge list.
    Sample(SampleArgs),
    /// Largest t-sparse set of an edge-list graph.
    Solve(SolveArgs),
    /// Expected count scan, overlap bounds and the Janson bound.
    Moments(MomentsArgs),
    /// Monte Carlo concentration run.
    Experiment(ExperimentArgs),
}

fn parse_p(s: &str) -> Result<RateParams, String> {
    let p: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    RateParams::new(p).map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("quantity").required(true)))]
struct RatesArgs {
    /// Λ*(x) for Bernoulli(p); needs --x.
    #[arg(long, group = "quantity")]
    lambda_star: bool,
    /// Exact ln Pr(Bin(trials, p) <= r); needs --trials, --r.
    #[arg(long, group = "quantity")]
    cdf: bool,
    /// Lower/upper tail sandwich; needs --trials, --r.
    #[arg(long, group = "quantity")]
    bounds: bool,
    /// ln Pr(a fixed k-set is t-sparse); needs --k.
    #[arg(long, group = "quantity")]
    sparse_prob: bool,
    /// Tilt level ψ with Λ*(ψp) = (1-ξ) ln b.
    #[arg(long, group = "quantity")]
    psi: bool,
    /// Exact vs first-order shift of Λ* at t/(k-1); needs --k.
    #[arg(long, group = "quantity")]
    expansion: bool,
    /// Edge probability, 0 < p < 1.
    #[arg(long, value_parser = parse_p)]
    p: RateParams,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    r: Option<f64>,
    /// Lower-bound constant for --bounds.
    #[arg(long, default_value_t = SPARSE_LOWER_CONSTANT)]
    c: f64,
    #[arg(long)]
    k: Option<u64>,
    /// Average-degree threshold, decimal or a/b.
    #[arg(long, default_value = "1")]
    t: Threshold,
    /// exact | upper | lower, for --sparse-prob.
    #[arg(long, default_value = "exact")]
    mode: SparseMode,
    #[arg(long, default_value_t = DEFAULT_XI)]
    xi: f64,
    /// Relative argument shift for --expansion.
    #[arg(long, default_value_t = DEFAULT_EPS, allow_negative_numbers = true)]
    eps: f64,
}

#[derive(Args, Debug)]
struct PredictArgs {
    /// Vertex counts, comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    n: Vec<u64>,
    #[arg(long, value_parser = parse_p)]
    p: RateParams,
    /// Thresholds, comma separated.
    #[arg(long, default_value = "0", value_delimiter = ',')]
    t: Vec<Threshold>,
    #[arg(long, default_value_t = 0.3)]
    delta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_p)]
    p: RateParams,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Edge-list file.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "0")]
    t: Threshold,
    /// Search node limit for the exact method.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// exact | bruteforce | greedy.
    #[arg(long, default_value = "exact", value_parser = ["exact", "bruteforce", "greedy"])]
    method: String,
    /// First size the exact sweep decides (defaults to n).
    #[arg(long)]
    start: Option<usize>,
    /// Append wall-clock milliseconds (output is then not reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, value_parser = parse_p)]
    p: RateParams,
    #[arg(long, default_value = "0")]
    t: Threshold,
    /// Set size for the overlap table; defaults to floor(alpha_hat - delta).
    #[arg(long, conflicts_with = "k_range")]
    k: Option<u64>,
    /// Expected-count scan over a..b instead of the overlap table.
    #[arg(long)]
    k_range: Option<String>,
    #[arg(long, default_value_t = 0.3)]
    delta: f64,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    #[arg(long, default_value_t = DEFAULT_XI)]
    xi: f64,
    /// exact | displayed counting ratio in the small and mid regimes.
    #[arg(long, default_value = "exact")]
    ratio: RatioForm,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_p)]
    p: RateParams,
    #[arg(long, default_value = "0")]
    t: Threshold,
    #[arg(long, default_value_t = 0.3)]
    delta: f64,
    #[arg(long, default_value_t = 50)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Solver threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// csv | jsonl.
    #[arg(long, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn need<T>(v: Option<T>, flag: &str, by: &str) -> Outcome<T> {
    v.ok_or_else(|| Failure::Usage(format!("error: {flag} is required with {by}")))
}

/// Text destined for stdout (`head`) and for stdout or `--out` (`body`).
#[derive(Default)]
struct Report {
    head: String,
    body: String,
}

impl Report {
    fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.echo("command", command);
        r
    }

    fn echo(&mut self, key: &str, value: impl std::fmt::Display) {
        writeln!(self.head, "# {key} = {value}").unwrap();
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn rates(a: &RatesArgs) -> Outcome<Report> {
    let mut rep = Report::new("rates");
    rep.echo("p", a.p.p());
    let body = &mut rep.body;
    if a.lambda_star {
        let x = need(a.x, "--x", "--lambda-star")?;
        rep.head += &format!("# quantity = lambda-star\n# x = {x}\n");
        writeln!(body, "x,lambda_star\n{x},{}", lambda_star(x, &a.p)).unwrap();
    } else if a.cdf || a.bounds {
        let trials = need(a.trials, "--trials", "--cdf/--bounds")?;
        let r = need(a.r, "--r", "--cdf/--bounds")?;
        let q = TailQuery::new(trials, r, a.p);
        if a.cdf {
            rep.head += &format!("# quantity = cdf\n# trials = {trials}\n# r = {r}\n");
            writeln!(body, "trials,r,log_cdf\n{trials},{r},{}", binom_cdf_log(&q)).unwrap();
        } else {
            rep.head += &format!(
                "# quantity = bounds\n# trials = {trials}\n# r = {r}\n# c = {}\n",
                a.c
            );
            let b = binom_tail_bounds(&q, a.c)?;
            writeln!(
                body,
                "trials,r,log_lower,log_cdf,log_upper\n{trials},{r},{},{},{}",
                b.log_lower,
                binom_cdf_log(&q),
                b.log_upper
            )
            .unwrap();
        }
    } else if a.sparse_prob {
        let k = need(a.k, "--k", "--sparse-prob")?;
        let mode = match a.mode {
            SparseMode::Exact => "exact",
            SparseMode::Upper => "upper",
            SparseMode::Lower => "lower",
        };
        rep.head += &format!(
            "# quantity = sparse-prob\n# k = {k}\n# t = {}\n# mode = {mode}\n",
            a.t
        );
        let v = sparse_prob(k, a.t, &a.p, a.mode)?;
        writeln!(body, "k,t,mode,log_prob\n{k},{},{mode},{v}", a.t).unwrap();
    } else if a.psi {
        rep.head += &format!("# quantity = psi\n# xi = {}\n", a.xi);
        writeln!(body, "xi,psi\n{},{}", a.xi, psi_solve(&a.p, a.xi)?).unwrap();
    } else {
        let k = need(a.k, "--k", "--expansion")?;
        rep.head += &format!(
            "# quantity = expansion\n# k = {k}\n# t = {}\n# eps = {}\n",
            a.t, a.eps
        );
        let c = lambda_expansion_check(a.t.to_f64(), k, &a.p, a.eps)?;
        writeln!(
            body,
            "k,t,eps,exact_shift,approx_shift,relative_error\n{k},{},{},{},{},{}",
            a.t,
            a.eps,
            c.exact_shift,
            c.approx_shift,
            c.relative_error()
        )
        .unwrap();
    }
    Ok(rep)
}

fn predict(a: &PredictArgs) -> Outcome<Report> {
    let mut rep = Report::new("predict");
    let list = |v: &[String]| v.join(",");
    rep.echo(
        "n",
        list(&a.n.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
    );
    rep.echo("p", a.p.p());
    rep.echo(
        "t",
        list(&a.t.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
    );
    rep.echo("delta", a.delta);
    rep.body += "n,p,t,delta,alpha_hat,k_minus,k_plus,k_plus_ceil,alpha_dependence\n";
    for &n in &a.n {
        for &t in &a.t {
            let pr = Prediction::new(n, t, &a.p, a.delta)?;
            let dep = if t.is_integer() {
                Some(alpha_dependence(n, t.numer(), &a.p)?)
            } else {
                None
            };
            writeln!(
                rep.body,
                "{},{},{},{},{},{},{},{},{}",
                pr.n,
                pr.p,
                pr.t,
                pr.delta,
                pr.alpha_hat,
                pr.k_minus,
                pr.k_plus,
                pr.interval().k_plus_ceil,
                opt(dep)
            )
            .unwrap();
        }
    }
    Ok(rep)
}

fn sample(a: &SampleArgs) -> Outcome<Report> {
    let mut rep = Report::new("sample");
    rep.echo("n", a.n);
    rep.echo("p", a.p.p());
    rep.echo("seed", a.seed);
    rep.body = to_edge_list(&gnp_sample(a.n, a.p.p(), a.seed)?);
    Ok(rep)
}

fn solve(a: &SolveArgs) -> Outcome<Report> {
    let mut rep = Report::new("solve");
    rep.echo("in", a.input.display());
    rep.echo("t", a.t);
    rep.echo("method", &a.method);
    rep.echo("budget", a.budget);
    rep.echo(
        "start",
        a.start.map(|s| s.to_string()).unwrap_or_else(|| "n".into()),
    );
    let g = read_graph(&a.input)?;
    let res = match a.method.as_str() {
        "bruteforce" => sparsity_bruteforce(&g, a.t)?,
        "greedy" => greedy_peel(&g, a.t),
        _ => sparsity_exact_with(
            &g,
            a.t,
            &SolveOptions {
                budget: a.budget,
                start: a.start,
            },
        ),
    };
    let witness: Vec<String> = res.witness.iter().map(|v| v.to_string()).collect();
    rep.body += "size,edges,optimal,nodes,witness";
    if a.timing {
        rep.body += ",millis";
    }
    write!(
        rep.body,
        "\n{},{},{},{},{}",
        res.size,
        res.edges,
        res.optimal,
        res.nodes_explored,
        witness.join(" ")
    )
    .unwrap();
    if a.timing {
        write!(rep.body, ",{}", res.elapsed.as_millis()).unwrap();
    }
    rep.body.push('\n');
    Ok(rep)
}

fn parse_range(s: &str) -> Outcome<(u64, u64)> {
    let bad = || Failure::Usage(format!("error: --k-range expects a..b, got '{s}'"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn moments(a: &MomentsArgs) -> Outcome<Report> {
    let mut rep = Report::new("moments");
    rep.echo("n", a.n);
    rep.echo("p", a.p.p());
    rep.echo("t", a.t);
    if let Some(range) = &a.k_range {
        let (lo, hi) = parse_range(range)?;
        rep.echo("k_range", format!("{lo}..{hi}"));
        let scan = experiments::moment_scan(a.n, &a.p, a.t, lo..=hi)?;
        rep.echo(
            "k_star",
            scan.k_star
                .map(|k| k.to_string())
                .unwrap_or_else(|| "none".into()),
        );
        rep.body = experiments::scan_csv(&scan);
        return Ok(rep);
    }
    let k = match a.k {
        Some(k) => k,
        None => {
            let p = Prediction::new(a.n, a.t, &a.p, a.delta)?;
            rep.echo("delta", a.delta);
            u64::try_from(p.k_minus)
                .map_err(|_| Error::Domain(format!("k_minus = {} is negative", p.k_minus)))?
        }
    };
    rep.echo("k", k);
    rep.echo("eps", a.eps);
    rep.echo("xi", a.xi);
    rep.echo("ratio", a.ratio);
    let ctx = OverlapContext::new(a.n, k, a.t, &a.p, a.eps, a.xi)?.with_ratio(a.ratio);
    let j = janson_bound_with(&ctx)?;
    rep.body += "ell,regime,log_f_upper\n";
    for r in &j.rows {
        writeln!(rep.body, "{},{},{}", r.ell, r.regime, r.log_f_upper).unwrap();
    }
    write!(
        rep.body,
        "\nlog_e_exact,log_delta_bar,janson_log_bound\n{},{},{}\n",
        j.log_e, j.log_delta_bar, j.log_bound
    )
    .unwrap();
    Ok(rep)
}

fn experiment(a: &ExperimentArgs, err: &mut dyn Write) -> Outcome<Report> {
    let mut rep = Report::new("experiment");
    let cfg = ExperimentConfig {
        n: a.n,
        params: a.p,
        t: a.t,
        delta: a.delta,
        samples: a.samples,
        master_seed: a.seed,
        solver_budget: a.budget,
        workers: a.workers,
    };
    rep.echo("n", cfg.n);
    rep.echo("p", cfg.params.p());
    rep.echo("t", cfg.t);
    rep.echo("delta", cfg.delta);
    rep.echo("samples", cfg.samples);
    rep.echo("seed", cfg.master_seed);
    rep.echo("budget", cfg.solver_budget);
    // thread count goes to stderr so stdout is identical for any pool size
    let _ = writeln!(err, "# workers = {}", cfg.workers);
    let s = experiments::run_concentration(&cfg)?;
    rep.echo("alpha_hat", s.alpha_hat);
    rep.echo(
        "interval",
        format!("{}..{}", s.predicted.k_minus, s.predicted.k_plus),
    );
    rep.echo(
        "mode",
        s.mode
            .map(|m| m.to_string())
            .unwrap_or_else(|| "none".into()),
    );
    rep.echo("solved", s.solved);
    rep.echo("unsolved", s.unsolved);
    rep.echo(
        "hit_rate",
        s.hit_rate
            .map(|h| h.to_string())
            .unwrap_or_else(|| "undefined".into()),
    );
    rep.echo(
        "widened_hit_rate",
        s.widened_hit_rate
            .map(|h| h.to_string())
            .unwrap_or_else(|| "undefined".into()),
    );
    rep.body = experiments::render_summary(&s, a.format)?;
    Ok(rep)
}

fn dispatch(cli: &Cli, err: &mut dyn Write) -> Outcome<(Report, Option<PathBuf>)> {
    Ok(match &cli.command {
        Command::Rates(a) => (rates(a)?, None),
        Command::Predict(a) => (predict(a)?, a.out.clone()),
        Command::Sample(a) => (sample(a)?, a.out.clone()),
        Command::Solve(a) => (solve(a)?, a.out.clone()),
        Command::Moments(a) => (moments(a)?, a.out.clone()),
        Command::Experiment(a) => (experiment(a, err)?, a.out.clone()),
    })
}

/// Parses `args` (program name first) and runs the subcommand; returns the
/// process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            let text = e.render().to_string();
            let _ = writeln!(
                err,
                "{}",
                text.lines().next().unwrap_or("error: invalid arguments")
            );
            return 2;
        }
    };
    match dispatch(&cli, err) {
        Ok((rep, path)) => {
            let written = match &path {
                Some(path) => std::fs::write(path, &rep.body).map_err(|e| Error::io(path, e)),
                None => Ok(()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
            let _ = out.write_all(rep.head.as_bytes());
            if path.is_none() {
                let _ = out.write_all(rep.body.as_bytes());
            }
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "{msg}");
            2
        }
        Err(Failure::Run(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
