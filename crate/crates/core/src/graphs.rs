//! Bitset graphs, seeded `G(n,p)` sampling and the edge-list format.
//!
//! # Sampling stream
//!
//! [`gnp_sample`] draws from SplitMix64 (increment `0x9e3779b97f4a7c15`,
//! multipliers `0xbf58476d1ce4e5b9` and `0x94d049bb133111eb`) seeded with the
//! raw 64-bit seed. Pairs `(i, j)`, `i < j`, are visited in row-major order
//! and each consumes exactly one 64-bit draw `u`; the edge is present iff
//! `u < floor(p * 2^64)`. The sampled graph is therefore a pure function of
//! `(n, p, seed)` on every platform.
//!
//! # Edge-list format
//!
//! ASCII, newline terminated. The first line is `n m`, followed by `m` lines
//! `u v` with 0-indexed `u < v`, written in row-major order. Readers skip
//! blank lines and lines starting with `#`.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_rational::Ratio;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::threshold::Threshold;

/// Undirected simple graph on vertices `0..n`, one bitset row per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.edge_count())
            .finish()
    }
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        if n >= 3 {
            for u in 0..n {
                g.add_edge(u, (u + 1) % n);
            }
        }
        g
    }

    pub fn petersen() -> Self {
        #[rustfmt::skip]
        let edges = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ];
        Graph::from_edges(10, edges).expect("static edge list")
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::Invalid(format!("self-loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    /// Adjacency bitset of `u`.
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        let w = self.words;
        self.rows[u * w + v / 64] |= 1 << (v % 64);
        self.rows[v * w + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.rows
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row(u))
    }

    /// Edges `(u, v)` with `u < v` in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Number of neighbours of `u` inside the bitset `set`.
    pub fn degree_into(&self, u: usize, set: &[u64]) -> usize {
        self.row(u)
            .iter()
            .zip(set)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Symmetric adjacency with an empty diagonal.
    pub fn is_consistent(&self) -> bool {
        (0..self.n).all(|u| {
            !self.has_edge(u, u) && self.neighbors(u).all(|v| v < self.n && self.has_edge(v, u))
        })
    }
}

/// Set bits of a word slice in ascending order.
pub(crate) fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

pub(crate) fn set_from(n: usize, vertices: &[usize]) -> Result<Vec<u64>> {
    let mut set = vec![0u64; words_for(n)];
    for &v in vertices {
        if v >= n {
            return Err(Error::Invalid(format!("vertex {v} outside 0..{n}")));
        }
        set[v / 64] |= 1 << (v % 64);
    }
    Ok(set)
}

/// Include the pair iff the draw falls below `floor(p * 2^64)`.
fn inclusion_cutoff(p: f64) -> u128 {
    (p * 18446744073709551616.0).floor() as u128
}

/// Samples `G(n, p)`; see the module docs for the exact stream layout.
pub fn gnp_sample(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "edge probability must lie in [0, 1], got {p}"
        )));
    }
    let cutoff = inclusion_cutoff(p);
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if (rng.next_u64() as u128) < cutoff {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// Size, induced edge count and exact average degree of a vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetStats {
    pub size: usize,
    pub edges: usize,
    pub avg_degree: Ratio<u64>,
}

/// Statistics of `G[S]`. Repeated vertices count once.
pub fn subset_stats(g: &Graph, s: &[usize]) -> Result<SubsetStats> {
    let set = set_from(g.n, s)?;
    let size: usize = set.iter().map(|w| w.count_ones() as usize).sum();
    let twice: usize = bits(&set).map(|u| g.degree_into(u, &set)).sum();
    let edges = twice / 2;
    let avg_degree = if size == 0 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(twice as u64, size as u64)
    };
    Ok(SubsetStats {
        size,
        edges,
        avg_degree,
    })
}

/// `G[S]` has average degree at most `t`, decided in integers.
pub fn is_t_sparse(g: &Graph, s: &[usize], t: Threshold) -> Result<bool> {
    let st = subset_stats(g, s)?;
    Ok(t.admits(st.size as u64, st.edges as u64))
}

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", g.n, g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

fn parse_pair(line: &str, lineno: usize, what: &str) -> Result<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let mut next = |name: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("{what}: missing {name}"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("{what}: {name} {tok:?} is not a non-negative integer"),
        })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("{what}: trailing fields"),
        });
    }
    Ok((a, b))
}

/// Parses the edge-list format. Blank lines and lines starting with `#` are
/// skipped anywhere, so files may carry a commented header.
pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut lines = input.lines().enumerate().filter(|(_, line)| match line {
        Ok(l) => {
            let l = l.trim_start();
            !(l.is_empty() || l.starts_with('#'))
        }
        Err(_) => true,
    });
    let (n, m) = match lines.next() {
        Some((idx, line)) => {
            let line = line.map_err(|e| Error::Parse {
                line: idx + 1,
                msg: e.to_string(),
            })?;
            parse_pair(&line, idx + 1, "header")?
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: "empty input, expected header \"n m\"".into(),
            })
        }
    };
    let mut g = Graph::empty(n);
    let mut seen = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        let (u, v) = parse_pair(&line, lineno, "edge")?;
        if u >= n || v >= n {
            return Err(Error::Invalid(format!(
                "line {lineno}: edge ({u}, {v}) names a vertex outside 0..{n}"
            )));
        }
        if u == v {
            return Err(Error::Invalid(format!(
                "line {lineno}: self-loop at vertex {u}"
            )));
        }
        if g.has_edge(u, v) {
            return Err(Error::Invalid(format!(
                "line {lineno}: duplicate edge ({u}, {v})"
            )));
        }
        g.add_edge(u, v);
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header announces {m} edges, found {seen}"),
        });
    }
    Ok(g)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let path = path.as_ref();
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_edge_list(BufReader::new(f))
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_edge_list(g, BufWriter::new(f)).map_err(|e| Error::io(path, e))
}
