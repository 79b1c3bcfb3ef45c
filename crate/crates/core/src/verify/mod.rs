//! Reference oracles and result comparison.
//!
//! Oracles are single-threaded textbook algorithms. The ones with
//! super-linear cost refuse inputs above a fixed size; [`serial`] holds
//! unguarded serial references that also serve as timing baselines.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::kernels::{Coloring, UNREACHED};

pub mod serial;

pub const BC_ORACLE_LIMIT: usize = 2000;
pub const DENSE_ORACLE_LIMIT: usize = 4096;
pub const TC_ORACLE_LIMIT: usize = 2000;

fn guard(oracle: &'static str, limit: usize, n: usize) -> Result<()> {
    if n > limit {
        Err(Error::OracleSize { oracle, limit, n })
    } else {
        Ok(())
    }
}

fn check_source(g: &Graph, s: u32) -> Result<()> {
    if (s as usize) < g.num_vertices() {
        Ok(())
    } else {
        Err(Error::param(format!("source {s} out of range")))
    }
}

/// Hop counts by queue-based BFS; `UNREACHED` where no path exists.
pub fn oracle_bfs(g: &Graph, source: u32) -> Result<Vec<u32>> {
    check_source(g, source)?;
    let mut dist = vec![UNREACHED; g.num_vertices()];
    let mut queue = VecDeque::new();
    dist[source as usize] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u as usize) {
            if dist[v as usize] == UNREACHED {
                dist[v as usize] = dist[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }
    Ok(dist)
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f32);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Binary-heap Dijkstra. Unweighted graphs use unit weights; unreachable
/// vertices get `f32::INFINITY`.
pub fn oracle_dijkstra(g: &Graph, source: u32) -> Result<Vec<f32>> {
    check_source(g, source)?;
    if let Some(w) = g.weights() {
        if w.iter().any(|&x| x.is_nan() || x < 0.0 || !x.is_finite()) {
            return Err(Error::UnsupportedInput(
                "Dijkstra needs finite non-negative weights".into(),
            ));
        }
    }
    let mut dist = vec![f32::INFINITY; g.num_vertices()];
    let mut heap = BinaryHeap::new();
    dist[source as usize] = 0.0;
    heap.push(Reverse((Key(0.0), source)));
    while let Some(Reverse((Key(d), u))) = heap.pop() {
        if d > dist[u as usize] {
            continue;
        }
        let ws = g.neighbor_weights(u as usize);
        for (k, &v) in g.neighbors(u as usize).iter().enumerate() {
            let nd = d + ws.map_or(1.0, |w| w[k]);
            if nd < dist[v as usize] {
                dist[v as usize] = nd;
                heap.push(Reverse((Key(nd), v)));
            }
        }
    }
    Ok(dist)
}

/// Brandes from every source, halved on undirected graphs.
pub fn oracle_bc_allpairs(g: &Graph) -> Result<Vec<f64>> {
    guard("bc_allpairs", BC_ORACLE_LIMIT, g.num_vertices())?;
    let all: Vec<u32> = (0..g.num_vertices() as u32).collect();
    Ok(serial::bc(g, &all))
}

/// Power iteration with an explicit dense `n x n` transition matrix.
pub fn oracle_pagerank_dense(
    g: &Graph,
    damping: f64,
    tolerance: f64,
    max_iters: usize,
) -> Result<Vec<f64>> {
    let n = g.num_vertices();
    guard("pagerank_dense", DENSE_ORACLE_LIMIT, n)?;
    if n == 0 {
        return Err(Error::param("PageRank needs at least one vertex"));
    }
    let nf = n as f64;
    // column-stochastic: m[v][u] = 1/outdeg(u) for each edge u -> v; dangling columns are uniform
    let mut m = vec![0.0f64; n * n];
    for u in 0..n {
        let d = g.out_degree(u);
        if d == 0 {
            for v in 0..n {
                m[v * n + u] = 1.0 / nf;
            }
        } else {
            for &v in g.neighbors(u) {
                m[v as usize * n + u] += 1.0 / d as f64;
            }
        }
    }
    let mut p = vec![1.0 / nf; n];
    for _ in 0..max_iters {
        let next: Vec<f64> = (0..n)
            .map(|v| {
                let row = &m[v * n..(v + 1) * n];
                (1.0 - damping) / nf + damping * row.iter().zip(&p).map(|(a, b)| a * b).sum::<f64>()
            })
            .collect();
        let diff: f64 = next.iter().zip(&p).map(|(a, b)| (a - b).abs()).sum();
        p = next;
        if diff <= tolerance {
            break;
        }
    }
    Ok(p)
}

/// Union-find with path halving; each vertex is labeled with the smallest
/// id in its component.
pub fn oracle_cc_unionfind(g: &Graph) -> Result<Vec<u32>> {
    let n = g.num_vertices();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    for (u, v, _) in g.edges() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        // the smaller root wins, so every root is its set's minimum
        if a < b {
            parent[b as usize] = a;
        } else if b < a {
            parent[a as usize] = b;
        }
    }
    Ok((0..n as u32).map(|v| find(&mut parent, v)).collect())
}

/// Tests every vertex triple `u < v < w` against an adjacency bit matrix,
/// 64 values of `w` at a time.
pub fn oracle_tc_bruteforce(g: &Graph) -> Result<u64> {
    let n = g.num_vertices();
    guard("tc_bruteforce", TC_ORACLE_LIMIT, n)?;
    let words = n.div_ceil(64);
    let mut adj = vec![0u64; n * words];
    for (u, v, _) in g.edges() {
        if u != v {
            for (a, b) in [(u as usize, v as usize), (v as usize, u as usize)] {
                adj[a * words + b / 64] |= 1 << (b % 64);
            }
        }
    }
    let bit = |a: usize, b: usize| adj[a * words + b / 64] >> (b % 64) & 1 == 1;
    let mut count = 0u64;
    for u in 0..n {
        for v in u + 1..n {
            if !bit(u, v) {
                continue;
            }
            for k in (v + 1) / 64..words {
                let mut both = adj[u * words + k] & adj[v * words + k];
                if k == (v + 1) / 64 {
                    both &= u64::MAX.checked_shl(((v + 1) % 64) as u32).unwrap_or(0);
                }
                count += both.count_ones() as u64;
            }
        }
    }
    Ok(count)
}

/// Dense matrix-vector product; repeated entries are summed.
pub fn oracle_spmv_dense(a: &Graph, x: &[f64]) -> Result<Vec<f64>> {
    let n = a.num_vertices();
    guard("spmv_dense", DENSE_ORACLE_LIMIT, n)?;
    if x.len() != n {
        return Err(Error::param("vector length does not match the matrix"));
    }
    let mut dense = vec![0.0f64; n * n];
    for (i, j, w) in a.edges() {
        dense[i as usize * n + j as usize] += w.map_or(1.0, f64::from);
    }
    Ok((0..n)
        .map(|i| {
            dense[i * n..(i + 1) * n]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect())
}

/// Serial symmetric Gauss-Seidel. Each sweep visits rows in `order`
/// (ascending ids by default) and then in reverse.
pub fn oracle_gs_serial(
    a: &Graph,
    x: &[f64],
    b: &[f64],
    sweeps: usize,
    order: Option<&[u32]>,
) -> Result<Vec<f64>> {
    let n = a.num_vertices();
    if x.len() != n || b.len() != n {
        return Err(Error::param("vector lengths do not match the matrix"));
    }
    let order: Vec<u32> = match order {
        Some(o) => {
            let mut seen = vec![false; n];
            if o.len() != n
                || o.iter()
                    .any(|&v| (v as usize) >= n || std::mem::replace(&mut seen[v as usize], true))
            {
                return Err(Error::param("row order must be a permutation"));
            }
            o.to_vec()
        }
        None => (0..n as u32).collect(),
    };
    let diag = crate::kernels::symgs::diagonal(a)?;
    let mut x = x.to_vec();
    let row = |i: usize, x: &mut [f64]| {
        let ws = a.neighbor_weights(i);
        let mut s = b[i];
        for (k, &j) in a.neighbors(i).iter().enumerate() {
            if j as usize != i {
                s -= ws.map_or(1.0, |w| w[k] as f64) * x[j as usize];
            }
        }
        x[i] = s / diag[i];
    };
    for _ in 0..sweeps {
        order.iter().for_each(|&i| row(i as usize, &mut x));
        order.iter().rev().for_each(|&i| row(i as usize, &mut x));
    }
    Ok(x)
}

/// Edge-by-edge validity scan of a coloring.
pub fn check_coloring(g: &Graph, c: &Coloring) -> VerifyReport {
    let mut report = VerifyReport::pass("color");
    if c.color.len() != g.num_vertices() {
        report.fail(
            None,
            format!("{} colors for {} vertices", c.color.len(), g.num_vertices()),
        );
        return report;
    }
    if c.color.iter().any(|&x| x >= c.num_colors) {
        report.fail(None, "color id not below num_colors".into());
        return report;
    }
    if let Some((u, v, _)) = g
        .edges()
        .find(|&(u, v, _)| u != v && c.color[u as usize] == c.color[v as usize])
    {
        report.fail(
            Some(u),
            format!(
                "edge ({u}, {v}) joins two vertices of color {}",
                c.color[u as usize]
            ),
        );
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ToleranceSpec {
    Exact,
    /// `|a - b| <= tol * max(|a|, |b|)`, with differences below 1e-12 accepted.
    Relative(f64),
    /// Labels may differ as long as they induce the same partition.
    Partition,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub kernel: String,
    pub passed: bool,
    pub max_abs_err: f64,
    pub first_mismatch: Option<u32>,
    pub details: String,
}

impl VerifyReport {
    fn pass(kernel: &str) -> Self {
        Self {
            kernel: kernel.to_string(),
            passed: true,
            max_abs_err: 0.0,
            first_mismatch: None,
            details: String::new(),
        }
    }

    fn fail(&mut self, at: Option<u32>, details: String) {
        self.passed = false;
        self.first_mismatch = at;
        self.details = details;
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "verify {}: {} (max_abs_err {:.3e}",
            self.kernel,
            if self.passed { "PASS" } else { "FAIL" },
            self.max_abs_err
        )?;
        if let Some(v) = self.first_mismatch {
            write!(f, ", first mismatch at {v}")?;
        }
        if !self.details.is_empty() {
            write!(f, "; {}", self.details)?;
        }
        f.write_str(")")
    }
}

/// Compares a kernel output with its reference, elementwise.
pub fn compare<T: Copy + Into<f64>>(
    kernel: &str,
    result: &[T],
    reference: &[T],
    tolerance: ToleranceSpec,
) -> Result<VerifyReport> {
    if result.len() != reference.len() {
        return Err(Error::param(format!(
            "result has {} entries, reference has {}",
            result.len(),
            reference.len()
        )));
    }
    let mut report = VerifyReport::pass(kernel);
    if tolerance == ToleranceSpec::Partition {
        let mut forward: HashMap<u64, u64> = HashMap::new();
        let mut backward: HashMap<u64, u64> = HashMap::new();
        for (i, (&a, &b)) in result.iter().zip(reference).enumerate() {
            let (a, b) = (a.into().to_bits(), b.into().to_bits());
            if *forward.entry(a).or_insert(b) != b || *backward.entry(b).or_insert(a) != a {
                report.fail(
                    Some(i as u32),
                    format!("vertex {i} breaks the reference partition"),
                );
                break;
            }
        }
        return Ok(report);
    }
    for (i, (&a, &b)) in result.iter().zip(reference).enumerate() {
        let (a, b): (f64, f64) = (a.into(), b.into());
        if a == b {
            continue;
        }
        let err = (a - b).abs();
        if err.is_finite() {
            report.max_abs_err = report.max_abs_err.max(err);
        }
        let ok = match tolerance {
            ToleranceSpec::Relative(tol) => {
                err.is_finite() && (err <= tol * a.abs().max(b.abs()) || err < 1e-12)
            }
            _ => false,
        };
        if !ok && report.passed {
            report.fail(Some(i as u32), format!("entry {i}: got {a}, expected {b}"));
        }
    }
    Ok(report)
}
