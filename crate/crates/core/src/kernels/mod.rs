//! The nine workloads plus their baselines.
//!
//! Kernels run on the ambient rayon pool; use [`with_workers`] to pick the
//! worker count. Shared mutable state uses atomics only: `fetch_min` for
//! distances and labels, test-and-set for visited bits.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Csr, VertexId};

pub mod bc;
pub mod bfs;
pub mod cc;
pub mod coloring;
pub mod pagerank;
pub mod sgd;
pub mod spmv;
pub mod sssp;
pub mod symgs;
pub mod tc;

pub use bc::{bc, BcSources};
pub use bfs::{bfs_direction_optimizing, bfs_pull, bfs_push, bfs_quadratic, UNREACHED};
pub use cc::cc_label_propagation;
pub use coloring::{greedy_coloring, Coloring};
pub use pagerank::{pagerank, PageRankResult};
pub use sgd::{sgd_mf, FactorModel, SgdParams};
pub use spmv::spmv;
pub use sssp::{sssp_bellman, sssp_delta_stepping};
pub use symgs::symgs;
pub use tc::triangle_count;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelId {
    BfsPush,
    BfsPull,
    BfsDirectionOptimizing,
    BfsQuadratic,
    SsspBellman,
    SsspDeltaStepping,
    Bc,
    PageRank,
    Cc,
    Tc,
    Sgd,
    Spmv,
    Coloring,
    Symgs,
}

impl KernelId {
    pub const ALL: [KernelId; 14] = [
        KernelId::BfsDirectionOptimizing,
        KernelId::BfsPush,
        KernelId::BfsPull,
        KernelId::BfsQuadratic,
        KernelId::SsspDeltaStepping,
        KernelId::SsspBellman,
        KernelId::Bc,
        KernelId::PageRank,
        KernelId::Cc,
        KernelId::Tc,
        KernelId::Sgd,
        KernelId::Spmv,
        KernelId::Coloring,
        KernelId::Symgs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelId::BfsDirectionOptimizing => "bfs",
            KernelId::BfsPush => "bfs-push",
            KernelId::BfsPull => "bfs-pull",
            KernelId::BfsQuadratic => "bfs-quadratic",
            KernelId::SsspDeltaStepping => "sssp",
            KernelId::SsspBellman => "sssp-bellman",
            KernelId::Bc => "bc",
            KernelId::PageRank => "pr",
            KernelId::Cc => "cc",
            KernelId::Tc => "tc",
            KernelId::Sgd => "sgd",
            KernelId::Spmv => "spmv",
            KernelId::Coloring => "color",
            KernelId::Symgs => "symgs",
        }
    }

    pub fn is_traversal(self) -> bool {
        matches!(
            self,
            KernelId::BfsPush
                | KernelId::BfsPull
                | KernelId::BfsDirectionOptimizing
                | KernelId::BfsQuadratic
                | KernelId::SsspBellman
                | KernelId::SsspDeltaStepping
                | KernelId::Bc
        )
    }

    pub fn needs_source(self) -> bool {
        self.is_traversal() && self != KernelId::Bc
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelId::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::param(format!("unknown kernel `{s}`")))
    }
}

/// Tunables for every kernel, with the suite's defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelParams {
    pub alpha: f64,
    pub beta: f64,
    /// Bucket width; `None` means the average edge weight.
    pub delta: Option<f32>,
    pub damping: f64,
    pub tolerance: f64,
    pub max_iters: usize,
    /// Number of BC sources; `None` means all vertices.
    pub bc_sources: Option<usize>,
    pub sgd: SgdParams,
    pub sweeps: usize,
    pub seed: u64,
}

impl Default for KernelParams {
    fn default() -> Self {
        Self {
            alpha: 15.0,
            beta: 18.0,
            delta: None,
            damping: 0.85,
            tolerance: 1e-4,
            max_iters: 100,
            bc_sources: None,
            sgd: SgdParams::default(),
            sweeps: 1,
            seed: 27491095,
        }
    }
}

/// Runs `f` on a dedicated pool with `workers` threads.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        return Err(Error::param("worker count must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::param(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub(crate) fn check_source(n: usize, source: u32) -> Result<()> {
    if (source as usize) < n {
        Ok(())
    } else {
        Err(Error::param(format!(
            "source {source} out of range for n = {n}"
        )))
    }
}

/// Degree-weighted split of a frontier's adjacency into equal-edge chunks.
///
/// The concatenated neighbor lists of the frontier are cut into ranges of
/// roughly equal length; a high-degree vertex may be shared by several
/// chunks.
pub(crate) struct EdgeWork<'a> {
    frontier: &'a [VertexId],
    csr: &'a Csr,
    prefix: Vec<usize>,
}

const MIN_CHUNK_EDGES: usize = 2048;

impl<'a> EdgeWork<'a> {
    pub fn new(frontier: &'a [VertexId], csr: &'a Csr) -> Self {
        let mut prefix = Vec::with_capacity(frontier.len() + 1);
        prefix.push(0);
        let mut acc = 0;
        for &u in frontier {
            acc += csr.degree(u as usize);
            prefix.push(acc);
        }
        Self {
            frontier,
            csr,
            prefix,
        }
    }

    pub fn total(&self) -> usize {
        *self.prefix.last().unwrap()
    }

    fn chunk_len(&self) -> usize {
        let workers = rayon::current_num_threads();
        (self.total() / (workers * 8)).max(MIN_CHUNK_EDGES)
    }

    /// Calls `f(u, edge_index)` for every edge in global edge range `lo..hi`.
    fn visit(&self, lo: usize, hi: usize, mut f: impl FnMut(VertexId, usize)) {
        if lo >= hi {
            return;
        }
        let mut i = self.prefix.partition_point(|&p| p <= lo) - 1;
        let mut pos = lo;
        while pos < hi {
            let u = self.frontier[i];
            let row = self.csr.row(u as usize);
            let start = row.start + (pos - self.prefix[i]);
            let end = row.start + (hi.min(self.prefix[i + 1]) - self.prefix[i]);
            for e in start..end {
                f(u, e);
            }
            pos = self.prefix[i + 1];
            i += 1;
        }
    }

    /// Processes all frontier edges in parallel; each chunk gathers its own
    /// output vector and the results are concatenated in chunk order.
    pub fn par_collect<T: Send>(&self, f: impl Fn(VertexId, usize, &mut Vec<T>) + Sync) -> Vec<T> {
        let total = self.total();
        let chunk = self.chunk_len();
        let chunks = total.div_ceil(chunk);
        if chunks <= 1 {
            let mut out = Vec::new();
            self.visit(0, total, |u, e| f(u, e, &mut out));
            return out;
        }
        let parts: Vec<Vec<T>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut out = Vec::new();
                self.visit(c * chunk, ((c + 1) * chunk).min(total), |u, e| {
                    f(u, e, &mut out)
                });
                out
            })
            .collect();
        concat(parts)
    }
}

pub(crate) fn concat<T>(parts: Vec<Vec<T>>) -> Vec<T> {
    let len = parts.iter().map(Vec::len).sum();
    let mut out = Vec::with_capacity(len);
    for p in parts {
        out.extend(p);
    }
    out
}

pub(crate) fn atomic_u32_vec(n: usize, init: u32) -> Vec<AtomicU32> {
    (0..n)
        .into_par_iter()
        .map(|_| AtomicU32::new(init))
        .collect()
}

pub(crate) fn unwrap_u32(v: Vec<AtomicU32>) -> Vec<u32> {
    v.into_par_iter().map(AtomicU32::into_inner).collect()
}

/// Atomic add on an `f64` stored as bits.
#[inline]
pub(crate) fn atomic_add_f64(cell: &AtomicU64, x: f64) {
    let mut cur = cell.load(Ordering::Relaxed);
    loop {
        let new = (f64::from_bits(cur) + x).to_bits();
        match cell.compare_exchange_weak(cur, new, Ordering::Relaxed, Ordering::Relaxed) {
            Ok(_) => return,
            Err(actual) => cur = actual,
        }
    }
}
