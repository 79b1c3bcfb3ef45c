//! Software proxies for irregularity: per-iteration frontier traces and
//! per-worker work imbalance.
//!
//! These are algorithm-level statistics. They are reported under their own
//! names and make no claim of equivalence with branch- or memory-divergence
//! hardware counters. Memory divergence has no proxy beyond `edges_scanned`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::kernels::{self, KernelId, KernelParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Push,
    Pull,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Push => "push",
            Direction::Pull => "pull",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IterRecord {
    pub iter: usize,
    pub frontier_size: usize,
    pub edges_scanned: usize,
    /// Only direction-optimizing BFS fills this in.
    pub direction: Option<Direction>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IterationTrace {
    pub records: Vec<IterRecord>,
}

impl IterationTrace {
    pub(crate) fn push(
        &mut self,
        frontier_size: usize,
        edges_scanned: usize,
        direction: Option<Direction>,
    ) {
        let iter = self.records.len();
        self.records.push(IterRecord {
            iter,
            frontier_size,
            edges_scanned,
            direction,
        });
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn total_edges_scanned(&self) -> usize {
        self.records.iter().map(|r| r.edges_scanned).sum()
    }

    pub fn frontier_sizes(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.frontier_size).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("iter,frontier_size,edges_scanned,direction\n");
        for r in &self.records {
            let dir = r.direction.map(Direction::as_str).unwrap_or("");
            let _ = writeln!(
                s,
                "{},{},{},{}",
                r.iter, r.frontier_size, r.edges_scanned, dir
            );
        }
        s
    }
}

/// Runs a traversal kernel and returns its per-iteration trace.
pub fn trace_traversal(
    kernel: KernelId,
    g: &Graph,
    source: u32,
    params: &KernelParams,
) -> Result<IterationTrace> {
    use KernelId::*;
    let trace = match kernel {
        BfsPush => kernels::bfs::bfs_push_traced(g, source)?.1,
        BfsPull => kernels::bfs::bfs_pull_traced(g, source)?.1,
        BfsDirectionOptimizing => {
            kernels::bfs::bfs_direction_optimizing_traced(g, source, params.alpha, params.beta)?.1
        }
        BfsQuadratic => kernels::bfs::bfs_quadratic_traced(g, source)?.1,
        SsspBellman => kernels::sssp::sssp_bellman_traced(g, source)?.1,
        SsspDeltaStepping => {
            let delta = params
                .delta
                .unwrap_or_else(|| kernels::sssp::default_delta(g));
            kernels::sssp::sssp_delta_stepping_traced(g, source, delta)?.1
        }
        Bc => kernels::bc::bc_forward_trace(g, source)?,
        other => {
            return Err(Error::param(format!(
                "`{}` is not a traversal kernel",
                other.name()
            )))
        }
    };
    Ok(trace)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partitioning {
    /// Contiguous vertex ranges of equal length.
    EqualVertices,
    /// Contiguous ranges of the concatenated edge arrays of equal length;
    /// a neighbor list may be split across workers.
    EqualEdges,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImbalanceStats {
    pub partitions: usize,
    pub work: Vec<usize>,
    pub work_cv: f64,
    pub max_over_mean: f64,
}

/// Per-worker edge work under a static partitioning of one full sweep.
pub fn imbalance(g: &Graph, partitioning: Partitioning, workers: usize) -> Result<ImbalanceStats> {
    if workers == 0 {
        return Err(Error::param("workers must be at least 1"));
    }
    let n = g.num_vertices();
    let m = g.num_edges();
    let work: Vec<usize> = match partitioning {
        Partitioning::EqualVertices => {
            let offsets = g.offsets();
            (0..workers)
                .map(|w| {
                    let lo = n * w / workers;
                    let hi = n * (w + 1) / workers;
                    offsets[hi] - offsets[lo]
                })
                .collect()
        }
        Partitioning::EqualEdges => (0..workers)
            .map(|w| m * (w + 1) / workers - m * w / workers)
            .collect(),
    };
    let mean = m as f64 / workers as f64;
    let (work_cv, max_over_mean) = if m == 0 {
        (0.0, 1.0)
    } else {
        let var = work.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / workers as f64;
        let max = *work.iter().max().unwrap() as f64;
        (var.sqrt() / mean, max / mean)
    };
    Ok(ImbalanceStats {
        partitions: workers,
        work,
        work_cv,
        max_over_mean,
    })
}
