//! Betweenness centrality on unweighted shortest paths (Brandes).
//!
//! Per source: a level-synchronous forward sweep counts shortest paths, then
//! a backward sweep over the levels accumulates dependencies. The backward
//! sweep is pull-style (each vertex sums over its own successors), so every
//! score is produced by a fixed summation order and results do not depend on
//! the worker count.
//!
//! On undirected graphs the accumulated scores are halved, so each unordered
//! pair of endpoints is counted once. Scores are not normalized.

use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{atomic_add_f64, atomic_u32_vec, check_source, EdgeWork, UNREACHED};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::instrument::IterationTrace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcSources {
    All,
    /// `count` distinct sources drawn with the given seed.
    Sample {
        count: usize,
        seed: u64,
    },
}

impl BcSources {
    pub fn resolve(self, n: usize) -> Result<Vec<VertexId>> {
        match self {
            BcSources::All => Ok((0..n as VertexId).collect()),
            BcSources::Sample { count, seed } => {
                if count > n {
                    return Err(Error::param(format!(
                        "{count} BC sources requested from {n} vertices"
                    )));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut s: Vec<VertexId> = sample(&mut rng, n, count)
                    .into_iter()
                    .map(|v| v as VertexId)
                    .collect();
                s.sort_unstable();
                Ok(s)
            }
        }
    }
}

pub fn bc(g: &Graph, sources: BcSources) -> Result<Vec<f64>> {
    let n = g.num_vertices();
    let sources = sources.resolve(n)?;
    let scores: Vec<AtomicU64> = (0..n).map(|_| AtomicU64::new(0)).collect();
    let mut state = State::new(n);
    for &s in &sources {
        state.forward(g, s, None);
        state.backward(g, s, &scores);
    }
    let half = if g.is_directed() { 1.0 } else { 0.5 };
    Ok(scores
        .into_iter()
        .map(|c| f64::from_bits(c.into_inner()) * half)
        .collect())
}

/// Forward-phase trace (BFS levels with path counting) from one source.
pub fn bc_forward_trace(g: &Graph, source: u32) -> Result<IterationTrace> {
    check_source(g.num_vertices(), source)?;
    let mut state = State::new(g.num_vertices());
    let mut trace = IterationTrace::default();
    state.forward(g, source, Some(&mut trace));
    Ok(trace)
}

struct State {
    depth: Vec<AtomicU32>,
    sigma: Vec<AtomicU64>,
    delta: Vec<AtomicU64>,
    levels: Vec<Vec<VertexId>>,
}

impl State {
    fn new(n: usize) -> Self {
        Self {
            depth: atomic_u32_vec(n, UNREACHED),
            sigma: (0..n).map(|_| AtomicU64::new(0)).collect(),
            delta: (0..n).map(|_| AtomicU64::new(0)).collect(),
            levels: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for level in self.levels.drain(..) {
            level.par_iter().for_each(|&v| {
                let v = v as usize;
                self.depth[v].store(UNREACHED, Ordering::Relaxed);
                self.sigma[v].store(0, Ordering::Relaxed);
                self.delta[v].store(0, Ordering::Relaxed);
            });
        }
    }

    fn forward(&mut self, g: &Graph, s: VertexId, mut trace: Option<&mut IterationTrace>) {
        self.reset();
        let csr = g.out_csr();
        let targets = csr.targets();
        self.depth[s as usize].store(0, Ordering::Relaxed);
        self.sigma[s as usize].store(1f64.to_bits(), Ordering::Relaxed);
        let mut frontier = vec![s];
        let mut level = 0u32;
        while !frontier.is_empty() {
            let work = EdgeWork::new(&frontier, csr);
            let (depth, sigma) = (&self.depth, &self.sigma);
            let next = work.par_collect(|u, e, out| {
                let v = targets[e] as usize;
                let d = depth[v].load(Ordering::Relaxed);
                let admitted = d == UNREACHED
                    && depth[v]
                        .compare_exchange(
                            UNREACHED,
                            level + 1,
                            Ordering::Relaxed,
                            Ordering::Relaxed,
                        )
                        .is_ok();
                if admitted {
                    out.push(v as VertexId);
                }
                if admitted || d == level + 1 || depth[v].load(Ordering::Relaxed) == level + 1 {
                    let su = f64::from_bits(sigma[u as usize].load(Ordering::Relaxed));
                    atomic_add_f64(&sigma[v], su);
                }
            });
            if let Some(t) = trace.as_deref_mut() {
                t.push(frontier.len(), work.total(), None);
            }
            self.levels.push(std::mem::replace(&mut frontier, next));
            level += 1;
        }
    }

    fn backward(&self, g: &Graph, s: VertexId, scores: &[AtomicU64]) {
        let csr = g.out_csr();
        for (d, level) in self.levels.iter().enumerate().rev() {
            let next_depth = d as u32 + 1;
            level.par_iter().for_each(|&v| {
                let v = v as usize;
                let sv = f64::from_bits(self.sigma[v].load(Ordering::Relaxed));
                let mut acc = 0.0;
                for &w in csr.neighbors(v) {
                    let w = w as usize;
                    if self.depth[w].load(Ordering::Relaxed) == next_depth {
                        let sw = f64::from_bits(self.sigma[w].load(Ordering::Relaxed));
                        let dw = f64::from_bits(self.delta[w].load(Ordering::Relaxed));
                        acc += sv / sw * (1.0 + dw);
                    }
                }
                self.delta[v].store(acc.to_bits(), Ordering::Relaxed);
                if v != s as usize {
                    let cur = f64::from_bits(scores[v].load(Ordering::Relaxed));
                    scores[v].store((cur + acc).to_bits(), Ordering::Relaxed);
                }
            });
        }
    }
}
