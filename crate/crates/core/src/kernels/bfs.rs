//! Breadth-first search in four flavors.
//!
//! * `bfs_push`: frontier queue, each frontier vertex scatters to its
//!   out-neighbors; frontier edges are split into equal-edge chunks.
//! * `bfs_pull`: bitmap frontier, each unvisited vertex gathers from its
//!   in-neighbors and stops at the first parent found.
//! * `bfs_direction_optimizing`: picks push or pull per level.
//! * `bfs_quadratic`: scans every vertex every level; the unoptimized baseline.
//!
//! All four return hop counts with [`UNREACHED`] for unreachable vertices.

use std::sync::atomic::{AtomicBool, AtomicU32, AtomicUsize, Ordering};

use rayon::prelude::*;

use super::{atomic_u32_vec, check_source, unwrap_u32, EdgeWork};
use crate::error::{Error, Result};
use crate::frontier::{test_bit, Frontier};
use crate::graph::{Csr, Graph, VertexId};
use crate::instrument::{Direction, IterationTrace};

pub const UNREACHED: u32 = u32::MAX;

const WORDS_PER_TASK: usize = 64;

pub fn bfs_push(g: &Graph, source: u32) -> Result<Vec<u32>> {
    Ok(bfs_push_traced(g, source)?.0)
}

pub fn bfs_pull(g: &Graph, source: u32) -> Result<Vec<u32>> {
    Ok(bfs_pull_traced(g, source)?.0)
}

pub fn bfs_direction_optimizing(g: &Graph, source: u32, alpha: f64, beta: f64) -> Result<Vec<u32>> {
    Ok(bfs_direction_optimizing_traced(g, source, alpha, beta)?.0)
}

pub fn bfs_quadratic(g: &Graph, source: u32) -> Result<Vec<u32>> {
    Ok(bfs_quadratic_traced(g, source)?.0)
}

fn incoming(g: &Graph) -> Result<&Csr> {
    g.in_csr().ok_or_else(|| {
        Error::precondition("pull traversal on a directed graph needs the inverse CSR")
    })
}

/// One push level. Returns the next frontier and the sum of its out-degrees.
fn push_step(
    csr: &Csr,
    frontier: &[VertexId],
    dist: &[AtomicU32],
    level: u32,
) -> (Vec<VertexId>, usize) {
    let work = EdgeWork::new(frontier, csr);
    let targets = csr.targets();
    let next = work.par_collect(|_, e, out| {
        let v = targets[e];
        let slot = &dist[v as usize];
        if slot.load(Ordering::Relaxed) == UNREACHED
            && slot
                .compare_exchange(UNREACHED, level + 1, Ordering::Relaxed, Ordering::Relaxed)
                .is_ok()
        {
            out.push(v);
        }
    });
    let scout = next.par_iter().map(|&v| csr.degree(v as usize)).sum();
    (next, scout)
}

struct PullLevel {
    words: Vec<u64>,
    awake: usize,
    scout: usize,
    scanned: usize,
}

/// One pull level over a bitmap frontier. Each task owns a range of output
/// words, so every vertex is written by exactly one task.
fn pull_step(
    out_csr: &Csr,
    in_csr: &Csr,
    front: &[u64],
    dist: &[AtomicU32],
    level: u32,
) -> PullLevel {
    let n = dist.len();
    let mut words = vec![0u64; n.div_ceil(64)];
    let (awake, scout, scanned) = words
        .par_chunks_mut(WORDS_PER_TASK)
        .enumerate()
        .map(|(chunk, out)| {
            let (mut awake, mut scout, mut scanned) = (0, 0, 0);
            let base = chunk * WORDS_PER_TASK * 64;
            for (wi, word) in out.iter_mut().enumerate() {
                for bit in 0..64 {
                    let v = base + wi * 64 + bit;
                    if v >= n {
                        break;
                    }
                    if dist[v].load(Ordering::Relaxed) != UNREACHED {
                        continue;
                    }
                    for &u in in_csr.neighbors(v) {
                        scanned += 1;
                        if test_bit(front, u as usize) {
                            dist[v].store(level + 1, Ordering::Relaxed);
                            *word |= 1 << bit;
                            awake += 1;
                            scout += out_csr.degree(v);
                            break;
                        }
                    }
                }
            }
            (awake, scout, scanned)
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    PullLevel {
        words,
        awake,
        scout,
        scanned,
    }
}

fn init_dist(n: usize, source: u32) -> Vec<AtomicU32> {
    let dist = atomic_u32_vec(n, UNREACHED);
    dist[source as usize].store(0, Ordering::Relaxed);
    dist
}

pub fn bfs_push_traced(g: &Graph, source: u32) -> Result<(Vec<u32>, IterationTrace)> {
    let n = g.num_vertices();
    check_source(n, source)?;
    let csr = g.out_csr();
    let dist = init_dist(n, source);
    let mut trace = IterationTrace::default();
    let mut frontier = vec![source];
    let mut scout = csr.degree(source as usize);
    let mut level = 0;
    while !frontier.is_empty() {
        trace.push(frontier.len(), scout, None);
        let (next, next_scout) = push_step(csr, &frontier, &dist, level);
        frontier = next;
        scout = next_scout;
        level += 1;
    }
    Ok((unwrap_u32(dist), trace))
}

pub fn bfs_pull_traced(g: &Graph, source: u32) -> Result<(Vec<u32>, IterationTrace)> {
    let n = g.num_vertices();
    check_source(n, source)?;
    let in_csr = incoming(g)?;
    let dist = init_dist(n, source);
    let mut trace = IterationTrace::default();
    let mut front = Frontier::from_list_unchecked(vec![source], n).to_dense();
    let mut level = 0;
    while !front.is_empty() {
        let step = pull_step(g.out_csr(), in_csr, front.as_words().unwrap(), &dist, level);
        trace.push(front.len(), step.scanned, None);
        front = Frontier::from_words(step.words, n);
        level += 1;
    }
    Ok((unwrap_u32(dist), trace))
}

/// Switches to pull when the frontier's out-edges exceed `1/alpha` of the
/// edges not yet explored, and back to push once the frontier holds fewer
/// than `n / beta` vertices.
pub fn bfs_direction_optimizing_traced(
    g: &Graph,
    source: u32,
    alpha: f64,
    beta: f64,
) -> Result<(Vec<u32>, IterationTrace)> {
    let n = g.num_vertices();
    check_source(n, source)?;
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::param("alpha and beta must be positive"));
    }
    let out_csr = g.out_csr();
    let in_csr = incoming(g)?;
    let dist = init_dist(n, source);
    let mut trace = IterationTrace::default();

    let mut front = Frontier::from_list_unchecked(vec![source], n);
    let mut scout = out_csr.degree(source as usize);
    let mut edges_to_check = g.num_edges();
    let mut direction = Direction::Push;
    let mut level = 0;
    while !front.is_empty() {
        direction = match direction {
            Direction::Push if scout as f64 > edges_to_check as f64 / alpha => Direction::Pull,
            Direction::Pull if (front.len() as f64) < n as f64 / beta => Direction::Push,
            d => d,
        };
        edges_to_check = edges_to_check.saturating_sub(scout);
        match direction {
            Direction::Push => {
                if front.is_dense() {
                    front = front.to_sparse();
                }
                trace.push(front.len(), scout, Some(Direction::Push));
                let (next, next_scout) =
                    push_step(out_csr, front.as_slice().unwrap(), &dist, level);
                front = Frontier::from_list_unchecked(next, n);
                scout = next_scout;
            }
            Direction::Pull => {
                if !front.is_dense() {
                    front = front.to_dense();
                }
                let step = pull_step(out_csr, in_csr, front.as_words().unwrap(), &dist, level);
                trace.push(front.len(), step.scanned, Some(Direction::Pull));
                debug_assert_eq!(
                    step.awake,
                    step.words.iter().map(|w| w.count_ones() as usize).sum()
                );
                front = Frontier::from_words(step.words, n);
                scout = step.scout;
            }
        }
        level += 1;
    }
    Ok((unwrap_u32(dist), trace))
}

/// Every level visits all `n` vertices and expands those at the current depth.
pub fn bfs_quadratic_traced(g: &Graph, source: u32) -> Result<(Vec<u32>, IterationTrace)> {
    let n = g.num_vertices();
    check_source(n, source)?;
    let csr = g.out_csr();
    let dist = init_dist(n, source);
    let mut trace = IterationTrace::default();
    let mut level = 0u32;
    loop {
        let changed = AtomicBool::new(false);
        let active = AtomicUsize::new(0);
        let scanned = AtomicUsize::new(0);
        (0..n).into_par_iter().with_min_len(1024).for_each(|v| {
            if dist[v].load(Ordering::Relaxed) != level {
                return;
            }
            active.fetch_add(1, Ordering::Relaxed);
            scanned.fetch_add(csr.degree(v), Ordering::Relaxed);
            for &w in csr.neighbors(v) {
                let slot = &dist[w as usize];
                if slot.load(Ordering::Relaxed) == UNREACHED {
                    slot.store(level + 1, Ordering::Relaxed);
                    changed.store(true, Ordering::Relaxed);
                }
            }
        });
        trace.push(active.into_inner(), scanned.into_inner(), None);
        if !changed.into_inner() {
            break;
        }
        level += 1;
    }
    Ok((unwrap_u32(dist), trace))
}
