//! Pull-style PageRank with uniform redistribution of dangling mass.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

const BLOCK: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct PageRankResult {
    pub scores: Vec<f64>,
    pub iterations: usize,
    /// False when `max_iters` ran out before the L1 change reached the tolerance.
    pub converged: bool,
}

/// `score'[v] = (1 - d)/n + d * (sum_{u -> v} score[u]/outdeg(u) + dangling/n)`,
/// iterated until the L1 change is at most `tolerance`.
///
/// Each vertex sums its in-neighbors in CSR order and the L1 change is
/// reduced block by block in a fixed order, so the result is bitwise
/// independent of the worker count.
pub fn pagerank(
    g: &Graph,
    damping: f64,
    tolerance: f64,
    max_iters: usize,
) -> Result<PageRankResult> {
    let n = g.num_vertices();
    if n == 0 {
        return Err(Error::param("PageRank needs at least one vertex"));
    }
    if !(0.0..=1.0).contains(&damping) {
        return Err(Error::param(format!("damping {damping} outside [0, 1]")));
    }
    let incoming = g
        .in_csr()
        .ok_or_else(|| Error::precondition("PageRank on a directed graph needs the inverse CSR"))?;
    let out = g.out_csr();
    let inv_deg: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|u| match out.degree(u) {
            0 => 0.0,
            d => 1.0 / d as f64,
        })
        .collect();
    let nf = n as f64;
    let mut scores = vec![1.0 / nf; n];
    let mut contrib = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        contrib
            .par_iter_mut()
            .zip(scores.par_iter().zip(inv_deg.par_iter()))
            .for_each(|(c, (&s, &k))| *c = s * k);
        let dangling: f64 = ordered_sum(
            scores
                .par_chunks(BLOCK)
                .zip(inv_deg.par_chunks(BLOCK))
                .map(|(s, k)| {
                    s.iter()
                        .zip(k)
                        .filter(|(_, &k)| k == 0.0)
                        .map(|(&s, _)| s)
                        .sum::<f64>()
                })
                .collect(),
        );
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        let diff = ordered_sum(
            next.par_chunks_mut(BLOCK)
                .zip(scores.par_chunks(BLOCK))
                .enumerate()
                .map(|(b, (dst, old))| {
                    let mut l1 = 0.0;
                    for (i, (slot, &prev)) in dst.iter_mut().zip(old).enumerate() {
                        let v = b * BLOCK + i;
                        let gathered: f64 = incoming
                            .neighbors(v)
                            .iter()
                            .map(|&u| contrib[u as usize])
                            .sum();
                        *slot = base + damping * gathered;
                        l1 += (*slot - prev).abs();
                    }
                    l1
                })
                .collect(),
        );
        std::mem::swap(&mut scores, &mut next);
        iterations += 1;
        if diff <= tolerance {
            converged = true;
            break;
        }
    }
    Ok(PageRankResult {
        scores,
        iterations,
        converged,
    })
}

fn ordered_sum(parts: Vec<f64>) -> f64 {
    parts.into_iter().sum()
}
