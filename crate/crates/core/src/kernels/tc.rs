//! Triangle counting by sorted neighbor-list intersection.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Counts each triangle `u < v < w` once: for every edge `u < v`, intersect
/// the neighbors of `u` and `v` that are larger than `v`.
pub fn triangle_count(g: &Graph) -> Result<u64> {
    if g.is_directed() {
        return Err(Error::precondition(
            "triangle counting needs an undirected graph",
        ));
    }
    if !g.is_sorted_unique() {
        return Err(Error::precondition(
            "triangle counting needs sorted, duplicate-free adjacency",
        ));
    }
    if g.has_self_loops() {
        return Err(Error::precondition(
            "triangle counting needs a graph without self-loops",
        ));
    }
    let n = g.num_vertices();
    Ok((0..n)
        .into_par_iter()
        .with_min_len(64)
        .map(|u| {
            let nu = g.neighbors(u);
            let above_u = &nu[nu.partition_point(|&x| (x as usize) <= u)..];
            let mut count = 0u64;
            for (i, &v) in above_u.iter().enumerate() {
                let nv = g.neighbors(v as usize);
                let above_v = &nv[nv.partition_point(|&x| x <= v)..];
                count += intersect_len(&above_u[i + 1..], above_v);
            }
            count
        })
        .sum())
}

fn intersect_len(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}
