//! Connected components by min-label propagation.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use super::{atomic_u32_vec, unwrap_u32};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Every vertex starts with its own id as label; each round pushes a
/// vertex's label to any neighbor holding a larger one. At the fixpoint
/// `labels[v]` is the smallest id in v's component.
pub fn cc_label_propagation(g: &Graph) -> Result<Vec<VertexId>> {
    if g.is_directed() {
        return Err(Error::precondition(
            "label propagation needs an undirected graph",
        ));
    }
    let n = g.num_vertices();
    let labels = atomic_u32_vec(n, 0);
    labels
        .par_iter()
        .enumerate()
        .for_each(|(v, l)| l.store(v as VertexId, Ordering::Relaxed));
    loop {
        let changed = AtomicBool::new(false);
        (0..n).into_par_iter().with_min_len(512).for_each(|v| {
            let mine = labels[v].load(Ordering::Relaxed);
            for &u in g.neighbors(v) {
                let slot = &labels[u as usize];
                if mine < slot.load(Ordering::Relaxed)
                    && mine < slot.fetch_min(mine, Ordering::Relaxed)
                {
                    changed.store(true, Ordering::Relaxed);
                }
            }
        });
        if !changed.into_inner() {
            break;
        }
    }
    Ok(unwrap_u32(labels))
}
