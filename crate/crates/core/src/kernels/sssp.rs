//! Single-source shortest paths over non-negative `f32` weights.
//!
//! Distances live in `AtomicU32` cells holding `f32` bits. For non-negative
//! floats the bit pattern orders like the value, so `fetch_min` on the bits
//! is an atomic floating-point minimum. Unweighted graphs use unit weights.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;

use super::{atomic_u32_vec, check_source, EdgeWork};
use crate::error::{Error, Result};
use crate::frontier::{should_use_dense, AtomicBitmap, DEFAULT_DENSE_THRESHOLD};
use crate::graph::{Graph, VertexId};
use crate::instrument::IterationTrace;

const INF_BITS: u32 = 0x7f80_0000;

pub fn sssp_bellman(g: &Graph, source: u32) -> Result<Vec<f32>> {
    Ok(sssp_bellman_traced(g, source)?.0)
}

pub fn sssp_delta_stepping(g: &Graph, source: u32, delta: f32) -> Result<Vec<f32>> {
    Ok(sssp_delta_stepping_traced(g, source, delta)?.0)
}

/// Average edge weight, or 1 for unweighted or edgeless graphs.
pub fn default_delta(g: &Graph) -> f32 {
    match g.weights() {
        Some(w) if !w.is_empty() => {
            let avg = w.par_iter().map(|&x| x as f64).sum::<f64>() / w.len() as f64;
            if avg > 0.0 {
                avg as f32
            } else {
                1.0
            }
        }
        _ => 1.0,
    }
}

fn check_weights(g: &Graph) -> Result<()> {
    if let Some(w) = g.weights() {
        if let Some(bad) = w.par_iter().find_any(|&&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::UnsupportedInput(format!(
                "shortest paths need non-negative finite weights, found {bad}"
            )));
        }
    }
    Ok(())
}

fn init(n: usize, source: u32) -> Vec<AtomicU32> {
    let dist = atomic_u32_vec(n, INF_BITS);
    dist[source as usize].store(0f32.to_bits(), Ordering::Relaxed);
    dist
}

fn finish(dist: Vec<AtomicU32>) -> Vec<f32> {
    dist.into_par_iter()
        .map(|d| f32::from_bits(d.into_inner()))
        .collect()
}

#[inline]
fn edge_weight(weights: Option<&[f32]>, e: usize) -> f32 {
    weights.map_or(1.0, |w| w[e])
}

/// Lowers `dist[v]` to `nd`; true if this call improved it.
#[inline]
fn relax(dist: &[AtomicU32], v: VertexId, nd: f32) -> bool {
    let bits = nd.to_bits();
    let slot = &dist[v as usize];
    bits < slot.load(Ordering::Relaxed) && bits < slot.fetch_min(bits, Ordering::Relaxed)
}

/// Frontier-driven Bellman-Ford: each round relaxes the out-edges of the
/// vertices improved in the previous round.
pub fn sssp_bellman_traced(g: &Graph, source: u32) -> Result<(Vec<f32>, IterationTrace)> {
    let n = g.num_vertices();
    check_source(n, source)?;
    check_weights(g)?;
    let csr = g.out_csr();
    let (targets, weights) = (csr.targets(), csr.weights());
    let dist = init(n, source);
    let queued = AtomicBitmap::new(n);
    let mut trace = IterationTrace::default();
    let mut frontier = vec![source];
    while !frontier.is_empty() {
        let work = EdgeWork::new(&frontier, csr);
        let next = work.par_collect(|u, e, out| {
            let du = f32::from_bits(dist[u as usize].load(Ordering::Relaxed));
            let v = targets[e];
            if relax(&dist, v, du + edge_weight(weights, e)) && queued.test_and_set(v as usize) {
                out.push(v);
            }
        });
        trace.push(frontier.len(), work.total(), None);
        if should_use_dense(next.len(), n, DEFAULT_DENSE_THRESHOLD) {
            queued.clear();
        } else {
            next.iter().for_each(|&v| queued.clear_bit(v as usize));
        }
        frontier = next;
    }
    Ok((finish(dist), trace))
}

#[inline]
fn bucket_of(d: f32, delta: f32) -> u64 {
    (d / delta) as u64
}

/// Delta-stepping. Tentative distances are binned into buckets of width
/// `delta`; the lowest non-empty bucket is drained by relaxing light edges
/// (`w <= delta`) until it stays empty, then the heavy edges of every vertex
/// it settled are relaxed once.
pub fn sssp_delta_stepping_traced(
    g: &Graph,
    source: u32,
    delta: f32,
) -> Result<(Vec<f32>, IterationTrace)> {
    let n = g.num_vertices();
    check_source(n, source)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::param(format!("delta must be positive, got {delta}")));
    }
    check_weights(g)?;
    let csr = g.out_csr();
    let (targets, weights) = (csr.targets(), csr.weights());
    let dist = init(n, source);
    let queued = AtomicBitmap::new(n);
    let mut trace = IterationTrace::default();
    let mut buckets: BTreeMap<u64, Vec<VertexId>> = BTreeMap::new();
    buckets.insert(0, vec![source]);

    let load = |v: VertexId| f32::from_bits(dist[v as usize].load(Ordering::Relaxed));

    while let Some((b, entries)) = buckets.pop_first() {
        // Drop entries whose distance has since moved to another bucket.
        let mut frontier: Vec<VertexId> = entries
            .into_iter()
            .filter(|&v| bucket_of(load(v), delta) == b && queued.test_and_set(v as usize))
            .collect();
        frontier.iter().for_each(|&v| queued.clear_bit(v as usize));
        let mut settled: Vec<VertexId> = Vec::new();

        while !frontier.is_empty() {
            settled.extend_from_slice(&frontier);
            let work = EdgeWork::new(&frontier, csr);
            let improved: Vec<(u64, VertexId)> = work.par_collect(|u, e, out| {
                let w = edge_weight(weights, e);
                if w > delta {
                    return;
                }
                let v = targets[e];
                let nd = load(u) + w;
                if relax(&dist, v, nd) {
                    out.push((bucket_of(nd, delta), v));
                }
            });
            trace.push(frontier.len(), work.total(), None);
            let mut next = Vec::new();
            for (bi, v) in improved {
                if bi == b {
                    if queued.test_and_set(v as usize) {
                        next.push(v);
                    }
                } else {
                    buckets.entry(bi).or_default().push(v);
                }
            }
            next.iter().for_each(|&v| queued.clear_bit(v as usize));
            frontier = next;
        }

        settled.par_sort_unstable();
        settled.dedup();
        let work = EdgeWork::new(&settled, csr);
        let improved: Vec<(u64, VertexId)> = work.par_collect(|u, e, out| {
            let w = edge_weight(weights, e);
            if w <= delta {
                return;
            }
            let v = targets[e];
            let nd = load(u) + w;
            if relax(&dist, v, nd) {
                out.push((bucket_of(nd, delta), v));
            }
        });
        trace.push(settled.len(), work.total(), None);
        for (bi, v) in improved {
            debug_assert!(bi > b);
            buckets.entry(bi).or_default().push(v);
        }
    }
    Ok((finish(dist), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{attach_integer_weights, gen_rmat, gen_uniform, RmatParams};
    use crate::graph::{build_graph, BuildOptions, EdgeList};
    use crate::kernels::with_workers;
    use crate::verify::oracle_dijkstra;
    use proptest::prelude::*;

    fn directed(n: usize, t: &[(u32, u32, f32)]) -> Graph {
        build_graph(&EdgeList::from_weighted(n, t), BuildOptions::directed()).unwrap()
    }

    fn delta_avg(g: &Graph, s: u32) -> Result<Vec<f32>> {
        sssp_delta_stepping(g, s, default_delta(g))
    }

    #[test]
    fn single_edge() {
        let g = directed(2, &[(0, 1, 2.5)]);
        assert_eq!(sssp_bellman(&g, 0).unwrap(), vec![0.0, 2.5]);
        assert_eq!(delta_avg(&g, 0).unwrap(), vec![0.0, 2.5]);
    }

    #[test]
    fn two_hop_path_beats_direct_edge() {
        let g = directed(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)]);
        assert_eq!(sssp_bellman(&g, 0).unwrap()[2], 2.0);
        for delta in [0.5, 1.0, 3.0, 100.0] {
            assert_eq!(sssp_delta_stepping(&g, 0, delta).unwrap()[2], 2.0);
        }
    }

    #[test]
    fn unreachable_is_infinite() {
        let g = directed(3, &[(1, 0, 1.0)]);
        assert_eq!(
            sssp_bellman(&g, 0).unwrap(),
            vec![0.0, f32::INFINITY, f32::INFINITY]
        );
        assert_eq!(
            delta_avg(&g, 0).unwrap(),
            vec![0.0, f32::INFINITY, f32::INFINITY]
        );
    }

    #[test]
    fn path_buckets_drain_in_order() {
        // 0 -1-> 1 -1-> 2 with delta 1: vertex k lands in bucket k; every edge is light.
        let g = directed(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let (dist, trace) = sssp_delta_stepping_traced(&g, 0, 1.0).unwrap();
        assert_eq!(dist, vec![0.0, 1.0, 2.0]);
        // bucket 0: light round + heavy pass, then the same for buckets 1 and 2
        assert_eq!(trace.frontier_sizes(), vec![1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn huge_delta_is_single_bucket() {
        let mut el = gen_uniform(200, 1500, 4).unwrap();
        attach_integer_weights(&mut el, 1, 20, 5);
        let g = build_graph(&el, BuildOptions::directed()).unwrap();
        let expected = oracle_dijkstra(&g, 0).unwrap();
        assert_eq!(sssp_delta_stepping(&g, 0, 1e9).unwrap(), expected);
    }

    #[test]
    fn negative_weight_is_rejected() {
        let g = directed(2, &[(0, 1, -1.0)]);
        assert!(matches!(
            sssp_bellman(&g, 0),
            Err(Error::UnsupportedInput(_))
        ));
        assert!(matches!(delta_avg(&g, 0), Err(Error::UnsupportedInput(_))));
    }

    #[test]
    fn bad_delta_is_rejected() {
        let g = directed(2, &[(0, 1, 1.0)]);
        for d in [0.0, -1.0, f32::NAN] {
            assert!(matches!(
                sssp_delta_stepping(&g, 0, d),
                Err(Error::Parameter(_))
            ));
        }
        assert!(matches!(sssp_bellman(&g, 5), Err(Error::Parameter(_))));
    }

    #[test]
    fn uniform_weighted_matches_dijkstra() {
        let mut el = gen_uniform(500, 4000, 21).unwrap();
        attach_integer_weights(&mut el, 1, 100, 22);
        let g = build_graph(&el, BuildOptions::directed()).unwrap();
        let avg = default_delta(&g);
        for s in [0, 99, 250, 311, 499] {
            let expected = oracle_dijkstra(&g, s).unwrap();
            assert_eq!(sssp_bellman(&g, s).unwrap(), expected);
            for f in [0.5, 1.0, 4.0] {
                assert_eq!(
                    sssp_delta_stepping(&g, s, f * avg).unwrap(),
                    expected,
                    "factor {f}"
                );
            }
        }
    }

    #[test]
    fn fractional_weights_match_dijkstra_bitwise() {
        let el = gen_rmat(&RmatParams::new(10, 8, 6)).unwrap();
        let weights = (0..el.len())
            .map(|i| ((i * 7919) % 1000) as f32 / 97.0 + 0.01)
            .collect();
        let el = EdgeList {
            weights: Some(weights),
            ..el
        };
        let g = build_graph(&el, BuildOptions::undirected()).unwrap();
        let expected = oracle_dijkstra(&g, 0).unwrap();
        let one = with_workers(1, || sssp_delta_stepping(&g, 0, 2.0))
            .unwrap()
            .unwrap();
        let many = with_workers(5, || sssp_delta_stepping(&g, 0, 2.0))
            .unwrap()
            .unwrap();
        assert_eq!(one, expected);
        assert_eq!(many, expected);
        assert_eq!(
            with_workers(5, || sssp_bellman(&g, 0)).unwrap().unwrap(),
            expected
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn relaxation_fixpoint(
            n in 1usize..60,
            edges in proptest::collection::vec((0u32..60, 0u32..60, 0u8..20), 0..300),
            delta in 0.25f32..30.0,
        ) {
            let t: Vec<_> = edges.iter().map(|&(u, v, w)| (u % n as u32, v % n as u32, w as f32 * 0.5)).collect();
            let g = directed(n, &t);
            let expected = oracle_dijkstra(&g, 0).unwrap();
            let d = sssp_delta_stepping(&g, 0, delta).unwrap();
            prop_assert_eq!(&d, &expected);
            prop_assert_eq!(&sssp_bellman(&g, 0).unwrap(), &expected);
            for (u, v, w) in g.edges() {
                prop_assert!(d[v as usize] <= d[u as usize] + w.unwrap());
            }
        }
    }
}
