//! Synthetic inputs: R-MAT scale-free graphs, 2-D meshes, uniform random
//! graphs and bipartite rating sets.
//!
//! Randomness comes from ChaCha8 seeded with the caller's 64-bit seed. R-MAT
//! splits its output into fixed-size blocks and gives each block its own
//! ChaCha stream, so the edge sequence depends only on the parameters and not
//! on the worker count.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeList, VertexId};

const RMAT_BLOCK: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RmatParams {
    pub scale: u32,
    pub edge_factor: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub seed: u64,
}

impl RmatParams {
    /// Quadrant probabilities (0.57, 0.19, 0.19, 0.05).
    pub fn new(scale: u32, edge_factor: usize, seed: u64) -> Self {
        Self {
            scale,
            edge_factor,
            a: 0.57,
            b: 0.19,
            c: 0.19,
            d: 0.05,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scale < 1 || self.scale > 32 {
            return Err(Error::param(format!(
                "R-MAT scale {} outside 1..=32",
                self.scale
            )));
        }
        if self.edge_factor < 1 {
            return Err(Error::param("R-MAT edge factor must be at least 1"));
        }
        let probs = [self.a, self.b, self.c, self.d];
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::param("R-MAT probabilities must lie in [0, 1]"));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::param(format!(
                "R-MAT probabilities sum to {sum}, not 1"
            )));
        }
        Ok(())
    }
}

/// Recursive-matrix generator. Produces exactly `edge_factor * 2^scale`
/// directed edges over `2^scale` vertices, duplicates and self-loops included.
pub fn gen_rmat(p: &RmatParams) -> Result<EdgeList> {
    p.validate()?;
    let n = 1usize << p.scale;
    let m = p.edge_factor * n;
    let (ab, abc) = (p.a + p.b, p.a + p.b + p.c);
    let blocks = m.div_ceil(RMAT_BLOCK);
    let edges: Vec<(VertexId, VertexId)> = (0..blocks)
        .into_par_iter()
        .flat_map_iter(|block| {
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            rng.set_stream(block as u64);
            let len = RMAT_BLOCK.min(m - block * RMAT_BLOCK);
            (0..len).map(move |_| {
                let (mut u, mut v) = (0u64, 0u64);
                for _ in 0..p.scale {
                    let r: f64 = rng.random();
                    let (du, dv) = if r < p.a {
                        (0, 0)
                    } else if r < ab {
                        (0, 1)
                    } else if r < abc {
                        (1, 0)
                    } else {
                        (1, 1)
                    };
                    u = (u << 1) | du;
                    v = (v << 1) | dv;
                }
                (u as VertexId, v as VertexId)
            })
        })
        .collect();
    Ok(EdgeList {
        edges,
        num_vertices: Some(n),
        ..EdgeList::default()
    })
}

/// 4-neighborhood mesh; vertex `r * cols + c`. Each undirected edge is listed
/// once (right and down neighbors).
pub fn gen_grid2d(rows: usize, cols: usize) -> Result<EdgeList> {
    if rows == 0 || cols == 0 {
        return Err(Error::param("grid dimensions must be at least 1"));
    }
    let n = rows
        .checked_mul(cols)
        .filter(|&n| n <= u32::MAX as usize)
        .ok_or_else(|| Error::param("grid exceeds 32-bit vertex ids"))?;
    let mut el = EdgeList::new(n);
    el.edges.reserve(rows * (cols - 1) + cols * (rows - 1));
    for r in 0..rows {
        for c in 0..cols {
            let v = (r * cols + c) as VertexId;
            if c + 1 < cols {
                el.push(v, v + 1);
            }
            if r + 1 < rows {
                el.push(v, v + cols as VertexId);
            }
        }
    }
    Ok(el)
}

/// `m` distinct directed non-loop edges drawn uniformly over `n` vertices.
pub fn gen_uniform(n: usize, m: usize, seed: u64) -> Result<EdgeList> {
    let slots = n.saturating_mul(n.saturating_sub(1));
    if m > slots {
        return Err(Error::param(format!(
            "{m} distinct edges requested but only {slots} exist on {n} vertices"
        )));
    }
    if n > u32::MAX as usize {
        return Err(Error::param("vertex count exceeds 32-bit ids"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = sample(&mut rng, slots, m)
        .into_iter()
        .map(|k| {
            let u = k / (n - 1);
            let r = k % (n - 1);
            let v = if r >= u { r + 1 } else { r };
            (u as VertexId, v as VertexId)
        })
        .collect();
    Ok(EdgeList {
        edges,
        num_vertices: Some(n),
        ..EdgeList::default()
    })
}

/// Sparse user-by-item rating matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Ratings {
    pub num_users: usize,
    pub num_items: usize,
    /// `(user, item, rating)` with distinct `(user, item)` pairs.
    pub entries: Vec<(u32, u32, f32)>,
}

impl Ratings {
    /// Bipartite edge list with items renumbered after the users.
    pub fn to_edge_list(&self) -> EdgeList {
        let mut el = EdgeList::new_weighted(self.num_users + self.num_items);
        for &(u, i, r) in &self.entries {
            el.push_weighted(u, self.num_users as u32 + i, r);
        }
        el
    }

    /// Reads user -> item edges; unweighted edges get rating 1.
    pub fn from_edge_list(el: &EdgeList) -> Self {
        let entries: Vec<(u32, u32, f32)> = el
            .edges
            .iter()
            .enumerate()
            .map(|(k, &(u, i))| (u, i, el.weight(k).unwrap_or(1.0)))
            .collect();
        let num_users = entries.iter().map(|e| e.0 as usize + 1).max().unwrap_or(0);
        let num_items = entries.iter().map(|e| e.1 as usize + 1).max().unwrap_or(0);
        Self {
            num_users,
            num_items,
            entries,
        }
    }

    pub fn mean(&self) -> f64 {
        self.entries.iter().map(|e| e.2 as f64).sum::<f64>() / self.entries.len().max(1) as f64
    }
}

/// Distinct `(user, item)` pairs with ratings uniform in `range`.
pub fn gen_ratings(
    num_users: usize,
    num_items: usize,
    num_ratings: usize,
    range: (f32, f32),
    seed: u64,
) -> Result<Ratings> {
    let slots = num_users.saturating_mul(num_items);
    if num_ratings > slots {
        return Err(Error::param(format!(
            "{num_ratings} ratings requested but only {slots} user-item pairs exist"
        )));
    }
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::param(format!("invalid rating range [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = sample(&mut rng, slots, num_ratings);
    let entries = pairs
        .into_iter()
        .map(|k| {
            let r = if lo == hi {
                lo
            } else {
                rng.random_range(lo..=hi)
            };
            ((k / num_items) as u32, (k % num_items) as u32, r)
        })
        .collect();
    Ok(Ratings {
        num_users,
        num_items,
        entries,
    })
}

/// Replaces any weights with integers drawn uniformly from `lo..=hi`.
pub fn attach_integer_weights(el: &mut EdgeList, lo: u32, hi: u32, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    el.weights = Some(
        (0..el.edges.len())
            .map(|_| rng.random_range(lo..=hi) as f32)
            .collect(),
    );
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::graph::{build_graph, degree_stats, BuildOptions};

    #[test]
    fn rmat_smallest_case() {
        let el = gen_rmat(&RmatParams::new(1, 1, 3)).unwrap();
        assert_eq!(el.len(), 2);
        assert_eq!(el.vertex_count(), 2);
    }

    #[test]
    fn rmat_is_deterministic() {
        let p = RmatParams::new(10, 4, 42);
        assert_eq!(gen_rmat(&p).unwrap(), gen_rmat(&p).unwrap());
        assert_ne!(
            gen_rmat(&p).unwrap(),
            gen_rmat(&RmatParams::new(10, 4, 43)).unwrap()
        );
    }

    #[test]
    fn rmat_is_right_skewed() {
        let el = gen_rmat(&RmatParams::new(10, 16, 1)).unwrap();
        assert_eq!(el.len(), 16 << 10);
        let g = build_graph(&el, BuildOptions::undirected()).unwrap();
        let s = degree_stats(&g).unwrap();
        assert!(
            s.max_deg as f64 > 8.0 * s.avg_deg,
            "max {} avg {}",
            s.max_deg,
            s.avg_deg
        );
    }

    #[test]
    fn rmat_skew_grows_with_scale() {
        let ratio = |scale| {
            let el = gen_rmat(&RmatParams::new(scale, 16, 5)).unwrap();
            let s = degree_stats(&build_graph(&el, BuildOptions::undirected()).unwrap()).unwrap();
            s.max_deg as f64 / s.avg_deg
        };
        assert!(ratio(12) > ratio(8));
    }

    #[test]
    fn rmat_rejects_bad_probabilities() {
        let mut p = RmatParams::new(4, 2, 0);
        p.d = 0.2;
        assert!(matches!(gen_rmat(&p), Err(Error::Parameter(_))));
        assert!(gen_rmat(&RmatParams::new(0, 2, 0)).is_err());
    }

    #[test]
    fn grid_counts() {
        let el = gen_grid2d(2, 3).unwrap();
        assert_eq!(el.vertex_count(), 6);
        assert_eq!(el.len(), 7);
        let one = gen_grid2d(1, 1).unwrap();
        assert_eq!((one.vertex_count(), one.len()), (1, 0));
        assert!(gen_grid2d(0, 3).is_err());
    }

    #[test]
    fn grid_degree_cv_is_small() {
        for (r, c) in [(3, 3), (5, 8), (20, 20)] {
            let g = build_graph(&gen_grid2d(r, c).unwrap(), BuildOptions::undirected()).unwrap();
            assert!(degree_stats(&g).unwrap().degree_cv <= 0.35, "{r}x{c}");
        }
    }

    #[test]
    fn uniform_saturates() {
        let mut edges = gen_uniform(2, 2, 9).unwrap().edges;
        edges.sort();
        assert_eq!(edges, vec![(0, 1), (1, 0)]);
        assert!(matches!(gen_uniform(2, 3, 9), Err(Error::Parameter(_))));
    }

    #[test]
    fn uniform_concentrates() {
        let el = gen_uniform(1000, 10_000, 11).unwrap();
        let distinct: HashSet<_> = el.edges.iter().collect();
        assert_eq!(distinct.len(), 10_000);
        assert!(el.edges.iter().all(|&(u, v)| u != v));
        let g = build_graph(&el, BuildOptions::directed()).unwrap();
        let s = degree_stats(&g).unwrap();
        assert_eq!(s.avg_deg, 10.0);
        assert!(s.degree_cv < 0.5, "{}", s.degree_cv);
        assert_eq!(el, gen_uniform(1000, 10_000, 11).unwrap());
    }

    #[test]
    fn ratings_single() {
        let r = gen_ratings(1, 1, 1, (4.0, 4.0), 0).unwrap();
        assert_eq!(r.entries, vec![(0, 0, 4.0)]);
    }

    #[test]
    fn ratings_mean_and_distinctness() {
        let r = gen_ratings(100, 100, 2000, (1.0, 5.0), 17).unwrap();
        assert_eq!(r.entries.len(), 2000);
        assert!((r.mean() - 3.0).abs() < 0.2, "{}", r.mean());
        let pairs: HashSet<_> = r.entries.iter().map(|e| (e.0, e.1)).collect();
        assert_eq!(pairs.len(), 2000);
        assert!(r.entries.iter().all(|e| (1.0..=5.0).contains(&e.2)));
        assert_eq!(r, gen_ratings(100, 100, 2000, (1.0, 5.0), 17).unwrap());
        assert!(gen_ratings(2, 2, 5, (1.0, 5.0), 0).is_err());
    }

    #[test]
    fn ratings_edge_list_round_trip() {
        let r = gen_ratings(5, 7, 20, (1.0, 5.0), 2).unwrap();
        let el = r.to_edge_list();
        assert!(el.edges.iter().all(|&(u, i)| u < 5 && (5..12).contains(&i)));
    }

    #[test]
    fn integer_weights_in_range() {
        let mut el = gen_uniform(50, 200, 1).unwrap();
        attach_integer_weights(&mut el, 1, 255, 3);
        let w = el.weights.as_ref().unwrap();
        assert_eq!(w.len(), 200);
        assert!(w
            .iter()
            .all(|&x| (1.0..=255.0).contains(&x) && x.fract() == 0.0));
    }
}
