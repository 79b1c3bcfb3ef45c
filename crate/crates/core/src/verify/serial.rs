//! Plain single-threaded references that scale past the oracle guards.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generators::Ratings;
use crate::graph::Graph;
use crate::kernels::{FactorModel, SgdParams};

/// Stack-based Brandes over the given sources, halved on undirected graphs.
pub fn bc(g: &Graph, sources: &[u32]) -> Vec<f64> {
    let n = g.num_vertices();
    let mut score = vec![0.0; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut stack = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for &s in sources {
        for &v in &stack {
            let v = v as usize;
            sigma[v] = 0.0;
            dist[v] = -1;
            delta[v] = 0.0;
            preds[v].clear();
        }
        stack.clear();
        sigma[s as usize] = 1.0;
        dist[s as usize] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            let v = v as usize;
            for &w in g.neighbors(v) {
                let wu = w as usize;
                if dist[wu] < 0 {
                    dist[wu] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[wu] == dist[v] + 1 {
                    sigma[wu] += sigma[v];
                    preds[wu].push(v as u32);
                }
            }
        }
        for &w in stack.iter().rev() {
            let w = w as usize;
            for &v in &preds[w] {
                let v = v as usize;
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s as usize {
                score[w] += delta[w];
            }
        }
    }
    if !g.is_directed() {
        score.iter_mut().for_each(|x| *x /= 2.0);
    }
    score
}

/// Push-style PageRank over the out-CSR; returns scores and iteration count.
pub fn pagerank(
    g: &Graph,
    damping: f64,
    tolerance: f64,
    max_iters: usize,
) -> Result<(Vec<f64>, usize)> {
    let n = g.num_vertices();
    if n == 0 {
        return Err(Error::param("PageRank needs at least one vertex"));
    }
    let nf = n as f64;
    let mut p = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut iters = 0;
    while iters < max_iters {
        next.iter_mut().for_each(|x| *x = 0.0);
        let mut dangling = 0.0;
        for (u, &pu) in p.iter().enumerate() {
            let d = g.out_degree(u);
            if d == 0 {
                dangling += pu;
            } else {
                let share = pu / d as f64;
                for &v in g.neighbors(u) {
                    next[v as usize] += share;
                }
            }
        }
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        let mut diff = 0.0;
        for v in 0..n {
            next[v] = base + damping * next[v];
            diff += (next[v] - p[v]).abs();
        }
        std::mem::swap(&mut p, &mut next);
        iters += 1;
        if diff <= tolerance {
            break;
        }
    }
    Ok((p, iters))
}

/// Triangle count by merging sorted neighbor lists, `u < v < w`.
pub fn tc(g: &Graph) -> Result<u64> {
    if g.is_directed() || !g.is_sorted_unique() {
        return Err(Error::precondition(
            "serial TC needs an undirected, sorted, duplicate-free graph",
        ));
    }
    let mut count = 0;
    for u in 0..g.num_vertices() {
        let nu = g.neighbors(u);
        for &v in nu.iter().filter(|&&v| v as usize > u) {
            let a = &nu[nu.partition_point(|&w| w <= v)..];
            let nv = g.neighbors(v as usize);
            let b = &nv[nv.partition_point(|&w| w <= v)..];
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                if a[i] < b[j] {
                    i += 1;
                } else if a[i] > b[j] {
                    j += 1;
                } else {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Row-by-row CSR SpMV.
pub fn spmv(a: &Graph, x: &[f64]) -> Result<Vec<f64>> {
    let n = a.num_vertices();
    if x.len() != n {
        return Err(Error::param("vector length does not match the matrix"));
    }
    let mut y = vec![0.0; n];
    for (i, j, w) in a.edges() {
        y[i as usize] += w.map_or(1.0, f64::from) * x[j as usize];
    }
    Ok(y)
}

/// Serial SGD on plain vectors, with the same initialization and per-epoch
/// shuffles as the parallel kernel.
pub fn sgd(ratings: &Ratings, p: &SgdParams) -> Result<FactorModel> {
    if ratings.entries.is_empty() || p.k == 0 {
        return Err(Error::param("SGD needs ratings and k >= 1"));
    }
    let k = p.k;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let hi = 1.0 / (k as f32).sqrt();
    let mut users: Vec<f32> = (0..ratings.num_users * k)
        .map(|_| rng.random_range(0.0..hi))
        .collect();
    let mut items: Vec<f32> = (0..ratings.num_items * k)
        .map(|_| rng.random_range(0.0..hi))
        .collect();
    let mut order: Vec<usize> = (0..ratings.entries.len()).collect();
    let mut rmse_trace = Vec::new();
    for epoch in 0..p.epochs {
        let mut shuffle_rng = ChaCha8Rng::seed_from_u64(p.seed);
        shuffle_rng.set_stream(epoch as u64 + 1);
        order.shuffle(&mut shuffle_rng);
        for &idx in &order {
            let (u, i, r) = ratings.entries[idx];
            let pu = &mut users[u as usize * k..(u as usize + 1) * k];
            let qi = &mut items[i as usize * k..(i as usize + 1) * k];
            let e = r - pu.iter().zip(qi.iter()).map(|(a, b)| a * b).sum::<f32>();
            for (a, b) in pu.iter_mut().zip(qi.iter_mut()) {
                let (av, bv) = (*a, *b);
                *a = av + p.learning_rate * (e * bv - p.regularization * av);
                *b = bv + p.learning_rate * (e * av - p.regularization * bv);
            }
        }
        let sse: f64 = ratings
            .entries
            .iter()
            .map(|&(u, i, r)| {
                let pu = &users[u as usize * k..(u as usize + 1) * k];
                let qi = &items[i as usize * k..(i as usize + 1) * k];
                let e = (r - pu.iter().zip(qi).map(|(a, b)| a * b).sum::<f32>()) as f64;
                e * e
            })
            .sum();
        let rmse = (sse / ratings.entries.len() as f64).sqrt();
        if !rmse.is_finite() {
            return Err(Error::TrainingDiverged { epoch });
        }
        rmse_trace.push(rmse);
    }
    Ok(FactorModel {
        k,
        user_factors: users,
        item_factors: items,
        rmse_trace,
    })
}
