//! Matrix factorization trained by stochastic gradient descent.
//!
//! With more than one worker, ratings are processed concurrently without
//! locks: factor rows are read and written as relaxed atomics and updates
//! to the same row may interleave. One worker runs the same loop serially
//! and is bit-reproducible for a given seed.

use std::sync::atomic::{AtomicU32, Ordering};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::Ratings;

#[derive(Clone, Debug, PartialEq)]
pub struct SgdParams {
    pub k: usize,
    pub learning_rate: f32,
    pub regularization: f32,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for SgdParams {
    fn default() -> Self {
        Self {
            k: 20,
            learning_rate: 0.05,
            regularization: 0.01,
            epochs: 10,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorModel {
    pub k: usize,
    /// Row-major `num_users x k`.
    pub user_factors: Vec<f32>,
    /// Row-major `num_items x k`.
    pub item_factors: Vec<f32>,
    /// Training RMSE after each epoch.
    pub rmse_trace: Vec<f64>,
}

impl FactorModel {
    pub fn user(&self, u: usize) -> &[f32] {
        &self.user_factors[u * self.k..(u + 1) * self.k]
    }

    pub fn item(&self, i: usize) -> &[f32] {
        &self.item_factors[i * self.k..(i + 1) * self.k]
    }

    pub fn predict(&self, u: usize, i: usize) -> f32 {
        dot(self.user(u), self.item(i))
    }

    pub fn rmse(&self, ratings: &Ratings) -> f64 {
        rmse_with(ratings, |u, i| self.predict(u, i))
    }
}

fn dot(a: &[f32], b: &[f32]) -> f32 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rmse_with(ratings: &Ratings, predict: impl Fn(usize, usize) -> f32 + Sync) -> f64 {
    if ratings.entries.is_empty() {
        return 0.0;
    }
    let sse: f64 = ratings
        .entries
        .par_chunks(1024)
        .map(|chunk| {
            chunk
                .iter()
                .map(|&(u, i, r)| {
                    let e = (r - predict(u as usize, i as usize)) as f64;
                    e * e
                })
                .sum::<f64>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    (sse / ratings.entries.len() as f64).sqrt()
}

struct Factors {
    k: usize,
    cells: Vec<AtomicU32>,
}

impl Factors {
    fn random(rows: usize, k: usize, rng: &mut ChaCha8Rng) -> Self {
        let hi = 1.0 / (k as f32).sqrt();
        Self {
            k,
            cells: (0..rows * k)
                .map(|_| AtomicU32::new(rng.random_range(0.0..hi).to_bits()))
                .collect(),
        }
    }

    #[inline]
    fn row(&self, r: usize) -> &[AtomicU32] {
        &self.cells[r * self.k..(r + 1) * self.k]
    }

    fn into_vec(self) -> Vec<f32> {
        self.cells
            .into_iter()
            .map(|c| f32::from_bits(c.into_inner()))
            .collect()
    }

    fn snapshot(&self) -> Vec<f32> {
        self.cells
            .iter()
            .map(|c| f32::from_bits(c.load(Ordering::Relaxed)))
            .collect()
    }
}

#[inline]
fn load(c: &AtomicU32) -> f32 {
    f32::from_bits(c.load(Ordering::Relaxed))
}

/// `e = r - <p, q>`; `p += lr (e q - lambda p)`, `q += lr (e p - lambda q)`.
#[inline]
fn update(p: &[AtomicU32], q: &[AtomicU32], rating: f32, lr: f32, lambda: f32) {
    let pred: f32 = p.iter().zip(q).map(|(a, b)| load(a) * load(b)).sum();
    let e = rating - pred;
    for (pc, qc) in p.iter().zip(q) {
        let (pv, qv) = (load(pc), load(qc));
        pc.store(
            (pv + lr * (e * qv - lambda * pv)).to_bits(),
            Ordering::Relaxed,
        );
        qc.store(
            (qv + lr * (e * pv - lambda * qv)).to_bits(),
            Ordering::Relaxed,
        );
    }
}

pub fn sgd_mf(ratings: &Ratings, params: &SgdParams) -> Result<FactorModel> {
    if ratings.entries.is_empty() {
        return Err(Error::param("SGD needs at least one rating"));
    }
    if params.k == 0 {
        return Err(Error::param("latent dimension k must be at least 1"));
    }
    if let Some(&(u, i, _)) = ratings
        .entries
        .iter()
        .find(|&&(u, i, _)| u as usize >= ratings.num_users || i as usize >= ratings.num_items)
    {
        return Err(Error::param(format!(
            "rating ({u}, {i}) outside the declared matrix"
        )));
    }
    let k = params.k;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let users = Factors::random(ratings.num_users, k, &mut rng);
    let items = Factors::random(ratings.num_items, k, &mut rng);
    let (lr, lambda) = (params.learning_rate, params.regularization);

    let mut order: Vec<usize> = (0..ratings.entries.len()).collect();
    let mut rmse_trace = Vec::with_capacity(params.epochs);
    let serial = rayon::current_num_threads() == 1;
    for epoch in 0..params.epochs {
        let mut shuffle_rng = ChaCha8Rng::seed_from_u64(params.seed);
        shuffle_rng.set_stream(epoch as u64 + 1);
        order.shuffle(&mut shuffle_rng);
        let step = |idx: usize| {
            let (u, i, r) = ratings.entries[idx];
            update(users.row(u as usize), items.row(i as usize), r, lr, lambda);
        };
        if serial {
            order.iter().for_each(|&idx| step(idx));
        } else {
            order
                .par_chunks(256)
                .for_each(|chunk| chunk.iter().for_each(|&idx| step(idx)));
        }
        let (uf, itf) = (users.snapshot(), items.snapshot());
        let rmse = rmse_with(ratings, |u, i| {
            dot(&uf[u * k..(u + 1) * k], &itf[i * k..(i + 1) * k])
        });
        if !rmse.is_finite() {
            return Err(Error::TrainingDiverged { epoch });
        }
        rmse_trace.push(rmse);
    }
    Ok(FactorModel {
        k,
        user_factors: users.into_vec(),
        item_factors: items.into_vec(),
        rmse_trace,
    })
}
