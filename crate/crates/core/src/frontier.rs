//! Vertex sets driving frontier-queue traversals.
//!
//! A [`Frontier`] is either a sparse id list or a dense bitmap over `n`
//! vertices. [`AtomicBitmap`] is the concurrent builder used while a kernel
//! admits vertices into the next frontier.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Default fraction of `n` above which a frontier is kept as a bitmap.
pub const DEFAULT_DENSE_THRESHOLD: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Sparse(Vec<VertexId>),
    Dense { words: Vec<u64>, size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frontier {
    n: usize,
    repr: Repr,
}

impl Frontier {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            repr: Repr::Sparse(Vec::new()),
        }
    }

    /// Builds a sparse frontier; ids must be in range and distinct.
    pub fn from_list(ids: Vec<VertexId>, n: usize) -> Result<Self> {
        let mut seen = vec![0u64; n.div_ceil(64)];
        for &v in &ids {
            let v = v as usize;
            if v >= n {
                return Err(Error::param(format!(
                    "frontier id {v} out of range for n = {n}"
                )));
            }
            let (w, b) = (v / 64, 1u64 << (v % 64));
            if seen[w] & b != 0 {
                return Err(Error::param(format!("duplicate frontier id {v}")));
            }
            seen[w] |= b;
        }
        Ok(Self {
            n,
            repr: Repr::Sparse(ids),
        })
    }

    /// Wraps a list the caller guarantees is in range and duplicate-free.
    pub(crate) fn from_list_unchecked(ids: Vec<VertexId>, n: usize) -> Self {
        debug_assert!(ids.iter().all(|&v| (v as usize) < n));
        Self {
            n,
            repr: Repr::Sparse(ids),
        }
    }

    pub(crate) fn from_words(words: Vec<u64>, n: usize) -> Self {
        debug_assert_eq!(words.len(), n.div_ceil(64));
        let size = words.par_iter().map(|w| w.count_ones() as usize).sum();
        Self {
            n,
            repr: Repr::Dense { words, size },
        }
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Sparse(ids) => ids.len(),
            Repr::Dense { size, .. } => *size,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense { .. })
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        match &self.repr {
            Repr::Sparse(ids) => ids.contains(&v),
            Repr::Dense { words, .. } => test_bit(words, v as usize),
        }
    }

    /// The id list of a sparse frontier.
    pub fn as_slice(&self) -> Option<&[VertexId]> {
        match &self.repr {
            Repr::Sparse(ids) => Some(ids),
            Repr::Dense { .. } => None,
        }
    }

    /// The bitmap words of a dense frontier.
    pub fn as_words(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Dense { words, .. } => Some(words),
            Repr::Sparse(_) => None,
        }
    }

    pub fn to_dense(&self) -> Frontier {
        match &self.repr {
            Repr::Dense { .. } => self.clone(),
            Repr::Sparse(ids) => {
                let mut words = vec![0u64; self.n.div_ceil(64)];
                for &v in ids {
                    words[v as usize / 64] |= 1 << (v % 64);
                }
                Frontier {
                    n: self.n,
                    repr: Repr::Dense {
                        words,
                        size: ids.len(),
                    },
                }
            }
        }
    }

    /// Sparse form with ids in ascending order.
    pub fn to_sparse(&self) -> Frontier {
        let ids = match &self.repr {
            Repr::Sparse(ids) => {
                let mut ids = ids.clone();
                ids.sort_unstable();
                ids
            }
            Repr::Dense { words, .. } => bitmap_ids(words),
        };
        Frontier {
            n: self.n,
            repr: Repr::Sparse(ids),
        }
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = VertexId> + '_> {
        match &self.repr {
            Repr::Sparse(ids) => Box::new(ids.iter().copied()),
            Repr::Dense { words, .. } => Box::new(BitIter::new(words)),
        }
    }
}

/// Whether a frontier of `frontier_size` vertices should be kept as a bitmap.
pub fn should_use_dense(frontier_size: usize, n: usize, threshold_fraction: f64) -> bool {
    frontier_size as f64 > threshold_fraction * n as f64
}

#[inline]
pub(crate) fn test_bit(words: &[u64], v: usize) -> bool {
    words[v / 64] & (1 << (v % 64)) != 0
}

fn bitmap_ids(words: &[u64]) -> Vec<VertexId> {
    const CHUNK: usize = 1024;
    words
        .par_chunks(CHUNK)
        .enumerate()
        .flat_map_iter(|(c, chunk)| {
            let base = c * CHUNK;
            chunk
                .iter()
                .enumerate()
                .flat_map(move |(i, &w)| BitIter::word((base + i) * 64, w))
        })
        .collect()
}

struct BitIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> BitIter<'a> {
    fn new(words: &'a [u64]) -> Self {
        Self {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }

    fn word(base: usize, mut w: u64) -> impl Iterator<Item = VertexId> {
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some((base + b) as VertexId)
        })
    }
}

impl Iterator for BitIter<'_> {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        while self.cur == 0 {
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
        let b = self.cur.trailing_zeros() as usize;
        self.cur &= self.cur - 1;
        Some((self.idx * 64 + b) as VertexId)
    }
}

/// Concurrent bitmap with test-and-set admission.
pub struct AtomicBitmap {
    words: Vec<AtomicU64>,
    n: usize,
}

impl AtomicBitmap {
    pub fn new(n: usize) -> Self {
        Self {
            words: (0..n.div_ceil(64)).map(|_| AtomicU64::new(0)).collect(),
            n,
        }
    }

    /// Sets bit `v`; true if this call set it.
    #[inline]
    pub fn test_and_set(&self, v: usize) -> bool {
        let bit = 1u64 << (v % 64);
        let word = &self.words[v / 64];
        if word.load(Ordering::Relaxed) & bit != 0 {
            return false;
        }
        word.fetch_or(bit, Ordering::Relaxed) & bit == 0
    }

    #[inline]
    pub fn get(&self, v: usize) -> bool {
        self.words[v / 64].load(Ordering::Relaxed) & (1 << (v % 64)) != 0
    }

    #[inline]
    pub fn clear_bit(&self, v: usize) {
        self.words[v / 64].fetch_and(!(1u64 << (v % 64)), Ordering::Relaxed);
    }

    pub fn clear(&self) {
        self.words
            .par_iter()
            .for_each(|w| w.store(0, Ordering::Relaxed));
    }

    pub fn count_ones(&self) -> usize {
        self.words
            .par_iter()
            .map(|w| w.load(Ordering::Relaxed).count_ones() as usize)
            .sum()
    }

    /// Snapshot as a dense frontier.
    pub fn to_frontier(&self) -> Frontier {
        let words = self
            .words
            .par_iter()
            .map(|w| w.load(Ordering::Relaxed))
            .collect();
        Frontier::from_words(words, self.n)
    }
}
