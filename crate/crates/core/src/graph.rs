//! Immutable CSR graphs and the edge lists they are built from.
//!
//! Every vertex id is a dense `u32` in `0..n`. Row offsets are `usize` in memory
//! and `u64` on disk. After a deduplicating build each neighbor slice is sorted
//! ascending, duplicate-free and free of self-loops; several kernels (triangle
//! counting, pull traversal) rely on that layout.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type Weight = f32;

/// A bag of directed edges, optionally weighted, as produced by loaders and
/// generators.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EdgeList {
    pub edges: Vec<(VertexId, VertexId)>,
    /// One weight per edge when present.
    pub weights: Option<Vec<Weight>>,
    /// Declared vertex count. When absent the count is `max id + 1`.
    pub num_vertices: Option<usize>,
    /// Set by formats that store only one triangle of a symmetric matrix.
    pub symmetric: bool,
    /// Original external ids when a loader had to remap sparse ids;
    /// `original_ids[new_id] = old_id`.
    pub original_ids: Option<Vec<u64>>,
}

impl EdgeList {
    pub fn new(num_vertices: usize) -> Self {
        Self {
            num_vertices: Some(num_vertices),
            ..Self::default()
        }
    }

    pub fn new_weighted(num_vertices: usize) -> Self {
        Self {
            num_vertices: Some(num_vertices),
            weights: Some(Vec::new()),
            ..Self::default()
        }
    }

    pub fn from_pairs(num_vertices: usize, pairs: &[(VertexId, VertexId)]) -> Self {
        Self {
            edges: pairs.to_vec(),
            num_vertices: Some(num_vertices),
            ..Self::default()
        }
    }

    pub fn from_weighted(num_vertices: usize, triples: &[(VertexId, VertexId, Weight)]) -> Self {
        Self {
            edges: triples.iter().map(|&(u, v, _)| (u, v)).collect(),
            weights: Some(triples.iter().map(|&(_, _, w)| w).collect()),
            num_vertices: Some(num_vertices),
            ..Self::default()
        }
    }

    pub fn push(&mut self, src: VertexId, dst: VertexId) {
        debug_assert!(self.weights.is_none(), "push on a weighted edge list");
        self.edges.push((src, dst));
    }

    pub fn push_weighted(&mut self, src: VertexId, dst: VertexId, weight: Weight) {
        self.edges.push((src, dst));
        self.weights.get_or_insert_with(Vec::new).push(weight);
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn vertex_count(&self) -> usize {
        self.num_vertices.unwrap_or_else(|| {
            self.edges
                .iter()
                .map(|&(u, v)| u.max(v) as usize + 1)
                .max()
                .unwrap_or(0)
        })
    }

    pub fn weight(&self, i: usize) -> Option<Weight> {
        self.weights.as_ref().map(|w| w[i])
    }

    /// Checks ids against the declared vertex count and that weights are finite.
    pub fn validate(&self) -> Result<()> {
        if let Some(w) = &self.weights {
            if w.len() != self.edges.len() {
                return Err(Error::malformed(format!(
                    "{} weights for {} edges",
                    w.len(),
                    self.edges.len()
                )));
            }
            if let Some(i) = w.iter().position(|x| !x.is_finite()) {
                return Err(Error::malformed(format!(
                    "edge {i} has non-finite weight {}",
                    w[i]
                )));
            }
        }
        if let Some(n) = self.num_vertices {
            if n > u32::MAX as usize {
                return Err(Error::malformed(format!("{n} vertices exceed 32-bit ids")));
            }
            if let Some((i, &(u, v))) = self
                .edges
                .iter()
                .enumerate()
                .find(|(_, &(u, v))| u as usize >= n || v as usize >= n)
            {
                return Err(Error::malformed(format!(
                    "edge {i} ({u}, {v}) references a vertex >= {n}"
                )));
            }
        }
        Ok(())
    }

    /// Sorted `(src, dst, weight)` triples, for multiset comparisons.
    pub fn sorted_triples(&self) -> Vec<(VertexId, VertexId, Option<Weight>)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| (u, v, self.weight(i)))
            .collect();
        out.sort_by(|a, b| {
            (a.0, a.1)
                .cmp(&(b.0, b.1))
                .then_with(|| cmp_weight(a.2, b.2))
        });
        out
    }
}

fn cmp_weight(a: Option<Weight>, b: Option<Weight>) -> std::cmp::Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        _ => a.is_some().cmp(&b.is_some()),
    }
}

/// One direction of adjacency in compressed sparse row form.
#[derive(Clone, Debug, PartialEq)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    weights: Option<Vec<Weight>>,
}

impl Csr {
    fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
            weights: None,
        }
    }

    pub fn num_rows(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn row(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[VertexId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn neighbor_weights(&self, v: usize) -> Option<&[Weight]> {
        self.weights
            .as_deref()
            .map(|w| &w[self.offsets[v]..self.offsets[v + 1]])
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn targets(&self) -> &[VertexId] {
        &self.targets
    }

    pub fn weights(&self) -> Option<&[Weight]> {
        self.weights.as_deref()
    }

    fn transposed(&self) -> Csr {
        let n = self.num_rows();
        let mut counts = vec![0usize; n + 1];
        for &v in &self.targets {
            counts[v as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut targets = vec![0 as VertexId; self.targets.len()];
        let mut weights = self.weights.as_ref().map(|_| vec![0.0; self.targets.len()]);
        for u in 0..n {
            for e in self.row(u) {
                let v = self.targets[e] as usize;
                let slot = cursor[v];
                cursor[v] += 1;
                targets[slot] = u as VertexId;
                if let (Some(dst), Some(src)) = (weights.as_mut(), self.weights.as_ref()) {
                    dst[slot] = src[e];
                }
            }
        }
        Csr {
            offsets,
            targets,
            weights,
        }
    }

    fn rows_strictly_sorted(&self) -> bool {
        (0..self.num_rows())
            .into_par_iter()
            .all(|v| self.neighbors(v).windows(2).all(|w| w[0] < w[1]))
    }
}

/// Immutable CSR graph, optionally carrying its incoming-edge CSR.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    out: Csr,
    inverse: Option<Csr>,
    directed: bool,
    sorted_unique: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub directed: bool,
    /// Insert the reverse of every edge. Implies an undirected result.
    pub symmetrize: bool,
    /// Drop self-loops and repeated edges; the smallest weight of a repeated
    /// edge is kept.
    pub dedup: bool,
}

impl BuildOptions {
    pub fn undirected() -> Self {
        Self {
            directed: false,
            symmetrize: true,
            dedup: true,
        }
    }

    pub fn directed() -> Self {
        Self {
            directed: true,
            symmetrize: false,
            dedup: true,
        }
    }

    /// Keeps every entry, including diagonals; the layout sparse matrices need.
    pub fn matrix() -> Self {
        Self {
            directed: true,
            symmetrize: false,
            dedup: false,
        }
    }
}

/// Builds a CSR graph. Undirected graphs (`!directed` or `symmetrize`) store
/// both directions of every edge.
pub fn build_graph(edges: &EdgeList, opts: BuildOptions) -> Result<Graph> {
    edges.validate()?;
    let n = edges.vertex_count();
    if n > u32::MAX as usize {
        return Err(Error::malformed(format!("{n} vertices exceed 32-bit ids")));
    }
    let undirected = !opts.directed || opts.symmetrize;
    let weighted = edges.is_weighted();

    let mut counts = vec![0usize; n + 1];
    let keep = |u: VertexId, v: VertexId| !(opts.dedup && u == v);
    for &(u, v) in &edges.edges {
        if !keep(u, v) {
            continue;
        }
        counts[u as usize + 1] += 1;
        if undirected && u != v {
            counts[v as usize + 1] += 1;
        }
    }
    for i in 0..n {
        counts[i + 1] += counts[i];
    }
    let total = counts[n];
    let mut cursor = counts.clone();
    let mut slots: Vec<(VertexId, Weight)> = vec![(0, 0.0); total];
    for (i, &(u, v)) in edges.edges.iter().enumerate() {
        if !keep(u, v) {
            continue;
        }
        let w = edges.weight(i).unwrap_or(0.0);
        slots[cursor[u as usize]] = (v, w);
        cursor[u as usize] += 1;
        if undirected && u != v {
            slots[cursor[v as usize]] = (u, w);
            cursor[v as usize] += 1;
        }
    }
    drop(cursor);

    let mut rows: Vec<&mut [(VertexId, Weight)]> = Vec::with_capacity(n);
    let mut rest = slots.as_mut_slice();
    for v in 0..n {
        let (row, tail) = rest.split_at_mut(counts[v + 1] - counts[v]);
        rows.push(row);
        rest = tail;
    }
    rows.par_iter_mut()
        .for_each(|row| row.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1))));
    drop(rows);

    let out = if opts.dedup {
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(total);
        let mut weights = weighted.then(|| Vec::with_capacity(total));
        for v in 0..n {
            let row = &slots[counts[v]..counts[v + 1]];
            let mut prev: Option<VertexId> = None;
            for &(t, w) in row {
                if prev == Some(t) {
                    continue;
                }
                prev = Some(t);
                targets.push(t);
                if let Some(ws) = weights.as_mut() {
                    ws.push(w);
                }
            }
            offsets.push(targets.len());
        }
        Csr {
            offsets,
            targets,
            weights,
        }
    } else {
        Csr {
            offsets: counts,
            targets: slots.iter().map(|s| s.0).collect(),
            weights: weighted.then(|| slots.iter().map(|s| s.1).collect()),
        }
    };

    let sorted_unique = opts.dedup || out.rows_strictly_sorted();
    Ok(Graph {
        n,
        out,
        inverse: None,
        directed: !undirected,
        sorted_unique,
    })
}

/// Reverses every edge. Weights travel with their edges.
pub fn transpose(g: &Graph) -> Graph {
    let out = g.out.transposed();
    Graph {
        n: g.n,
        out,
        inverse: None,
        directed: g.directed,
        sorted_unique: g.sorted_unique,
    }
}

impl Graph {
    /// An empty graph on `n` isolated vertices.
    pub fn empty(n: usize, directed: bool) -> Self {
        Self {
            n,
            out: Csr::empty(n),
            inverse: None,
            directed,
            sorted_unique: true,
        }
    }

    /// Assembles a graph from raw CSR arrays, checking the structural invariants.
    pub fn from_csr(
        offsets: Vec<usize>,
        targets: Vec<VertexId>,
        weights: Option<Vec<Weight>>,
        directed: bool,
    ) -> Result<Self> {
        let Some(&last) = offsets.last() else {
            return Err(Error::malformed("offsets must have n + 1 entries"));
        };
        let n = offsets.len() - 1;
        if offsets[0] != 0 || last != targets.len() {
            return Err(Error::malformed(format!(
                "offsets span {}..{} but there are {} targets",
                offsets[0],
                last,
                targets.len()
            )));
        }
        if offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::malformed("offsets are not monotone"));
        }
        if let Some(&bad) = targets.iter().find(|&&t| t as usize >= n) {
            return Err(Error::malformed(format!(
                "target {bad} out of range for n = {n}"
            )));
        }
        if weights.as_ref().is_some_and(|w| w.len() != targets.len()) {
            return Err(Error::malformed(
                "weight array length differs from target array",
            ));
        }
        let out = Csr {
            offsets,
            targets,
            weights,
        };
        let sorted_unique = out.rows_strictly_sorted();
        Ok(Self {
            n,
            out,
            inverse: None,
            directed,
            sorted_unique,
        })
    }

    /// Attaches the incoming-edge CSR. A no-op for undirected graphs, whose
    /// outgoing CSR already serves both directions.
    pub fn with_inverse(mut self) -> Self {
        if self.directed && self.inverse.is_none() {
            self.inverse = Some(self.out.transposed());
        }
        self
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    /// Directed edge count; an undirected edge contributes two.
    pub fn num_edges(&self) -> usize {
        self.out.nnz()
    }

    /// `m / 2` for undirected graphs.
    pub fn undirected_edge_count(&self) -> Option<usize> {
        (!self.directed).then(|| self.num_edges() / 2)
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.out.weights.is_some()
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    /// True when every neighbor slice is strictly ascending.
    pub fn is_sorted_unique(&self) -> bool {
        self.sorted_unique
    }

    pub fn out_csr(&self) -> &Csr {
        &self.out
    }

    /// Incoming adjacency: the stored inverse, or the outgoing CSR itself for
    /// undirected graphs.
    pub fn in_csr(&self) -> Option<&Csr> {
        match (&self.inverse, self.directed) {
            (Some(inv), _) => Some(inv),
            (None, false) => Some(&self.out),
            (None, true) => None,
        }
    }

    #[inline]
    pub fn out_degree(&self, v: usize) -> usize {
        self.out.degree(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[VertexId] {
        self.out.neighbors(v)
    }

    #[inline]
    pub fn neighbor_weights(&self, v: usize) -> Option<&[Weight]> {
        self.out.neighbor_weights(v)
    }

    pub fn offsets(&self) -> &[usize] {
        self.out.offsets()
    }

    pub fn targets(&self) -> &[VertexId] {
        self.out.targets()
    }

    pub fn weights(&self) -> Option<&[Weight]> {
        self.out.weights()
    }

    pub fn has_self_loops(&self) -> bool {
        (0..self.n).any(|v| self.neighbors(v).binary_search(&(v as VertexId)).is_ok())
    }

    /// Iterates `(src, dst, weight)` over every stored directed edge.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Option<Weight>)> + '_ {
        (0..self.n).flat_map(move |u| {
            let w = self.neighbor_weights(u);
            self.neighbors(u)
                .iter()
                .enumerate()
                .map(move |(i, &v)| (u as VertexId, v, w.map(|w| w[i])))
        })
    }

    /// Every stored directed edge as an edge list over the same vertex set.
    pub fn to_edge_list(&self) -> EdgeList {
        let mut el = EdgeList {
            num_vertices: Some(self.n),
            weights: self.is_weighted().then(Vec::new),
            ..EdgeList::default()
        };
        for (u, v, w) in self.edges() {
            match w {
                Some(w) => el.push_weighted(u, v, w),
                None => el.push(u, v),
            }
        }
        el
    }

    /// Equality of vertex count, direction flag and outgoing arrays,
    /// ignoring any attached inverse.
    pub fn same_structure(&self, other: &Graph) -> bool {
        self.n == other.n && self.directed == other.directed && self.out == other.out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeStats {
    pub min_deg: usize,
    pub max_deg: usize,
    pub avg_deg: f64,
    /// Population standard deviation of out-degrees over their mean.
    pub degree_cv: f64,
    /// Bucket 0 holds isolated vertices; bucket `k > 0` holds degrees in
    /// `[2^(k-1), 2^k)`.
    pub histogram: BTreeMap<u32, usize>,
}

pub fn degree_stats(g: &Graph) -> Result<DegreeStats> {
    let n = g.num_vertices();
    if n == 0 {
        return Err(Error::UndefinedStats);
    }
    let mut min_deg = usize::MAX;
    let mut max_deg = 0;
    let mut histogram = BTreeMap::new();
    for v in 0..n {
        let d = g.out_degree(v);
        min_deg = min_deg.min(d);
        max_deg = max_deg.max(d);
        let bucket = if d == 0 {
            0
        } else {
            usize::BITS - d.leading_zeros()
        };
        *histogram.entry(bucket).or_insert(0) += 1;
    }
    let avg_deg = g.num_edges() as f64 / n as f64;
    let variance = (0..n)
        .map(|v| {
            let diff = g.out_degree(v) as f64 - avg_deg;
            diff * diff
        })
        .sum::<f64>()
        / n as f64;
    let degree_cv = if min_deg == max_deg || avg_deg == 0.0 {
        0.0
    } else {
        variance.sqrt() / avg_deg
    };
    Ok(DegreeStats {
        min_deg,
        max_deg,
        avg_deg,
        degree_cv,
        histogram,
    })
}
