//! Symmetric Gauss-Seidel smoothing, parallel within each color class.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::{build_graph, BuildOptions, EdgeList, Graph, Weight};

/// Runs `sweeps` symmetric sweeps of Gauss-Seidel on `A x = b` starting
/// from `x`. A sweep visits colors in ascending order, then descending;
/// rows of one color depend only on rows of other colors and are updated
/// concurrently with
/// `x[i] = (b[i] - sum_{j != i} A[i][j] x[j]) / A[i][i]`.
///
/// Rows of `a` are its out-lists. Repeated entries in a row are summed.
pub fn symgs(
    a: &Graph,
    x: &[f64],
    b: &[f64],
    coloring: &Coloring,
    sweeps: usize,
) -> Result<Vec<f64>> {
    let n = a.num_vertices();
    if x.len() != n || b.len() != n {
        return Err(Error::param(format!(
            "vector lengths x = {}, b = {} do not match {n} rows",
            x.len(),
            b.len()
        )));
    }
    if !coloring.is_proper(a) {
        return Err(Error::precondition(
            "coloring is not proper for the matrix pattern",
        ));
    }
    let diag = diagonal(a)?;
    let classes = coloring.classes();
    let csr = a.out_csr();
    let cells: Vec<AtomicU64> = x.iter().map(|v| AtomicU64::new(v.to_bits())).collect();
    let read = |j: usize| f64::from_bits(cells[j].load(Ordering::Relaxed));
    let relax = |class: &Vec<u32>| {
        class.par_iter().with_min_len(64).for_each(|&i| {
            let i = i as usize;
            let mut s = b[i];
            let ws = csr.neighbor_weights(i);
            for (k, &j) in csr.neighbors(i).iter().enumerate() {
                if j as usize != i {
                    s -= weight(ws, k) * read(j as usize);
                }
            }
            cells[i].store((s / diag[i]).to_bits(), Ordering::Relaxed);
        })
    };
    for _ in 0..sweeps {
        classes.iter().for_each(relax);
        classes.iter().rev().for_each(relax);
    }
    Ok(cells
        .into_iter()
        .map(|c| f64::from_bits(c.into_inner()))
        .collect())
}

#[inline]
fn weight(ws: Option<&[Weight]>, k: usize) -> f64 {
    ws.map_or(1.0, |w| w[k] as f64)
}

/// Diagonal of `a`, or the first row whose diagonal is zero.
pub fn diagonal(a: &Graph) -> Result<Vec<f64>> {
    let csr = a.out_csr();
    (0..a.num_vertices())
        .map(|i| {
            let ws = csr.neighbor_weights(i);
            let d: f64 = csr
                .neighbors(i)
                .iter()
                .enumerate()
                .filter(|&(_, &j)| j as usize == i)
                .map(|(k, _)| weight(ws, k))
                .sum();
            if d == 0.0 {
                Err(Error::SingularMatrix { row: i })
            } else {
                Ok(d)
            }
        })
        .collect()
}

/// `||b - A x||_2`.
pub fn residual_norm(a: &Graph, x: &[f64], b: &[f64]) -> Result<f64> {
    let ax = super::spmv(a, x)?;
    if b.len() != ax.len() {
        return Err(Error::param(
            "right-hand side length does not match the matrix",
        ));
    }
    Ok(b.iter()
        .zip(&ax)
        .map(|(bi, yi)| (bi - yi) * (bi - yi))
        .sum::<f64>()
        .sqrt())
}

/// The matrix `L + shift * I` where `L` is the Laplacian of undirected `g`
/// (edge weights taken as 1 when absent). Symmetric and strictly diagonally
/// dominant for `shift > 0`, hence positive definite.
pub fn laplacian_system(g: &Graph, shift: f64) -> Result<Graph> {
    if g.is_directed() {
        return Err(Error::precondition("Laplacian needs an undirected graph"));
    }
    if shift.is_nan() || shift <= 0.0 {
        return Err(Error::param("shift must be positive"));
    }
    let n = g.num_vertices();
    let mut diag = vec![shift; n];
    let mut el = EdgeList::new_weighted(n);
    for (u, v, w) in g.edges() {
        if u != v {
            let w = w.unwrap_or(1.0).abs();
            diag[u as usize] += w as f64;
            el.push_weighted(u, v, -w);
        }
    }
    for (i, d) in diag.into_iter().enumerate() {
        el.push_weighted(i as u32, i as u32, d as f32);
    }
    build_graph(&el, BuildOptions::matrix())
}
