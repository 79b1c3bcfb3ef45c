//! Row-parallel sparse matrix-vector product over the CSR.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `y[i] = sum_j A[i][j] * x[j]`. Rows are the out-lists of `a`; an
/// unweighted graph is read as a 0/1 pattern matrix.
pub fn spmv(a: &Graph, x: &[f64]) -> Result<Vec<f64>> {
    let n = a.num_vertices();
    if x.len() != n {
        return Err(Error::param(format!(
            "vector length {} does not match {n} columns",
            x.len()
        )));
    }
    let csr = a.out_csr();
    let mut y = vec![0.0; n];
    match csr.weights() {
        Some(w) => y
            .par_iter_mut()
            .with_min_len(256)
            .enumerate()
            .for_each(|(i, yi)| {
                let r = csr.row(i);
                *yi = csr.targets()[r.clone()]
                    .iter()
                    .zip(&w[r])
                    .map(|(&j, &aij)| aij as f64 * x[j as usize])
                    .sum();
            }),
        None => y
            .par_iter_mut()
            .with_min_len(256)
            .enumerate()
            .for_each(|(i, yi)| {
                *yi = csr.neighbors(i).iter().map(|&j| x[j as usize]).sum();
            }),
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_uniform;
    use crate::graph::{build_graph, BuildOptions, EdgeList};
    use crate::kernels::with_workers;
    use crate::verify::oracle_spmv_dense;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn matrix(n: usize, triples: &[(u32, u32, f32)]) -> Graph {
        build_graph(&EdgeList::from_weighted(n, triples), BuildOptions::matrix()).unwrap()
    }

    #[test]
    fn identity() {
        let a = matrix(3, &[(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)]);
        assert_eq!(spmv(&a, &[1.5, -2.0, 7.0]).unwrap(), vec![1.5, -2.0, 7.0]);
    }

    #[test]
    fn two_by_two() {
        let a = matrix(2, &[(0, 0, 2.0), (1, 0, 1.0), (1, 1, 3.0)]);
        assert_eq!(spmv(&a, &[1.0, 2.0]).unwrap(), vec![2.0, 7.0]);
    }

    #[test]
    fn length_mismatch() {
        let a = matrix(2, &[(0, 0, 2.0)]);
        assert!(matches!(spmv(&a, &[1.0]), Err(Error::Parameter(_))));
    }

    #[test]
    fn random_matches_dense_oracle() {
        let mut el = gen_uniform(200, 2000, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        el.weights = Some((0..el.len()).map(|_| rng.random_range(-1.0..1.0)).collect());
        let a = build_graph(&el, BuildOptions::matrix()).unwrap();
        let x: Vec<f64> = (0..200).map(|_| rng.random_range(-1.0..1.0)).collect();
        let got = spmv(&a, &x).unwrap();
        let oracle = oracle_spmv_dense(&a, &x).unwrap();
        for (g, o) in got.iter().zip(&oracle) {
            assert!((g - o).abs() <= 1e-6 * g.abs().max(o.abs()).max(1e-12));
        }
        let many = with_workers(6, || spmv(&a, &x)).unwrap().unwrap();
        assert_eq!(got, many);
    }

    #[test]
    fn pattern_matrix_counts_neighbors() {
        let g = build_graph(
            &EdgeList::from_pairs(3, &[(0, 1), (0, 2)]),
            BuildOptions::directed(),
        )
        .unwrap();
        assert_eq!(spmv(&g, &[1.0, 1.0, 1.0]).unwrap(), vec![2.0, 0.0, 0.0]);
    }
}
