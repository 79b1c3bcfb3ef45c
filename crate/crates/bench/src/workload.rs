//! Turns loaded input into what one kernel needs, and runs, times and
//! checks it.

use gardenia_core::generators::{attach_integer_weights, Ratings};
use gardenia_core::instrument::{trace_traversal, IterationTrace};
use gardenia_core::kernels::symgs::{laplacian_system, residual_norm};
use gardenia_core::kernels::{
    self, sssp::default_delta, BcSources, Coloring, FactorModel, KernelId, KernelParams,
};
use gardenia_core::verify::{
    self, check_coloring, compare, serial, ToleranceSpec, VerifyReport, BC_ORACLE_LIMIT,
    DENSE_ORACLE_LIMIT, TC_ORACLE_LIMIT,
};
use gardenia_core::{build_graph, BuildOptions, Graph};

use crate::config::BenchConfig;
use crate::source::Loaded;
use crate::BenchError;

const REL_TOL: f64 = 1e-6;

/// Output of one kernel invocation.
#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Hops(Vec<u32>),
    Distances(Vec<f32>),
    Scores(Vec<f64>),
    Labels(Vec<u32>),
    Count(u64),
    Model(FactorModel),
    Colors(Coloring),
    Vector(Vec<f64>),
}

#[derive(Debug)]
pub struct Workload {
    pub kernel: KernelId,
    graph: Option<Graph>,
    ratings: Option<Ratings>,
    pub source: u32,
    bc_sources: BcSources,
    delta: f32,
    /// SpMV input, or the SymGS starting point.
    x: Vec<f64>,
    b: Vec<f64>,
    coloring: Option<Coloring>,
    workers: usize,
}

fn needs_undirected(kernel: KernelId) -> bool {
    matches!(
        kernel,
        KernelId::Cc | KernelId::Tc | KernelId::Coloring | KernelId::Symgs
    )
}

impl Workload {
    pub fn prepare(cfg: &BenchConfig, loaded: Loaded) -> Result<Self, BenchError> {
        let kernel = cfg.kernel;
        let params = &cfg.params;
        let mut w = Workload {
            kernel,
            graph: None,
            ratings: None,
            source: 0,
            bc_sources: match params.bc_sources {
                Some(count) => BcSources::Sample {
                    count,
                    seed: params.seed,
                },
                None => BcSources::All,
            },
            delta: 1.0,
            x: Vec::new(),
            b: Vec::new(),
            coloring: None,
            workers: cfg.workers,
        };
        if kernel == KernelId::Sgd {
            w.ratings = Some(match loaded {
                Loaded::Ratings(r) => r,
                Loaded::Edges { edges, .. } => Ratings::from_edge_list(&edges),
                Loaded::Graph(_) => {
                    return Err(BenchError::Config(
                        "sgd needs ratings, not a binary graph".into(),
                    ))
                }
            });
            return Ok(w);
        }
        let g = match loaded {
            Loaded::Ratings(_) => {
                return Err(BenchError::Config(format!(
                    "{kernel} needs a graph, not ratings"
                )))
            }
            Loaded::Graph(g) => g,
            Loaded::Edges {
                mut edges,
                undirected,
            } => {
                if matches!(kernel, KernelId::SsspDeltaStepping | KernelId::SsspBellman)
                    && !edges.is_weighted()
                {
                    attach_integer_weights(&mut edges, 1, 255, params.seed);
                }
                let mut opts = if undirected || cfg.symmetrize {
                    BuildOptions::undirected()
                } else {
                    BuildOptions::directed()
                };
                // SpMV input is a matrix: keep diagonals and repeated entries
                if kernel == KernelId::Spmv {
                    opts.dedup = false;
                }
                build_graph(&edges, opts)?
            }
        };
        if needs_undirected(kernel) && g.is_directed() {
            return Err(BenchError::Config(format!(
                "{kernel} needs an undirected graph; pass --symmetrize"
            )));
        }
        let g = g.with_inverse();
        let n = g.num_vertices();
        if kernel.is_traversal() {
            if n == 0 {
                return Err(BenchError::Config("graph has no vertices".into()));
            }
            w.source = match cfg.source_vertex {
                Some(s) if (s as usize) < n => s,
                Some(s) => {
                    return Err(BenchError::Config(format!(
                        "source {s} out of range for n = {n}"
                    )))
                }
                None => (0..n)
                    .max_by_key(|&v| (g.out_degree(v), std::cmp::Reverse(v)))
                    .unwrap() as u32,
            };
        }
        match kernel {
            KernelId::SsspDeltaStepping => {
                w.delta = params.delta.unwrap_or_else(|| default_delta(&g))
            }
            KernelId::Spmv => w.x = (0..n).map(|i| 1.0 + (i % 7) as f64 / 7.0).collect(),
            KernelId::Symgs => {
                let a = laplacian_system(&g, 1.0)?;
                // right-hand side for the all-ones solution
                w.b = kernels::spmv(&a, &vec![1.0; n])?;
                w.x = vec![0.0; n];
                w.coloring = Some(kernels::greedy_coloring(&a));
                w.graph = Some(a);
                return Ok(w);
            }
            _ => {}
        }
        w.graph = Some(g);
        Ok(w)
    }

    fn g(&self) -> &Graph {
        self.graph.as_ref().expect("graph workload")
    }

    pub fn num_vertices(&self) -> usize {
        match &self.ratings {
            Some(r) => r.num_users + r.num_items,
            None => self.g().num_vertices(),
        }
    }

    pub fn num_edges(&self) -> usize {
        match &self.ratings {
            Some(r) => r.entries.len(),
            None => self.g().num_edges(),
        }
    }

    /// The optimized kernel, on the ambient pool.
    pub fn run(&self, p: &KernelParams) -> Result<Output, BenchError> {
        use KernelId::*;
        let s = self.source;
        Ok(match self.kernel {
            BfsPush => Output::Hops(kernels::bfs_push(self.g(), s)?),
            BfsPull => Output::Hops(kernels::bfs_pull(self.g(), s)?),
            BfsDirectionOptimizing => Output::Hops(kernels::bfs_direction_optimizing(
                self.g(),
                s,
                p.alpha,
                p.beta,
            )?),
            BfsQuadratic => Output::Hops(kernels::bfs_quadratic(self.g(), s)?),
            SsspDeltaStepping => {
                Output::Distances(kernels::sssp_delta_stepping(self.g(), s, self.delta)?)
            }
            SsspBellman => Output::Distances(kernels::sssp_bellman(self.g(), s)?),
            Bc => Output::Scores(kernels::bc(self.g(), self.bc_sources)?),
            PageRank => Output::Scores(
                kernels::pagerank(self.g(), p.damping, p.tolerance, p.max_iters)?.scores,
            ),
            Cc => Output::Labels(kernels::cc_label_propagation(self.g())?),
            Tc => Output::Count(kernels::triangle_count(self.g())?),
            Sgd => Output::Model(kernels::sgd_mf(self.ratings.as_ref().unwrap(), &p.sgd)?),
            Spmv => Output::Vector(kernels::spmv(self.g(), &self.x)?),
            Coloring => Output::Colors(kernels::greedy_coloring(self.g())),
            Symgs => Output::Vector(kernels::symgs(
                self.g(),
                &self.x,
                &self.b,
                self.coloring.as_ref().unwrap(),
                p.sweeps,
            )?),
        })
    }

    /// The serial reference used as the speedup baseline.
    pub fn run_serial(&self, p: &KernelParams) -> Result<Output, BenchError> {
        use KernelId::*;
        let s = self.source;
        Ok(match self.kernel {
            BfsPush | BfsPull | BfsDirectionOptimizing | BfsQuadratic => {
                Output::Hops(verify::oracle_bfs(self.g(), s)?)
            }
            SsspDeltaStepping | SsspBellman => {
                Output::Distances(verify::oracle_dijkstra(self.g(), s)?)
            }
            Bc => {
                let sources = self.bc_sources.resolve(self.g().num_vertices())?;
                Output::Scores(serial::bc(self.g(), &sources))
            }
            PageRank => {
                Output::Scores(serial::pagerank(self.g(), p.damping, p.tolerance, p.max_iters)?.0)
            }
            Cc => Output::Labels(verify::oracle_cc_unionfind(self.g())?),
            Tc => Output::Count(serial::tc(self.g())?),
            Sgd => Output::Model(serial::sgd(self.ratings.as_ref().unwrap(), &p.sgd)?),
            Spmv => Output::Vector(serial::spmv(self.g(), &self.x)?),
            Coloring => Output::Colors(kernels::greedy_coloring(self.g())),
            Symgs => Output::Vector(verify::oracle_gs_serial(
                self.g(),
                &self.x,
                &self.b,
                p.sweeps,
                Some(&self.coloring.as_ref().unwrap().classes().concat()),
            )?),
        })
    }

    /// Checks `out` against the size-guarded oracle when the input is small
    /// enough, otherwise against the serial reference.
    pub fn verify(&self, out: &Output, p: &KernelParams) -> Result<VerifyReport, BenchError> {
        use KernelId::*;
        let name = self.kernel.name();
        let g = self.graph.as_ref();
        let n = self.num_vertices();
        let report = match (self.kernel, out) {
            (BfsPush | BfsPull | BfsDirectionOptimizing | BfsQuadratic, Output::Hops(d)) => {
                compare(
                    name,
                    d,
                    &verify::oracle_bfs(g.unwrap(), self.source)?,
                    ToleranceSpec::Exact,
                )?
            }
            (SsspDeltaStepping | SsspBellman, Output::Distances(d)) => compare(
                name,
                d,
                &verify::oracle_dijkstra(g.unwrap(), self.source)?,
                ToleranceSpec::Exact,
            )?,
            (Bc, Output::Scores(s)) => {
                let reference = if n <= BC_ORACLE_LIMIT && self.bc_sources == BcSources::All {
                    verify::oracle_bc_allpairs(g.unwrap())?
                } else {
                    serial::bc(g.unwrap(), &self.bc_sources.resolve(n)?)
                };
                compare(name, s, &reference, ToleranceSpec::Relative(REL_TOL))?
            }
            (PageRank, Output::Scores(s)) => {
                let reference = if n <= DENSE_ORACLE_LIMIT {
                    verify::oracle_pagerank_dense(g.unwrap(), p.damping, p.tolerance, p.max_iters)?
                } else {
                    serial::pagerank(g.unwrap(), p.damping, p.tolerance, p.max_iters)?.0
                };
                compare(name, s, &reference, ToleranceSpec::Relative(REL_TOL))?
            }
            (Cc, Output::Labels(l)) => compare(
                name,
                l,
                &verify::oracle_cc_unionfind(g.unwrap())?,
                ToleranceSpec::Partition,
            )?,
            (Tc, Output::Count(c)) => {
                let reference = if n <= TC_ORACLE_LIMIT {
                    verify::oracle_tc_bruteforce(g.unwrap())?
                } else {
                    serial::tc(g.unwrap())?
                };
                compare(
                    name,
                    &[*c as f64],
                    &[reference as f64],
                    ToleranceSpec::Exact,
                )?
            }
            (Sgd, Output::Model(m)) => self.verify_sgd(m, p)?,
            (Spmv, Output::Vector(y)) => {
                let reference = if n <= DENSE_ORACLE_LIMIT {
                    verify::oracle_spmv_dense(g.unwrap(), &self.x)?
                } else {
                    serial::spmv(g.unwrap(), &self.x)?
                };
                compare(name, y, &reference, ToleranceSpec::Relative(REL_TOL))?
            }
            (Coloring, Output::Colors(c)) => check_coloring(g.unwrap(), c),
            (Symgs, Output::Vector(x)) => {
                let mut report = match self.run_serial(p)? {
                    Output::Vector(reference) => {
                        compare(name, x, &reference, ToleranceSpec::Relative(REL_TOL))?
                    }
                    _ => unreachable!(),
                };
                let a = g.unwrap();
                let before = residual_norm(a, &self.x, &self.b)?;
                let after = residual_norm(a, x, &self.b)?;
                report.details = format!("residual {before:.3e} -> {after:.3e}");
                let (e0, e1) = (energy(a, &self.x, &self.b)?, energy(a, x, &self.b)?);
                if e1 > e0 + 1e-9 * e0.abs().max(1.0) {
                    report.passed = false;
                    report.details += &format!(", energy rose {e0:.6e} -> {e1:.6e}");
                }
                report
            }
            _ => {
                return Err(BenchError::Config(
                    "kernel output does not match the kernel".into(),
                ))
            }
        };
        Ok(report)
    }

    /// One worker must reproduce the serial updater exactly; concurrent
    /// updates may interleave, so then only the final RMSE is compared, to
    /// within 10%.
    fn verify_sgd(&self, m: &FactorModel, p: &KernelParams) -> Result<VerifyReport, BenchError> {
        let reference = serial::sgd(self.ratings.as_ref().unwrap(), &p.sgd)?;
        if self.workers == 1 {
            let mut report = compare(
                "sgd",
                &m.user_factors,
                &reference.user_factors,
                ToleranceSpec::Exact,
            )?;
            let items = compare(
                "sgd",
                &m.item_factors,
                &reference.item_factors,
                ToleranceSpec::Exact,
            )?;
            if !items.passed {
                report = items;
            }
            return Ok(report);
        }
        let (got, want) = match (m.rmse_trace.last(), reference.rmse_trace.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (0.0, 0.0),
        };
        let mut report = compare("sgd", &[got], &[want], ToleranceSpec::Relative(0.1))?;
        report.details = format!("final rmse {got:.4} vs serial {want:.4}");
        Ok(report)
    }

    /// Edges scanned by one traversal, summed over sources for BC.
    pub fn edges_scanned(&self, p: &KernelParams) -> Result<Option<usize>, BenchError> {
        if !self.kernel.is_traversal() {
            return Ok(None);
        }
        let g = self.g();
        if self.kernel == KernelId::Bc {
            let mut total = 0;
            for s in self.bc_sources.resolve(g.num_vertices())? {
                total += trace_traversal(KernelId::Bc, g, s, p)?.total_edges_scanned();
            }
            return Ok(Some(total));
        }
        Ok(Some(
            trace_traversal(self.kernel, g, self.source, p)?.total_edges_scanned(),
        ))
    }

    pub fn trace(&self, p: &KernelParams) -> Result<Option<IterationTrace>, BenchError> {
        if !self.kernel.is_traversal() {
            return Ok(None);
        }
        Ok(Some(trace_traversal(
            self.kernel,
            self.g(),
            self.source,
            p,
        )?))
    }

    /// Floating-point operations per run: `2 nnz` for SpMV, and `2 nnz` per
    /// triangular pass for SymGS (two passes per sweep).
    pub fn flops(&self, p: &KernelParams) -> Option<f64> {
        let nnz = self.graph.as_ref()?.num_edges() as f64;
        match self.kernel {
            KernelId::Spmv => Some(2.0 * nnz),
            KernelId::Symgs => Some(4.0 * nnz * p.sweeps as f64),
            _ => None,
        }
    }
}

/// `x'Ax / 2 - b'x`, which Gauss-Seidel never increases on SPD systems.
fn energy(a: &Graph, x: &[f64], b: &[f64]) -> Result<f64, BenchError> {
    let ax = kernels::spmv(a, x)?;
    Ok(x.iter()
        .zip(&ax)
        .zip(b)
        .map(|((xi, axi), bi)| 0.5 * xi * axi - bi * xi)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::GraphSource;

    fn prepare(kernel: KernelId, graph: &str) -> Result<Workload, BenchError> {
        let cfg = BenchConfig::new(kernel, graph.parse::<GraphSource>().unwrap());
        Workload::prepare(&cfg, cfg.graph.load(None, false)?)
    }

    #[test]
    fn default_source_is_the_highest_degree_vertex() {
        // grid corners have degree 2, interior vertices 4; vertex 4 is the first interior one
        assert_eq!(
            prepare(KernelId::BfsPush, "gen:grid:3x3").unwrap().source,
            4
        );
    }

    #[test]
    fn sssp_gets_integer_weights() {
        let w = prepare(KernelId::SsspBellman, "gen:rmat:8:4:1").unwrap();
        let ws = w.g().weights().unwrap();
        assert!(ws
            .iter()
            .all(|&x| (1.0..=255.0).contains(&x) && x.fract() == 0.0));
    }

    #[test]
    fn incompatible_inputs() {
        assert!(matches!(
            prepare(KernelId::Cc, "gen:rmat:6:4:1"),
            Err(BenchError::Config(_))
        ));
        assert!(matches!(
            prepare(KernelId::Bc, "gen:ratings:5:5:10:1"),
            Err(BenchError::Config(_))
        ));
        let cfg = BenchConfig {
            source_vertex: Some(99),
            ..BenchConfig::new(KernelId::BfsPush, "gen:grid:3x3".parse().unwrap())
        };
        assert!(Workload::prepare(&cfg, cfg.graph.load(None, false).unwrap()).is_err());
    }

    #[test]
    fn symgs_runs_on_the_shifted_laplacian() {
        let w = prepare(KernelId::Symgs, "gen:grid:4x4").unwrap();
        // corner: degree 2 plus the shift
        let diag = kernels::symgs::diagonal(w.g()).unwrap();
        assert_eq!(diag[0], 3.0);
        assert_eq!(
            w.flops(&KernelParams::default()),
            Some(4.0 * w.g().num_edges() as f64)
        );
        let out = w.run(&KernelParams::default()).unwrap();
        assert!(w.verify(&out, &KernelParams::default()).unwrap().passed);
    }
}
