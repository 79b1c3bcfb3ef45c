use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgMatches, Args, Command, FromArgMatches, Parser, Subcommand};

use gardenia_bench::{
    emit_csv, sweep, BenchConfig, BenchError, GraphSource, Harness, NoObserver, SystemClock,
    DEFAULT_TRIALS,
};
use gardenia_core::generators::{gen_grid2d, gen_ratings, gen_rmat, gen_uniform, RmatParams};
use gardenia_core::io::{
    fetch_dataset, save_binary, write_edge_list, write_matrix_market, DatasetManifest, Format,
};
use gardenia_core::kernels::KernelId;
use gardenia_core::{build_graph, BuildOptions, EdgeList};

#[derive(Args, Debug)]
struct KernelArgs {
    /// Input file, or a generator recipe such as gen:rmat:16:16:1
    #[arg(long)]
    graph: String,
    /// mtx, el, snap or bin; guessed from the extension when omitted
    #[arg(long)]
    format: Option<Format>,
    /// Read a weight column from edge lists
    #[arg(long)]
    weighted: bool,
    #[arg(long)]
    symmetrize: bool,
    /// Traversal source vertex
    #[arg(long)]
    source: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    runs: usize,
    #[arg(long, env = "GARDENIA_THREADS")]
    threads: Option<usize>,
    #[arg(long)]
    delta: Option<f32>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    damping: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    lr: Option<f32>,
    #[arg(long)]
    lambda: Option<f32>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    sweeps: Option<usize>,
    /// Sample this many BC sources instead of using every vertex
    #[arg(long)]
    bc_sources: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    verify: bool,
    /// Print the per-iteration trace as CSV
    #[arg(long)]
    trace: bool,
    /// Write the result record as CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

impl KernelArgs {
    fn config(self, kernel: KernelId) -> Result<BenchConfig, BenchError> {
        let mut cfg = BenchConfig::new(kernel, self.graph.parse()?);
        cfg.format = self.format;
        cfg.weighted = self.weighted;
        cfg.symmetrize = self.symmetrize;
        cfg.source_vertex = self.source;
        cfg.trials = self.runs;
        if let Some(t) = self.threads {
            cfg.workers = t;
        }
        let p = &mut cfg.params;
        p.delta = self.delta.or(p.delta);
        p.alpha = self.alpha.unwrap_or(p.alpha);
        p.beta = self.beta.unwrap_or(p.beta);
        p.damping = self.damping.unwrap_or(p.damping);
        p.tolerance = self.tol.unwrap_or(p.tolerance);
        p.max_iters = self.max_iters.unwrap_or(p.max_iters);
        p.bc_sources = self.bc_sources.or(p.bc_sources);
        p.sweeps = self.sweeps.unwrap_or(p.sweeps);
        p.seed = self.seed.unwrap_or(p.seed);
        p.sgd.k = self.k.unwrap_or(p.sgd.k);
        p.sgd.learning_rate = self.lr.unwrap_or(p.sgd.learning_rate);
        p.sgd.regularization = self.lambda.unwrap_or(p.sgd.regularization);
        p.sgd.epochs = self.epochs.unwrap_or(p.sgd.epochs);
        if let Some(seed) = self.seed {
            p.sgd.seed = seed;
        }
        cfg.verify = self.verify;
        cfg.trace = self.trace;
        cfg.output = self.out;
        Ok(cfg)
    }
}

#[derive(Parser, Debug)]
enum Tools {
    /// Generate a synthetic input and write it to disk
    Gen {
        #[command(subcommand)]
        what: GenKind,
    },
    /// Download a dataset listed in a manifest and check its counts
    Fetch {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long)]
        dest: PathBuf,
    },
    /// Run every kernel on every graph and write one CSV row per pair
    Sweep {
        /// Comma-separated kernel names
        #[arg(long, value_delimiter = ',', required = true)]
        kernels: Vec<KernelId>,
        /// Comma-separated inputs (paths or gen: recipes)
        #[arg(long, value_delimiter = ',', required = true)]
        graphs: Vec<GraphSource>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        runs: usize,
        #[arg(long, env = "GARDENIA_THREADS")]
        threads: Option<usize>,
        #[arg(long)]
        symmetrize: bool,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    Rmat {
        #[arg(long)]
        scale: u32,
        #[arg(long, default_value_t = 16)]
        edge_factor: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        dest: GenDest,
    },
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[command(flatten)]
        dest: GenDest,
    },
    Uniform {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        dest: GenDest,
    },
    /// user item rating triples, written as a weighted edge list
    Ratings {
        #[arg(long)]
        users: usize,
        #[arg(long)]
        items: usize,
        #[arg(long)]
        ratings: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        dest: GenDest,
    },
}

#[derive(Args, Debug)]
struct GenDest {
    #[arg(long)]
    out: PathBuf,
    /// Defaults to the extension of --out, then to an edge list
    #[arg(long)]
    format: Option<Format>,
}

fn cli() -> Command {
    let mut cmd = Command::new("gardenia")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Graph analytics kernels with oracles and a benchmark harness")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for k in KernelId::ALL {
        cmd = cmd.subcommand(KernelArgs::augment_args(
            Command::new(k.name()).about(format!("Benchmark the {} kernel", k.name())),
        ));
    }
    Tools::augment_subcommands(cmd)
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    match dispatch(&matches) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Returns false when a verification failed.
fn dispatch(matches: &ArgMatches) -> Result<bool, BenchError> {
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    if let Ok(kernel) = name.parse::<KernelId>() {
        let args =
            KernelArgs::from_arg_matches(sub).map_err(|e| BenchError::Config(e.to_string()))?;
        return run_kernel(args.config(kernel)?);
    }
    match Tools::from_arg_matches(matches).map_err(|e| BenchError::Config(e.to_string()))? {
        Tools::Gen { what } => generate(what).map(|()| true),
        Tools::Fetch {
            manifest,
            name,
            dest,
        } => {
            let manifest = DatasetManifest::load(&manifest)?;
            let path = fetch_dataset(&manifest, &name, &dest)?;
            println!("{name}: verified {}", path.display());
            Ok(true)
        }
        Tools::Sweep {
            kernels,
            graphs,
            runs,
            threads,
            symmetrize,
            verify,
            out,
        } => {
            let mut cfgs = Vec::new();
            for graph in &graphs {
                for &kernel in &kernels {
                    let mut cfg = BenchConfig::new(kernel, graph.clone());
                    cfg.trials = runs;
                    cfg.symmetrize = symmetrize;
                    cfg.verify = verify;
                    if let Some(t) = threads {
                        cfg.workers = t;
                    }
                    cfgs.push(cfg);
                }
            }
            let records = sweep(&cfgs, |r| match &r.error {
                Some(e) => eprintln!("{} on {}: {e}", r.kernel, r.dataset),
                None => println!("{}", summary(r)),
            });
            if let Some(out) = out {
                emit_csv(&records, &out)?;
            }
            Ok(records.iter().all(|r| r.error.is_none()))
        }
    }
}

fn run_kernel(cfg: BenchConfig) -> Result<bool, BenchError> {
    let clock = SystemClock::new();
    let run = Harness::new(&clock, &NoObserver).run(&cfg)?;
    if let Some(trace) = &run.trace {
        print!("{}", trace.to_csv());
    }
    println!("{}", summary(&run.record));
    if let Some(report) = &run.report {
        println!("{report}");
    }
    if let Some(out) = &cfg.output {
        emit_csv(std::slice::from_ref(&run.record), out)?;
    }
    Ok(run.report.is_none_or(|r| r.passed))
}

fn summary(r: &gardenia_bench::BenchRecord) -> String {
    let mut s = format!(
        "{} on {} (n {}, m {}, {} workers): avg {:.6} s, min {:.6} s",
        r.kernel, r.dataset, r.n, r.m, r.workers, r.time_avg_s, r.time_min_s
    );
    if let Some(x) = r.mteps {
        s += &format!(", {x:.2} MTEPS");
    }
    if let Some(x) = r.gflops {
        s += &format!(", {x:.3} GFLOPS");
    }
    if let Some(x) = r.speedup_vs_serial {
        s += &format!(", {x:.2}x vs serial");
    }
    s
}

fn generate(what: GenKind) -> Result<(), BenchError> {
    let (edges, undirected, dest) = match what {
        GenKind::Rmat {
            scale,
            edge_factor,
            seed,
            dest,
        } => (
            gen_rmat(&RmatParams::new(scale, edge_factor, seed))?,
            false,
            dest,
        ),
        GenKind::Grid { rows, cols, dest } => (gen_grid2d(rows, cols)?, true, dest),
        GenKind::Uniform { n, m, seed, dest } => (gen_uniform(n, m, seed)?, false, dest),
        GenKind::Ratings {
            users,
            items,
            ratings,
            seed,
            dest,
        } => {
            let r = gen_ratings(users, items, ratings, (1.0, 5.0), seed)?;
            let mut el = EdgeList::new_weighted(users.max(items));
            for &(u, i, x) in &r.entries {
                el.push_weighted(u, i, x);
            }
            (el, false, dest)
        }
    };
    write_edges(&edges, undirected, &dest.out, dest.format)?;
    println!("wrote {} edges to {}", edges.len(), dest.out.display());
    Ok(())
}

fn write_edges(
    edges: &EdgeList,
    undirected: bool,
    out: &Path,
    format: Option<Format>,
) -> Result<(), BenchError> {
    match format
        .or_else(|| Format::from_path(out))
        .unwrap_or(Format::Edgelist)
    {
        Format::Mtx => write_matrix_market(out, edges)?,
        Format::Edgelist | Format::Snap => write_edge_list(out, edges)?,
        Format::Bin => {
            let opts = if undirected {
                BuildOptions::undirected()
            } else {
                BuildOptions::directed()
            };
            save_binary(&build_graph(edges, opts)?, out)?;
        }
    }
    Ok(())
}
