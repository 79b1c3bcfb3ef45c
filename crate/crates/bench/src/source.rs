//! Where a benchmark's input comes from: a file or a generator recipe.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gardenia_core::generators::{
    gen_grid2d, gen_ratings, gen_rmat, gen_uniform, Ratings, RmatParams,
};
use gardenia_core::io::{load_binary, load_edges, Format};
use gardenia_core::{EdgeList, Graph};

use crate::BenchError;

/// `gen:rmat:S:EF:SEED`, `gen:grid:RxC`, `gen:uniform:N:M:SEED`,
/// `gen:ratings:U:I:R:SEED`, or a path.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphSource {
    File(PathBuf),
    Rmat {
        scale: u32,
        edge_factor: usize,
        seed: u64,
    },
    Grid {
        rows: usize,
        cols: usize,
    },
    Uniform {
        n: usize,
        m: usize,
        seed: u64,
    },
    Ratings {
        users: usize,
        items: usize,
        ratings: usize,
        seed: u64,
    },
}

/// Raw input before a kernel-specific graph is built.
#[derive(Clone, Debug)]
pub enum Loaded {
    Edges {
        edges: EdgeList,
        /// The source itself is undirected (grids, symmetric MatrixMarket).
        undirected: bool,
    },
    Graph(Graph),
    Ratings(Ratings),
}

impl GraphSource {
    pub fn load(&self, format: Option<Format>, weighted: bool) -> Result<Loaded, BenchError> {
        Ok(match *self {
            GraphSource::File(ref path) => {
                let format = match format {
                    Some(f) => f,
                    None => Format::from_path(path).ok_or_else(|| {
                        BenchError::Config(format!(
                            "cannot tell the format of {}; pass --format",
                            path.display()
                        ))
                    })?,
                };
                if format == Format::Bin {
                    Loaded::Graph(load_binary(path)?)
                } else {
                    let edges = load_edges(path, format, weighted)?;
                    let undirected = edges.symmetric;
                    Loaded::Edges { edges, undirected }
                }
            }
            GraphSource::Rmat {
                scale,
                edge_factor,
                seed,
            } => Loaded::Edges {
                edges: gen_rmat(&RmatParams::new(scale, edge_factor, seed))?,
                undirected: false,
            },
            GraphSource::Grid { rows, cols } => Loaded::Edges {
                edges: gen_grid2d(rows, cols)?,
                undirected: true,
            },
            GraphSource::Uniform { n, m, seed } => Loaded::Edges {
                edges: gen_uniform(n, m, seed)?,
                undirected: false,
            },
            GraphSource::Ratings {
                users,
                items,
                ratings,
                seed,
            } => Loaded::Ratings(gen_ratings(users, items, ratings, (1.0, 5.0), seed)?),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        match self {
            GraphSource::File(p) => Some(p),
            _ => None,
        }
    }
}

impl FromStr for GraphSource {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        let Some(recipe) = s.strip_prefix("gen:") else {
            return Ok(GraphSource::File(PathBuf::from(s)));
        };
        let bad = || BenchError::Config(format!("bad generator recipe `{s}`"));
        let parts: Vec<&str> = recipe.split(':').collect();
        fn num<T: FromStr>(t: &str, bad: impl Fn() -> BenchError) -> Result<T, BenchError> {
            t.parse().map_err(|_| bad())
        }
        match parts[..] {
            ["rmat", scale, ef, seed] => Ok(GraphSource::Rmat {
                scale: num(scale, bad)?,
                edge_factor: num(ef, bad)?,
                seed: num(seed, bad)?,
            }),
            ["grid", dims] => {
                let (r, c) = dims.split_once('x').ok_or_else(bad)?;
                Ok(GraphSource::Grid {
                    rows: num(r, bad)?,
                    cols: num(c, bad)?,
                })
            }
            ["uniform", n, m, seed] => Ok(GraphSource::Uniform {
                n: num(n, bad)?,
                m: num(m, bad)?,
                seed: num(seed, bad)?,
            }),
            ["ratings", u, i, r, seed] => Ok(GraphSource::Ratings {
                users: num(u, bad)?,
                items: num(i, bad)?,
                ratings: num(r, bad)?,
                seed: num(seed, bad)?,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::File(p) => write!(f, "{}", p.display()),
            GraphSource::Rmat {
                scale,
                edge_factor,
                seed,
            } => write!(f, "gen:rmat:{scale}:{edge_factor}:{seed}"),
            GraphSource::Grid { rows, cols } => write!(f, "gen:grid:{rows}x{cols}"),
            GraphSource::Uniform { n, m, seed } => write!(f, "gen:uniform:{n}:{m}:{seed}"),
            GraphSource::Ratings {
                users,
                items,
                ratings,
                seed,
            } => {
                write!(f, "gen:ratings:{users}:{items}:{ratings}:{seed}")
            }
        }
    }
}
