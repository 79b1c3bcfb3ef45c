//! Parallel graph-analytics kernels with serial reference oracles.
//!
//! Graphs are stored in CSR form ([`graph::Graph`]); kernels live in
//! [`kernels`] and run on the ambient rayon pool. [`verify`] holds the
//! oracles, [`instrument`] the frontier traces and load-imbalance
//! statistics, and [`io`] the file formats.

pub mod error;
pub mod frontier;
pub mod generators;
pub mod graph;
pub mod instrument;
pub mod io;
pub mod kernels;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{build_graph, BuildOptions, EdgeList, Graph, VertexId, Weight};
