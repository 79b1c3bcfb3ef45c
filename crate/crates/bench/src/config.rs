use std::path::PathBuf;

use gardenia_core::io::Format;
use gardenia_core::kernels::{KernelId, KernelParams};

use crate::source::GraphSource;
use crate::BenchError;

pub const DEFAULT_TRIALS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub kernel: KernelId,
    pub graph: GraphSource,
    /// Guessed from the file extension when absent.
    pub format: Option<Format>,
    /// Read a third weight column from edge-list files.
    pub weighted: bool,
    pub symmetrize: bool,
    /// Traversal source; defaults to the vertex of largest out-degree.
    pub source_vertex: Option<u32>,
    pub trials: usize,
    pub workers: usize,
    pub params: KernelParams,
    pub verify: bool,
    pub trace: bool,
    pub output: Option<PathBuf>,
}

impl BenchConfig {
    pub fn new(kernel: KernelId, graph: GraphSource) -> Self {
        Self {
            kernel,
            graph,
            format: None,
            weighted: false,
            symmetrize: false,
            source_vertex: None,
            trials: DEFAULT_TRIALS,
            workers: default_workers(),
            params: KernelParams::default(),
            verify: false,
            trace: false,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.trials == 0 {
            return Err(BenchError::Config("trials must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(BenchError::Config("workers must be at least 1".into()));
        }
        if self.params.sweeps == 0 && self.kernel == KernelId::Symgs {
            return Err(BenchError::Config("symgs needs at least one sweep".into()));
        }
        Ok(())
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
