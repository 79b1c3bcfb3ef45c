//! Benchmark harness for the gardenia kernels.
//!
//! [`Harness`] runs one [`BenchConfig`]: the input is loaded and prepared
//! outside the timed region, the kernel runs once untimed and then
//! `trials` times under the clock, and the serial reference, the
//! instrumentation pass and verification follow, also untimed.

pub mod config;
pub mod harness;
pub mod record;
pub mod source;
pub mod workload;

pub use config::{default_workers, BenchConfig, DEFAULT_TRIALS};
pub use harness::{
    run_benchmark, run_kernel_once, sweep, BenchRun, Clock, Harness, NoObserver, Observer, Phase,
    SystemClock,
};
pub use record::{emit_csv, read_csv, write_csv, BenchRecord};
pub use source::{GraphSource, Loaded};
pub use workload::{Output, Workload};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] gardenia_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
