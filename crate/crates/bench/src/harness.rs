//! Timing protocol: load, prepare, one untimed warm-up, `trials` timed runs,
//! then untimed baselines, instrumentation and verification. Only the kernel
//! call sits between the two clock reads of a trial.

use std::time::Instant;

use gardenia_core::instrument::IterationTrace;
use gardenia_core::kernels::with_workers;
use gardenia_core::verify::VerifyReport;

use crate::config::BenchConfig;
use crate::record::BenchRecord;
use crate::workload::{Output, Workload};
use crate::BenchError;

/// Seconds since an arbitrary origin.
pub trait Clock: Sync {
    fn now(&self) -> f64;
}

pub struct SystemClock(Instant);

impl SystemClock {
    pub fn new() -> Self {
        SystemClock(Instant::now())
    }
}

impl Default for SystemClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for SystemClock {
    fn now(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Load,
    Prepare,
    Warmup,
    Trial(usize),
    Baseline,
    OneWorker,
    Instrument,
    Verify,
}

/// Hooks around each phase; the default does nothing.
pub trait Observer: Sync {
    fn enter(&self, _phase: Phase) {}
    fn exit(&self, _phase: Phase) {}
}

pub struct NoObserver;

impl Observer for NoObserver {}

/// Everything one run produced.
#[derive(Debug)]
pub struct BenchRun {
    pub record: BenchRecord,
    pub report: Option<VerifyReport>,
    pub trace: Option<IterationTrace>,
}

pub struct Harness<'a> {
    clock: &'a dyn Clock,
    observer: &'a dyn Observer,
}

impl<'a> Harness<'a> {
    pub fn new(clock: &'a dyn Clock, observer: &'a dyn Observer) -> Self {
        Self { clock, observer }
    }

    fn phase<R>(&self, phase: Phase, f: impl FnOnce() -> R) -> R {
        self.observer.enter(phase);
        let r = f();
        self.observer.exit(phase);
        r
    }

    fn timed<R>(&self, phase: Phase, f: impl FnOnce() -> R) -> (R, f64) {
        self.phase(phase, || {
            let t0 = self.clock.now();
            let r = f();
            let t1 = self.clock.now();
            (r, t1 - t0)
        })
    }

    pub fn run(&self, cfg: &BenchConfig) -> Result<BenchRun, BenchError> {
        cfg.validate()?;
        let p = &cfg.params;
        let loaded = self.phase(Phase::Load, || cfg.graph.load(cfg.format, cfg.weighted))?;
        let work = self.phase(Phase::Prepare, || Workload::prepare(cfg, loaded))?;

        let (times, output) = with_workers(cfg.workers, || -> Result<_, BenchError> {
            self.phase(Phase::Warmup, || work.run(p))?;
            let mut times = Vec::with_capacity(cfg.trials);
            let mut last = None;
            for i in 0..cfg.trials {
                let (out, t) = self.timed(Phase::Trial(i), || work.run(p));
                times.push(t);
                last = Some(out?);
            }
            Ok((times, last.unwrap()))
        })??;

        let (baseline, serial_time) = self.timed(Phase::Baseline, || work.run_serial(p));
        baseline?;
        let one_worker_time = if cfg.workers > 1 {
            let (r, t) = with_workers(1, || self.timed(Phase::OneWorker, || work.run(p)))?;
            r?;
            Some(t)
        } else {
            None
        };

        let (scanned, trace) = self.phase(Phase::Instrument, || -> Result<_, BenchError> {
            let trace = if cfg.trace { work.trace(p)? } else { None };
            Ok((work.edges_scanned(p)?, trace))
        })?;

        let report = if cfg.verify {
            Some(self.phase(Phase::Verify, || {
                with_workers(cfg.workers, || work.verify(&output, p))
            })??)
        } else {
            None
        };

        let time_min = times.iter().copied().fold(f64::INFINITY, f64::min);
        let time_avg = (times.iter().sum::<f64>() / times.len() as f64).max(time_min);
        let per_second = |x: f64| (time_avg > 0.0).then(|| x / time_avg);
        let record = BenchRecord {
            kernel: cfg.kernel.name().to_string(),
            dataset: cfg.graph.to_string(),
            n: work.num_vertices(),
            m: work.num_edges(),
            trials: cfg.trials,
            time_avg_s: time_avg,
            time_min_s: time_min,
            mteps: scanned
                .and_then(|e| per_second(e as f64 / 1e6))
                .filter(|&x| x > 0.0),
            gflops: work.flops(p).and_then(|f| per_second(f / 1e9)),
            speedup_vs_serial: per_second(serial_time),
            verified: report.as_ref().is_some_and(|r| r.passed),
            workers: cfg.workers,
            speedup_vs_one_worker: match one_worker_time {
                Some(t) => per_second(t),
                None => Some(1.0),
            },
            error: None,
        };
        Ok(BenchRun {
            record,
            report,
            trace,
        })
    }
}

/// Runs one configuration with the system clock.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchRecord, BenchError> {
    let clock = SystemClock::new();
    Ok(Harness::new(&clock, &NoObserver).run(cfg)?.record)
}

/// Runs cells one after another. A failing cell becomes a record with its
/// `error` set; `on_record` sees each record as soon as it exists.
pub fn sweep(cfgs: &[BenchConfig], mut on_record: impl FnMut(&BenchRecord)) -> Vec<BenchRecord> {
    let clock = SystemClock::new();
    let harness = Harness::new(&clock, &NoObserver);
    cfgs.iter()
        .map(|cfg| {
            let record = match harness.run(cfg) {
                Ok(run) => match run.report {
                    Some(r) if !r.passed => BenchRecord {
                        error: Some(r.to_string()),
                        ..run.record
                    },
                    _ => run.record,
                },
                Err(e) => BenchRecord::failed(
                    cfg.kernel.name(),
                    &cfg.graph.to_string(),
                    cfg.workers,
                    e.to_string(),
                ),
            };
            on_record(&record);
            record
        })
        .collect()
}

/// Output of the last trial, for callers that want it.
pub fn run_kernel_once(cfg: &BenchConfig) -> Result<Output, BenchError> {
    let work = Workload::prepare(cfg, cfg.graph.load(cfg.format, cfg.weighted)?)?;
    with_workers(cfg.workers, || work.run(&cfg.params))?
}
