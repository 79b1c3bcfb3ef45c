use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::BenchError;

/// One benchmark cell. CSV columns follow the field order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub kernel: String,
    pub dataset: String,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub time_avg_s: f64,
    pub time_min_s: f64,
    /// Millions of scanned edges per second (traversal kernels).
    pub mteps: Option<f64>,
    pub gflops: Option<f64>,
    /// Serial reference time over `time_avg_s`.
    pub speedup_vs_serial: Option<f64>,
    pub verified: bool,
    pub workers: usize,
    /// One-worker time of the same kernel over `time_avg_s`.
    pub speedup_vs_one_worker: Option<f64>,
    /// Set when the cell failed; the timing fields are then zero.
    pub error: Option<String>,
}

impl BenchRecord {
    pub fn failed(kernel: &str, dataset: &str, workers: usize, error: String) -> Self {
        Self {
            kernel: kernel.to_string(),
            dataset: dataset.to_string(),
            workers,
            error: Some(error),
            ..Self::default()
        }
    }
}

pub fn write_csv(records: &[BenchRecord], out: impl Write) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub const HEADER: [&str; 14] = [
    "kernel",
    "dataset",
    "n",
    "m",
    "trials",
    "time_avg_s",
    "time_min_s",
    "mteps",
    "gflops",
    "speedup_vs_serial",
    "verified",
    "workers",
    "speedup_vs_one_worker",
    "error",
];

/// Header row plus one row per record.
pub fn emit_csv(records: &[BenchRecord], path: &Path) -> Result<(), BenchError> {
    write_csv(records, File::create(path)?)
}

pub fn read_csv(r: impl Read) -> Result<Vec<BenchRecord>, BenchError> {
    csv::Reader::from_reader(r)
        .deserialize()
        .collect::<Result<Vec<BenchRecord>, _>>()
        .map_err(BenchError::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BenchRecord {
        BenchRecord {
            kernel: "bfs".into(),
            dataset: "gen:rmat:10:16:1".into(),
            n: 1024,
            m: 30000,
            trials: 10,
            time_avg_s: 0.0125,
            time_min_s: 0.01,
            mteps: Some(2.4),
            gflops: None,
            speedup_vs_serial: Some(1.5),
            verified: true,
            workers: 4,
            speedup_vs_one_worker: Some(3.1),
            error: None,
        }
    }

    #[test]
    fn empty_list_is_header_only() {
        let mut out = Vec::new();
        write_csv(&[], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), HEADER.join(",") + "\n");
    }

    #[test]
    fn one_record_two_lines_and_round_trip() {
        let mut out = Vec::new();
        let recs = vec![
            sample(),
            BenchRecord::failed("tc", "g, with comma", 2, "directed".into()),
        ];
        write_csv(&recs[..1], &mut out).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap().lines().count(), 2);
        let mut out = Vec::new();
        write_csv(&recs, &mut out).unwrap();
        assert_eq!(read_csv(&out[..]).unwrap(), recs);
        let mut again = Vec::new();
        write_csv(&recs, &mut again).unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let err = emit_csv(&[], Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(matches!(err, BenchError::Io(_)));
    }
}
