//! Dataset manifest (TOML) and downloader.

use std::collections::HashSet;
use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;
use serde::{Deserialize, Serialize};

use super::{load_edges, Format};
use crate::error::{Error, Result};
use crate::graph::EdgeList;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Mesh,
    Social,
}

/// A vertex or edge count as published, e.g. `"1.5M"`. A value matches when
/// it rounds to the published figure: the tolerance is half a unit in the
/// last published digit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCount", into = "String")]
pub struct PublishedCount {
    text: String,
    value: f64,
    tolerance: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawCount {
    Int(u64),
    Text(String),
}

impl TryFrom<RawCount> for PublishedCount {
    type Error = Error;

    fn try_from(raw: RawCount) -> Result<Self> {
        match raw {
            RawCount::Int(v) => Ok(PublishedCount {
                text: v.to_string(),
                value: v as f64,
                tolerance: 0.0,
            }),
            RawCount::Text(s) => s.parse(),
        }
    }
}

impl From<PublishedCount> for String {
    fn from(c: PublishedCount) -> String {
        c.text
    }
}

impl std::str::FromStr for PublishedCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::param(format!("bad published count `{s}`"));
        let (digits, scale) = match t.chars().last().ok_or_else(bad)?.to_ascii_uppercase() {
            'K' => (&t[..t.len() - 1], 1e3),
            'M' => (&t[..t.len() - 1], 1e6),
            'B' | 'G' => (&t[..t.len() - 1], 1e9),
            _ => (t, 1.0),
        };
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit() || c == '.') {
            return Err(bad());
        }
        let mantissa: f64 = digits.parse().map_err(|_| bad())?;
        let decimals = digits.split_once('.').map_or(0, |(_, frac)| frac.len());
        let value = mantissa * scale;
        if value.is_nan() || value <= 0.0 {
            return Err(bad());
        }
        Ok(PublishedCount {
            text: t.to_string(),
            value,
            tolerance: if scale == 1.0 && decimals == 0 {
                0.0
            } else {
                0.5 * scale * 10f64.powi(-(decimals as i32))
            },
        })
    }
}

impl PublishedCount {
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn matches(&self, x: u64) -> bool {
        (x as f64 - self.value).abs() <= self.tolerance * (1.0 + 1e-12)
    }
}

impl fmt::Display for PublishedCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub name: String,
    pub url: String,
    /// Path of the graph file inside `dest_dir` after download and
    /// extraction. Defaults to the last component of the URL.
    #[serde(default)]
    pub file: Option<String>,
    pub format: Format,
    #[serde(default)]
    pub expected_n: Option<PublishedCount>,
    #[serde(default)]
    pub expected_m: Option<PublishedCount>,
    /// Checked as `|m / n - avg_degree| <= 0.5`.
    #[serde(default)]
    pub avg_degree: Option<f64>,
    pub topology: Topology,
    #[serde(default)]
    pub description: Option<String>,
}

impl DatasetEntry {
    fn archive_name(&self) -> &str {
        self.url.rsplit('/').next().unwrap_or(&self.url)
    }

    pub fn local_path(&self, dest_dir: &Path) -> PathBuf {
        dest_dir.join(self.file.as_deref().unwrap_or_else(|| self.archive_name()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    #[serde(rename = "dataset", default)]
    pub entries: Vec<DatasetEntry>,
}

impl DatasetManifest {
    pub fn parse(text: &str) -> Result<Self> {
        let m: DatasetManifest =
            toml::from_str(text).map_err(|e| Error::malformed(format!("manifest: {e}")))?;
        let mut names = HashSet::new();
        for e in &m.entries {
            if !names.insert(e.name.as_str()) {
                return Err(Error::malformed(format!(
                    "manifest: duplicate dataset `{}`",
                    e.name
                )));
            }
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn get(&self, name: &str) -> Option<&DatasetEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Checks loaded counts against the manifest. `m` is the number of entries
/// the loader produced (stored triangle for symmetric MatrixMarket files).
pub fn verify_counts(entry: &DatasetEntry, el: &EdgeList) -> Result<()> {
    let n = el.vertex_count() as u64;
    let m = el.len() as u64;
    let mut problems = Vec::new();
    if let Some(exp) = &entry.expected_n {
        if !exp.matches(n) {
            problems.push(format!("n = {n}, expected {exp}"));
        }
    }
    if let Some(exp) = &entry.expected_m {
        if !exp.matches(m) {
            problems.push(format!("m = {m}, expected {exp}"));
        }
    }
    if let Some(avg) = entry.avg_degree {
        let got = if n == 0 { 0.0 } else { m as f64 / n as f64 };
        if (got - avg).abs() > 0.5 {
            problems.push(format!("average degree {got:.2}, expected {avg}"));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::DatasetVerification(format!(
            "{}: {}",
            entry.name,
            problems.join("; ")
        )))
    }
}

/// Downloads `name` into `dest_dir` unless its file is already there, unpacks
/// `.tar.gz` archives, then loads the file and checks its counts.
pub fn fetch_dataset(manifest: &DatasetManifest, name: &str, dest_dir: &Path) -> Result<PathBuf> {
    let entry = manifest
        .get(name)
        .ok_or_else(|| Error::Fetch(format!("dataset `{name}` is not in the manifest")))?;
    let target = entry.local_path(dest_dir);
    if !target.exists() {
        fs::create_dir_all(dest_dir)?;
        let archive = dest_dir.join(entry.archive_name());
        if !archive.exists() {
            download(&entry.url, &archive)?;
        }
        let lower = entry.archive_name().to_ascii_lowercase();
        if lower.ends_with(".tar.gz") || lower.ends_with(".tgz") {
            tar::Archive::new(GzDecoder::new(File::open(&archive)?)).unpack(dest_dir)?;
        }
        if !target.exists() {
            return Err(Error::Fetch(format!(
                "{} does not contain {}; unpack it by hand into {}",
                archive.display(),
                target.display(),
                dest_dir.display()
            )));
        }
    }
    let el = load_edges(&target, entry.format, false)?;
    verify_counts(entry, &el)?;
    Ok(target)
}

fn download(url: &str, to: &Path) -> Result<()> {
    let part = to.with_extension("part");
    let response = ureq::get(url)
        .call()
        .map_err(|e| Error::Fetch(format!("{url}: {e}")))?;
    let mut out = BufWriter::new(File::create(&part)?);
    io::copy(&mut response.into_body().into_reader(), &mut out)
        .map_err(|e| Error::Fetch(format!("{url}: {e}")))?;
    drop(out);
    fs::rename(&part, to)?;
    Ok(())
}
