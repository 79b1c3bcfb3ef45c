//! Graph file formats, a binary CSR image and the dataset manifest.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use flate2::read::MultiGzDecoder;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_graph, BuildOptions, EdgeList, Graph};

mod binary;
mod edgelist;
mod manifest;
mod mtx;

pub use binary::{decode_binary, encode_binary, load_binary, save_binary, HEADER_LEN};
pub use edgelist::{load_edge_list, read_edge_list, write_edge_list};
pub use manifest::{
    fetch_dataset, verify_counts, DatasetEntry, DatasetManifest, PublishedCount, Topology,
};
pub use mtx::{load_matrix_market, read_matrix_market, write_matrix_market};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Mtx,
    #[serde(alias = "el")]
    Edgelist,
    Snap,
    Bin,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Mtx => "mtx",
            Format::Edgelist => "el",
            Format::Snap => "snap",
            Format::Bin => "bin",
        }
    }

    /// Guesses from the file name, looking through a trailing `.gz`.
    pub fn from_path(path: &Path) -> Option<Format> {
        let name = path.file_name()?.to_str()?.to_ascii_lowercase();
        let name = name.strip_suffix(".gz").unwrap_or(&name);
        let ext = name.rsplit_once('.')?.1;
        match ext {
            "mtx" => Some(Format::Mtx),
            "el" | "txt" | "tsv" | "edges" => Some(Format::Edgelist),
            "bin" | "grdn" => Some(Format::Bin),
            _ => None,
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mtx" => Ok(Format::Mtx),
            "el" | "edgelist" => Ok(Format::Edgelist),
            "snap" => Ok(Format::Snap),
            "bin" => Ok(Format::Bin),
            other => Err(Error::UnsupportedFormat(format!(
                "unknown format `{other}`"
            ))),
        }
    }
}

/// Opens a text file, transparently decompressing gzip content.
pub(crate) fn open_text(path: &Path) -> Result<Box<dyn BufRead>> {
    let mut file = BufReader::with_capacity(1 << 20, File::open(path)?);
    let gz = file.fill_buf()?.starts_with(&[0x1f, 0x8b]);
    Ok(if gz {
        Box::new(BufReader::with_capacity(1 << 20, MultiGzDecoder::new(file)))
    } else {
        Box::new(file)
    })
}

/// Reads any text format into an edge list. `weighted` applies to edge lists
/// only; MatrixMarket files declare it in the banner.
pub fn load_edges(path: &Path, format: Format, weighted: bool) -> Result<EdgeList> {
    match format {
        Format::Mtx => load_matrix_market(path),
        Format::Edgelist | Format::Snap => load_edge_list(path, weighted),
        Format::Bin => Ok(load_binary(path)?.to_edge_list()),
    }
}

/// Loads a graph. MatrixMarket files with a `symmetric` banner are always
/// symmetrized; binary images keep their stored direction.
pub fn load_graph(
    path: &Path,
    format: Format,
    weighted: bool,
    opts: BuildOptions,
) -> Result<Graph> {
    if format == Format::Bin {
        return load_binary(path);
    }
    let el = load_edges(path, format, weighted)?;
    let opts = if el.symmetric {
        BuildOptions {
            symmetrize: true,
            ..opts
        }
    } else {
        opts
    };
    build_graph(&el, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn format_names() {
        for f in [Format::Mtx, Format::Edgelist, Format::Snap, Format::Bin] {
            assert_eq!(f.as_str().parse::<Format>().unwrap(), f);
        }
        assert!(matches!(
            "csv".parse::<Format>(),
            Err(Error::UnsupportedFormat(_))
        ));
        assert_eq!(
            Format::from_path(Path::new("a/cage14.mtx.gz")),
            Some(Format::Mtx)
        );
        assert_eq!(
            Format::from_path(Path::new("web-Google.txt")),
            Some(Format::Edgelist)
        );
        assert_eq!(Format::from_path(Path::new("noext")), None);
    }

    #[test]
    fn gzip_is_transparent() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.el.gz");
        let mut enc = flate2::write::GzEncoder::new(
            File::create(&path).unwrap(),
            flate2::Compression::fast(),
        );
        enc.write_all(b"# c\n0 1\n1 2\n").unwrap();
        enc.finish().unwrap();
        let el = load_edges(&path, Format::Edgelist, false).unwrap();
        assert_eq!(el.edges, vec![(0, 1), (1, 2)]);
    }
}
