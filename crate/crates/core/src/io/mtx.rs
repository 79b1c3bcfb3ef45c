//! MatrixMarket coordinate files.

use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use super::open_text;
use crate::error::{Error, Result};
use crate::graph::EdgeList;

pub fn load_matrix_market(path: &Path) -> Result<EdgeList> {
    read_matrix_market(open_text(path)?)
}

/// Parses `%%MatrixMarket matrix coordinate <field> <symmetry>`.
///
/// Entries keep their file order and are shifted to 0-based ids. The vertex
/// count is `max(rows, cols)`. For `symmetric` files only the stored triangle
/// is returned and [`EdgeList::symmetric`] is set.
pub fn read_matrix_market(mut r: impl BufRead) -> Result<EdgeList> {
    let mut line = String::new();
    if r.read_line(&mut line)? == 0 {
        return Err(Error::malformed("empty MatrixMarket file"));
    }
    let banner: Vec<String> = line
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if banner.first().map(String::as_str) != Some("%%matrixmarket") || banner.len() != 5 {
        return Err(Error::UnsupportedFormat(format!(
            "not a MatrixMarket banner: {}",
            line.trim()
        )));
    }
    if banner[1] != "matrix" || banner[2] != "coordinate" {
        return Err(Error::UnsupportedFormat(format!(
            "{} {} storage",
            banner[1], banner[2]
        )));
    }
    let weighted = match banner[3].as_str() {
        "pattern" => false,
        "real" | "integer" | "double" => true,
        other => return Err(Error::UnsupportedFormat(format!("field `{other}`"))),
    };
    let symmetric = match banner[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(Error::UnsupportedFormat(format!("symmetry `{other}`"))),
    };

    let mut lineno = 1;
    let mut next_data_line = |line: &mut String, lineno: &mut usize| -> Result<bool> {
        loop {
            line.clear();
            if r.read_line(line)? == 0 {
                return Ok(false);
            }
            *lineno += 1;
            let t = line.trim_start();
            if !t.is_empty() && !t.starts_with('%') {
                return Ok(true);
            }
        }
    };
    if !next_data_line(&mut line, &mut lineno)? {
        return Err(Error::malformed("missing size line"));
    }
    let size: Vec<u64> = line
        .split_whitespace()
        .map(|t| t.parse::<u64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::malformed(format!("line {lineno}: bad size line `{}`", line.trim())))?;
    let [rows, cols, nnz] = size[..] else {
        return Err(Error::malformed(format!(
            "line {lineno}: size line needs rows, cols, entries"
        )));
    };
    let n = rows.max(cols);
    if n > u32::MAX as u64 {
        return Err(Error::malformed(format!("{n} rows exceed 32-bit ids")));
    }
    let mut el = if weighted {
        EdgeList::new_weighted(n as usize)
    } else {
        EdgeList::new(n as usize)
    };
    el.symmetric = symmetric;
    el.edges.reserve(nnz as usize);
    let mut count = 0u64;
    while next_data_line(&mut line, &mut lineno)? {
        count += 1;
        if count > nnz {
            return Err(Error::malformed(format!(
                "line {lineno}: more than the declared {nnz} entries"
            )));
        }
        let mut it = line.split_whitespace();
        let bad = || Error::malformed(format!("line {lineno}: bad entry `{}`", line.trim()));
        let mut index = |bound: u64| -> Result<u32> {
            let v: u64 = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
            if v == 0 || v > bound {
                return Err(Error::malformed(format!(
                    "line {lineno}: index {v} outside 1..={bound}"
                )));
            }
            Ok((v - 1) as u32)
        };
        let i = index(rows)?;
        let j = index(cols)?;
        if weighted {
            let w: f64 = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
            el.push_weighted(i, j, w as f32);
        } else {
            el.push(i, j);
        }
    }
    if count != nnz {
        return Err(Error::malformed(format!(
            "declared {nnz} entries but found {count}"
        )));
    }
    Ok(el)
}

/// Writes a square coordinate file: `real` when weighted, else `pattern`;
/// `symmetric` when the edge list carries that flag.
pub fn write_matrix_market(path: &Path, el: &EdgeList) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let field = if el.is_weighted() { "real" } else { "pattern" };
    let symmetry = if el.symmetric { "symmetric" } else { "general" };
    let n = el.vertex_count();
    writeln!(w, "%%MatrixMarket matrix coordinate {field} {symmetry}")?;
    writeln!(w, "{n} {n} {}", el.len())?;
    for (k, &(u, v)) in el.edges.iter().enumerate() {
        match el.weight(k) {
            Some(x) => writeln!(w, "{} {} {x:?}", u + 1, v + 1)?,
            None => writeln!(w, "{} {}", u + 1, v + 1)?,
        }
    }
    w.flush()?;
    Ok(())
}
