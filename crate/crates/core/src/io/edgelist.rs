//! Whitespace-separated `src dst [weight]` edge lists (SNAP style).

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use super::open_text;
use crate::error::{Error, Result};
use crate::graph::EdgeList;

pub fn load_edge_list(path: &Path, weighted: bool) -> Result<EdgeList> {
    read_edge_list(open_text(path)?, weighted)
}

/// Lines starting with `#` or `%` are comments. A SNAP header comment
/// `# Nodes: N ...` declares the vertex count.
///
/// Ids are kept verbatim when they are dense: every id is below the
/// declared count, or the ids seen are exactly `0..k`. Otherwise they are
/// renumbered in order of first appearance and the originals are kept in
/// [`EdgeList::original_ids`]. Columns after the ones needed are ignored.
pub fn read_edge_list(mut r: impl BufRead, weighted: bool) -> Result<EdgeList> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    let mut weights = weighted.then(Vec::new);
    let mut declared: Option<u64> = None;
    let mut line = String::new();
    let mut lineno = 0usize;
    loop {
        line.clear();
        if r.read_line(&mut line)? == 0 {
            break;
        }
        lineno += 1;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(comment) = t.strip_prefix('#').or_else(|| t.strip_prefix('%')) {
            if declared.is_none() {
                declared = snap_node_count(comment);
            }
            continue;
        }
        let mut it = t.split_whitespace();
        let mut field = |what: &str| -> Result<&str> {
            it.next()
                .ok_or_else(|| Error::malformed(format!("line {lineno}: missing {what}")))
        };
        let id = |tok: &str| -> Result<u64> {
            tok.parse()
                .map_err(|_| Error::malformed(format!("line {lineno}: `{tok}` is not a vertex id")))
        };
        let u = id(field("source")?)?;
        let v = id(field("target")?)?;
        if let Some(ws) = weights.as_mut() {
            let tok = field("weight")?;
            let w: f32 = tok
                .parse()
                .map_err(|_| Error::malformed(format!("line {lineno}: `{tok}` is not a weight")))?;
            ws.push(w);
        }
        raw.push((u, v));
    }

    let max_id = raw.iter().map(|&(u, v)| u.max(v)).max();
    let verbatim_n = match (declared, max_id) {
        (Some(n), Some(m)) if m < n => Some(n),
        (Some(n), None) => Some(n),
        (None, None) => Some(0),
        // at most 2 * len distinct ids, so a larger maximum cannot be dense
        (_, Some(m)) if m as usize >= raw.len() * 2 => None,
        (_, Some(m)) => {
            let mut seen = vec![false; m as usize + 1];
            for &(u, v) in &raw {
                seen[u as usize] = true;
                seen[v as usize] = true;
            }
            seen.iter().all(|&b| b).then_some(m + 1)
        }
    };
    if let Some(n) = verbatim_n {
        if n > u32::MAX as u64 + 1 {
            return Err(Error::malformed(format!("{n} vertices exceed 32-bit ids")));
        }
        return Ok(EdgeList {
            edges: raw.into_iter().map(|(u, v)| (u as u32, v as u32)).collect(),
            weights,
            num_vertices: Some(n as usize),
            symmetric: false,
            original_ids: None,
        });
    }
    let mut map: HashMap<u64, u32> = HashMap::new();
    let mut original = Vec::new();
    let mut dense = |x: u64| -> u32 {
        *map.entry(x).or_insert_with(|| {
            original.push(x);
            (original.len() - 1) as u32
        })
    };
    let edges: Vec<(u32, u32)> = raw.into_iter().map(|(u, v)| (dense(u), dense(v))).collect();
    if original.len() > u32::MAX as usize {
        return Err(Error::malformed(
            "too many distinct vertex ids for 32-bit ids",
        ));
    }
    Ok(EdgeList {
        edges,
        weights,
        num_vertices: Some(original.len()),
        symmetric: false,
        original_ids: Some(original),
    })
}

fn snap_node_count(comment: &str) -> Option<u64> {
    let mut it = comment.split_whitespace();
    while let Some(tok) = it.next() {
        if tok.eq_ignore_ascii_case("nodes:") {
            return it.next()?.parse().ok();
        }
    }
    None
}

/// Writes a SNAP-style file with a `# Nodes: N Edges: M` header so that
/// isolated vertices survive a round trip.
pub fn write_edge_list(path: &Path, el: &EdgeList) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# Nodes: {} Edges: {}", el.vertex_count(), el.len())?;
    for (k, &(u, v)) in el.edges.iter().enumerate() {
        match el.weight(k) {
            Some(x) => writeln!(w, "{u}\t{v}\t{x:?}")?,
            None => writeln!(w, "{u}\t{v}")?,
        }
    }
    w.flush()?;
    Ok(())
}
