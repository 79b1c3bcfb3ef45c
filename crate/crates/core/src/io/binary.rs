//! GRDN binary CSR image.
//!
//! Little-endian throughout:
//!
//! | bytes | field |
//! |-------|-------|
//! | 4 | magic `GRDN` |
//! | 2 | version, currently 1 |
//! | 2 | flags: bit 0 directed, bit 1 weighted |
//! | 8 | n |
//! | 8 | m |
//! | 8 (n+1) | row offsets, u64 |
//! | 4 m | column indices, u32 |
//! | 4 m | weights, f32 (only when weighted) |

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAGIC: &[u8; 4] = b"GRDN";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 24;
const DIRECTED: u16 = 1;
const WEIGHTED: u16 = 2;

pub fn encode_binary(g: &Graph, mut w: impl Write) -> Result<()> {
    let mut flags = 0;
    if g.is_directed() {
        flags |= DIRECTED;
    }
    if g.is_weighted() {
        flags |= WEIGHTED;
    }
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&flags.to_le_bytes())?;
    w.write_all(&(g.num_vertices() as u64).to_le_bytes())?;
    w.write_all(&(g.num_edges() as u64).to_le_bytes())?;
    for &o in g.offsets() {
        w.write_all(&(o as u64).to_le_bytes())?;
    }
    for &t in g.targets() {
        w.write_all(&t.to_le_bytes())?;
    }
    if let Some(ws) = g.weights() {
        for &x in ws {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn save_binary(g: &Graph, path: &Path) -> Result<()> {
    let mut w = BufWriter::with_capacity(1 << 20, File::create(path)?);
    encode_binary(g, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_binary(path: &Path) -> Result<Graph> {
    decode_binary(&std::fs::read(path)?)
}

struct Cursor<'a> {
    bytes: &'a [u8],
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize, what: &str) -> Result<&'a [u8]> {
        if self.bytes.len() < len {
            return Err(Error::malformed(format!(
                "truncated {what}: need {len} bytes, {} left",
                self.bytes.len()
            )));
        }
        let (head, tail) = self.bytes.split_at(len);
        self.bytes = tail;
        Ok(head)
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
}

pub fn decode_binary(bytes: &[u8]) -> Result<Graph> {
    if bytes.len() < 8 {
        return Err(Error::IncompatibleFile(
            "file shorter than the GRDN header".into(),
        ));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::IncompatibleFile(format!(
            "bad magic {:?}",
            &bytes[..4]
        )));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(Error::IncompatibleFile(format!(
            "unsupported version {version}"
        )));
    }
    let flags = u16::from_le_bytes([bytes[6], bytes[7]]);
    if flags & !(DIRECTED | WEIGHTED) != 0 {
        return Err(Error::IncompatibleFile(format!("unknown flags {flags:#x}")));
    }
    let mut c = Cursor { bytes: &bytes[8..] };
    let n = c.u64("header")?;
    let m = c.u64("header")?;
    let arrays = |count: u64, width: u64| {
        count
            .checked_mul(width)
            .and_then(|b| usize::try_from(b).ok())
    };
    let bad_size = || Error::malformed("array sizes overflow");
    let offsets: Vec<usize> = c
        .take(
            n.checked_add(1)
                .and_then(|k| arrays(k, 8))
                .ok_or_else(bad_size)?,
            "offsets",
        )?
        .chunks_exact(8)
        .map(|b| u64::from_le_bytes(b.try_into().unwrap()) as usize)
        .collect();
    let targets: Vec<u32> = c
        .take(arrays(m, 4).ok_or_else(bad_size)?, "indices")?
        .chunks_exact(4)
        .map(|b| u32::from_le_bytes(b.try_into().unwrap()))
        .collect();
    let weights = if flags & WEIGHTED != 0 {
        Some(
            c.take(arrays(m, 4).ok_or_else(bad_size)?, "weights")?
                .chunks_exact(4)
                .map(|b| f32::from_le_bytes(b.try_into().unwrap()))
                .collect(),
        )
    } else {
        None
    };
    if !c.bytes.is_empty() {
        return Err(Error::malformed(format!(
            "{} trailing bytes",
            c.bytes.len()
        )));
    }
    Graph::from_csr(offsets, targets, weights, flags & DIRECTED != 0)
}
