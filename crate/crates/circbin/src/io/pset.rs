//! `PSET1` point sets.
//!
//! ```text
//! offset  size      field
//! 0       5         magic "PSET1"
//! 5       8         n, u64 little-endian
//! 13      8         N, u64 little-endian
//! 21      8·N·n     f64 little-endian, row-major
//! ```

use std::path::Path;

use circbin_core::PointSet;

use super::{read_file, write_file, IoError, Loaded, Result};

pub const MAGIC: &[u8; 5] = b"PSET1";
pub const HEADER_LEN: usize = 21;

pub fn encode(ps: &PointSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * ps.as_slice().len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(ps.dim() as u64).to_le_bytes());
    out.extend_from_slice(&(ps.len() as u64).to_le_bytes());
    for v in ps.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

fn read_u64(bytes: &[u8], offset: usize) -> Result<u64> {
    bytes
        .get(offset..offset + 8)
        .map(|b| u64::from_le_bytes(b.try_into().expect("8-byte slice")))
        .ok_or(IoError::Truncated {
            offset: bytes.len(),
            expected: HEADER_LEN as u64,
        })
}

/// Parses and normalizes a `PSET1` image.
pub fn decode(bytes: &[u8]) -> Result<Loaded> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        let offset = bytes.iter().zip(MAGIC).take_while(|(a, b)| a == b).count();
        return Err(IoError::BadMagic {
            offset,
            expected: "PSET1",
        });
    }
    let dim = read_u64(bytes, 5)?;
    let count = read_u64(bytes, 13)?;
    if dim < 2 {
        return Err(IoError::Header {
            offset: 5,
            message: format!("dimension {dim} is below 2"),
        });
    }
    if count == 0 {
        return Err(IoError::Header {
            offset: 13,
            message: "point count is zero".into(),
        });
    }
    let expected = dim
        .checked_mul(count)
        .and_then(|c| c.checked_mul(8))
        .and_then(|c| c.checked_add(HEADER_LEN as u64))
        .ok_or_else(|| IoError::Header {
            offset: 5,
            message: "payload size overflows".into(),
        })?;
    if (bytes.len() as u64) < expected {
        return Err(IoError::Truncated {
            offset: bytes.len(),
            expected,
        });
    }
    if (bytes.len() as u64) > expected {
        return Err(IoError::TrailingBytes {
            offset: expected as usize,
        });
    }
    let dim = dim as usize;
    let payload = &bytes[HEADER_LEN..];
    let mut data = Vec::with_capacity(payload.len() / 8);
    for (idx, chunk) in payload.chunks_exact(8).enumerate() {
        let v = f64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
        if !v.is_finite() {
            return Err(IoError::NonFinite {
                row: idx / dim,
                offset: HEADER_LEN + 8 * idx,
            });
        }
        data.push(v);
    }
    if let Some(row) = data.chunks_exact(dim).position(|r| r.iter().all(|&v| v == 0.0)) {
        return Err(IoError::ZeroRow {
            row,
            offset: HEADER_LEN + 8 * row * dim,
        });
    }
    let (points, normalization) = PointSet::normalized(dim, data)?;
    Ok(Loaded { points, normalization })
}

pub fn load_pointset(path: &Path) -> Result<PointSet> {
    Ok(decode(&read_file(path)?)?.points)
}

pub fn save_pointset(ps: &PointSet, path: &Path) -> Result<()> {
    write_file(path, &encode(ps))
}
