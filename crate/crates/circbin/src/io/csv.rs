//! Text interchange.
//!
//! Point sets: a `dim=<n>` header line, then one comma-separated row per
//! point with 17 significant digits. Codes: one row of `1`/`-1` per point.

use std::fmt::Write as _;

use circbin_core::{BinaryCode, PointSet};

use super::{IoError, Loaded, Result};

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_pointset(ps: &PointSet) -> String {
    let mut out = format!("dim={}\n", ps.dim());
    for row in ps.points() {
        let line: Vec<String> = row.iter().map(|&v| format_float(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_pointset(text: &str) -> Result<Loaded> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(IoError::Csv {
        line: 1,
        message: "empty file".into(),
    })?;
    let dim: usize = header
        .trim()
        .strip_prefix("dim=")
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| IoError::Csv {
            line: 1,
            message: format!("expected header dim=<n>, found {header:?}"),
        })?;
    let mut data = Vec::new();
    for (idx, line) in lines {
        let row: Vec<f64> = line
            .split(',')
            .map(|field| field.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| IoError::Csv {
                line: idx + 1,
                message: e.to_string(),
            })?;
        if row.len() != dim {
            return Err(IoError::Csv {
                line: idx + 1,
                message: format!("expected {dim} values, found {}", row.len()),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(IoError::Csv {
                line: idx + 1,
                message: "non-finite value".into(),
            });
        }
        if row.iter().all(|&v| v == 0.0) {
            return Err(IoError::Csv {
                line: idx + 1,
                message: "zero row".into(),
            });
        }
        data.extend(row);
    }
    let (points, normalization) = PointSet::normalized(dim, data)?;
    Ok(Loaded { points, normalization })
}

pub fn format_codes(codes: &[BinaryCode]) -> String {
    let mut out = String::new();
    for code in codes {
        for (t, b) in code.bits().iter().enumerate() {
            if t > 0 {
                out.push(',');
            }
            write!(out, "{b}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn parse_codes(text: &str) -> Result<Vec<BinaryCode>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(idx, line)| {
            let bits = line
                .split(',')
                .map(|f| match f.trim() {
                    "1" | "+1" => Ok(1i8),
                    "-1" => Ok(-1i8),
                    other => Err(IoError::Csv {
                        line: idx + 1,
                        message: format!("code entry {other:?} is not ±1"),
                    }),
                })
                .collect::<Result<Vec<i8>>>()?;
            Ok(BinaryCode::new(bits)?)
        })
        .collect()
}
