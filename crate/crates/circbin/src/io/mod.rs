//! Persistence for point sets, codes and reports.

pub mod csv;
pub mod generate;
pub mod pset;
pub mod report;

use std::path::{Path, PathBuf};

use circbin_core::geometry::Normalization;
use circbin_core::PointSet;

pub use generate::{generate_pointset, GenerateParams, PointSetKind};
pub use pset::{load_pointset, save_pointset};
pub use report::{ResultDocument, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("bad magic at byte {offset}: expected {expected:?}")]
    BadMagic { offset: usize, expected: &'static str },
    #[error("truncated at byte {offset}: expected {expected} bytes in total")]
    Truncated { offset: usize, expected: u64 },
    #[error("unexpected data at byte {offset}: file should end there")]
    TrailingBytes { offset: usize },
    #[error("invalid header at byte {offset}: {message}")]
    Header { offset: usize, message: String },
    #[error("row {row} is zero (payload starts at byte {offset})")]
    ZeroRow { row: usize, offset: usize },
    #[error("non-finite value in row {row} at byte {offset}")]
    NonFinite { row: usize, offset: usize },
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] circbin_core::Error),
}

pub type Result<T> = std::result::Result<T, IoError>;

pub(crate) fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// A point set plus the rows that had to be rescaled on load.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub points: PointSet,
    pub normalization: Normalization,
}

impl Loaded {
    /// One warning per row whose norm was off by more than the silent tolerance.
    pub fn warnings(&self) -> Vec<String> {
        self.normalization
            .far_from_unit
            .iter()
            .map(|(row, norm)| format!("row {row} had norm {norm} and was renormalized"))
            .collect()
    }
}

/// Loads `PSET1`, or CSV when the file name ends in `.csv`.
pub fn load_any(path: &Path) -> Result<Loaded> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let text = String::from_utf8_lossy(&read_file(path)?).into_owned();
        csv::parse_pointset(&text)
    } else {
        pset::decode(&read_file(path)?)
    }
}

/// Saves `PSET1`, or CSV when the file name ends in `.csv`.
pub fn save_any(ps: &PointSet, path: &Path) -> Result<()> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        write_file(path, csv::format_pointset(ps).as_bytes())
    } else {
        save_pointset(ps, path)
    }
}
