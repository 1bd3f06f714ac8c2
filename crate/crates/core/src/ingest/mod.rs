//! Workbook loading and corpus preprocessing.

mod canonical;
mod preprocess;
#[cfg(feature = "xlsx")]
mod xlsx;

use std::path::Path;

use serde::Serialize;

use crate::formula::FormulaError;
use crate::grid::Workbook;

pub use canonical::{
    load_canonical, parse_canonical, serialize_canonical, CellDocument, SheetDocument, WorkbookDocument, SCHEMA_VERSION,
};
pub use preprocess::{
    candidate_files, classify_file, preprocess_corpus, relative_name, FileClass, PreprocessFilter, PreprocessReport,
};
#[cfg(feature = "xlsx")]
pub use xlsx::{load_xlsx, load_xlsx_with_warnings};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("schema violation{}: {message}", location(sheet, addr))]
    Schema {
        sheet: Option<String>,
        addr: Option<String>,
        message: String,
    },
    #[error("{sheet}!{addr}: {source}")]
    Formula {
        sheet: String,
        addr: String,
        #[source]
        source: FormulaError,
    },
    #[error("{path}: unreadable workbook: {message}")]
    Unreadable { path: String, message: String },
    #[error("{0}: unsupported file format")]
    UnsupportedFormat(String),
    #[error("{0}: not a directory")]
    NotADirectory(String),
}

fn location(sheet: &Option<String>, addr: &Option<String>) -> String {
    match (sheet, addr) {
        (Some(s), Some(a)) => format!(" at {s}!{a}"),
        (Some(s), None) => format!(" in sheet {s}"),
        _ => String::new(),
    }
}

impl IngestError {
    /// Whether the file itself could not be read, as opposed to being read but rejected.
    pub fn is_unreadable(&self) -> bool {
        matches!(
            self,
            IngestError::Io { .. }
                | IngestError::Json { .. }
                | IngestError::Unreadable { .. }
                | IngestError::UnsupportedFormat(_)
                | IngestError::NotADirectory(_)
        )
    }
}

/// A cell the XLSX loader could not represent faithfully.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoadWarning {
    pub sheet: String,
    pub addr: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Canonical,
    Xlsx,
}

pub fn detect_format(path: &Path) -> Option<Format> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    match ext.as_str() {
        "json" => Some(Format::Canonical),
        "xlsx" | "xlsm" => Some(Format::Xlsx),
        _ => None,
    }
}

/// Loads by file extension: `.json` canonical documents, `.xlsx`/`.xlsm` when built with XLSX support.
pub fn load(path: &Path) -> Result<Workbook, IngestError> {
    match detect_format(path) {
        Some(Format::Canonical) => load_canonical(path),
        #[cfg(feature = "xlsx")]
        Some(Format::Xlsx) => load_xlsx(path),
        _ => Err(IngestError::UnsupportedFormat(path.display().to_string())),
    }
}
