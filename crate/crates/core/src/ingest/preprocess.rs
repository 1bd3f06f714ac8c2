use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

use super::{load, IngestError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreprocessFilter {
    /// Excludes unreadable, unprocessable and formula-free files.
    #[default]
    Complete,
    /// Excludes unreadable files only.
    ReadableOnly,
    /// Excludes files known to contain no formulas.
    HasFormulas,
}

impl FromStr for PreprocessFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "complete" => Ok(PreprocessFilter::Complete),
            "readable-only" => Ok(PreprocessFilter::ReadableOnly),
            "has-formulas" => Ok(PreprocessFilter::HasFormulas),
            _ => Err(format!(
                "unknown filter {s:?} (expected complete, readable-only or has-formulas)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PreprocessReport {
    pub total_files: usize,
    pub excluded_unreadable: usize,
    pub excluded_unprocessable: usize,
    pub excluded_no_formulas: usize,
    /// Paths relative to the corpus directory, `/`-separated, sorted.
    pub accepted: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FileClass {
    Unreadable(String),
    /// Readable, but uses constructs the analysis does not support.
    Unprocessable {
        message: String,
        has_formulas: bool,
    },
    NoFormulas,
    WithFormulas,
}

pub fn classify_file(path: &Path) -> FileClass {
    match load(path) {
        Ok(wb) if wb.has_formulas() => FileClass::WithFormulas,
        Ok(_) => FileClass::NoFormulas,
        Err(e) if e.is_unreadable() => FileClass::Unreadable(e.to_string()),
        Err(e) => FileClass::Unprocessable {
            has_formulas: matches!(e, IngestError::Formula { .. }),
            message: e.to_string(),
        },
    }
}

/// Regular, non-hidden files below `dir`, sorted.
pub fn candidate_files(dir: &Path) -> Result<Vec<PathBuf>, IngestError> {
    if !dir.is_dir() {
        return Err(IngestError::NotADirectory(dir.display().to_string()));
    }
    let mut out = Vec::new();
    let walker = WalkDir::new(dir)
        .follow_links(true)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !e.file_name().to_string_lossy().starts_with('.'));
    for entry in walker {
        let entry = entry.map_err(|e| IngestError::Io {
            path: dir.display().to_string(),
            source: e.into(),
        })?;
        if entry.file_type().is_file() {
            out.push(entry.into_path());
        }
    }
    out.sort();
    Ok(out)
}

pub fn relative_name(dir: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(dir).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

pub fn preprocess_corpus(dir: &Path, filter: PreprocessFilter) -> Result<PreprocessReport, IngestError> {
    let mut report = PreprocessReport::default();
    for path in candidate_files(dir)? {
        report.total_files += 1;
        let class = classify_file(&path);
        let excluded = match (filter, &class) {
            (_, FileClass::WithFormulas) => None,
            (PreprocessFilter::Complete | PreprocessFilter::ReadableOnly, FileClass::Unreadable(_)) => {
                Some(&mut report.excluded_unreadable)
            }
            (PreprocessFilter::Complete, FileClass::Unprocessable { .. }) => Some(&mut report.excluded_unprocessable),
            (PreprocessFilter::Complete | PreprocessFilter::HasFormulas, FileClass::NoFormulas) => {
                Some(&mut report.excluded_no_formulas)
            }
            _ => None,
        };
        match excluded {
            Some(count) => {
                *count += 1;
                log::info!("excluded {}: {:?}", path.display(), class);
            }
            None => report.accepted.push(relative_name(dir, &path)),
        }
    }
    report.accepted.sort();
    Ok(report)
}
