//! Corpus evaluation: per-file detector runs under a timeout, metric CSVs,
//! quartile series and a summary.

mod quartile;
mod timeout;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::grid::Workbook;
use crate::ingest::{self, relative_name, IngestError, PreprocessFilter};
use crate::smells::{
    baseline_feature_envy, baseline_pattern_cells, group_feature_envy, group_pattern_groups,
    inconsistent_group_references, missing_headers, overburdened_worksheet, CellChains, GroupChains,
    OverburdenedMetric, PatternFinderVariant, PatternOrientation, Risk, SmellKind, Threshold, Thresholds,
};
use crate::structure::{FormulaGroupId, StructureModel};

pub use quartile::{quartile_series, QuartileSeries};
pub use timeout::{run_with_timeout, Outcome};

pub const DEFAULT_TIMEOUT_SECS: f64 = 300.0;
pub const THREADS_ENV: &str = "SHEETLINT_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("invalid evaluation config: {0}")]
    Config(String),
    #[error("no values for quartile series {0}")]
    EmptySeries(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> EvalError + '_ {
    move |source| EvalError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    /// Detectors to run; all when empty.
    pub detectors: Vec<SmellKind>,
    pub timeout_secs: f64,
    pub thresholds: Thresholds,
    pub filter: PreprocessFilter,
    /// Worker count; falls back to `SHEETLINT_THREADS`, then the available parallelism.
    pub threads: Option<usize>,
    /// Percentile step of the quartile series.
    pub percentile_step: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            detectors: Vec::new(),
            timeout_secs: DEFAULT_TIMEOUT_SECS,
            thresholds: Thresholds::default(),
            filter: PreprocessFilter::Complete,
            threads: None,
            percentile_step: 1.0,
        }
    }
}

impl EvalConfig {
    pub fn from_json(text: &str) -> Result<Self, EvalError> {
        let cfg: EvalConfig = serde_json::from_str(text).map_err(|e| EvalError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if !(self.timeout_secs > 0.0 && self.timeout_secs.is_finite()) {
            return Err(EvalError::Config("timeout_secs must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(EvalError::Config("threads must be at least 1".into()));
        }
        if !(self.percentile_step > 0.0 && self.percentile_step <= 100.0) {
            return Err(EvalError::Config("percentile_step must be in (0, 100]".into()));
        }
        self.thresholds.validate().map_err(|e| EvalError::Config(e.to_string()))
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }

    fn worker_count(&self) -> usize {
        self.threads
            .or_else(|| std::env::var(THREADS_ENV).ok()?.parse().ok().filter(|&n| n > 0))
            .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
            .unwrap_or(1)
    }

    /// Metric tags in output order.
    pub fn tags(&self) -> Vec<MetricTag> {
        let kinds: Vec<SmellKind> = if self.detectors.is_empty() {
            SmellKind::ALL.to_vec()
        } else {
            let mut k = self.detectors.clone();
            k.sort();
            k.dedup();
            k
        };
        kinds.into_iter().flat_map(MetricTag::for_kind).collect()
    }
}

/// A detector together with the variant it was run in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricTag {
    BaselinePatternFinder { orientation: Orient, include_border: bool },
    GroupPatternFinder { evaluated: bool },
    BaselineLongChain,
    BaselineFeatureEnvy,
    GroupLongChain,
    GroupFeatureEnvy,
    Overburdened(Metric),
    InconsistentGroupReference,
    MissingHeader,
}

/// Orderable mirror of [`PatternOrientation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orient {
    Column,
    Row,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Blocks,
    Groups,
}

impl MetricTag {
    pub fn for_kind(kind: SmellKind) -> Vec<MetricTag> {
        match kind {
            SmellKind::BaselinePatternFinder => [Orient::Column, Orient::Row, Orient::Combined]
                .into_iter()
                .flat_map(|o| {
                    [false, true].map(|b| MetricTag::BaselinePatternFinder {
                        orientation: o,
                        include_border: b,
                    })
                })
                .collect(),
            SmellKind::GroupPatternFinder => vec![
                MetricTag::GroupPatternFinder { evaluated: false },
                MetricTag::GroupPatternFinder { evaluated: true },
            ],
            SmellKind::BaselineLongChain => vec![MetricTag::BaselineLongChain],
            SmellKind::BaselineFeatureEnvy => vec![MetricTag::BaselineFeatureEnvy],
            SmellKind::GroupLongChain => vec![MetricTag::GroupLongChain],
            SmellKind::GroupFeatureEnvy => vec![MetricTag::GroupFeatureEnvy],
            SmellKind::OverburdenedWorksheet => {
                vec![
                    MetricTag::Overburdened(Metric::Blocks),
                    MetricTag::Overburdened(Metric::Groups),
                ]
            }
            SmellKind::InconsistentGroupReference => vec![MetricTag::InconsistentGroupReference],
            SmellKind::MissingHeader => vec![MetricTag::MissingHeader],
        }
    }

    pub fn kind(self) -> SmellKind {
        match self {
            MetricTag::BaselinePatternFinder { .. } => SmellKind::BaselinePatternFinder,
            MetricTag::GroupPatternFinder { .. } => SmellKind::GroupPatternFinder,
            MetricTag::BaselineLongChain => SmellKind::BaselineLongChain,
            MetricTag::BaselineFeatureEnvy => SmellKind::BaselineFeatureEnvy,
            MetricTag::GroupLongChain => SmellKind::GroupLongChain,
            MetricTag::GroupFeatureEnvy => SmellKind::GroupFeatureEnvy,
            MetricTag::Overburdened(_) => SmellKind::OverburdenedWorksheet,
            MetricTag::InconsistentGroupReference => SmellKind::InconsistentGroupReference,
            MetricTag::MissingHeader => SmellKind::MissingHeader,
        }
    }

    pub fn name(self) -> String {
        match self {
            MetricTag::BaselinePatternFinder {
                orientation,
                include_border,
            } => {
                let o = match orientation {
                    Orient::Column => "column",
                    Orient::Row => "row",
                    Orient::Combined => "combined",
                };
                format!(
                    "baseline-pattern-finder:{o}{}",
                    if include_border { "+border" } else { "" }
                )
            }
            MetricTag::GroupPatternFinder { evaluated: false } => "group-pattern-finder".into(),
            MetricTag::GroupPatternFinder { evaluated: true } => "group-pattern-finder:evaluated".into(),
            MetricTag::Overburdened(Metric::Blocks) => "overburdened-worksheet:blocks".into(),
            MetricTag::Overburdened(Metric::Groups) => "overburdened-worksheet:groups".into(),
            other => other.kind().as_str().into(),
        }
    }

    /// Name usable as a file stem.
    pub fn file_stem(self) -> String {
        self.name().replace([':', '+'], "_")
    }

    fn threshold(self) -> Option<Threshold> {
        match self {
            MetricTag::BaselineLongChain | MetricTag::GroupLongChain => Some(Threshold::LongChain),
            MetricTag::BaselineFeatureEnvy | MetricTag::GroupFeatureEnvy => Some(Threshold::FeatureEnvy),
            MetricTag::Overburdened(Metric::Blocks) => Some(Threshold::OverburdenedBlocks),
            MetricTag::Overburdened(Metric::Groups) => Some(Threshold::OverburdenedGroups),
            _ => None,
        }
    }
}

/// One measured value for one subject.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRecord {
    pub kind: String,
    pub file: String,
    pub worksheet: String,
    pub subject: String,
    pub metric_value: f64,
}

/// Records for every selected tag on one workbook. Count metrics yield one record per
/// worksheet; chain metrics one per formula cell or group.
pub fn analyze_workbook(wb: &Workbook, file: &str, tags: &[MetricTag]) -> Vec<MetricRecord> {
    let model = StructureModel::build(wb);
    let mut cell_chains = None;
    let mut group_chains = None;
    let mut inconsistent = None;
    let mut out = Vec::new();
    for &tag in tags {
        let kind = tag.name();
        let mut push = |worksheet: &str, subject: String, v: f64| {
            out.push(MetricRecord {
                kind: kind.clone(),
                file: file.to_string(),
                worksheet: worksheet.to_string(),
                subject,
                metric_value: v,
            })
        };
        match tag {
            MetricTag::BaselineLongChain => {
                let chains = cell_chains.get_or_insert_with(|| CellChains::compute(wb));
                for ws in wb.sheets() {
                    for c in ws.formula_cells() {
                        push(ws.name(), c.coord.to_string(), chains.length(c.addr()) as f64);
                    }
                }
            }
            MetricTag::GroupLongChain => {
                let chains = group_chains.get_or_insert_with(|| GroupChains::compute(&model));
                for ws in wb.sheets() {
                    for (id, g) in model.sheet_formula_groups(ws.id()) {
                        push(ws.name(), g.rect().to_string(), chains.length(id) as f64);
                    }
                }
            }
            _ => {
                let pairs = if tag == MetricTag::InconsistentGroupReference {
                    Some(
                        inconsistent
                            .get_or_insert_with(|| inconsistent_group_references(&model))
                            .clone(),
                    )
                } else {
                    None
                };
                for ws in wb.sheets() {
                    let v = match tag {
                        MetricTag::BaselinePatternFinder {
                            orientation,
                            include_border,
                        } => {
                            let v = PatternFinderVariant {
                                orientation: match orientation {
                                    Orient::Column => PatternOrientation::Column,
                                    Orient::Row => PatternOrientation::Row,
                                    Orient::Combined => PatternOrientation::Combined,
                                },
                                include_border,
                                evaluated_types: false,
                            };
                            baseline_pattern_cells(ws, v).len()
                        }
                        MetricTag::GroupPatternFinder { evaluated } => {
                            group_pattern_groups(ws, &model, evaluated).len()
                        }
                        MetricTag::BaselineFeatureEnvy => baseline_feature_envy(ws, wb) as usize,
                        MetricTag::GroupFeatureEnvy => group_feature_envy(ws, &model) as usize,
                        MetricTag::Overburdened(m) => overburdened_worksheet(
                            ws,
                            &model,
                            match m {
                                Metric::Blocks => OverburdenedMetric::Blocks,
                                Metric::Groups => OverburdenedMetric::Groups,
                            },
                        ),
                        MetricTag::InconsistentGroupReference => pairs.as_ref().map_or(0, |p| {
                            p.iter().filter(|(g, _)| group_sheet(&model, *g) == ws.id().0).count()
                        }),
                        MetricTag::MissingHeader => (0..model.sheet(ws.id()).blocks.len())
                            .map(|b| missing_headers(ws, &model, b).len())
                            .sum(),
                        MetricTag::BaselineLongChain | MetricTag::GroupLongChain => unreachable!(),
                    };
                    push(ws.name(), ws.name().to_string(), v as f64);
                }
            }
        }
    }
    out
}

fn group_sheet(model: &StructureModel, g: FormulaGroupId) -> usize {
    model.formula_group(g).sheet.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FileStatus {
    Analyzed,
    Excluded,
    TimedOut,
    Errored,
    Unreadable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileResult {
    pub file: String,
    pub status: FileStatus,
    pub worksheets: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip)]
    pub records: Vec<MetricRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSummary {
    pub records: usize,
    pub total: f64,
    pub mean: f64,
    pub median: f64,
    /// Worksheets with at least one record above zero.
    pub worksheets_gt0: usize,
    pub pct_worksheets_gt0: f64,
    /// Mean over records above zero.
    pub mean_gt0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub risk_counts: Option<BTreeMap<Risk, usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileRollup {
    pub file: String,
    pub status: FileStatus,
    pub worksheets: usize,
    pub totals: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalSummary {
    pub files_total: usize,
    pub files_analyzed: usize,
    pub excluded_unreadable: usize,
    pub excluded_unprocessable: usize,
    pub excluded_no_formulas: usize,
    pub worksheets: usize,
    pub timed_out: Vec<String>,
    pub errored: Vec<String>,
    pub unreadable: Vec<String>,
    pub metrics: BTreeMap<String, MetricSummary>,
    pub files: Vec<FileRollup>,
}

fn median(sorted: &[f64]) -> f64 {
    match sorted.len() {
        0 => 0.0,
        n if n % 2 == 1 => sorted[n / 2],
        n => (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0,
    }
}

pub fn summarize_metric(
    records: &[&MetricRecord],
    worksheets: usize,
    band: Option<(Threshold, &Thresholds)>,
) -> MetricSummary {
    let mut values: Vec<f64> = records.iter().map(|r| r.metric_value).collect();
    values.sort_by(f64::total_cmp);
    let total: f64 = values.iter().sum();
    let positive: Vec<f64> = values.iter().copied().filter(|&v| v > 0.0).collect();
    let mut sheets_gt0: Vec<(&str, &str)> = records
        .iter()
        .filter(|r| r.metric_value > 0.0)
        .map(|r| (r.file.as_str(), r.worksheet.as_str()))
        .collect();
    sheets_gt0.sort();
    sheets_gt0.dedup();
    let risk_counts = band.map(|(which, t)| {
        let mut m = BTreeMap::new();
        for &v in &values {
            *m.entry(t.classify_metric(v, which)).or_insert(0) += 1;
        }
        m
    });
    MetricSummary {
        records: values.len(),
        total,
        mean: if values.is_empty() {
            0.0
        } else {
            total / values.len() as f64
        },
        median: median(&values),
        worksheets_gt0: sheets_gt0.len(),
        pct_worksheets_gt0: if worksheets == 0 {
            0.0
        } else {
            100.0 * sheets_gt0.len() as f64 / worksheets as f64
        },
        mean_gt0: if positive.is_empty() {
            0.0
        } else {
            positive.iter().sum::<f64>() / positive.len() as f64
        },
        risk_counts,
    }
}

enum Loaded {
    Analyzed(usize, Vec<MetricRecord>),
    Excluded(String),
    Failed(String),
    Unreadable(String),
}

fn analyze_file(path: &Path, name: &str, filter: PreprocessFilter, tags: &[MetricTag]) -> Loaded {
    match ingest::load(path) {
        Ok(wb) => {
            if !wb.has_formulas() && filter != PreprocessFilter::ReadableOnly {
                return Loaded::Excluded("no formulas".into());
            }
            Loaded::Analyzed(wb.sheets().len(), analyze_workbook(&wb, name, tags))
        }
        Err(e) if e.is_unreadable() => Loaded::Unreadable(e.to_string()),
        Err(e) if filter == PreprocessFilter::Complete => Loaded::Excluded(e.to_string()),
        Err(e) => Loaded::Failed(e.to_string()),
    }
}

/// Loads and analyses one file under the configured timeout.
pub fn evaluate_file(dir: &Path, path: &Path, cfg: &EvalConfig, tags: &[MetricTag]) -> FileResult {
    let name = relative_name(dir, path);
    let (p, n, filter, t) = (path.to_path_buf(), name.clone(), cfg.filter, tags.to_vec());
    let outcome = run_with_timeout(move || analyze_file(&p, &n, filter, &t), cfg.timeout());
    let (status, worksheets, message, records) = match outcome {
        Outcome::Completed(Loaded::Analyzed(ws, records)) => (FileStatus::Analyzed, ws, None, records),
        Outcome::Completed(Loaded::Excluded(m)) => (FileStatus::Excluded, 0, Some(m), Vec::new()),
        Outcome::Completed(Loaded::Failed(m)) => (FileStatus::Errored, 0, Some(m), Vec::new()),
        Outcome::Completed(Loaded::Unreadable(m)) => (FileStatus::Unreadable, 0, Some(m), Vec::new()),
        Outcome::TimedOut => (
            FileStatus::TimedOut,
            0,
            Some(format!("exceeded {} s", cfg.timeout_secs)),
            Vec::new(),
        ),
        Outcome::Errored(m) => (FileStatus::Errored, 0, Some(m), Vec::new()),
    };
    match &status {
        FileStatus::Analyzed => log::debug!("analysed {name}"),
        _ => log::warn!("{name}: {status:?} {}", message.as_deref().unwrap_or("")),
    }
    FileResult {
        file: name,
        status,
        worksheets,
        message,
        records,
    }
}

/// Evaluates every candidate file of `dir` on a bounded worker pool. Results are in
/// sorted file order regardless of scheduling.
pub fn evaluate_files(dir: &Path, cfg: &EvalConfig) -> Result<Vec<FileResult>, EvalError> {
    cfg.validate()?;
    let files = ingest::candidate_files(dir)?;
    let tags = cfg.tags();
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<FileResult>>> = Mutex::new(vec![None; files.len()]);
    let workers = cfg.worker_count().clamp(1, files.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(path) = files.get(i) else { break };
                let r = evaluate_file(dir, path, cfg, &tags);
                slots.lock().expect("results lock")[i] = Some(r);
            });
        }
    });
    Ok(slots
        .into_inner()
        .expect("results lock")
        .into_iter()
        .map(|r| r.expect("every file evaluated"))
        .collect())
}

pub fn summarize(results: &[FileResult], cfg: &EvalConfig) -> EvalSummary {
    let tags = cfg.tags();
    let analyzed: Vec<&FileResult> = results.iter().filter(|r| r.status == FileStatus::Analyzed).collect();
    let worksheets = analyzed.iter().map(|r| r.worksheets).sum();
    let by_status = |s: FileStatus| -> Vec<String> {
        results
            .iter()
            .filter(|r| r.status == s)
            .map(|r| r.file.clone())
            .collect()
    };
    let mut metrics = BTreeMap::new();
    for tag in &tags {
        let name = tag.name();
        let recs: Vec<&MetricRecord> = analyzed
            .iter()
            .flat_map(|r| &r.records)
            .filter(|r| r.kind == name)
            .collect();
        let band = tag.threshold().map(|t| (t, &cfg.thresholds));
        metrics.insert(name, summarize_metric(&recs, worksheets, band));
    }
    let files = results
        .iter()
        .map(|r| {
            let mut totals = BTreeMap::new();
            if r.status == FileStatus::Analyzed {
                for tag in &tags {
                    totals.insert(tag.name(), 0.0);
                }
                for rec in &r.records {
                    *totals.get_mut(&rec.kind).expect("tag") += rec.metric_value;
                }
            }
            FileRollup {
                file: r.file.clone(),
                status: r.status.clone(),
                worksheets: r.worksheets,
                totals,
            }
        })
        .collect();
    let excluded = |pred: fn(&FileResult) -> bool| {
        results
            .iter()
            .filter(|r| r.status == FileStatus::Excluded && pred(r))
            .count()
    };
    EvalSummary {
        files_total: results.len(),
        files_analyzed: analyzed.len(),
        excluded_unreadable: by_status(FileStatus::Unreadable).len(),
        excluded_unprocessable: excluded(|r| r.message.as_deref() != Some("no formulas")),
        excluded_no_formulas: excluded(|r| r.message.as_deref() == Some("no formulas")),
        worksheets,
        timed_out: by_status(FileStatus::TimedOut),
        errored: by_status(FileStatus::Errored),
        unreadable: by_status(FileStatus::Unreadable),
        metrics,
        files,
    }
}

fn fmt_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), EvalError> {
    let csv_err = |source| EvalError::Csv {
        path: path.display().to_string(),
        source,
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// Written files: one CSV of records and one quartile CSV per tag, and `summary.json`.
#[derive(Debug, Clone)]
pub struct EvalOutput {
    pub summary: EvalSummary,
    pub record_files: Vec<PathBuf>,
    pub quartile_files: Vec<PathBuf>,
    pub summary_file: PathBuf,
}

pub fn write_outputs(results: &[FileResult], cfg: &EvalConfig, out: &Path) -> Result<EvalOutput, EvalError> {
    let qdir = out.join("quartiles");
    fs::create_dir_all(&qdir).map_err(io_err(&qdir))?;
    let summary = summarize(results, cfg);
    let mut record_files = Vec::new();
    let mut quartile_files = Vec::new();
    for tag in cfg.tags() {
        let name = tag.name();
        let recs: Vec<&MetricRecord> = results
            .iter()
            .filter(|r| r.status == FileStatus::Analyzed)
            .flat_map(|r| &r.records)
            .filter(|r| r.kind == name)
            .collect();
        let path = out.join(format!("{}.csv", tag.file_stem()));
        write_csv(
            &path,
            &["kind", "file", "worksheet", "subject", "metric_value"],
            recs.iter().map(|r| {
                vec![
                    r.kind.clone(),
                    r.file.clone(),
                    r.worksheet.clone(),
                    r.subject.clone(),
                    fmt_value(r.metric_value),
                ]
            }),
        )?;
        record_files.push(path);

        let values: Vec<f64> = recs.iter().map(|r| r.metric_value).collect();
        let qpath = qdir.join(format!("{}.csv", tag.file_stem()));
        let points = match quartile_series(&name, &values, cfg.percentile_step) {
            Ok(q) => q.points,
            Err(EvalError::EmptySeries(_)) => Vec::new(),
            Err(e) => return Err(e),
        };
        write_csv(
            &qpath,
            &["percentile", "value"],
            points.into_iter().map(|(p, v)| vec![fmt_value(p), fmt_value(v)]),
        )?;
        quartile_files.push(qpath);
    }
    let summary_file = out.join("summary.json");
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    fs::write(&summary_file, text).map_err(io_err(&summary_file))?;
    Ok(EvalOutput {
        summary,
        record_files,
        quartile_files,
        summary_file,
    })
}

/// Evaluates `dir` and writes all outputs below `out`.
pub fn evaluate_corpus(dir: &Path, cfg: &EvalConfig, out: &Path) -> Result<EvalOutput, EvalError> {
    let results = evaluate_files(dir, cfg)?;
    write_outputs(&results, cfg, out)
}
