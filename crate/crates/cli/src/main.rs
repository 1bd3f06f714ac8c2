use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use sheetlint::eval::{self, EvalConfig, EvalSummary};
use sheetlint::ingest::{self, PreprocessFilter};
use sheetlint::report::ModelReport;
use sheetlint::smells::{
    run_detectors, DetectorConfig, OverburdenedMetric, PatternFinderVariant, PatternOrientation, Risk, SmellKind,
    SmellReport, Thresholds,
};
use sheetlint::structure::StructureModel;

/// Exit status when `--fail-on` finds a report at or above the given risk.
const EXIT_GATE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "sheetlint",
    version,
    about = "Structure inference and smell detection for spreadsheets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a corpus directory and list the files that pass the filter.
    Preprocess {
        dir: PathBuf,
        #[arg(long, value_enum, default_value_t = Filter::Complete)]
        filter: Filter,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the inferred structure of one workbook.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run smell detectors on one workbook.
    Smells {
        file: PathBuf,
        /// Comma-separated detector names; all detectors when omitted.
        #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
        detectors: Vec<SmellKind>,
        /// JSON file overriding the risk thresholds.
        #[arg(long)]
        thresholds: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Hide thresholded reports below this risk. Per-instance reports are always shown.
        #[arg(long, value_enum, default_value_t = RiskArg::High)]
        min_risk: RiskArg,
        /// Exit with status 3 when a report reaches this risk.
        #[arg(long, value_enum)]
        fail_on: Option<RiskArg>,
        #[arg(long, value_enum, default_value_t = Orientation::Column)]
        pattern_orientation: Orientation,
        /// Pattern finder: also inspect the five lines at each edge of the used range.
        #[arg(long)]
        include_border: bool,
        /// Group pattern finder: compare result types instead of cell types.
        #[arg(long)]
        evaluated_types: bool,
        #[arg(long, value_enum, default_value_t = Metric::Blocks)]
        overburdened_metric: Metric,
    },
    /// Evaluate every file of a corpus and write metric CSVs, quartiles and a summary.
    Evaluate {
        dir: PathBuf,
        /// JSON evaluation config.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "sheetlint-eval")]
        out: PathBuf,
        /// Worker count; overrides the config and SHEETLINT_THREADS.
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Filter {
    Complete,
    ReadableOnly,
    HasFormulas,
}

impl From<Filter> for PreprocessFilter {
    fn from(f: Filter) -> Self {
        match f {
            Filter::Complete => PreprocessFilter::Complete,
            Filter::ReadableOnly => PreprocessFilter::ReadableOnly,
            Filter::HasFormulas => PreprocessFilter::HasFormulas,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RiskArg {
    None,
    Low,
    Medium,
    High,
}

impl From<RiskArg> for Risk {
    fn from(r: RiskArg) -> Self {
        match r {
            RiskArg::None => Risk::None,
            RiskArg::Low => Risk::Low,
            RiskArg::Medium => Risk::Medium,
            RiskArg::High => Risk::High,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Orientation {
    Column,
    Row,
    Combined,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Metric {
    Blocks,
    Groups,
}

fn parse_kind(s: &str) -> Result<SmellKind, String> {
    s.parse::<SmellKind>().map_err(|_| {
        let valid: Vec<&str> = SmellKind::ALL.iter().map(|k| k.as_str()).collect();
        format!("unknown detector {s:?}; valid detectors: {}", valid.join(", "))
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Preprocess { dir, filter, out } => preprocess(&dir, filter.into(), out.as_deref()),
        Command::Analyze { file, format } => analyze(&file, format),
        Command::Smells {
            file,
            detectors,
            thresholds,
            format,
            min_risk,
            fail_on,
            pattern_orientation,
            include_border,
            evaluated_types,
            overburdened_metric,
        } => {
            let thresholds = match thresholds {
                Some(p) => {
                    let text = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    Thresholds::from_json(&text).with_context(|| format!("thresholds {}", p.display()))?
                }
                None => Thresholds::default(),
            };
            let cfg = DetectorConfig {
                kinds: detectors,
                pattern: PatternFinderVariant {
                    orientation: match pattern_orientation {
                        Orientation::Column => PatternOrientation::Column,
                        Orientation::Row => PatternOrientation::Row,
                        Orientation::Combined => PatternOrientation::Combined,
                    },
                    include_border,
                    evaluated_types,
                },
                overburdened_metric: match overburdened_metric {
                    Metric::Blocks => OverburdenedMetric::Blocks,
                    Metric::Groups => OverburdenedMetric::Groups,
                },
                thresholds,
            };
            smells(&file, &cfg, format, min_risk.into(), fail_on.map(Risk::from))
        }
        Command::Evaluate {
            dir,
            config,
            out,
            threads,
        } => {
            let mut cfg = match config {
                Some(p) => {
                    let text = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    EvalConfig::from_json(&text).with_context(|| format!("config {}", p.display()))?
                }
                None => EvalConfig::default(),
            };
            if threads.is_some() {
                cfg.threads = threads;
            }
            evaluate(&dir, &cfg, &out)
        }
    }
}

fn preprocess(dir: &Path, filter: PreprocessFilter, out: Option<&Path>) -> Result<ExitCode> {
    let report = ingest::preprocess_corpus(dir, filter)?;
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    match out {
        Some(path) => {
            fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
            println!(
                "accepted {} of {} files (unreadable {}, unprocessable {}, no formulas {}); report written to {}",
                report.accepted.len(),
                report.total_files,
                report.excluded_unreadable,
                report.excluded_unprocessable,
                report.excluded_no_formulas,
                path.display()
            );
        }
        None => print!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn analyze(file: &Path, format: Format) -> Result<ExitCode> {
    let wb = ingest::load(file)?;
    let model = StructureModel::build(&wb);
    let report = ModelReport::new(&wb, &model);
    match format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    Ok(ExitCode::SUCCESS)
}

fn shown(r: &SmellReport, min: Risk) -> bool {
    r.risk.is_none_or(|risk| risk >= min)
}

fn smells(file: &Path, cfg: &DetectorConfig, format: Format, min: Risk, fail_on: Option<Risk>) -> Result<ExitCode> {
    cfg.thresholds.validate()?;
    let wb = ingest::load(file)?;
    let model = StructureModel::build(&wb);
    let reports: Vec<SmellReport> = run_detectors(&wb, &model, cfg)
        .into_iter()
        .filter(|r| shown(r, min))
        .collect();
    let mut kinds: Vec<SmellKind> = if cfg.kinds.is_empty() {
        SmellKind::ALL.to_vec()
    } else {
        cfg.kinds.clone()
    };
    kinds.sort();
    kinds.dedup();
    match format {
        Format::Json => {
            let groups: Vec<serde_json::Value> = kinds
                .iter()
                .map(|k| {
                    let rs: Vec<&SmellReport> = reports.iter().filter(|r| r.kind == *k).collect();
                    serde_json::json!({ "kind": k, "reports": rs })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&serde_json::json!({ "smells": groups }))?;
            s.push('\n');
            print!("{s}");
        }
        Format::Text => {
            let mut out = String::new();
            for k in &kinds {
                let rs: Vec<&SmellReport> = reports.iter().filter(|r| r.kind == *k).collect();
                let _ = writeln!(out, "{} ({})", k.as_str(), rs.len());
                for r in rs {
                    let _ = write!(out, "  {}  {}", r.subject_text(), r.metric_value);
                    if let Some(risk) = r.risk {
                        let _ = write!(out, "  {}", risk.as_str());
                    }
                    if !r.detail.is_empty() {
                        let _ = write!(out, "  {}", r.detail);
                    }
                    out.push('\n');
                }
            }
            print!("{out}");
        }
    }
    let gated = fail_on.is_some_and(|f| reports.iter().any(|r| r.risk.is_some_and(|risk| risk >= f)));
    Ok(if gated {
        ExitCode::from(EXIT_GATE)
    } else {
        ExitCode::SUCCESS
    })
}

fn summary_text(s: &EvalSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "files {} analysed {} worksheets {} (unreadable {}, unprocessable {}, no formulas {}, timed out {}, errored {})",
        s.files_total,
        s.files_analyzed,
        s.worksheets,
        s.excluded_unreadable,
        s.excluded_unprocessable,
        s.excluded_no_formulas,
        s.timed_out.len(),
        s.errored.len()
    );
    let _ = writeln!(
        out,
        "{:<42} {:>8} {:>9} {:>7} {:>6} {:>7} {:>9}",
        "metric", "total", "mean", "median", "ws>0", "%ws>0", "mean>0"
    );
    for (name, m) in &s.metrics {
        let _ = writeln!(
            out,
            "{:<42} {:>8} {:>9.3} {:>7} {:>6} {:>7.2} {:>9.3}",
            name, m.total, m.mean, m.median, m.worksheets_gt0, m.pct_worksheets_gt0, m.mean_gt0
        );
    }
    for f in &s.timed_out {
        let _ = writeln!(out, "timed out: {f}");
    }
    for f in &s.errored {
        let _ = writeln!(out, "errored: {f}");
    }
    out
}

fn evaluate(dir: &Path, cfg: &EvalConfig, out: &Path) -> Result<ExitCode> {
    let written = eval::evaluate_corpus(dir, cfg, out)?;
    print!("{}", summary_text(&written.summary));
    println!("outputs written to {}", out.display());
    Ok(ExitCode::SUCCESS)
}
