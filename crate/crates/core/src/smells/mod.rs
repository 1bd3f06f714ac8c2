//! Baseline, group-refined and structure-based smell detectors.

mod chains;
mod pattern;
mod structural;
mod thresholds;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::grid::{CellAddr, Coordinate, Rect, Workbook};
use crate::structure::{FormulaGroupId, StructureModel};

pub use chains::{baseline_chain_length, group_longest_chain, CellChains, GroupChains};
pub use pattern::{
    baseline_pattern_cells, group_pattern_groups, group_types, PatternFinderVariant, PatternOrientation, BORDER_LINES,
    UNIQUENESS_DISTANCE,
};
pub use structural::{
    baseline_feature_envy, group_feature_envy, inconsistent_group_references, missing_headers, overburdened_worksheet,
    OverburdenedMetric,
};
pub use thresholds::{classify, Band, Risk, Threshold, Thresholds};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SmellError {
    #[error("{0}: kind is per-instance")]
    PerInstance(SmellKind),
    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmellKind {
    BaselinePatternFinder,
    BaselineLongChain,
    BaselineFeatureEnvy,
    GroupPatternFinder,
    GroupLongChain,
    GroupFeatureEnvy,
    OverburdenedWorksheet,
    InconsistentGroupReference,
    MissingHeader,
}

impl SmellKind {
    pub const ALL: [SmellKind; 9] = [
        SmellKind::BaselinePatternFinder,
        SmellKind::BaselineLongChain,
        SmellKind::BaselineFeatureEnvy,
        SmellKind::GroupPatternFinder,
        SmellKind::GroupLongChain,
        SmellKind::GroupFeatureEnvy,
        SmellKind::OverburdenedWorksheet,
        SmellKind::InconsistentGroupReference,
        SmellKind::MissingHeader,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SmellKind::BaselinePatternFinder => "baseline-pattern-finder",
            SmellKind::BaselineLongChain => "baseline-long-chain",
            SmellKind::BaselineFeatureEnvy => "baseline-feature-envy",
            SmellKind::GroupPatternFinder => "group-pattern-finder",
            SmellKind::GroupLongChain => "group-long-chain",
            SmellKind::GroupFeatureEnvy => "group-feature-envy",
            SmellKind::OverburdenedWorksheet => "overburdened-worksheet",
            SmellKind::InconsistentGroupReference => "inconsistent-group-reference",
            SmellKind::MissingHeader => "missing-header",
        }
    }

    /// Reported once per occurrence rather than through a threshold.
    pub fn is_per_instance(self) -> bool {
        matches!(
            self,
            SmellKind::BaselinePatternFinder
                | SmellKind::GroupPatternFinder
                | SmellKind::InconsistentGroupReference
                | SmellKind::MissingHeader
        )
    }
}

impl fmt::Display for SmellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SmellKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SmellKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown smell kind {s:?}"))
    }
}

/// What a report is about.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Subject {
    Cell { sheet: String, cell: Coordinate },
    Group { sheet: String, range: Rect },
    Block { sheet: String, range: Rect },
    Worksheet { sheet: String },
}

impl Subject {
    pub fn sheet(&self) -> &str {
        match self {
            Subject::Cell { sheet, .. }
            | Subject::Group { sheet, .. }
            | Subject::Block { sheet, .. }
            | Subject::Worksheet { sheet } => sheet,
        }
    }

    /// The location without the sheet name: `B4`, `B4:B8`, or empty for worksheets.
    pub fn location(&self) -> String {
        match self {
            Subject::Cell { cell, .. } => cell.to_string(),
            Subject::Group { range, .. } | Subject::Block { range, .. } => range.to_string(),
            Subject::Worksheet { .. } => String::new(),
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Worksheet { sheet } => f.write_str(sheet),
            s => write!(f, "{}!{}", s.sheet(), s.location()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmellReport {
    pub kind: SmellKind,
    pub subject: Subject,
    /// The second group of an inconsistent reference pair.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<Subject>,
    pub metric_value: f64,
    /// Absent for per-instance kinds.
    pub risk: Option<Risk>,
    pub detail: String,
}

impl SmellReport {
    /// `subject` or `subject -> target`.
    pub fn subject_text(&self) -> String {
        match &self.target {
            Some(t) => format!("{} -> {}", self.subject, t),
            None => self.subject.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorConfig {
    /// Detectors to run; all of them when empty.
    pub kinds: Vec<SmellKind>,
    pub pattern: PatternFinderVariant,
    pub overburdened_metric: OverburdenedMetric,
    pub thresholds: Thresholds,
}

impl DetectorConfig {
    fn selected(&self) -> Vec<SmellKind> {
        if self.kinds.is_empty() {
            SmellKind::ALL.to_vec()
        } else {
            let mut k = self.kinds.clone();
            k.sort();
            k.dedup();
            k
        }
    }
}

fn group_subject(wb: &Workbook, model: &StructureModel, g: FormulaGroupId) -> Subject {
    let fg = model.formula_group(g);
    Subject::Group {
        sheet: wb.sheet(fg.sheet).name().to_string(),
        range: fg.rect(),
    }
}

fn display_addr(wb: &Workbook, a: CellAddr) -> String {
    format!("{}!{}", wb.sheet(a.sheet).name(), a.coord)
}

fn join_types(types: &std::collections::BTreeSet<crate::grid::CellType>) -> String {
    types.iter().map(|t| t.as_str()).collect::<Vec<_>>().join(", ")
}

/// Renders a group chain, ending in the first reference group of its last formula group.
pub fn group_chain_text(wb: &Workbook, model: &StructureModel, path: &[FormulaGroupId]) -> String {
    let mut parts: Vec<String> = Vec::new();
    if let Some(&last) = path.last() {
        if let Some(r) = model.reference_groups_of(last).first() {
            parts.push(format!("{}!{}", wb.sheet(r.sheet).name(), r.rect));
        }
    }
    parts.extend(path.iter().rev().map(|&g| group_subject(wb, model, g).to_string()));
    parts.join(" -> ")
}

/// Runs the selected detectors. Reports come grouped by kind, then in sheet and position order.
pub fn run_detectors(wb: &Workbook, model: &StructureModel, cfg: &DetectorConfig) -> Vec<SmellReport> {
    let t = &cfg.thresholds;
    let mut out = Vec::new();
    for kind in cfg.selected() {
        match kind {
            SmellKind::BaselinePatternFinder => {
                for ws in wb.sheets() {
                    for c in baseline_pattern_cells(ws, cfg.pattern) {
                        out.push(SmellReport {
                            kind,
                            subject: Subject::Cell {
                                sheet: ws.name().to_string(),
                                cell: c,
                            },
                            target: None,
                            metric_value: 1.0,
                            risk: None,
                            detail: String::new(),
                        });
                    }
                }
            }
            SmellKind::GroupPatternFinder => {
                for ws in wb.sheets() {
                    for (id, types) in group_pattern_groups(ws, model, cfg.pattern.evaluated_types) {
                        out.push(SmellReport {
                            kind,
                            subject: Subject::Group {
                                sheet: ws.name().to_string(),
                                range: model.reference_group(id).rect,
                            },
                            target: None,
                            metric_value: types.len() as f64,
                            risk: None,
                            detail: format!("types: {}", join_types(&types)),
                        });
                    }
                }
            }
            SmellKind::BaselineLongChain => {
                let chains = CellChains::compute(wb);
                for ws in wb.sheets() {
                    for c in ws.formula_cells() {
                        let len = chains.length(c.addr());
                        let path: Vec<String> = chains
                            .witness(c.addr())
                            .iter()
                            .rev()
                            .map(|&a| display_addr(wb, a))
                            .collect();
                        out.push(SmellReport {
                            kind,
                            subject: Subject::Cell {
                                sheet: ws.name().to_string(),
                                cell: c.coord,
                            },
                            target: None,
                            metric_value: len as f64,
                            risk: Some(classify(len as f64, kind, t).expect("thresholded")),
                            detail: path.join(" -> "),
                        });
                    }
                }
            }
            SmellKind::GroupLongChain => {
                let chains = GroupChains::compute(model);
                for (i, _) in model.formula_groups.iter().enumerate() {
                    let g = FormulaGroupId(i);
                    let len = chains.length(g);
                    out.push(SmellReport {
                        kind,
                        subject: group_subject(wb, model, g),
                        target: None,
                        metric_value: len as f64,
                        risk: Some(classify(len as f64, kind, t).expect("thresholded")),
                        detail: group_chain_text(wb, model, &chains.witness(g)),
                    });
                }
            }
            SmellKind::BaselineFeatureEnvy | SmellKind::GroupFeatureEnvy => {
                for ws in wb.sheets() {
                    let v = if kind == SmellKind::BaselineFeatureEnvy {
                        baseline_feature_envy(ws, wb)
                    } else {
                        group_feature_envy(ws, model)
                    };
                    out.push(SmellReport {
                        kind,
                        subject: Subject::Worksheet {
                            sheet: ws.name().to_string(),
                        },
                        target: None,
                        metric_value: v as f64,
                        risk: Some(classify(v as f64, kind, t).expect("thresholded")),
                        detail: String::new(),
                    });
                }
            }
            SmellKind::OverburdenedWorksheet => {
                let which = match cfg.overburdened_metric {
                    OverburdenedMetric::Blocks => Threshold::OverburdenedBlocks,
                    OverburdenedMetric::Groups => Threshold::OverburdenedGroups,
                };
                for ws in wb.sheets() {
                    let v = overburdened_worksheet(ws, model, cfg.overburdened_metric) as f64;
                    out.push(SmellReport {
                        kind,
                        subject: Subject::Worksheet {
                            sheet: ws.name().to_string(),
                        },
                        target: None,
                        metric_value: v,
                        risk: Some(t.classify_metric(v, which)),
                        detail: match cfg.overburdened_metric {
                            OverburdenedMetric::Blocks => "blocks".to_string(),
                            OverburdenedMetric::Groups => "formula groups".to_string(),
                        },
                    });
                }
            }
            SmellKind::InconsistentGroupReference => {
                for (g, target) in inconsistent_group_references(model) {
                    let target = group_subject(wb, model, target);
                    out.push(SmellReport {
                        kind,
                        subject: group_subject(wb, model, g),
                        detail: format!("inconsistently refers to {target}"),
                        target: Some(target),
                        metric_value: 1.0,
                        risk: None,
                    });
                }
            }
            SmellKind::MissingHeader => {
                for ws in wb.sheets() {
                    for (bi, b) in model.sheet(ws.id()).blocks.iter().enumerate() {
                        let missing = missing_headers(ws, model, bi);
                        if missing.is_empty() {
                            continue;
                        }
                        out.push(SmellReport {
                            kind,
                            subject: Subject::Block {
                                sheet: ws.name().to_string(),
                                range: b.rect,
                            },
                            target: None,
                            metric_value: missing.len() as f64,
                            risk: None,
                            detail: format!(
                                "vacant: {}",
                                missing.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
                            ),
                        });
                    }
                }
            }
        }
    }
    out
}
