//! Name-based views of a [`StructureModel`] for printing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::grid::{CellType, Coordinate, Rect, Workbook};
use crate::structure::{GroupRef, LayerOrientation, Orientation, StructureModel};

/// Covers a cell set with rectangles: vertical runs per column, joined across
/// neighbouring columns with the same run.
pub fn cover_ranges(cells: &BTreeSet<Coordinate>) -> Vec<Rect> {
    let mut runs: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
    let mut by_col: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for c in cells {
        by_col.entry(c.col).or_default().push(c.row);
    }
    for (col, mut rows) in by_col {
        rows.sort_unstable();
        let mut start = rows[0];
        let mut prev = rows[0];
        for &r in &rows[1..] {
            if r != prev + 1 {
                runs.entry((start, prev)).or_default().push(col);
                start = r;
            }
            prev = r;
        }
        runs.entry((start, prev)).or_default().push(col);
    }
    let mut out = Vec::new();
    for ((top, bottom), cols) in runs {
        let mut first = cols[0];
        let mut last = cols[0];
        for &c in &cols[1..] {
            if c != last + 1 {
                out.push(Rect::new(Coordinate::new(first, top), Coordinate::new(last, bottom)));
                first = c;
            }
            last = c;
        }
        out.push(Rect::new(Coordinate::new(first, top), Coordinate::new(last, bottom)));
    }
    out.sort_by_key(|r| (r.top_left, r.bottom_right));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeGroupView {
    #[serde(rename = "type")]
    pub group_type: CellType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    pub cells: Vec<Rect>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormulaGroupView {
    pub id: usize,
    pub range: Rect,
    pub orientation: Orientation,
    pub formula: String,
    /// Ids of the formula groups this one reads from.
    pub refers_to: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceGroupView {
    pub id: usize,
    pub range: Rect,
    pub orientation: Orientation,
    /// Formula groups, by id, whose references produced this group.
    pub referenced_by: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerView {
    pub orientation: LayerOrientation,
    pub level: u32,
    pub span: Rect,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta_header: Option<Coordinate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockView {
    pub range: Rect,
    pub groups: Vec<GroupRef>,
    pub layers: Vec<LayerView>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaHeaderView {
    pub cell: Coordinate,
    pub layer: Rect,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SheetView {
    pub name: String,
    pub type_groups: Vec<TypeGroupView>,
    pub formula_groups: Vec<FormulaGroupView>,
    pub reference_groups: Vec<ReferenceGroupView>,
    pub non_blockables: Vec<Rect>,
    pub blocks: Vec<BlockView>,
    pub meta_headers: Vec<MetaHeaderView>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IssueView {
    pub origin: String,
    pub group: usize,
    pub slot: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelReport {
    pub sheets: Vec<SheetView>,
    pub issues: Vec<IssueView>,
}

impl ModelReport {
    pub fn new(wb: &Workbook, model: &StructureModel) -> Self {
        let sheets = model
            .sheets
            .iter()
            .map(|s| {
                let type_groups = s
                    .type_groups
                    .iter()
                    .map(|g| TypeGroupView {
                        group_type: g.group_type,
                        formula: g.formula.clone(),
                        cells: cover_ranges(&g.cells),
                    })
                    .collect();
                let formula_groups = s
                    .formula_groups
                    .iter()
                    .map(|&id| {
                        let g = model.formula_group(id);
                        FormulaGroupView {
                            id: id.0,
                            range: g.rect(),
                            orientation: g.orientation,
                            formula: g.formula.clone(),
                            refers_to: model.referred_formula_groups(id).iter().map(|r| r.0).collect(),
                        }
                    })
                    .collect();
                let reference_groups = s
                    .reference_groups
                    .iter()
                    .map(|&id| {
                        let g = model.reference_group(id);
                        let mut by: Vec<usize> = g.provenance.iter().map(|p| p.group.0).collect();
                        by.dedup();
                        ReferenceGroupView {
                            id: id.0,
                            range: g.rect,
                            orientation: g.orientation,
                            referenced_by: by,
                        }
                    })
                    .collect();
                let blocks = s
                    .blocks
                    .iter()
                    .enumerate()
                    .map(|(i, b)| BlockView {
                        range: b.rect,
                        groups: b.groups.clone(),
                        layers: s
                            .layers_of(i)
                            .map(|l| LayerView {
                                orientation: l.orientation,
                                level: l.level,
                                span: l.span,
                                meta_header: l.meta_header,
                            })
                            .collect(),
                    })
                    .collect();
                let meta_headers = s
                    .meta_headers
                    .iter()
                    .map(|m| MetaHeaderView {
                        cell: m.cell,
                        layer: s.layers[m.layer].span,
                    })
                    .collect();
                SheetView {
                    name: s.name.clone(),
                    type_groups,
                    formula_groups,
                    reference_groups,
                    non_blockables: cover_ranges(&s.non_blockables),
                    blocks,
                    meta_headers,
                }
            })
            .collect();
        let issues = model
            .issues
            .iter()
            .map(|i| IssueView {
                origin: wb.display_addr(i.origin),
                group: i.group.0,
                slot: i.slot.to_string(),
                error: i.error.clone(),
            })
            .collect();
        ModelReport { sheets, issues }
    }

    /// Pretty JSON with a trailing newline; stable for identical input.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let join = |rs: &[Rect]| rs.iter().map(short).collect::<Vec<_>>().join(", ");
        for s in &self.sheets {
            let n = &s.name;
            let _ = writeln!(out, "Sheet {n}");
            for g in &s.formula_groups {
                let _ = writeln!(
                    out,
                    "  Formula group #{} {n}!{} {:?} ={}",
                    g.id, g.range, g.orientation, g.formula
                );
            }
            for g in &s.reference_groups {
                let by: Vec<String> = g.referenced_by.iter().map(|i| format!("#{i}")).collect();
                let _ = writeln!(
                    out,
                    "  Reference group #{} {n}!{} {:?} <- {}",
                    g.id,
                    g.range,
                    g.orientation,
                    by.join(" ")
                );
            }
            if !s.non_blockables.is_empty() {
                let _ = writeln!(out, "  Non-blockables: {}", join(&s.non_blockables));
            }
            for b in &s.blocks {
                let groups: Vec<String> = b
                    .groups
                    .iter()
                    .map(|g| match g {
                        GroupRef::Formula(id) => format!("formula #{}", id.0),
                        GroupRef::Reference(id) => format!("reference #{}", id.0),
                    })
                    .collect();
                let _ = writeln!(out, "  Block {n}!{} [{}]", b.range, groups.join(", "));
                for l in &b.layers {
                    let kind = match l.orientation {
                        LayerOrientation::ColumnLayer => "Column layer",
                        LayerOrientation::RowLayer => "Row layer",
                    };
                    let _ = write!(out, "    {kind} {} {n}!{}", l.level, l.span);
                    if let Some(m) = l.meta_header {
                        let _ = write!(out, " meta-header {m}");
                    }
                    out.push('\n');
                }
            }
        }
        for i in &self.issues {
            let _ = writeln!(out, "Issue {} (group #{}, {}): {}", i.origin, i.group, i.slot, i.error);
        }
        out
    }
}

fn short(r: &Rect) -> String {
    if r.top_left == r.bottom_right {
        r.top_left.to_string()
    } else {
        r.to_string()
    }
}
