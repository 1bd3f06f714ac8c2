use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::formula::resolve_references;
use crate::grid::{CellType, Coordinate, Workbook, Worksheet};
use crate::structure::{FormulaGroupId, StructureModel};

/// Cross-sheet (formula cell, resolved reference) pairs; an area counts once per cell.
pub fn baseline_feature_envy(ws: &Worksheet, wb: &Workbook) -> u32 {
    ws.formula_cells()
        .map(|c| {
            resolve_references(c, wb)
                .into_iter()
                .filter(|(_, r)| r.as_ref().is_ok_and(|r| r.sheet() != ws.id()))
                .count() as u32
        })
        .sum()
}

/// Cross-sheet reference groups over all partitioned formula groups of the sheet.
pub fn group_feature_envy(ws: &Worksheet, model: &StructureModel) -> u32 {
    model
        .sheet_formula_groups(ws.id())
        .map(|(id, _)| {
            model
                .reference_groups_of(id)
                .iter()
                .filter(|g| g.sheet != ws.id())
                .count() as u32
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverburdenedMetric {
    #[default]
    Blocks,
    Groups,
}

pub fn overburdened_worksheet(ws: &Worksheet, model: &StructureModel, metric: OverburdenedMetric) -> usize {
    let st = model.sheet(ws.id());
    match metric {
        OverburdenedMetric::Blocks => st.blocks.len(),
        OverburdenedMetric::Groups => st
            .type_groups
            .iter()
            .filter(|g| g.group_type == CellType::Formula)
            .count(),
    }
}

/// Pairs (g, g′) where g reads a strict part of g′ through one of its reference groups
/// and no reference group of g covers g′ exactly.
pub fn inconsistent_group_references(model: &StructureModel) -> Vec<(FormulaGroupId, FormulaGroupId)> {
    let mut out = Vec::new();
    for (gi, _) in model.formula_groups.iter().enumerate() {
        let g = FormulaGroupId(gi);
        let refs = model.reference_groups_of(g);
        let mut targets = BTreeSet::new();
        for r in refs {
            for c in r.cells() {
                if let Some(t) = model.group_of(crate::grid::CellAddr::new(r.sheet, c)) {
                    if t != g {
                        targets.insert(t);
                    }
                }
            }
        }
        for t in targets {
            let target = model.formula_group(t);
            let rect = target.rect();
            let exact = refs.iter().any(|r| r.sheet == target.sheet && r.rect == rect);
            let strict_part = refs
                .iter()
                .any(|r| r.sheet == target.sheet && rect.contains_rect(&r.rect) && r.rect != rect);
            if !exact && strict_part {
                out.push((g, t));
            }
        }
    }
    out
}

/// Empty positions in the header layers of block `block` of `ws`.
pub fn missing_headers(ws: &Worksheet, model: &StructureModel, block: usize) -> BTreeSet<Coordinate> {
    model
        .sheet(ws.id())
        .layers_of(block)
        .flat_map(|l| l.cells())
        .filter(|c| ws.get(*c).is_none())
        .collect()
}
