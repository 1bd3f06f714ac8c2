use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::formula::{static_result_type, ResultType};
use crate::grid::{CellType, Coordinate, Worksheet};
use crate::structure::{ReferenceGroupId, StructureModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternOrientation {
    #[default]
    Column,
    Row,
    /// Cells flagged in both orientations.
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PatternFinderVariant {
    pub orientation: PatternOrientation,
    /// Also report cells within five lines of the used range's edges.
    pub include_border: bool,
    /// Group finder only: compare result types instead of cell types.
    pub evaluated_types: bool,
}

/// Cells inspected on each side of a candidate for a second occurrence of its type.
pub const UNIQUENESS_DISTANCE: u32 = 5;
/// Lines at either edge of the used range that the border rule excludes.
pub const BORDER_LINES: u32 = 5;
const WINDOW: u32 = 4;

fn type_at(ws: &Worksheet, c: Coordinate) -> ResultType {
    ws.get(c).map_or(ResultType::Known(CellType::Empty), static_result_type)
}

fn flags(ws: &Worksheet, vertical: bool, include_border: bool) -> BTreeSet<Coordinate> {
    let bounds = ws.bounds();
    let max = if vertical { bounds.max_row } else { bounds.max_col };
    let at = |c: Coordinate, pos: u32| {
        if vertical {
            Coordinate::new(c.col, pos)
        } else {
            Coordinate::new(pos, c.row)
        }
    };
    let mut out = BTreeSet::new();
    for cell in ws.cells() {
        let c = cell.coord;
        let t = type_at(ws, c);
        if matches!(t, ResultType::Unknown | ResultType::Known(CellType::Empty)) {
            continue;
        }
        let pos = if vertical { c.row } else { c.col };
        if !include_border && (pos <= BORDER_LINES || pos + BORDER_LINES > max) {
            continue;
        }
        let deviant = (0..WINDOW).filter(|&s| s < pos).any(|s| {
            let start = pos - s;
            let others: Vec<ResultType> = (start..start + WINDOW)
                .filter(|&p| p != pos)
                .map(|p| type_at(ws, at(c, p)))
                .collect();
            let u = others[0];
            others.iter().all(|&o| o == u)
                && u != t
                && !matches!(u, ResultType::Unknown | ResultType::Known(CellType::Empty))
        });
        if !deviant {
            continue;
        }
        let repeated = (1..=UNIQUENESS_DISTANCE)
            .any(|d| (pos > d && type_at(ws, at(c, pos - d)) == t) || type_at(ws, at(c, pos + d)) == t);
        if !repeated {
            out.insert(c);
        }
    }
    out
}

/// Cells that break a 4-cell type pattern in the variant's orientation.
pub fn baseline_pattern_cells(ws: &Worksheet, v: PatternFinderVariant) -> BTreeSet<Coordinate> {
    match v.orientation {
        PatternOrientation::Column => flags(ws, true, v.include_border),
        PatternOrientation::Row => flags(ws, false, v.include_border),
        PatternOrientation::Combined => {
            let cols = flags(ws, true, v.include_border);
            let rows = flags(ws, false, v.include_border);
            cols.intersection(&rows).copied().collect()
        }
    }
}

/// Distinct types among a group's cells; unknown result types are left out.
pub fn group_types<I: IntoIterator<Item = Coordinate>>(
    ws: &Worksheet,
    cells: I,
    evaluated: bool,
) -> BTreeSet<CellType> {
    cells
        .into_iter()
        .filter_map(|c| {
            if evaluated {
                match type_at(ws, c) {
                    ResultType::Known(t) => Some(t),
                    ResultType::Unknown => None,
                }
            } else {
                Some(ws.cell_type(c))
            }
        })
        .collect()
}

/// Merged reference groups of `ws` whose cells carry two or more types.
pub fn group_pattern_groups(
    ws: &Worksheet,
    model: &StructureModel,
    evaluated: bool,
) -> Vec<(ReferenceGroupId, BTreeSet<CellType>)> {
    model
        .sheet(ws.id())
        .reference_groups
        .iter()
        .map(|&id| (id, group_types(ws, model.reference_group(id).cells(), evaluated)))
        .filter(|(_, types)| types.len() >= 2)
        .collect()
}
