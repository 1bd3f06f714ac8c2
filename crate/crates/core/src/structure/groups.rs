use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::grid::{neighbors, CellType, Coordinate, Rect, Worksheet};

use super::{Orientation, PartitionedFormulaGroup, TypeBasedGroup};

/// Maximal connected components of equal type, and equal R1C1 text for formula cells.
pub fn type_based_groups(ws: &Worksheet) -> Vec<TypeBasedGroup> {
    let key = |c: Coordinate| {
        ws.get(c)
            .map(|cell| (cell.cell_type, cell.formula.as_ref().map(|f| f.r1c1_text().to_string())))
    };
    let mut seen: HashSet<Coordinate> = HashSet::new();
    let mut out = Vec::new();
    for cell in ws.cells() {
        if !seen.insert(cell.coord) {
            continue;
        }
        let k = key(cell.coord);
        let mut members = BTreeSet::from([cell.coord]);
        let mut queue = VecDeque::from([cell.coord]);
        while let Some(c) = queue.pop_front() {
            for n in neighbors(c) {
                if !seen.contains(&n) && key(n) == k {
                    seen.insert(n);
                    members.insert(n);
                    queue.push_back(n);
                }
            }
        }
        let (group_type, formula) = k.expect("stored cell");
        out.push(TypeBasedGroup {
            sheet: ws.id(),
            cells: members,
            group_type,
            formula,
        });
    }
    out
}

pub fn formula_groups(ws: &Worksheet) -> Vec<TypeBasedGroup> {
    type_based_groups(ws)
        .into_iter()
        .filter(|g| g.group_type == CellType::Formula)
        .collect()
}

fn orientation_of(run: &[Coordinate], vertical: bool) -> Orientation {
    match (run.len(), vertical) {
        (1, _) => Orientation::Singleton,
        (_, true) => Orientation::Column,
        (_, false) => Orientation::Row,
    }
}

/// Maximal vertical (or horizontal) runs of `cells`.
fn runs(cells: &BTreeSet<Coordinate>, vertical: bool) -> Vec<Vec<Coordinate>> {
    let mut sorted: Vec<Coordinate> = cells.iter().copied().collect();
    if vertical {
        sorted.sort_by_key(|c| (c.col, c.row));
    }
    let mut out: Vec<Vec<Coordinate>> = Vec::new();
    for c in sorted {
        let extends = out.last().and_then(|r| r.last()).is_some_and(|p| {
            if vertical {
                p.col == c.col && p.row + 1 == c.row
            } else {
                p.row == c.row && p.col + 1 == c.col
            }
        });
        if extends {
            out.last_mut().unwrap().push(c);
        } else {
            out.push(vec![c]);
        }
    }
    out
}

/// Repeatedly takes the longest remaining run; columns first on equal length.
fn greedy_runs(cells: &BTreeSet<Coordinate>) -> Vec<(Vec<Coordinate>, bool)> {
    let mut rest = cells.clone();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let best = runs(&rest, true)
            .into_iter()
            .map(|r| (r, true))
            .chain(runs(&rest, false).into_iter().map(|r| (r, false)))
            .max_by(|(a, av), (b, bv)| a.len().cmp(&b.len()).then(av.cmp(bv)).then(b[0].cmp(&a[0])))
            .expect("non-empty");
        for c in &best.0 {
            rest.remove(c);
        }
        out.push(best);
    }
    out
}

/// Splits a formula group into one-dimensional runs using as few runs as found;
/// all-column beats all-row on a tie, and both beat a mixed split on a tie.
pub fn partition_formula_group(g: &TypeBasedGroup) -> Vec<PartitionedFormulaGroup> {
    let formula = g.formula.clone().unwrap_or_default();
    let cols: Vec<_> = runs(&g.cells, true).into_iter().map(|r| (r, true)).collect();
    let rows: Vec<_> = runs(&g.cells, false).into_iter().map(|r| (r, false)).collect();
    let is_rect = Rect::bounding(&g.cells).is_some_and(|r| r.cell_count() == g.cells.len() as u64);
    let mut best = if rows.len() < cols.len() { rows } else { cols };
    if !is_rect {
        let mixed = greedy_runs(&g.cells);
        if mixed.len() < best.len() {
            best = mixed;
        }
    }
    let mut out: Vec<PartitionedFormulaGroup> = best
        .into_iter()
        .map(|(cells, vertical)| PartitionedFormulaGroup {
            sheet: g.sheet,
            orientation: orientation_of(&cells, vertical),
            cells,
            formula: formula.clone(),
        })
        .collect();
    out.sort_by_key(|p| p.cells[0]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SheetId;

    fn group(cells: &[&str]) -> TypeBasedGroup {
        TypeBasedGroup {
            sheet: SheetId(0),
            cells: cells.iter().map(|s| s.parse().unwrap()).collect(),
            group_type: CellType::Formula,
            formula: Some("R1C1".into()),
        }
    }

    fn shapes(parts: &[PartitionedFormulaGroup]) -> Vec<String> {
        parts
            .iter()
            .map(|p| format!("{}:{:?}", p.rect(), p.orientation))
            .collect()
    }

    #[test]
    fn wide_rectangle_splits_into_rows() {
        // 3 wide, 2 tall: 3 column runs against 2 row runs.
        let g = group(&["B2", "C2", "D2", "B3", "C3", "D3"]);
        assert_eq!(runs(&g.cells, true).len(), 3);
        assert_eq!(runs(&g.cells, false).len(), 2);
        assert_eq!(shapes(&partition_formula_group(&g)), ["B2:D2:Row", "B3:D3:Row"]);
    }

    #[test]
    fn square_prefers_columns() {
        let g = group(&["A1", "B1", "A2", "B2"]);
        assert_eq!(shapes(&partition_formula_group(&g)), ["A1:A2:Column", "B1:B2:Column"]);
    }

    #[test]
    fn one_dimensional_and_singleton_pass_through() {
        let g = group(&["B8", "C8", "D8", "E8", "F8"]);
        assert_eq!(shapes(&partition_formula_group(&g)), ["B8:F8:Row"]);
        assert_eq!(shapes(&partition_formula_group(&group(&["B3"]))), ["B3:B3:Singleton"]);
    }

    #[test]
    fn l_shape_uses_a_mixed_split() {
        let g = group(&["A1", "A2", "A3", "A4", "B4", "C4", "D4"]);
        assert_eq!(shapes(&partition_formula_group(&g)), ["A1:A4:Column", "B4:D4:Row"]);
    }
}
