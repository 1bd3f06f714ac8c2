use std::collections::BTreeMap;

use crate::formula::{deref_area, deref_cell, RefSlot};
use crate::grid::{CellAddr, Coordinate, Rect, SheetId, Workbook};

use super::{FormulaGroupId, Orientation, PartitionedFormulaGroup, Provenance, ReferenceBasedGroup, ReferenceIssue};

pub(crate) fn shape_of(rect: &Rect) -> Orientation {
    if rect.cell_count() == 1 {
        Orientation::Singleton
    } else if rect.width() == 1 {
        Orientation::Column
    } else if rect.height() == 1 {
        Orientation::Row
    } else {
        Orientation::Rectangle
    }
}

fn push_unique(groups: &mut Vec<ReferenceBasedGroup>, sheet: SheetId, rect: Rect, p: Provenance) {
    match groups.iter_mut().find(|g| g.sheet == sheet && g.rect == rect) {
        Some(g) => {
            if !g.provenance.contains(&p) {
                g.provenance.push(p);
            }
        }
        None => groups.push(ReferenceBasedGroup {
            sheet,
            rect,
            orientation: shape_of(&rect),
            provenance: vec![p],
        }),
    }
}

/// One group per cell reference over all cells of `g`, one per area reference and cell.
/// Identical groups are reported once.
pub(crate) fn build_reference_groups(
    id: FormulaGroupId,
    g: &PartitionedFormulaGroup,
    wb: &Workbook,
    issues: &mut Vec<ReferenceIssue>,
) -> Vec<ReferenceBasedGroup> {
    let ws = wb.sheet(g.sheet);
    let mut out = Vec::new();
    let Some(first) = ws.get(g.cells[0]) else {
        return out;
    };
    let Some(formula) = &first.formula else {
        return out;
    };
    let mut fail = |slot: RefSlot, c: Coordinate, e: crate::formula::FormulaError| {
        issues.push(ReferenceIssue {
            group: id,
            slot,
            origin: CellAddr::new(g.sheet, c),
            error: e.to_string(),
        });
    };

    for (i, r) in formula.cell_refs().iter().enumerate() {
        let slot = RefSlot::Cell(i);
        let mut targets: BTreeMap<SheetId, Vec<Coordinate>> = BTreeMap::new();
        for &c in &g.cells {
            let Some(cell) = ws.get(c) else { continue };
            match deref_cell(r, cell, wb) {
                Ok(a) => targets.entry(a.sheet).or_default().push(a.coord),
                Err(e) => fail(slot, c, e),
            }
        }
        for (sheet, coords) in targets {
            let rect = Rect::bounding(&coords).expect("non-empty");
            push_unique(&mut out, sheet, rect, Provenance { group: id, slot });
        }
    }
    for (i, r) in formula.area_refs().iter().enumerate() {
        let slot = RefSlot::Area(i);
        for &c in &g.cells {
            let Some(cell) = ws.get(c) else { continue };
            match deref_area(r, cell, wb) {
                Ok((sheet, rect)) => push_unique(&mut out, sheet, rect, Provenance { group: id, slot }),
                Err(e) => fail(slot, c, e),
            }
        }
    }
    out
}

fn merge_provenance(into: &mut Vec<Provenance>, from: &[Provenance]) {
    for p in from {
        if !into.contains(p) {
            into.push(*p);
        }
    }
}

/// Span-union of overlapping runs on one line.
fn sweep(mut line: Vec<ReferenceBasedGroup>, vertical: bool) -> Vec<ReferenceBasedGroup> {
    let span = |g: &ReferenceBasedGroup| {
        if vertical {
            (g.rect.top(), g.rect.bottom())
        } else {
            (g.rect.left(), g.rect.right())
        }
    };
    line.sort_by_key(span);
    let mut out: Vec<ReferenceBasedGroup> = Vec::new();
    for g in line {
        match out.last_mut() {
            Some(cur) if span(&g).0 <= span(cur).1 => {
                cur.rect = cur.rect.union(&g.rect);
                merge_provenance(&mut cur.provenance, &g.provenance);
            }
            _ => out.push(g),
        }
    }
    out
}

/// Merges same-orientation groups whose spans overlap on the same line. Rectangular
/// groups are split into columns first; singletons are absorbed by any covering line
/// group, otherwise deduplicated.
pub fn merge_reference_groups(groups: Vec<ReferenceBasedGroup>) -> Vec<ReferenceBasedGroup> {
    let mut columns: BTreeMap<(SheetId, u32), Vec<ReferenceBasedGroup>> = BTreeMap::new();
    let mut rows: BTreeMap<(SheetId, u32), Vec<ReferenceBasedGroup>> = BTreeMap::new();
    let mut singles: Vec<ReferenceBasedGroup> = Vec::new();
    for g in groups {
        match g.orientation {
            Orientation::Column => columns.entry((g.sheet, g.rect.left())).or_default().push(g),
            Orientation::Row => rows.entry((g.sheet, g.rect.top())).or_default().push(g),
            Orientation::Singleton => singles.push(g),
            Orientation::Rectangle => {
                for col in g.rect.left()..=g.rect.right() {
                    let rect = Rect::new(
                        Coordinate::new(col, g.rect.top()),
                        Coordinate::new(col, g.rect.bottom()),
                    );
                    columns.entry((g.sheet, col)).or_default().push(ReferenceBasedGroup {
                        sheet: g.sheet,
                        rect,
                        orientation: Orientation::Column,
                        provenance: g.provenance.clone(),
                    });
                }
            }
        }
    }
    let mut lines: Vec<ReferenceBasedGroup> = Vec::new();
    for (_, line) in columns {
        lines.extend(sweep(line, true));
    }
    for (_, line) in rows {
        lines.extend(sweep(line, false));
    }
    let mut leftover: Vec<ReferenceBasedGroup> = Vec::new();
    for s in singles {
        let cell = s.rect.top_left;
        let mut absorbed = false;
        for g in lines.iter_mut().filter(|g| g.sheet == s.sheet && g.rect.contains(cell)) {
            merge_provenance(&mut g.provenance, &s.provenance);
            absorbed = true;
        }
        if absorbed {
            continue;
        }
        match leftover.iter_mut().find(|g| g.sheet == s.sheet && g.rect == s.rect) {
            Some(g) => merge_provenance(&mut g.provenance, &s.provenance),
            None => leftover.push(s),
        }
    }
    lines.extend(leftover);
    for g in &mut lines {
        g.provenance.sort();
    }
    lines.sort_by_key(|g| (g.sheet, g.rect.top_left, g.rect.bottom_right, g.orientation));
    lines
}
