use std::collections::BTreeSet;

use crate::grid::{Cell, CellAddr, Coordinate, Rect, SheetId, Workbook};

use super::{AreaReference, CellReference, CoordinateReference, FormulaError, RefSlot};

pub fn deref_coordinate(r: CoordinateReference, base: u32) -> Result<u32, FormulaError> {
    let v = r.raw_at(base);
    if v < 1 || v > u32::MAX as i64 {
        Err(FormulaError::OutsideSheet)
    } else {
        Ok(v as u32)
    }
}

fn target_sheet(sheet: &Option<String>, origin: &Cell, wb: &Workbook) -> Result<SheetId, FormulaError> {
    match sheet {
        None => Ok(origin.sheet),
        Some(name) => wb
            .sheet_by_name(name)
            .map(|s| s.id())
            .ok_or_else(|| FormulaError::UnknownWorksheet(name.clone())),
    }
}

pub fn deref_cell(r: &CellReference, origin: &Cell, wb: &Workbook) -> Result<CellAddr, FormulaError> {
    let sheet = target_sheet(&r.sheet, origin, wb)?;
    let col = deref_coordinate(r.col_ref, origin.coord.col)?;
    let row = deref_coordinate(r.row_ref, origin.coord.row)?;
    Ok(CellAddr::new(sheet, Coordinate::new(col, row)))
}

/// The rectangle an area reference covers when evaluated at `origin`.
pub fn deref_area(r: &AreaReference, origin: &Cell, wb: &Workbook) -> Result<(SheetId, Rect), FormulaError> {
    let sheet = target_sheet(&r.sheet, origin, wb)?;
    let o = origin.coord;
    let a = Coordinate::new(deref_coordinate(r.x1, o.col)?, deref_coordinate(r.y1, o.row)?);
    let b = Coordinate::new(deref_coordinate(r.x2, o.col)?, deref_coordinate(r.y2, o.row)?);
    Ok((sheet, Rect::new(a, b)))
}

/// A dereferenced reference slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resolved {
    Cell(CellAddr),
    Area { sheet: SheetId, rect: Rect },
}

impl Resolved {
    pub fn sheet(&self) -> SheetId {
        match self {
            Resolved::Cell(a) => a.sheet,
            Resolved::Area { sheet, .. } => *sheet,
        }
    }

    pub fn rect(&self) -> Rect {
        match self {
            Resolved::Cell(a) => Rect::cell(a.coord),
            Resolved::Area { rect, .. } => *rect,
        }
    }
}

/// Every reference slot of `c`'s formula with its resolution, cell slots first.
pub fn resolve_references(c: &Cell, wb: &Workbook) -> Vec<(RefSlot, Result<Resolved, FormulaError>)> {
    let Some(f) = &c.formula else {
        return Vec::new();
    };
    let cells = f
        .cell_refs()
        .iter()
        .enumerate()
        .map(|(i, r)| (RefSlot::Cell(i), deref_cell(r, c, wb).map(Resolved::Cell)));
    let areas = f.area_refs().iter().enumerate().map(|(i, r)| {
        (
            RefSlot::Area(i),
            deref_area(r, c, wb).map(|(sheet, rect)| Resolved::Area { sheet, rect }),
        )
    });
    cells.chain(areas).collect()
}

/// All cells referenced by `c`; empty for non-formula cells.
pub fn referenced_cells(c: &Cell, wb: &Workbook) -> Result<BTreeSet<CellAddr>, FormulaError> {
    let mut out = BTreeSet::new();
    for (_, r) in resolve_references(c, wb) {
        match r? {
            Resolved::Cell(a) => {
                out.insert(a);
            }
            Resolved::Area { sheet, rect } => {
                out.extend(rect.cells().map(|coord| CellAddr::new(sheet, coord)));
            }
        }
    }
    Ok(out)
}
