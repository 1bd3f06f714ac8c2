//! XLSX loading through calamine.

use std::collections::BTreeMap;
use std::path::Path;

use calamine::{open_workbook, CellErrorType, Data, Reader, Xlsx};

use crate::formula::{parse_formula_a1, Origin};
use crate::grid::{CellContent, Coordinate, Scalar, Workbook, WorkbookBuilder};

use super::{IngestError, LoadWarning};

fn error_text(e: &CellErrorType) -> &'static str {
    match e {
        CellErrorType::Div0 => "#DIV/0!",
        CellErrorType::NA => "#N/A",
        CellErrorType::Name => "#NAME?",
        CellErrorType::Null => "#NULL!",
        CellErrorType::Num => "#NUM!",
        CellErrorType::Ref => "#REF!",
        CellErrorType::Value => "#VALUE!",
        CellErrorType::GettingData => "#GETTING_DATA",
    }
}

fn scalar(d: &Data) -> Option<Scalar> {
    match d {
        Data::Empty => None,
        Data::Int(i) => Some(Scalar::Number(*i as f64)),
        Data::Float(f) => Some(Scalar::Number(*f)),
        Data::String(s) => Some(Scalar::Text(s.clone())),
        Data::Bool(b) => Some(Scalar::Bool(*b)),
        Data::DateTime(dt) => Some(Scalar::Number(dt.as_f64())),
        Data::DateTimeIso(s) | Data::DurationIso(s) => Some(Scalar::Text(s.clone())),
        Data::Error(e) => Some(Scalar::Error(error_text(e).to_string())),
    }
}

fn coord(start: Option<(u32, u32)>, row: usize, col: usize) -> Option<Coordinate> {
    let (r0, c0) = start?;
    Coordinate::try_new(c0 as i64 + col as i64 + 1, r0 as i64 + row as i64 + 1)
}

/// Loads every worksheet; unsupported formulas fall back to their cached value with a warning.
pub fn load_xlsx_with_warnings(path: &Path) -> Result<(Workbook, Vec<LoadWarning>), IngestError> {
    let unreadable = |e: &dyn std::fmt::Display| IngestError::Unreadable {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let mut book: Xlsx<_> = open_workbook(path).map_err(|e| unreadable(&e))?;
    let mut b = WorkbookBuilder::new(path.display().to_string());
    let mut warnings = Vec::new();
    for name in book.sheet_names() {
        let values = match book.worksheet_range(&name) {
            Ok(r) => r,
            Err(e) => {
                warnings.push(LoadWarning {
                    sheet: name.clone(),
                    addr: None,
                    message: format!("worksheet skipped: {e}"),
                });
                continue;
            }
        };
        let formulas = book.worksheet_formula(&name).map_err(|e| unreadable(&e))?;
        let id = b.add_sheet(name.clone()).map_err(|e| unreadable(&e))?;

        let mut cells: BTreeMap<Coordinate, (Option<String>, Option<Scalar>)> = BTreeMap::new();
        for (r, c, f) in formulas.used_cells() {
            if let Some(at) = coord(formulas.start(), r, c) {
                cells.entry(at).or_default().0 = Some(f.clone());
            }
        }
        for (r, c, v) in values.used_cells() {
            if let (Some(at), Some(s)) = (coord(values.start(), r, c), scalar(v)) {
                cells.entry(at).or_default().1 = Some(s);
            }
        }
        for (at, (formula, value)) in cells {
            let content = match formula.filter(|f| !f.trim().is_empty()) {
                Some(text) => match parse_formula_a1(&text, Origin::new(&name, at)) {
                    Ok(formula) => Some(CellContent::Formula { formula, cached: value }),
                    Err(e) => {
                        warnings.push(LoadWarning {
                            sheet: name.clone(),
                            addr: Some(at.to_string()),
                            message: format!("formula {text:?} downgraded to its value: {e}"),
                        });
                        value.map(CellContent::Literal)
                    }
                },
                None => value.map(CellContent::Literal),
            };
            if let Some(content) = content {
                b.set_cell(id, at, content).map_err(|e| unreadable(&e))?;
            }
        }
    }
    Ok((b.build(), warnings))
}

pub fn load_xlsx(path: &Path) -> Result<Workbook, IngestError> {
    load_xlsx_with_warnings(path).map(|(wb, _)| wb)
}
