//! The canonical JSON workbook format.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::formula::{parse_formula_a1, render_a1, Origin};
use crate::grid::{is_error_literal, CellContent, CellType, Coordinate, Scalar, Workbook, WorkbookBuilder};

use super::IngestError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkbookDocument {
    pub schema_version: u32,
    #[serde(default)]
    pub sheets: Vec<SheetDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheetDocument {
    pub name: String,
    #[serde(default)]
    pub cells: Vec<CellDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDocument {
    pub addr: String,
    #[serde(rename = "type")]
    pub cell_type: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cached: Option<Value>,
}

fn schema(sheet: &str, addr: &str, message: impl Into<String>) -> IngestError {
    IngestError::Schema {
        sheet: Some(sheet.to_string()),
        addr: Some(addr.to_string()),
        message: message.into(),
    }
}

fn typed_scalar(t: CellType, v: &Value) -> Option<Scalar> {
    match (t, v) {
        (CellType::Numeric, Value::Number(n)) => n.as_f64().map(Scalar::Number),
        (CellType::String, Value::String(s)) => Some(Scalar::Text(s.clone())),
        (CellType::Boolean, Value::Bool(b)) => Some(Scalar::Bool(*b)),
        (CellType::Error, Value::String(s)) if s.starts_with('#') => Some(Scalar::Error(s.clone())),
        _ => None,
    }
}

/// Cached values carry no declared type; strings that spell an error literal are errors.
fn untyped_scalar(v: &Value) -> Option<Scalar> {
    match v {
        Value::Number(n) => n.as_f64().map(Scalar::Number),
        Value::Bool(b) => Some(Scalar::Bool(*b)),
        Value::String(s) if is_error_literal(s) => Some(Scalar::Error(s.to_uppercase())),
        Value::String(s) => Some(Scalar::Text(s.clone())),
        _ => None,
    }
}

impl WorkbookDocument {
    pub fn into_workbook(self, source_path: impl Into<String>) -> Result<Workbook, IngestError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(IngestError::Schema {
                sheet: None,
                addr: None,
                message: format!(
                    "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                    self.schema_version
                ),
            });
        }
        let mut b = WorkbookBuilder::new(source_path);
        let mut ids = Vec::with_capacity(self.sheets.len());
        for s in &self.sheets {
            let id = b.add_sheet(s.name.clone()).map_err(|e| IngestError::Schema {
                sheet: Some(s.name.clone()),
                addr: None,
                message: e.to_string(),
            })?;
            ids.push(id);
        }
        for (s, id) in self.sheets.iter().zip(ids) {
            let mut seen = BTreeSet::new();
            for c in &s.cells {
                let coord: Coordinate = c
                    .addr
                    .parse()
                    .map_err(|_| schema(&s.name, &c.addr, "invalid A1 address"))?;
                if !seen.insert(coord) {
                    return Err(schema(&s.name, &c.addr, "duplicate address"));
                }
                let t: CellType = c.cell_type.parse().map_err(|e: String| schema(&s.name, &c.addr, e))?;
                if let Some(content) = cell_content(&s.name, c, t, coord)? {
                    b.set_cell(id, coord, content)
                        .map_err(|e| schema(&s.name, &c.addr, e.to_string()))?;
                }
            }
        }
        Ok(b.build())
    }

    /// Sheets in workbook order, cells row-major, formulas in canonical A1 text.
    pub fn from_workbook(wb: &Workbook) -> Result<Self, IngestError> {
        let mut sheets = Vec::new();
        for ws in wb.sheets() {
            let mut cells = Vec::new();
            for c in ws.cells() {
                let addr = c.coord.to_string();
                let doc = match &c.formula {
                    Some(f) => CellDocument {
                        formula: Some(render_a1(f, c.coord).map_err(|e| IngestError::Formula {
                            sheet: ws.name().to_string(),
                            addr: addr.clone(),
                            source: e,
                        })?),
                        cell_type: CellType::Formula.as_str().to_string(),
                        value: None,
                        cached: c.cached_value.as_ref().map(Scalar::to_json),
                        addr,
                    },
                    None => CellDocument {
                        cell_type: c.cell_type.as_str().to_string(),
                        value: c.literal.as_ref().map(Scalar::to_json),
                        formula: None,
                        cached: None,
                        addr,
                    },
                };
                cells.push(doc);
            }
            sheets.push(SheetDocument {
                name: ws.name().to_string(),
                cells,
            });
        }
        Ok(WorkbookDocument {
            schema_version: SCHEMA_VERSION,
            sheets,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

fn cell_content(
    sheet: &str,
    c: &CellDocument,
    t: CellType,
    coord: Coordinate,
) -> Result<Option<CellContent>, IngestError> {
    match t {
        CellType::Formula => {
            if c.value.is_some() {
                return Err(schema(sheet, &c.addr, "formula cells carry `cached`, not `value`"));
            }
            let text = c
                .formula
                .as_deref()
                .ok_or_else(|| schema(sheet, &c.addr, "formula cell without formula text"))?;
            let formula = parse_formula_a1(text, Origin::new(sheet, coord)).map_err(|e| IngestError::Formula {
                sheet: sheet.to_string(),
                addr: c.addr.clone(),
                source: e,
            })?;
            let cached = match &c.cached {
                None | Some(Value::Null) => None,
                Some(v) => {
                    Some(untyped_scalar(v).ok_or_else(|| schema(sheet, &c.addr, "cached value must be a scalar"))?)
                }
            };
            Ok(Some(CellContent::Formula { formula, cached }))
        }
        CellType::Empty => {
            if c.value.is_some() || c.formula.is_some() || c.cached.is_some() {
                return Err(schema(sheet, &c.addr, "empty cells carry no content"));
            }
            Ok(None)
        }
        t => {
            if c.formula.is_some() {
                return Err(schema(sheet, &c.addr, "formula text on a non-formula cell"));
            }
            if c.cached.is_some() {
                return Err(schema(sheet, &c.addr, "cached value on a non-formula cell"));
            }
            let v = c
                .value
                .as_ref()
                .ok_or_else(|| schema(sheet, &c.addr, format!("{t} cell without value")))?;
            let scalar =
                typed_scalar(t, v).ok_or_else(|| schema(sheet, &c.addr, format!("value does not match type {t}")))?;
            Ok(Some(CellContent::Literal(scalar)))
        }
    }
}

pub fn parse_canonical(text: &str, source_path: &str) -> Result<Workbook, IngestError> {
    let doc: WorkbookDocument = serde_json::from_str(text).map_err(|e| IngestError::Json {
        path: source_path.to_string(),
        source: e,
    })?;
    doc.into_workbook(source_path)
}

pub fn load_canonical(path: &Path) -> Result<Workbook, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|e| IngestError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_canonical(&text, &path.display().to_string())
}

pub fn serialize_canonical(wb: &Workbook) -> Result<String, IngestError> {
    Ok(WorkbookDocument::from_workbook(wb)?.to_json())
}
