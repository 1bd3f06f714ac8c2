//! Spreadsheet structure inference and smell detection.
//!
//! A [`Workbook`] is loaded from the canonical JSON format or from XLSX,
//! a [`StructureModel`] groups its cells into computation blocks with
//! header layers, and the detectors in [`smells`] report on both.

pub mod eval;
pub mod formula;
pub mod grid;
pub mod ingest;
pub mod report;
pub mod smells;
pub mod structure;

pub use formula::{
    copy_equivalent, parse_formula_a1, parse_formula_r1c1, render_a1, static_result_type, FormulaError, FormulaR1C1,
    Origin, ResultType,
};
pub use grid::{
    Bounds, Cell, CellAddr, CellContent, CellType, Coordinate, GridError, Rect, Scalar, SheetId, Workbook,
    WorkbookBuilder, Worksheet,
};
