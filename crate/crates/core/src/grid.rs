//! Sparse worksheet grid: coordinates, typed cells, worksheets and workbooks.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::formula::FormulaR1C1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GridError {
    #[error("empty cell set")]
    EmptyCellSet,
    #[error("invalid A1 address {0:?}")]
    InvalidAddress(String),
    #[error("duplicate worksheet name {0:?}")]
    DuplicateSheet(String),
    #[error("duplicate cell {sheet}!{coord}")]
    DuplicateCell { sheet: String, coord: Coordinate },
    #[error("no worksheet with id {0}")]
    UnknownSheet(usize),
}

/// 1-based column/row position. Ordering is row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coordinate {
    pub col: u32,
    pub row: u32,
}

impl Coordinate {
    /// Panics when either index is zero.
    pub fn new(col: u32, row: u32) -> Self {
        assert!(col >= 1 && row >= 1, "coordinates are 1-based");
        Coordinate { col, row }
    }

    pub fn try_new(col: i64, row: i64) -> Option<Self> {
        if col >= 1 && row >= 1 && col <= u32::MAX as i64 && row <= u32::MAX as i64 {
            Some(Coordinate {
                col: col as u32,
                row: row as u32,
            })
        } else {
            None
        }
    }

    pub fn offset(self, dcol: i64, drow: i64) -> Option<Self> {
        Self::try_new(self.col as i64 + dcol, self.row as i64 + drow)
    }

    pub fn manhattan(self, other: Coordinate) -> u64 {
        (self.col as i64 - other.col as i64).unsigned_abs() + (self.row as i64 - other.row as i64).unsigned_abs()
    }
}

impl Ord for Coordinate {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.row, self.col).cmp(&(other.row, other.col))
    }
}

impl PartialOrd for Coordinate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", column_name(self.col), self.row)
    }
}

impl FromStr for Coordinate {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GridError::InvalidAddress(s.to_string());
        let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let (letters, digits) = s.split_at(split);
        let col = parse_column(letters).ok_or_else(bad)?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let row: u32 = digits.parse().map_err(|_| bad())?;
        if row == 0 {
            return Err(bad());
        }
        Ok(Coordinate { col, row })
    }
}

impl Serialize for Coordinate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Coordinate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Column index to letters: 1 → "A", 27 → "AA".
pub fn column_name(mut col: u32) -> String {
    let mut out = Vec::new();
    while col > 0 {
        let rem = (col - 1) % 26;
        out.push(b'A' + rem as u8);
        col = (col - 1) / 26;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Letters to column index, case-insensitive. Rejects empty input and overflow.
pub fn parse_column(letters: &str) -> Option<u32> {
    if letters.is_empty() || letters.len() > 7 {
        return None;
    }
    let mut col: u64 = 0;
    for b in letters.bytes() {
        if !b.is_ascii_alphabetic() {
            return None;
        }
        col = col * 26 + (b.to_ascii_uppercase() - b'A' + 1) as u64;
    }
    u32::try_from(col).ok()
}

/// Inclusive rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    pub top_left: Coordinate,
    pub bottom_right: Coordinate,
}

impl Rect {
    pub fn new(a: Coordinate, b: Coordinate) -> Self {
        Rect {
            top_left: Coordinate::new(a.col.min(b.col), a.row.min(b.row)),
            bottom_right: Coordinate::new(a.col.max(b.col), a.row.max(b.row)),
        }
    }

    pub fn cell(c: Coordinate) -> Self {
        Rect {
            top_left: c,
            bottom_right: c,
        }
    }

    pub fn bounding<'a, I: IntoIterator<Item = &'a Coordinate>>(cells: I) -> Option<Rect> {
        let mut it = cells.into_iter();
        let first = *it.next()?;
        let mut r = Rect::cell(first);
        for c in it {
            r = r.expand(*c);
        }
        Some(r)
    }

    pub fn left(&self) -> u32 {
        self.top_left.col
    }
    pub fn right(&self) -> u32 {
        self.bottom_right.col
    }
    pub fn top(&self) -> u32 {
        self.top_left.row
    }
    pub fn bottom(&self) -> u32 {
        self.bottom_right.row
    }

    pub fn width(&self) -> u32 {
        self.right() - self.left() + 1
    }

    pub fn height(&self) -> u32 {
        self.bottom() - self.top() + 1
    }

    pub fn cell_count(&self) -> u64 {
        self.width() as u64 * self.height() as u64
    }

    pub fn contains(&self, c: Coordinate) -> bool {
        (self.left()..=self.right()).contains(&c.col) && (self.top()..=self.bottom()).contains(&c.row)
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.contains(other.top_left) && self.contains(other.bottom_right)
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.left() <= other.right()
            && other.left() <= self.right()
            && self.top() <= other.bottom()
            && other.top() <= self.bottom()
    }

    pub fn expand(&self, c: Coordinate) -> Rect {
        Rect {
            top_left: Coordinate::new(self.left().min(c.col), self.top().min(c.row)),
            bottom_right: Coordinate::new(self.right().max(c.col), self.bottom().max(c.row)),
        }
    }

    pub fn union(&self, other: &Rect) -> Rect {
        self.expand(other.top_left).expand(other.bottom_right)
    }

    /// Row-major enumeration of every coordinate.
    pub fn cells(self) -> impl Iterator<Item = Coordinate> {
        (self.top()..=self.bottom())
            .flat_map(move |row| (self.left()..=self.right()).map(move |col| Coordinate { col, row }))
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.top_left, self.bottom_right)
    }
}

impl Serialize for Rect {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Rect {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            Some((a, b)) => Ok(Rect::new(a.parse()?, b.parse()?)),
            None => Ok(Rect::cell(s.parse()?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellType {
    Formula,
    Boolean,
    Numeric,
    String,
    Error,
    Empty,
}

impl CellType {
    pub const ALL: [CellType; 6] = [
        CellType::Formula,
        CellType::Boolean,
        CellType::Numeric,
        CellType::String,
        CellType::Error,
        CellType::Empty,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CellType::Formula => "formula",
            CellType::Boolean => "boolean",
            CellType::Numeric => "numeric",
            CellType::String => "string",
            CellType::Error => "error",
            CellType::Empty => "empty",
        }
    }
}

impl fmt::Display for CellType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CellType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CellType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown cell type {s:?}"))
    }
}

/// Spreadsheet error literals recognised as error values.
pub const ERROR_LITERALS: [&str; 8] = [
    "#NULL!",
    "#DIV/0!",
    "#VALUE!",
    "#REF!",
    "#NAME?",
    "#NUM!",
    "#N/A",
    "#GETTING_DATA",
];

pub fn is_error_literal(s: &str) -> bool {
    ERROR_LITERALS.iter().any(|e| e.eq_ignore_ascii_case(s))
}

/// A constant cell value.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Number(f64),
    Text(String),
    Bool(bool),
    Error(String),
}

impl Scalar {
    pub fn cell_type(&self) -> CellType {
        match self {
            Scalar::Number(_) => CellType::Numeric,
            Scalar::Text(_) => CellType::String,
            Scalar::Bool(_) => CellType::Boolean,
            Scalar::Error(_) => CellType::Error,
        }
    }

    /// JSON encoding used by the canonical format; integral numbers are written without a fraction.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Number(n) => number_to_json(*n),
            Scalar::Text(s) | Scalar::Error(s) => serde_json::Value::String(s.clone()),
            Scalar::Bool(b) => serde_json::Value::Bool(*b),
        }
    }
}

fn number_to_json(n: f64) -> serde_json::Value {
    if n.fract() == 0.0 && n.abs() < 9.007_199_254_740_992e15 {
        serde_json::Value::from(n as i64)
    } else {
        serde_json::Number::from_f64(n)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Number(n) => write!(f, "{n}"),
            Scalar::Text(s) => write!(f, "{s:?}"),
            Scalar::Bool(b) => f.write_str(if *b { "TRUE" } else { "FALSE" }),
            Scalar::Error(e) => f.write_str(e),
        }
    }
}

/// Index of a worksheet within its workbook.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SheetId(pub usize);

/// Workbook-wide cell address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CellAddr {
    pub sheet: SheetId,
    pub coord: Coordinate,
}

impl CellAddr {
    pub fn new(sheet: SheetId, coord: Coordinate) -> Self {
        CellAddr { sheet, coord }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellContent {
    Literal(Scalar),
    Formula {
        formula: FormulaR1C1,
        cached: Option<Scalar>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub sheet: SheetId,
    pub coord: Coordinate,
    pub cell_type: CellType,
    pub literal: Option<Scalar>,
    pub formula: Option<FormulaR1C1>,
    pub cached_value: Option<Scalar>,
}

impl Cell {
    pub fn new(sheet: SheetId, coord: Coordinate, content: CellContent) -> Self {
        match content {
            CellContent::Literal(v) => Cell {
                sheet,
                coord,
                cell_type: v.cell_type(),
                literal: Some(v),
                formula: None,
                cached_value: None,
            },
            CellContent::Formula { formula, cached } => Cell {
                sheet,
                coord,
                cell_type: CellType::Formula,
                literal: None,
                formula: Some(formula),
                cached_value: cached,
            },
        }
    }

    pub fn addr(&self) -> CellAddr {
        CellAddr::new(self.sheet, self.coord)
    }

    pub fn is_formula(&self) -> bool {
        self.formula.is_some()
    }
}

/// Largest used column and row; zero for an empty worksheet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Bounds {
    pub max_col: u32,
    pub max_row: u32,
}

impl Bounds {
    pub fn contains(&self, c: Coordinate) -> bool {
        c.col <= self.max_col && c.row <= self.max_row
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Worksheet {
    id: SheetId,
    name: String,
    cells: BTreeMap<Coordinate, Cell>,
    bounds: Bounds,
}

impl Worksheet {
    pub fn id(&self) -> SheetId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn get(&self, c: Coordinate) -> Option<&Cell> {
        self.cells.get(&c)
    }

    pub fn cell_type(&self, c: Coordinate) -> CellType {
        cell_type(self.get(c))
    }

    /// Stored (non-empty) cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = &Cell> + '_ {
        self.cells.values()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn formula_cells(&self) -> impl Iterator<Item = &Cell> + '_ {
        self.cells.values().filter(|c| c.is_formula())
    }

    pub fn has_formulas(&self) -> bool {
        self.formula_cells().next().is_some()
    }

    /// Stored cells whose coordinates fall inside `r`, row-major.
    pub fn cells_in(&self, r: Rect) -> impl Iterator<Item = &Cell> + '_ {
        self.cells
            .range(r.top_left..=r.bottom_right)
            .map(|(_, c)| c)
            .filter(move |c| r.contains(c.coord))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Workbook {
    sheets: Vec<Worksheet>,
    source_path: String,
    by_name: HashMap<String, SheetId>,
}

impl Workbook {
    pub fn sheets(&self) -> &[Worksheet] {
        &self.sheets
    }

    pub fn source_path(&self) -> &str {
        &self.source_path
    }

    pub fn sheet(&self, id: SheetId) -> &Worksheet {
        &self.sheets[id.0]
    }

    /// Case-insensitive lookup, as spreadsheet programs treat sheet names.
    pub fn sheet_by_name(&self, name: &str) -> Option<&Worksheet> {
        self.by_name.get(&name.to_lowercase()).map(|id| &self.sheets[id.0])
    }

    pub fn cell(&self, addr: CellAddr) -> Option<&Cell> {
        self.sheets.get(addr.sheet.0)?.get(addr.coord)
    }

    pub fn has_formulas(&self) -> bool {
        self.sheets.iter().any(Worksheet::has_formulas)
    }

    /// `Sheet!A1` display of an address.
    pub fn display_addr(&self, addr: CellAddr) -> String {
        format!("{}!{}", self.sheet(addr.sheet).name, addr.coord)
    }
}

/// Incremental construction; the result is immutable.
#[derive(Debug, Default)]
pub struct WorkbookBuilder {
    source_path: String,
    sheets: Vec<Worksheet>,
    by_name: HashMap<String, SheetId>,
}

impl WorkbookBuilder {
    pub fn new(source_path: impl Into<String>) -> Self {
        WorkbookBuilder {
            source_path: source_path.into(),
            ..Default::default()
        }
    }

    pub fn add_sheet(&mut self, name: impl Into<String>) -> Result<SheetId, GridError> {
        let name = name.into();
        let key = name.to_lowercase();
        if self.by_name.contains_key(&key) {
            return Err(GridError::DuplicateSheet(name));
        }
        let id = SheetId(self.sheets.len());
        self.by_name.insert(key, id);
        self.sheets.push(Worksheet {
            id,
            name,
            cells: BTreeMap::new(),
            bounds: Bounds::default(),
        });
        Ok(id)
    }

    pub fn sheet_name(&self, id: SheetId) -> Option<&str> {
        self.sheets.get(id.0).map(|s| s.name.as_str())
    }

    pub fn set_cell(&mut self, sheet: SheetId, coord: Coordinate, content: CellContent) -> Result<(), GridError> {
        let ws = self.sheets.get_mut(sheet.0).ok_or(GridError::UnknownSheet(sheet.0))?;
        if ws.cells.contains_key(&coord) {
            return Err(GridError::DuplicateCell {
                sheet: ws.name.clone(),
                coord,
            });
        }
        ws.bounds.max_col = ws.bounds.max_col.max(coord.col);
        ws.bounds.max_row = ws.bounds.max_row.max(coord.row);
        ws.cells.insert(coord, Cell::new(sheet, coord, content));
        Ok(())
    }

    pub fn build(self) -> Workbook {
        Workbook {
            sheets: self.sheets,
            source_path: self.source_path,
            by_name: self.by_name,
        }
    }
}

/// Coordinates at Manhattan distance 1 with positive indices.
pub fn neighbors(c: Coordinate) -> Vec<Coordinate> {
    [(0, -1), (0, 1), (-1, 0), (1, 0)]
        .into_iter()
        .filter_map(|(dc, dr)| c.offset(dc, dr))
        .collect()
}

pub fn cell_type(c: Option<&Cell>) -> CellType {
    c.map_or(CellType::Empty, |c| c.cell_type)
}

/// Whether the set is a single neighbourhood component.
pub fn connected(cells: &BTreeSet<Coordinate>) -> Result<bool, GridError> {
    let start = *cells.iter().next().ok_or(GridError::EmptyCellSet)?;
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for n in neighbors(c) {
            if cells.contains(&n) && seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    Ok(seen.len() == cells.len())
}

/// Every coordinate of the bounding rectangle.
pub fn area(cells: &BTreeSet<Coordinate>) -> Result<BTreeSet<Coordinate>, GridError> {
    let r = Rect::bounding(cells).ok_or(GridError::EmptyCellSet)?;
    Ok(r.cells().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Coordinate {
        s.parse().unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<Coordinate> {
        items.iter().map(|s| c(s)).collect()
    }

    #[test]
    fn a1_addresses() {
        assert_eq!(c("B5"), Coordinate::new(2, 5));
        assert_eq!(c("aa10"), Coordinate::new(27, 10));
        assert_eq!(Coordinate::new(16384, 1).to_string(), "XFD1");
        assert!("A0".parse::<Coordinate>().is_err());
        assert!("5A".parse::<Coordinate>().is_err());
        assert!("A".parse::<Coordinate>().is_err());
        for col in 1..2000 {
            assert_eq!(parse_column(&column_name(col)), Some(col));
        }
    }

    #[test]
    fn neighbor_examples() {
        let n: BTreeSet<_> = neighbors(c("B5")).into_iter().collect();
        assert_eq!(n, set(&["B4", "B6", "A5", "C5"]));
        let n: BTreeSet<_> = neighbors(c("A1")).into_iter().collect();
        assert_eq!(n, set(&["A2", "B1"]));
        let n: BTreeSet<_> = neighbors(c("C3")).into_iter().collect();
        let brute: BTreeSet<_> = (1..=5)
            .flat_map(|x| (1..=5).map(move |y| Coordinate::new(x, y)))
            .filter(|p| p.manhattan(c("C3")) == 1)
            .collect();
        assert_eq!(n, brute);
    }

    #[test]
    fn connected_examples() {
        assert!(connected(&set(&["B4"])).unwrap());
        assert!(connected(&set(&["A1", "A2", "B2"])).unwrap());
        assert!(!connected(&set(&["A1", "B2"])).unwrap());
        let block: BTreeSet<_> = "A4:E7".parse::<Rect>().unwrap().cells().collect();
        assert!(connected(&block).unwrap());
        assert_eq!(connected(&BTreeSet::new()), Err(GridError::EmptyCellSet));
    }

    #[test]
    fn area_examples() {
        let a = area(&set(&["A3", "B4", "C2"])).unwrap();
        assert_eq!(a, set(&["A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4"]));
        assert_eq!(area(&set(&["B4"])).unwrap(), set(&["B4"]));
        assert_eq!(area(&set(&["A1", "C1"])).unwrap(), set(&["A1", "B1", "C1"]));
        assert_eq!(area(&BTreeSet::new()), Err(GridError::EmptyCellSet));
    }

    #[test]
    fn cell_types() {
        let mut b = WorkbookBuilder::new("mem");
        let s = b.add_sheet("S").unwrap();
        b.set_cell(s, c("A1"), CellContent::Literal(Scalar::Text("Q1".into())))
            .unwrap();
        let wb = b.build();
        let ws = wb.sheet(s);
        assert_eq!(ws.cell_type(c("A1")), CellType::String);
        assert_eq!(ws.cell_type(c("Z9")), CellType::Empty);
        assert_eq!(cell_type(None), CellType::Empty);
        assert_eq!(ws.bounds(), Bounds { max_col: 1, max_row: 1 });
    }

    #[test]
    fn builder_rejects_duplicates() {
        let mut b = WorkbookBuilder::new("mem");
        let s = b.add_sheet("Data").unwrap();
        assert!(matches!(b.add_sheet("data"), Err(GridError::DuplicateSheet(_))));
        let v = || CellContent::Literal(Scalar::Number(1.0));
        b.set_cell(s, c("A1"), v()).unwrap();
        assert!(matches!(
            b.set_cell(s, c("A1"), v()),
            Err(GridError::DuplicateCell { .. })
        ));
    }

    #[test]
    fn rect_ops() {
        let r: Rect = "B4:F8".parse().unwrap();
        assert_eq!(r.to_string(), "B4:F8");
        assert_eq!(r.cell_count(), 25);
        assert!(r.contains(c("D6")));
        assert!(!r.contains(c("A4")));
        assert!(r.intersects(&"F8:G9".parse().unwrap()));
        assert!(!r.intersects(&"G1:G9".parse().unwrap()));
        assert_eq!("C3:A1".parse::<Rect>().unwrap().to_string(), "A1:C3");
    }
}
