//! Formula parsing, R1C1 normalisation and reference resolution.
//!
//! Formulas are stored in a canonical R1C1 form. Two formula cells are
//! copy-equivalent when their canonical texts are equal.

mod deref;
mod lexer;
mod parser;
mod render;
mod result_type;

use std::fmt;

use serde::{Serialize, Serializer};

use crate::grid::{Cell, Coordinate};

pub use deref::{deref_area, deref_cell, deref_coordinate, referenced_cells, resolve_references, Resolved};
pub use render::{quote_sheet_name, render_a1};
pub use result_type::{static_result_type, ResultType};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("parse error at position {pos} near {token:?}: {message}")]
    Parse { pos: usize, token: String, message: String },
    #[error("reference outside sheet")]
    OutsideSheet,
    #[error("unknown worksheet {0:?}")]
    UnknownWorksheet(String),
    #[error("unrepresentable at origin {0}")]
    Unrepresentable(Coordinate),
}

/// One axis of a reference: an absolute 1-based index or a signed offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoordinateReference {
    pub absolute: bool,
    pub value: i64,
}

impl CoordinateReference {
    pub fn absolute(value: i64) -> Self {
        debug_assert!(value >= 1);
        CoordinateReference { absolute: true, value }
    }

    pub fn relative(offset: i64) -> Self {
        CoordinateReference {
            absolute: false,
            value: offset,
        }
    }

    /// Unchecked index at `base`; may be below 1.
    pub(crate) fn raw_at(self, base: u32) -> i64 {
        if self.absolute {
            self.value
        } else {
            base as i64 + self.value
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellReference {
    pub sheet: Option<String>,
    pub col_ref: CoordinateReference,
    pub row_ref: CoordinateReference,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AreaReference {
    pub sheet: Option<String>,
    pub x1: CoordinateReference,
    pub y1: CoordinateReference,
    pub x2: CoordinateReference,
    pub y2: CoordinateReference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Plus,
    Minus,
    Times,
    Divide,
    Power,
    Concat,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Percent,
    LParen,
    RParen,
    Comma,
}

impl Operator {
    pub fn symbol(self) -> &'static str {
        match self {
            Operator::Plus => "+",
            Operator::Minus => "-",
            Operator::Times => "*",
            Operator::Divide => "/",
            Operator::Power => "^",
            Operator::Concat => "&",
            Operator::Eq => "=",
            Operator::Ne => "<>",
            Operator::Lt => "<",
            Operator::Le => "<=",
            Operator::Gt => ">",
            Operator::Ge => ">=",
            Operator::Percent => "%",
            Operator::LParen => "(",
            Operator::RParen => ")",
            Operator::Comma => ",",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    /// Kept as written so rendering is lossless.
    Number(String),
    Text(String),
    Bool(bool),
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    Operator(Operator),
    Function(String),
    Literal(Literal),
    /// Index into `cell_refs`.
    CellRef(usize),
    /// Index into `area_refs`.
    AreaRef(usize),
}

/// Position of a reference within its formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum RefSlot {
    Cell(usize),
    Area(usize),
}

impl fmt::Display for RefSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefSlot::Cell(i) => write!(f, "cell#{i}"),
            RefSlot::Area(i) => write!(f, "area#{i}"),
        }
    }
}

/// The sheet and cell a formula is parsed at.
#[derive(Debug, Clone, Copy)]
pub struct Origin<'a> {
    pub sheet: &'a str,
    pub coord: Coordinate,
}

impl<'a> Origin<'a> {
    pub fn new(sheet: &'a str, coord: Coordinate) -> Self {
        Origin { sheet, coord }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormulaR1C1 {
    r1c1_text: String,
    tokens: Vec<Token>,
    cell_refs: Vec<CellReference>,
    area_refs: Vec<AreaReference>,
    inferred: Option<crate::grid::CellType>,
}

impl FormulaR1C1 {
    pub fn r1c1_text(&self) -> &str {
        &self.r1c1_text
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn cell_refs(&self) -> &[CellReference] {
        &self.cell_refs
    }

    pub fn area_refs(&self) -> &[AreaReference] {
        &self.area_refs
    }

    pub fn has_references(&self) -> bool {
        !self.cell_refs.is_empty() || !self.area_refs.is_empty()
    }

    /// Result type implied by the outermost operator or function, if any.
    pub fn inferred_type(&self) -> Option<crate::grid::CellType> {
        self.inferred
    }

    pub fn slots(&self) -> impl Iterator<Item = RefSlot> + '_ {
        (0..self.cell_refs.len())
            .map(RefSlot::Cell)
            .chain((0..self.area_refs.len()).map(RefSlot::Area))
    }

    fn from_parts(
        tokens: Vec<Token>,
        cell_refs: Vec<CellReference>,
        area_refs: Vec<AreaReference>,
        inferred: Option<crate::grid::CellType>,
    ) -> Self {
        let r1c1_text = render::render_r1c1(&tokens, &cell_refs, &area_refs);
        FormulaR1C1 {
            r1c1_text,
            tokens,
            cell_refs,
            area_refs,
            inferred,
        }
    }
}

impl fmt::Display for FormulaR1C1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.r1c1_text)
    }
}

impl Serialize for FormulaR1C1 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.r1c1_text)
    }
}

/// Parses A1-notation formula text at `origin`; a leading `=` is optional.
pub fn parse_formula_a1(text: &str, origin: Origin<'_>) -> Result<FormulaR1C1, FormulaError> {
    parse(text, origin, lexer::Notation::A1)
}

/// Parses R1C1-notation formula text; `origin.coord` is unused but kept for symmetry.
pub fn parse_formula_r1c1(text: &str, origin: Origin<'_>) -> Result<FormulaR1C1, FormulaError> {
    parse(text, origin, lexer::Notation::R1C1)
}

fn parse(text: &str, origin: Origin<'_>, notation: lexer::Notation) -> Result<FormulaR1C1, FormulaError> {
    let lexed = lexer::lex(text, origin, notation)?;
    let inferred = parser::check(&lexed)?;
    let mut tokens = Vec::with_capacity(lexed.tokens.len());
    let mut cell_refs = Vec::new();
    let mut area_refs = Vec::new();
    for (tok, _) in lexed.tokens {
        tokens.push(match tok {
            lexer::Lexeme::Cell(r) => {
                cell_refs.push(r);
                Token::CellRef(cell_refs.len() - 1)
            }
            lexer::Lexeme::Area(r) => {
                area_refs.push(r);
                Token::AreaRef(area_refs.len() - 1)
            }
            lexer::Lexeme::Op(o) => Token::Operator(o),
            lexer::Lexeme::Func(name) => Token::Function(name),
            lexer::Lexeme::Lit(l) => Token::Literal(l),
        });
    }
    Ok(FormulaR1C1::from_parts(tokens, cell_refs, area_refs, inferred))
}

/// Both cells hold formulas with identical canonical R1C1 text.
pub fn copy_equivalent(a: &Cell, b: &Cell) -> bool {
    match (&a.formula, &b.formula) {
        (Some(fa), Some(fb)) => fa.r1c1_text == fb.r1c1_text,
        _ => false,
    }
}
