use std::fmt::Write;

use crate::grid::{column_name, Coordinate};

use super::{AreaReference, CellReference, CoordinateReference, FormulaError, FormulaR1C1, Literal, Token};

/// Sheet name suitable for a `Name!` prefix, quoted when needed.
pub fn quote_sheet_name(name: &str) -> String {
    let plain = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.');
    if plain {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\'', "''"))
    }
}

fn sheet_prefix(out: &mut String, sheet: &Option<String>) {
    if let Some(s) = sheet {
        out.push_str(&quote_sheet_name(s));
        out.push('!');
    }
}

fn r1c1_part(out: &mut String, letter: char, r: CoordinateReference) {
    out.push(letter);
    if r.absolute {
        let _ = write!(out, "{}", r.value);
    } else if r.value != 0 {
        let _ = write!(out, "[{}]", r.value);
    }
}

fn literal(out: &mut String, l: &Literal) {
    match l {
        Literal::Number(n) => out.push_str(n),
        Literal::Text(t) => {
            out.push('"');
            out.push_str(&t.replace('"', "\"\""));
            out.push('"');
        }
        Literal::Bool(b) => out.push_str(if *b { "TRUE" } else { "FALSE" }),
        Literal::Error(e) => out.push_str(e),
    }
}

pub(crate) fn render_r1c1(tokens: &[Token], cell_refs: &[CellReference], area_refs: &[AreaReference]) -> String {
    let mut out = String::new();
    for t in tokens {
        match t {
            Token::Operator(o) => out.push_str(o.symbol()),
            Token::Function(f) => out.push_str(f),
            Token::Literal(l) => literal(&mut out, l),
            Token::CellRef(i) => {
                let r = &cell_refs[*i];
                sheet_prefix(&mut out, &r.sheet);
                r1c1_part(&mut out, 'R', r.row_ref);
                r1c1_part(&mut out, 'C', r.col_ref);
            }
            Token::AreaRef(i) => {
                let r = &area_refs[*i];
                sheet_prefix(&mut out, &r.sheet);
                r1c1_part(&mut out, 'R', r.y1);
                r1c1_part(&mut out, 'C', r.x1);
                out.push(':');
                r1c1_part(&mut out, 'R', r.y2);
                r1c1_part(&mut out, 'C', r.x2);
            }
        }
    }
    out
}

fn a1_coord(
    out: &mut String,
    col: CoordinateReference,
    row: CoordinateReference,
    origin: Coordinate,
) -> Result<(), FormulaError> {
    let x = col.raw_at(origin.col);
    let y = row.raw_at(origin.row);
    if x < 1 || y < 1 || x > u32::MAX as i64 || y > u32::MAX as i64 {
        return Err(FormulaError::Unrepresentable(origin));
    }
    if col.absolute {
        out.push('$');
    }
    out.push_str(&column_name(x as u32));
    if row.absolute {
        out.push('$');
    }
    let _ = write!(out, "{y}");
    Ok(())
}

/// A1 text of `f` as seen from `origin` (no leading `=`).
pub fn render_a1(f: &FormulaR1C1, origin: Coordinate) -> Result<String, FormulaError> {
    let mut out = String::new();
    for t in &f.tokens {
        match t {
            Token::Operator(o) => out.push_str(o.symbol()),
            Token::Function(name) => out.push_str(name),
            Token::Literal(l) => literal(&mut out, l),
            Token::CellRef(i) => {
                let r = &f.cell_refs[*i];
                sheet_prefix(&mut out, &r.sheet);
                a1_coord(&mut out, r.col_ref, r.row_ref, origin)?;
            }
            Token::AreaRef(i) => {
                let r = &f.area_refs[*i];
                sheet_prefix(&mut out, &r.sheet);
                a1_coord(&mut out, r.x1, r.y1, origin)?;
                out.push(':');
                a1_coord(&mut out, r.x2, r.y2, origin)?;
            }
        }
    }
    Ok(out)
}
