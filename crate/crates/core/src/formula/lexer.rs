use crate::grid::{is_error_literal, parse_column, ERROR_LITERALS};

use super::{AreaReference, CellReference, CoordinateReference, FormulaError, Literal, Operator, Origin};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Notation {
    A1,
    R1C1,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Lexeme {
    Op(Operator),
    Func(String),
    Lit(Literal),
    Cell(CellReference),
    Area(AreaReference),
}

pub(crate) struct Lexed {
    pub tokens: Vec<(Lexeme, usize)>,
    pub len: usize,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    origin: Origin<'a>,
    notation: Notation,
}

fn perr(pos: usize, token: impl Into<String>, message: impl Into<String>) -> FormulaError {
    FormulaError::Parse {
        pos,
        token: token.into(),
        message: message.into(),
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.'
}

pub(crate) fn lex(text: &str, origin: Origin<'_>, notation: Notation) -> Result<Lexed, FormulaError> {
    let mut chars: Vec<char> = text.chars().collect();
    let start = chars.iter().take_while(|c| c.is_whitespace()).count();
    chars.drain(..start);
    if chars.first() == Some(&'=') {
        chars.remove(0);
    }
    let mut lx = Lexer {
        chars,
        pos: 0,
        origin,
        notation,
    };
    let mut tokens = Vec::new();
    while let Some(tok) = lx.next_token()? {
        tokens.push(tok);
    }
    Ok(Lexed {
        tokens,
        len: lx.chars.len(),
    })
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, i: usize) -> Option<char> {
        self.chars.get(i).copied()
    }

    fn snippet(&self, at: usize) -> String {
        self.chars[at.min(self.chars.len())..].iter().take(12).collect()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn next_token(&mut self) -> Result<Option<(Lexeme, usize)>, FormulaError> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let lexeme = match c {
            '"' => self.string()?,
            '#' => self.error_literal()?,
            '\'' => self.quoted_sheet_ref()?,
            '0'..='9' => self.number()?,
            '.' if self.peek_at(self.pos + 1).is_some_and(|d| d.is_ascii_digit()) => self.number()?,
            '{' => return Err(perr(start, "{", "array constants are not supported")),
            c if c.is_alphabetic() || c == '_' || c == '$' => self.word()?,
            _ => self.operator()?,
        };
        Ok(Some((lexeme, start)))
    }

    fn operator(&mut self) -> Result<Lexeme, FormulaError> {
        let start = self.pos;
        let c = self.peek().expect("caller checked");
        let next = self.peek_at(self.pos + 1);
        let (op, width) = match (c, next) {
            ('<', Some('=')) => (Operator::Le, 2),
            ('<', Some('>')) => (Operator::Ne, 2),
            ('>', Some('=')) => (Operator::Ge, 2),
            ('<', _) => (Operator::Lt, 1),
            ('>', _) => (Operator::Gt, 1),
            ('=', _) => (Operator::Eq, 1),
            ('+', _) => (Operator::Plus, 1),
            ('-', _) => (Operator::Minus, 1),
            ('*', _) => (Operator::Times, 1),
            ('/', _) => (Operator::Divide, 1),
            ('^', _) => (Operator::Power, 1),
            ('&', _) => (Operator::Concat, 1),
            ('%', _) => (Operator::Percent, 1),
            ('(', _) => (Operator::LParen, 1),
            (')', _) => (Operator::RParen, 1),
            (',', _) => (Operator::Comma, 1),
            _ => return Err(perr(start, c.to_string(), "unexpected character")),
        };
        self.pos += width;
        Ok(Lexeme::Op(op))
    }

    fn string(&mut self) -> Result<Lexeme, FormulaError> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return Err(perr(start, self.snippet(start), "unterminated string")),
                Some('"') if self.peek_at(self.pos + 1) == Some('"') => {
                    out.push('"');
                    self.pos += 2;
                }
                Some('"') => {
                    self.pos += 1;
                    return Ok(Lexeme::Lit(Literal::Text(out)));
                }
                Some(c) => {
                    out.push(c);
                    self.pos += 1;
                }
            }
        }
    }

    fn error_literal(&mut self) -> Result<Lexeme, FormulaError> {
        let start = self.pos;
        let rest: String = self.chars[self.pos..].iter().take(14).collect();
        let found = ERROR_LITERALS
            .iter()
            .filter(|e| rest.len() >= e.len() && rest.is_char_boundary(e.len()) && is_error_literal(&rest[..e.len()]))
            .max_by_key(|e| e.len());
        match found {
            Some(e) => {
                self.pos += e.chars().count();
                Ok(Lexeme::Lit(Literal::Error(e.to_string())))
            }
            None => Err(perr(start, self.snippet(start), "unknown error literal")),
        }
    }

    fn number(&mut self) -> Result<Lexeme, FormulaError> {
        let mut text = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            text.push(c);
            self.pos += 1;
        }
        if self.peek() == Some('.') {
            text.push('.');
            self.pos += 1;
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                text.push(c);
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let mut i = self.pos + 1;
            let mut exp = String::from("E");
            if let Some(s @ ('+' | '-')) = self.peek_at(i) {
                exp.push(s);
                i += 1;
            }
            let digits_start = i;
            while let Some(d) = self.peek_at(i).filter(char::is_ascii_digit) {
                exp.push(d);
                i += 1;
            }
            if i > digits_start {
                text.push_str(&exp);
                self.pos = i;
            }
        }
        if self.peek().is_some_and(|c| c.is_alphabetic() || c == '_') {
            return Err(perr(self.pos, self.snippet(self.pos), "malformed number"));
        }
        Ok(Lexeme::Lit(Literal::Number(text)))
    }

    fn word_end(&self, from: usize) -> usize {
        let mut i = from;
        while self.peek_at(i).is_some_and(is_word_char) {
            i += 1;
        }
        i
    }

    fn quoted_sheet_ref(&mut self) -> Result<Lexeme, FormulaError> {
        let start = self.pos;
        self.pos += 1;
        let mut name = String::new();
        loop {
            match self.peek() {
                None => return Err(perr(start, self.snippet(start), "unterminated sheet name")),
                Some('\'') if self.peek_at(self.pos + 1) == Some('\'') => {
                    name.push('\'');
                    self.pos += 2;
                }
                Some('\'') => {
                    self.pos += 1;
                    break;
                }
                Some(c) => {
                    name.push(c);
                    self.pos += 1;
                }
            }
        }
        if name.is_empty() || self.peek() != Some('!') {
            return Err(perr(start, self.snippet(start), "expected '!' after sheet name"));
        }
        self.pos += 1;
        self.reference(Some(name))
    }

    fn word(&mut self) -> Result<Lexeme, FormulaError> {
        let start = self.pos;
        let end = self.word_end(start);
        if end > start && self.peek_at(end) == Some('!') {
            let name: String = self.chars[start..end].iter().collect();
            self.pos = end + 1;
            return self.reference(Some(name));
        }
        if let Some((col, row, after)) = self.coord_at(start) {
            if !self
                .peek_at(after)
                .is_some_and(|c| is_word_char(c) || c == '(' || c == '$' || c == '[')
            {
                self.pos = after;
                return self.finish_reference(None, col, row);
            }
        }
        if end == start {
            return Err(perr(start, self.snippet(start), "malformed reference"));
        }
        let word: String = self.chars[start..end].iter().collect();
        let mut i = end;
        while self.peek_at(i).is_some_and(char::is_whitespace) {
            i += 1;
        }
        if self.peek_at(i) == Some('(') {
            self.pos = end;
            return Ok(Lexeme::Func(word.to_uppercase()));
        }
        let upper = word.to_uppercase();
        if upper == "TRUE" || upper == "FALSE" {
            self.pos = end;
            return Ok(Lexeme::Lit(Literal::Bool(upper == "TRUE")));
        }
        Err(perr(start, word, "unsupported name"))
    }

    /// Parses a reference after an optional sheet prefix.
    fn reference(&mut self, sheet: Option<String>) -> Result<Lexeme, FormulaError> {
        let start = self.pos;
        match self.coord_at(start) {
            Some((col, row, after)) if !self.peek_at(after).is_some_and(is_word_char) => {
                self.pos = after;
                self.finish_reference(sheet, col, row)
            }
            _ => Err(perr(start, self.snippet(start), "expected a cell reference")),
        }
    }

    fn finish_reference(
        &mut self,
        sheet: Option<String>,
        col: CoordinateReference,
        row: CoordinateReference,
    ) -> Result<Lexeme, FormulaError> {
        let sheet = sheet.filter(|s| s.to_lowercase() != self.origin.sheet.to_lowercase());
        let mut i = self.pos;
        while self.peek_at(i).is_some_and(char::is_whitespace) {
            i += 1;
        }
        if self.peek_at(i) != Some(':') {
            return Ok(Lexeme::Cell(CellReference {
                sheet,
                col_ref: col,
                row_ref: row,
            }));
        }
        i += 1;
        while self.peek_at(i).is_some_and(char::is_whitespace) {
            i += 1;
        }
        let Some((col2, row2, after)) = self
            .coord_at(i)
            .filter(|&(_, _, after)| !self.peek_at(after).is_some_and(is_word_char))
        else {
            return Err(perr(i, self.snippet(i), "expected the end of an area reference"));
        };
        self.pos = after;
        let o = self.origin.coord;
        let (x1, x2) = ordered(col, col2, o.col);
        let (y1, y2) = ordered(row, row2, o.row);
        Ok(Lexeme::Area(AreaReference { sheet, x1, y1, x2, y2 }))
    }

    /// Reads one coordinate in the active notation, returning (col, row, end).
    fn coord_at(&self, i: usize) -> Option<(CoordinateReference, CoordinateReference, usize)> {
        match self.notation {
            Notation::A1 => self.a1_coord_at(i),
            Notation::R1C1 => self.r1c1_coord_at(i),
        }
    }

    fn a1_coord_at(&self, mut i: usize) -> Option<(CoordinateReference, CoordinateReference, usize)> {
        let col_abs = self.peek_at(i) == Some('$');
        if col_abs {
            i += 1;
        }
        let letters_start = i;
        while self.peek_at(i).is_some_and(|c| c.is_ascii_alphabetic()) {
            i += 1;
        }
        if i == letters_start || i - letters_start > 3 {
            return None;
        }
        let letters: String = self.chars[letters_start..i].iter().collect();
        let col = parse_column(&letters)? as i64;
        let row_abs = self.peek_at(i) == Some('$');
        if row_abs {
            i += 1;
        }
        let digits_start = i;
        while self.peek_at(i).is_some_and(|c| c.is_ascii_digit()) {
            i += 1;
        }
        if i == digits_start || i - digits_start > 9 {
            return None;
        }
        let digits: String = self.chars[digits_start..i].iter().collect();
        let row: i64 = digits.parse().ok()?;
        if row == 0 {
            return None;
        }
        let o = self.origin.coord;
        let col_ref = if col_abs {
            CoordinateReference::absolute(col)
        } else {
            CoordinateReference::relative(col - o.col as i64)
        };
        let row_ref = if row_abs {
            CoordinateReference::absolute(row)
        } else {
            CoordinateReference::relative(row - o.row as i64)
        };
        Some((col_ref, row_ref, i))
    }

    fn r1c1_coord_at(&self, i: usize) -> Option<(CoordinateReference, CoordinateReference, usize)> {
        let (row, i) = self.r1c1_part(i, 'R')?;
        let (col, i) = self.r1c1_part(i, 'C')?;
        Some((col, row, i))
    }

    fn r1c1_part(&self, mut i: usize, letter: char) -> Option<(CoordinateReference, usize)> {
        if !self.peek_at(i).is_some_and(|c| c.eq_ignore_ascii_case(&letter)) {
            return None;
        }
        i += 1;
        match self.peek_at(i) {
            Some('[') => {
                i += 1;
                let num_start = i;
                if matches!(self.peek_at(i), Some('-' | '+')) {
                    i += 1;
                }
                let digits_start = i;
                while self.peek_at(i).is_some_and(|c| c.is_ascii_digit()) {
                    i += 1;
                }
                if i == digits_start || i - digits_start > 9 || self.peek_at(i) != Some(']') {
                    return None;
                }
                let text: String = self.chars[num_start..i].iter().collect();
                let offset: i64 = text.parse().ok()?;
                Some((CoordinateReference::relative(offset), i + 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let digits_start = i;
                while self.peek_at(i).is_some_and(|c| c.is_ascii_digit()) {
                    i += 1;
                }
                if i - digits_start > 9 {
                    return None;
                }
                let text: String = self.chars[digits_start..i].iter().collect();
                let value: i64 = text.parse().ok()?;
                (value >= 1).then(|| (CoordinateReference::absolute(value), i))
            }
            _ => Some((CoordinateReference::relative(0), i)),
        }
    }
}

/// Orders two endpoint references so the first dereferences lower at `base`.
fn ordered(a: CoordinateReference, b: CoordinateReference, base: u32) -> (CoordinateReference, CoordinateReference) {
    if a.raw_at(base) <= b.raw_at(base) {
        (a, b)
    } else {
        (b, a)
    }
}
