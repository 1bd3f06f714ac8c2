//! Grammar check over lexed tokens; also infers the outermost result type.

use crate::grid::CellType;

use super::lexer::{Lexed, Lexeme};
use super::result_type::function_result;
use super::{FormulaError, Literal, Operator};

struct Parser<'a> {
    toks: &'a [(Lexeme, usize)],
    i: usize,
    end: usize,
}

fn describe(l: &Lexeme) -> String {
    match l {
        Lexeme::Op(o) => o.symbol().to_string(),
        Lexeme::Func(f) => format!("{f}("),
        Lexeme::Lit(Literal::Number(n)) => n.clone(),
        Lexeme::Lit(Literal::Text(t)) => format!("{t:?}"),
        Lexeme::Lit(Literal::Bool(b)) => if *b { "TRUE" } else { "FALSE" }.to_string(),
        Lexeme::Lit(Literal::Error(e)) => e.clone(),
        Lexeme::Cell(_) | Lexeme::Area(_) => "reference".to_string(),
    }
}

/// Validates the token stream; returns the inferred type of the whole expression.
pub(crate) fn check(lexed: &Lexed) -> Result<Option<CellType>, FormulaError> {
    let mut p = Parser {
        toks: &lexed.tokens,
        i: 0,
        end: lexed.len,
    };
    if p.toks.is_empty() {
        return Err(p.error("empty formula"));
    }
    let t = p.expr()?;
    if p.i < p.toks.len() {
        return Err(p.error("unexpected token"));
    }
    Ok(t)
}

impl<'a> Parser<'a> {
    fn peek_op(&self) -> Option<Operator> {
        match self.toks.get(self.i) {
            Some((Lexeme::Op(o), _)) => Some(*o),
            _ => None,
        }
    }

    fn error(&self, message: &str) -> FormulaError {
        let (pos, token) = match self.toks.get(self.i) {
            Some((l, pos)) => (*pos, describe(l)),
            None => (self.end, "end of formula".to_string()),
        };
        FormulaError::Parse {
            pos,
            token,
            message: message.to_string(),
        }
    }

    fn binary_level(
        &mut self,
        ops: &[Operator],
        result: CellType,
        next: fn(&mut Self) -> Result<Option<CellType>, FormulaError>,
    ) -> Result<Option<CellType>, FormulaError> {
        let mut t = next(self)?;
        while self.peek_op().is_some_and(|o| ops.contains(&o)) {
            self.i += 1;
            next(self)?;
            t = Some(result);
        }
        Ok(t)
    }

    fn expr(&mut self) -> Result<Option<CellType>, FormulaError> {
        use Operator::*;
        self.binary_level(&[Eq, Ne, Lt, Le, Gt, Ge], CellType::Boolean, Self::concat)
    }

    fn concat(&mut self) -> Result<Option<CellType>, FormulaError> {
        self.binary_level(&[Operator::Concat], CellType::String, Self::additive)
    }

    fn additive(&mut self) -> Result<Option<CellType>, FormulaError> {
        self.binary_level(&[Operator::Plus, Operator::Minus], CellType::Numeric, Self::term)
    }

    fn term(&mut self) -> Result<Option<CellType>, FormulaError> {
        self.binary_level(&[Operator::Times, Operator::Divide], CellType::Numeric, Self::power)
    }

    fn power(&mut self) -> Result<Option<CellType>, FormulaError> {
        self.binary_level(&[Operator::Power], CellType::Numeric, Self::unary)
    }

    fn unary(&mut self) -> Result<Option<CellType>, FormulaError> {
        if matches!(self.peek_op(), Some(Operator::Plus | Operator::Minus)) {
            self.i += 1;
            self.unary()?;
            return Ok(Some(CellType::Numeric));
        }
        let mut t = self.primary()?;
        while self.peek_op() == Some(Operator::Percent) {
            self.i += 1;
            t = Some(CellType::Numeric);
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Option<CellType>, FormulaError> {
        let Some((tok, _)) = self.toks.get(self.i) else {
            return Err(self.error("expected an operand"));
        };
        match tok {
            Lexeme::Lit(l) => {
                self.i += 1;
                Ok(Some(match l {
                    Literal::Number(_) => CellType::Numeric,
                    Literal::Text(_) => CellType::String,
                    Literal::Bool(_) => CellType::Boolean,
                    Literal::Error(_) => CellType::Error,
                }))
            }
            Lexeme::Cell(_) | Lexeme::Area(_) => {
                self.i += 1;
                Ok(None)
            }
            Lexeme::Func(name) => {
                self.i += 1;
                self.expect(Operator::LParen)?;
                self.arguments()?;
                Ok(function_result(name))
            }
            Lexeme::Op(Operator::LParen) => {
                self.i += 1;
                let t = self.expr()?;
                self.expect(Operator::RParen)?;
                Ok(t)
            }
            Lexeme::Op(_) => Err(self.error("expected an operand")),
        }
    }

    fn arguments(&mut self) -> Result<(), FormulaError> {
        if self.peek_op() == Some(Operator::RParen) {
            self.i += 1;
            return Ok(());
        }
        loop {
            if !matches!(self.peek_op(), Some(Operator::Comma | Operator::RParen)) {
                self.expr()?;
            }
            match self.peek_op() {
                Some(Operator::Comma) => self.i += 1,
                Some(Operator::RParen) => {
                    self.i += 1;
                    return Ok(());
                }
                _ => return Err(self.error("expected ',' or ')'")),
            }
        }
    }

    fn expect(&mut self, op: Operator) -> Result<(), FormulaError> {
        if self.peek_op() == Some(op) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", op.symbol())))
        }
    }
}
