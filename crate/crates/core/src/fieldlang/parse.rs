//! Recursive-descent parser for the scalar field language.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' integer)?
//! base   := number | 'i' | 'x1'|'x2'|'x3'|'x4' | func '(' expr ')' | '(' expr ')' | '-' base
//! func   := sin | cos | exp | ln | sqrt
//! ```

use num_complex::Complex64;

use super::expr::{Func, ScalarFieldExpr};
use super::ParseError;

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn syntax(&self, offset: usize, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset,
            message: msg.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(self.syntax(self.pos, format!("expected '{}', found '{}'", c as char, b as char))),
            None => Err(self.syntax(self.pos, format!("expected '{}', found end of input", c as char))),
        }
    }

    fn expr(&mut self) -> Result<ScalarFieldExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = ScalarFieldExpr::add(lhs, self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = ScalarFieldExpr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarFieldExpr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = ScalarFieldExpr::mul(lhs, self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = ScalarFieldExpr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ScalarFieldExpr, ParseError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.integer()?;
            return Ok(ScalarFieldExpr::pow(base, n));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(self.syntax(start, "exponent must be an integer"));
        }
        if matches!(self.bytes.get(self.pos), Some(b'.') | Some(b'e') | Some(b'E')) {
            return Err(self.syntax(start, "exponent must be an integer"));
        }
        self.src[start..self.pos]
            .parse::<i32>()
            .map_err(|_| self.syntax(start, "exponent out of range"))
    }

    fn number(&mut self) -> Result<ScalarFieldExpr, ParseError> {
        let start = self.pos;
        let b = self.bytes;
        while self.pos < b.len() && (b[self.pos].is_ascii_digit() || b[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < b.len() && (b[self.pos] == b'e' || b[self.pos] == b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < b.len() && (b[self.pos] == b'+' || b[self.pos] == b'-') {
                self.pos += 1;
            }
            let digits = self.pos;
            while self.pos < b.len() && b[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == digits {
                return Err(self.syntax(mark, "malformed exponent"));
            }
        }
        let text = &self.src[start..self.pos];
        text.parse::<f64>()
            .map(ScalarFieldExpr::real)
            .map_err(|_| self.syntax(start, format!("malformed number '{text}'")))
    }

    fn ident(&mut self) -> (usize, &'a str) {
        let start = self.pos;
        let b = self.bytes;
        while self.pos < b.len() && (b[self.pos].is_ascii_alphanumeric() || b[self.pos] == b'_') {
            self.pos += 1;
        }
        (start, &self.src[start..self.pos])
    }

    fn base(&mut self) -> Result<ScalarFieldExpr, ParseError> {
        match self.peek() {
            None => Err(self.syntax(self.pos, "unexpected end of input")),
            Some(b'-') => {
                self.pos += 1;
                Ok(ScalarFieldExpr::neg(self.base()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let (start, name) = self.ident();
                match name {
                    "i" => return Ok(ScalarFieldExpr::constant(Complex64::new(0.0, 1.0))),
                    "x1" => return Ok(ScalarFieldExpr::var(0)),
                    "x2" => return Ok(ScalarFieldExpr::var(1)),
                    "x3" => return Ok(ScalarFieldExpr::var(2)),
                    "x4" => return Ok(ScalarFieldExpr::var(3)),
                    _ => {}
                }
                let Some(func) = Func::from_name(name) else {
                    return Err(ParseError::UnknownIdentifier {
                        offset: start,
                        name: name.to_string(),
                    });
                };
                if self.peek() != Some(b'(') {
                    return Err(ParseError::Arity {
                        offset: start,
                        name: name.to_string(),
                        found: 0,
                    });
                }
                self.pos += 1;
                if self.peek() == Some(b')') {
                    return Err(ParseError::Arity {
                        offset: start,
                        name: name.to_string(),
                        found: 0,
                    });
                }
                let arg = self.expr()?;
                let mut extra = 0;
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    self.expr()?;
                    extra += 1;
                }
                if extra > 0 {
                    return Err(ParseError::Arity {
                        offset: start,
                        name: name.to_string(),
                        found: 1 + extra,
                    });
                }
                self.expect(b')')?;
                Ok(ScalarFieldExpr::call(func, arg))
            }
            Some(c) => Err(self.syntax(self.pos, format!("unexpected character '{}'", c as char))),
        }
    }
}

/// Parses `text` into a folded expression tree.
pub fn parse_scalar_expr(text: &str) -> Result<ScalarFieldExpr, ParseError> {
    let mut p = Parser {
        src: text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(p.syntax(p.pos, format!("unexpected trailing '{}'", c as char)));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldlang::expr::Node;

    #[test]
    fn parses_sum_of_power_and_sine() {
        let e = parse_scalar_expr("x1^2 + sin(x4)").unwrap();
        let expected = ScalarFieldExpr::add(
            ScalarFieldExpr::pow(ScalarFieldExpr::var(0), 2),
            ScalarFieldExpr::call(Func::Sin, ScalarFieldExpr::var(3)),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn folds_complex_literal() {
        let e = parse_scalar_expr("2*i*x3").unwrap();
        match e.node() {
            Node::Mul(a, b) => {
                assert_eq!(a.as_const(), Some(Complex64::new(0.0, 2.0)));
                assert_eq!(*b, ScalarFieldExpr::var(2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_identifier() {
        match parse_scalar_expr("x5") {
            Err(ParseError::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "x5");
                assert_eq!(offset, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_scalar_expr("1 + foo(x1)"),
            Err(ParseError::UnknownIdentifier { offset: 4, .. })
        ));
    }

    #[test]
    fn arity_and_syntax_errors() {
        assert!(matches!(parse_scalar_expr("sin(x1, x2)"), Err(ParseError::Arity { found: 2, .. })));
        assert!(matches!(parse_scalar_expr("sin()"), Err(ParseError::Arity { found: 0, .. })));
        assert!(matches!(parse_scalar_expr("cos x1"), Err(ParseError::Arity { .. })));
        assert!(matches!(parse_scalar_expr("x1 +"), Err(ParseError::Syntax { offset: 4, .. })));
        assert!(matches!(parse_scalar_expr("(x1"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_scalar_expr("x1^2.5"), Err(ParseError::Syntax { offset: 3, .. })));
        assert!(matches!(parse_scalar_expr("x1 x2"), Err(ParseError::Syntax { offset: 3, .. })));
    }

    #[test]
    fn unary_minus_binds_to_base() {
        // '-' base is itself a base, so the exponent applies to the negation.
        let e = parse_scalar_expr("-x1^2").unwrap();
        assert_eq!(e.eval(&[3.0, 0.0, 0.0, 0.0]).unwrap(), Complex64::new(9.0, 0.0));
        let e = parse_scalar_expr("-(x1^2)").unwrap();
        assert_eq!(e.eval(&[3.0, 0.0, 0.0, 0.0]).unwrap(), Complex64::new(-9.0, 0.0));
    }

    #[test]
    fn numbers_with_exponents() {
        let e = parse_scalar_expr("1.5e-3 * x2 + 2E2").unwrap();
        let v = e.eval(&[0.0, 1000.0, 0.0, 0.0]).unwrap();
        assert!((v.re - 201.5).abs() < 1e-12);
    }
}
