//! Recursive-descent parser for the entire-function expression grammar.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = ("-" | "+") unary | power ;
//! power   = atom [ "^" [ "-" | "+" ] integer ] ;
//! atom    = number [ "i" ] | "z" | "i" | "pi" | "e"
//!         | ("exp" | "sin" | "cos") "(" expr ")"
//!         | "(" expr ")" ;
//! number  = digit { digit } [ "." { digit } ] [ ("e" | "E") [ "+" | "-" ] digit { digit } ] ;
//! ```
//!
//! Whitespace is insignificant. A number immediately followed by `i` is an
//! imaginary literal (`2.5i`).

use super::{Expr, Func, ParseError};

pub(super) fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src, bytes: src.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.pos >= p.bytes.len() {
        return Err(ParseError::Syntax { offset: 0, expected: "expression".into(), found: "end of input".into() });
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.error("operator or end of input"));
    }
    Ok(e)
}

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

    fn error(&self, expected: &str) -> ParseError {
        let found = match self.src[self.pos..].chars().next() {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        ParseError::Syntax { offset: self.pos, expected: expected.to_string(), found }
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("'{}'", b as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    if rhs.depends_on_z() {
                        return Err(ParseError::NonEntire { offset: at });
                    }
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("integer exponent"));
        }
        let magnitude: i32 = self.src[start..self.pos]
            .parse()
            .map_err(|_| ParseError::Syntax { offset: start, expected: "exponent fitting in i32".into(), found: self.src[start..self.pos].to_string() })?;
        let exp = if negative { -magnitude } else { magnitude };
        if exp < 0 && base.depends_on_z() {
            return Err(ParseError::NonEntire { offset: start });
        }
        Ok(Expr::Pow(Box::new(base), exp))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                match &self.src[start..self.pos] {
                    "z" => Ok(Expr::Var),
                    "i" => Ok(Expr::I),
                    "pi" => Ok(Expr::Pi),
                    "e" => Ok(Expr::E),
                    name @ ("exp" | "sin" | "cos") => {
                        let func = match name {
                            "exp" => Func::Exp,
                            "sin" => Func::Sin,
                            _ => Func::Cos,
                        };
                        self.expect(b'(')?;
                        let arg = self.expr()?;
                        self.expect(b')')?;
                        Ok(Expr::Call(func, Box::new(arg)))
                    }
                    other => {
                        let other = other.to_string();
                        Err(ParseError::Syntax {
                            offset: start,
                            expected: "one of z, i, pi, e, exp, sin, cos".into(),
                            found: format!("'{other}'"),
                        })
                    }
                }
            }
            _ => Err(self.error("number, identifier or '('")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let b = self.bytes;
        let digits = |pos: &mut usize| {
            let s = *pos;
            while *pos < b.len() && b[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos - s
        };
        let mut n = digits(&mut self.pos);
        if self.pos < b.len() && b[self.pos] == b'.' {
            self.pos += 1;
            n += digits(&mut self.pos);
        }
        if n == 0 {
            return Err(ParseError::Syntax { offset: start, expected: "digits".into(), found: "'.'".into() });
        }
        // Exponent only when a digit follows, so `2e` stays "2 then e" (and errors later).
        if self.pos < b.len() && (b[self.pos] == b'e' || b[self.pos] == b'E') {
            let mut look = self.pos + 1;
            if look < b.len() && (b[look] == b'+' || b[look] == b'-') {
                look += 1;
            }
            if look < b.len() && b[look].is_ascii_digit() {
                self.pos = look;
                digits(&mut self.pos);
            }
        }
        let value: f64 = self.src[start..self.pos].parse().map_err(|_| ParseError::Syntax {
            offset: start,
            expected: "number".into(),
            found: self.src[start..self.pos].to_string(),
        })?;
        if !value.is_finite() {
            return Err(ParseError::Syntax { offset: start, expected: "finite number".into(), found: self.src[start..self.pos].to_string() });
        }
        // `2i` but not `2if`: an imaginary suffix must not start a longer identifier.
        if self.pos < b.len()
            && b[self.pos] == b'i'
            && !(self.pos + 1 < b.len() && b[self.pos + 1].is_ascii_alphanumeric())
        {
            self.pos += 1;
            return Ok(Expr::Imag(value));
        }
        Ok(Expr::Num(value))
    }
}
