//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' signed-integer]
//! atom   := integer | identifier | 'sqrt' '(' expr ')' | '(' expr ')' | '-' atom
//! ```
//!
//! Blanks between tokens are ignored. Note that unary minus binds at the
//! atom level, so `-a^2` is `(-a)^2`.

use num_bigint::BigInt;
use thiserror::Error;

use super::expr::{Expr, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown function `{name}` at byte {offset} (only sqrt is supported)")]
    UnknownFunction { name: String, offset: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    tok: Tok,
    tok_at: usize,
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        tok: Tok::End,
        tok_at: 0,
    };
    p.advance()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(p.unexpected(&["`+`", "`-`", "`*`", "`/`", "`^`", "end of input"]));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<(), ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_at = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            self.tok = Tok::End;
            return Ok(());
        };
        if c.is_ascii_digit() {
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            self.tok = Tok::Int(digits.parse().unwrap());
        } else if c.is_ascii_alphabetic() {
            let start = self.pos;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            self.tok = Tok::Ident(name.to_string());
        } else if b"+-*/^()".contains(&c) {
            self.pos += 1;
            self.tok = Tok::Sym(c as char);
        } else {
            let ch = std::str::from_utf8(&self.src[self.pos..])
                .ok()
                .and_then(|s| s.chars().next())
                .unwrap_or('?');
            return Err(ParseError::Syntax {
                offset: self.pos,
                expected: vec!["a token".to_string()],
                found: format!("character `{ch}`"),
            });
        }
        Ok(())
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            offset: self.tok_at,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.tok.describe(),
        }
    }

    fn eat(&mut self, c: char) -> Result<bool, ParseError> {
        if self.tok == Tok::Sym(c) {
            self.advance()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+')? {
                terms.push(self.term()?);
            } else if self.eat('-')? {
                terms.push(-self.term()?);
            } else {
                return Ok(Expr::sum(terms));
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat('*')? {
                factors.push(self.factor()?);
            } else if self.eat('/')? {
                factors.push(self.factor()?.pow(-1));
            } else {
                return Ok(Expr::product(factors));
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^')? {
            return Ok(base);
        }
        let negative = if self.eat('-')? {
            true
        } else {
            self.eat('+')?;
            false
        };
        let Tok::Int(n) = &self.tok else {
            return Err(self.unexpected(&["integer exponent"]));
        };
        let n: i64 = i64::try_from(n).map_err(|_| self.unexpected(&["exponent within i32 range"]))?;
        if n > i64::from(i32::MAX) {
            return Err(self.unexpected(&["exponent within i32 range"]));
        }
        self.advance()?;
        Ok(base.pow(if negative { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Int(n) => {
                self.advance()?;
                Ok(Expr::rational(Rational::from_integer(n)))
            }
            Tok::Ident(name) => {
                let at = self.tok_at;
                self.advance()?;
                if self.tok == Tok::Sym('(') {
                    if name != "sqrt" {
                        return Err(ParseError::UnknownFunction { name, offset: at });
                    }
                    self.advance()?;
                    let inner = self.expr()?;
                    if !self.eat(')')? {
                        return Err(self.unexpected(&["`)`"]));
                    }
                    Ok(inner.sqrt())
                } else if name == "sqrt" {
                    Err(self.unexpected(&["`(`"]))
                } else {
                    Ok(Expr::var(name))
                }
            }
            Tok::Sym('(') => {
                self.advance()?;
                let inner = self.expr()?;
                if !self.eat(')')? {
                    return Err(self.unexpected(&["`)`"]));
                }
                Ok(inner)
            }
            Tok::Sym('-') => {
                self.advance()?;
                Ok(-self.atom()?)
            }
            _ => Err(self.unexpected(&["number", "identifier", "`sqrt`", "`(`", "`-`"])),
        }
    }
}
