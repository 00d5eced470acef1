//! Recursive-descent parser for `.gb` session files.
//!
//! ```text
//! file     := manifold binding* ;
//! manifold := "manifold" "{" vardecl ("," vardecl)* "}" ;
//! vardecl  := ("even"|"odd") IDENT ;
//! binding  := "let" IDENT "=" expr ;
//! expr     := ["-"] term (("+"|"-") term)* ;
//! term     := factor ("*" factor)* ;
//! factor   := atom ("^" NAT)* ;
//! atom     := RATIONAL | IDENT | "s(" IDENT ")" | "d(" IDENT ")" | "(" expr ")" ;
//! ```
//!
//! The optional leading minus lets printed output with a negative first
//! term parse back. `#` starts a line comment.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::manifold::{Manifold, RESERVED};
use crate::parity::Parity;
use crate::poly::{Poly, Rational, Var, VarKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{position}: syntax error: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        position: Position,
        expected: Vec<String>,
        found: String,
    },
    #[error("{position}: undeclared identifier `{name}`")]
    UndeclaredIdentifier { position: Position, name: String },
    #[error("{position}: odd variable `{name}` raised to a power >= 2")]
    OddExponent { position: Position, name: String },
    #[error("{position}: {message}")]
    Invalid { position: Position, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Slash,
    Star,
    Plus,
    Minus,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Equals,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(source: &str) -> Result<Vec<(Tok, Position)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = source.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    ident.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(ident), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    digits.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            out.push((Tok::Int(digits.parse().expect("digits")), pos));
            continue;
        }
        let tok = match c {
            '/' => Tok::Slash,
            '*' => Tok::Star,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '=' => Tok::Equals,
            other => {
                return Err(ParseError::Syntax {
                    position: pos,
                    expected: vec!["a token".into()],
                    found: format!("`{other}`"),
                })
            }
        };
        bump(&mut chars);
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Position { line, column }));
    Ok(out)
}

/// A parsed `.gb` file: one manifold and named polynomials in declaration
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    manifold: Arc<Manifold>,
    bindings: Vec<(String, Poly)>,
}

impl Session {
    pub fn manifold(&self) -> &Arc<Manifold> {
        &self.manifold
    }

    pub fn bindings(&self) -> &[(String, Poly)] {
        &self.bindings
    }

    pub fn get(&self, name: &str) -> Option<&Poly> {
        self.bindings.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    /// The binding named `P`, treated as the higher Poisson structure.
    pub fn structure(&self) -> Option<&Poly> {
        self.get("P")
    }

    /// Parse a standalone expression in the scope of this session.
    pub fn parse_expr(&self, text: &str) -> Result<Poly, ParseError> {
        let tokens = lex(text)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            manifold: Some(self.manifold.clone()),
            bindings: self.bindings.iter().cloned().collect(),
        };
        let p = parser.expr()?;
        parser.expect(&Tok::Eof, "end of expression")?;
        Ok(p)
    }
}

pub fn parse(source: &str) -> Result<Session, ParseError> {
    let tokens = lex(source)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        manifold: None,
        bindings: BTreeMap::new(),
    };
    parser.file()
}

struct Parser {
    tokens: Vec<(Tok, Position)>,
    pos: usize,
    manifold: Option<Arc<Manifold>>,
    bindings: BTreeMap<String, Poly>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].0
    }

    fn position(&self) -> Position {
        self.tokens[self.pos].1
    }

    fn advance(&mut self) -> (Tok, Position) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            position: self.position(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<Position, ParseError> {
        if self.peek() == tok {
            Ok(self.advance().1)
        } else {
            Err(self.error(&[what]))
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == word => {
                self.advance();
                Ok(())
            }
            _ => Err(self.error(&[&format!("`{word}`")])),
        }
    }

    fn ident(&mut self) -> Result<(String, Position), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.advance().1;
                Ok((s, pos))
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn file(&mut self) -> Result<Session, ParseError> {
        self.manifold_decl()?;
        let mut order = Vec::new();
        while *self.peek() != Tok::Eof {
            self.keyword("let")?;
            let (name, pos) = self.ident()?;
            let manifold = self.manifold.as_ref().expect("declared");
            if RESERVED.contains(&name.as_str()) || manifold.index_of(&name).is_some() {
                return Err(ParseError::Invalid {
                    position: pos,
                    message: format!("`{name}` is reserved or names a coordinate"),
                });
            }
            if self.bindings.contains_key(&name) {
                return Err(ParseError::Invalid {
                    position: pos,
                    message: format!("`{name}` is bound twice"),
                });
            }
            self.expect(&Tok::Equals, "`=`")?;
            let value = self.expr()?;
            self.bindings.insert(name.clone(), value.clone());
            order.push((name, value));
        }
        Ok(Session {
            manifold: self.manifold.clone().expect("declared"),
            bindings: order,
        })
    }

    fn manifold_decl(&mut self) -> Result<(), ParseError> {
        let start = self.position();
        self.keyword("manifold")?;
        self.expect(&Tok::LBrace, "`{`")?;
        let mut coords = Vec::new();
        loop {
            let parity = match self.peek() {
                Tok::Ident(s) if s == "even" => Parity::Even,
                Tok::Ident(s) if s == "odd" => Parity::Odd,
                _ => return Err(self.error(&["`even`", "`odd`"])),
            };
            self.advance();
            let (name, _) = self.ident()?;
            coords.push((name, parity));
            match self.peek() {
                Tok::Comma => {
                    self.advance();
                }
                Tok::RBrace => {
                    self.advance();
                    break;
                }
                _ => return Err(self.error(&["`,`", "`}`"])),
            }
        }
        let manifold = Manifold::new(coords).map_err(|e| ParseError::Invalid {
            position: start,
            message: e.to_string(),
        })?;
        self.manifold = Some(manifold);
        Ok(())
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let negate = if *self.peek() == Tok::Minus {
            self.advance();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.advance();
                    acc += &self.term()?;
                }
                Tok::Minus => {
                    self.advance();
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.advance();
            let rhs = self.factor()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let start = self.position();
        let (mut value, single_var) = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.advance();
            let n = match self.advance() {
                (Tok::Int(n), _) => n,
                _ => {
                    self.pos -= 1;
                    return Err(self.error(&["natural number"]));
                }
            };
            let n = n.to_u32().ok_or_else(|| ParseError::Invalid {
                position: start,
                message: "exponent too large".into(),
            })?;
            if let Some(v) = single_var {
                if v.parity().is_odd() && n >= 2 {
                    let manifold = self.manifold.as_ref().expect("declared");
                    return Err(ParseError::OddExponent {
                        position: start,
                        name: manifold.var_name(v),
                    });
                }
            }
            value = value.pow(n);
        }
        Ok(value)
    }

    /// Returns the value and, when the atom is a bare variable, that variable.
    fn atom(&mut self) -> Result<(Poly, Option<Var>), ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                let mut value = Rational::from_integer(n);
                if *self.peek() == Tok::Slash {
                    self.advance();
                    let pos = self.position();
                    match self.advance().0 {
                        Tok::Int(den) if !den.is_zero() => {
                            value /= Rational::from_integer(den);
                        }
                        _ => {
                            return Err(ParseError::Syntax {
                                position: pos,
                                expected: vec!["positive integer".into()],
                                found: self.tokens[self.pos - 1].0.to_string(),
                            })
                        }
                    }
                }
                Ok((Poly::constant(value), None))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok((inner, None))
            }
            Tok::Ident(name) if (name == "s" || name == "d") && *self.peek_at(1) == Tok::LParen => {
                self.advance();
                self.advance();
                let (base, pos) = self.ident()?;
                let manifold = self.manifold.as_ref().expect("declared");
                let index = manifold
                    .index_of(&base)
                    .ok_or(ParseError::UndeclaredIdentifier { position: pos, name: base })?;
                let kind = if name == "s" {
                    VarKind::AnticotangentFiber
                } else {
                    VarKind::AntitangentFiber
                };
                let v = manifold.var(kind, index);
                self.expect(&Tok::RParen, "`)`")?;
                Ok((Poly::var(v), Some(v)))
            }
            Tok::Ident(name) => {
                let pos = self.advance().1;
                let manifold = self.manifold.as_ref().expect("declared");
                if let Some(index) = manifold.index_of(&name) {
                    let v = manifold.x(index);
                    return Ok((Poly::var(v), Some(v)));
                }
                if let Some(p) = self.bindings.get(&name) {
                    return Ok((p.clone(), None));
                }
                Err(ParseError::UndeclaredIdentifier { position: pos, name })
            }
            _ => Err(self.error(&["number", "identifier", "`s(`", "`d(`", "`(`"])),
        }
    }
}
