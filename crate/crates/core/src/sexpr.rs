//! A small s-expression reader shared by every file format in the crate.
//!
//! Besides the usual `( ... )` lists the reader understands `{ ... }` braces,
//! which the set-literal grammar uses for finite sets. Comments run from `;`
//! to the end of the line. Every node carries the line/column where it starts
//! so the format layers can report precise positions.

use std::fmt;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SexpKind {
    Atom(String),
    List(Vec<Sexp>),
    /// `{ ... }`
    Braces(Vec<Sexp>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sexp {
    pub kind: SexpKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }
}

/// Nesting limit; keeps recursive consumers away from stack exhaustion on
/// hostile input.
pub const MAX_DEPTH: usize = 256;

impl Sexp {
    pub fn atom(&self) -> Option<&str> {
        match &self.kind {
            SexpKind::Atom(s) => Some(s),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match &self.kind {
            SexpKind::List(items) => Some(items),
            _ => None,
        }
    }

    pub fn braces(&self) -> Option<&[Sexp]> {
        match &self.kind {
            SexpKind::Braces(items) => Some(items),
            _ => None,
        }
    }

    /// For a list whose head is an atom, returns `(head, tail)`.
    pub fn form(&self) -> Option<(&str, &[Sexp])> {
        let items = self.list()?;
        let (head, rest) = items.split_first()?;
        Some((head.atom()?, rest))
    }

    pub fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, msg)
    }

    pub fn expect_atom(&self, what: &str) -> Result<&str, ParseError> {
        self.atom()
            .ok_or_else(|| self.err(format!("expected {what}")))
    }

    pub fn expect_nat(&self, what: &str) -> Result<u64, ParseError> {
        let s = self.expect_atom(what)?;
        s.parse::<u64>()
            .map_err(|_| self.err(format!("expected {what}, found `{s}`")))
    }

    pub fn expect_list(&self, what: &str) -> Result<&[Sexp], ParseError> {
        self.list()
            .ok_or_else(|| self.err(format!("expected {what}")))
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn seq(f: &mut fmt::Formatter<'_>, items: &[Sexp]) -> fmt::Result {
            for (i, it) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{it}")?;
            }
            Ok(())
        }
        match &self.kind {
            SexpKind::Atom(s) => f.write_str(s),
            SexpKind::List(items) => {
                f.write_str("(")?;
                seq(f, items)?;
                f.write_str(")")
            }
            SexpKind::Braces(items) => {
                f.write_str("{")?;
                seq(f, items)?;
                f.write_str("}")
            }
        }
    }
}

/// Parses every top-level expression in `input`.
pub fn parse_all(input: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut r = Reader::new(input);
    let mut out = Vec::new();
    while r.skip_ws() {
        out.push(r.expr(0)?);
    }
    Ok(out)
}

/// Parses exactly one expression.
pub fn parse_one(input: &str) -> Result<Sexp, ParseError> {
    let mut r = Reader::new(input);
    if !r.skip_ws() {
        return Err(ParseError::new(r.pos(), "empty input"));
    }
    let e = r.expr(0)?;
    if r.skip_ws() {
        return Err(ParseError::new(r.pos(), "trailing input after expression"));
    }
    Ok(e)
}

struct Reader<'a> {
    src: &'a str,
    at: usize,
    line: usize,
    col: usize,
}

impl<'a> Reader<'a> {
    fn new(src: &'a str) -> Self {
        Reader {
            src,
            at: 0,
            line: 1,
            col: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.at..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.at += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Skips whitespace and comments; returns whether input remains.
    fn skip_ws(&mut self) -> bool {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(';') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some(_) => return true,
                None => return false,
            }
        }
    }

    fn expr(&mut self, depth: usize) -> Result<Sexp, ParseError> {
        let pos = self.pos();
        if depth > MAX_DEPTH {
            return Err(ParseError::new(pos, "nesting too deep"));
        }
        match self.peek() {
            Some('(') => {
                self.bump();
                let items = self.seq(')', depth)?;
                Ok(Sexp {
                    kind: SexpKind::List(items),
                    pos,
                })
            }
            Some('{') => {
                self.bump();
                let items = self.seq('}', depth)?;
                Ok(Sexp {
                    kind: SexpKind::Braces(items),
                    pos,
                })
            }
            Some(c @ (')' | '}')) => Err(ParseError::new(pos, format!("unexpected `{c}`"))),
            Some(_) => {
                let start = self.at;
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '{' | '}' | ';') {
                        break;
                    }
                    self.bump();
                }
                Ok(Sexp {
                    kind: SexpKind::Atom(self.src[start..self.at].to_string()),
                    pos,
                })
            }
            None => Err(ParseError::new(pos, "unexpected end of input")),
        }
    }

    fn seq(&mut self, close: char, depth: usize) -> Result<Vec<Sexp>, ParseError> {
        let mut items = Vec::new();
        loop {
            if !self.skip_ws() {
                return Err(ParseError::new(
                    self.pos(),
                    format!("unterminated, expected `{close}`"),
                ));
            }
            match self.peek() {
                Some(c) if c == close => {
                    self.bump();
                    return Ok(items);
                }
                _ => items.push(self.expr(depth + 1)?),
            }
        }
    }
}
