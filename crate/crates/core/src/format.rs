//! The line-oriented text format.
//!
//! ```text
//! # comment
//! var x 1 2 3
//! var y 1 2 3
//! con lt (x y) { (1 2) (1 3) (2 3) }
//! ```
//!
//! A `var` statement ends at the end of its line; a `con` block may span
//! lines. Rendering always produces text that parses back to the same
//! problem.

use std::fmt;
use std::fmt::Write as _;

use crate::csp::{Csp, CspError, NormalizedCsp, Tuple, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(Value),
    Open,
    Close,
    OpenBrace,
    CloseBrace,
    Newline,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "`{n}`"),
            Tok::Int(v) => write!(f, "`{v}`"),
            Tok::Open => f.write_str("`(`"),
            Tok::Close => f.write_str("`)`"),
            Tok::OpenBrace => f.write_str("`{`"),
            Tok::CloseBrace => f.write_str("`}`"),
            Tok::Newline => f.write_str("end of line"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (l, raw) in text.lines().enumerate() {
        let line = l + 1;
        let content = raw.split('#').next().unwrap_or("");
        let bytes = content.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let column = i + 1;
            let err = |message: String| ParseError { line, column, message };
            let single = match c {
                b'(' => Some(Tok::Open),
                b')' => Some(Tok::Close),
                b'{' => Some(Tok::OpenBrace),
                b'}' => Some(Tok::CloseBrace),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Spanned { tok, line, column });
                i += 1;
            } else if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == b'_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Name(content[start..i].to_string()),
                    line,
                    column,
                });
            } else if c.is_ascii_digit() || c == b'-' || c == b'+' {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                    return Err(err(format!("malformed integer `{}`", &content[start..=i])));
                }
                let value = content[start..i]
                    .parse::<Value>()
                    .map_err(|e| err(format!("bad integer `{}`: {e}", &content[start..i])))?;
                out.push(Spanned {
                    tok: Tok::Int(value),
                    line,
                    column,
                });
            } else {
                let ch = content[i..].chars().next().unwrap_or('?');
                return Err(err(format!("unexpected character `{ch}`")));
            }
        }
        out.push(Spanned {
            tok: Tok::Newline,
            line,
            column: content.len() + 1,
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    /// Position reported at end of input.
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.at)
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.peek().map_or(self.end, |s| (s.line, s.column));
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(s) => self.error_here(format!("expected {wanted}, found {}", s.tok)),
            None => self.error_here(format!("expected {wanted}, found end of input")),
        }
    }

    fn skip_newlines(&mut self) {
        while matches!(self.peek(), Some(Spanned { tok: Tok::Newline, .. })) {
            self.at += 1;
        }
    }

    /// Next token, skipping line breaks.
    fn next_in_block(&mut self) -> Option<Spanned> {
        self.skip_newlines();
        let t = self.peek().cloned();
        self.at += 1;
        t
    }

    fn expect_in_block(&mut self, want: Tok, wanted: &str) -> Result<(), ParseError> {
        self.skip_newlines();
        match self.peek() {
            Some(s) if s.tok == want => {
                self.at += 1;
                Ok(())
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn name(&mut self, wanted: &str) -> Result<String, ParseError> {
        self.skip_newlines();
        match self.peek() {
            Some(Spanned { tok: Tok::Name(n), .. }) => {
                let n = n.clone();
                self.at += 1;
                Ok(n)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }
}

fn semantic(at: (usize, usize), e: CspError) -> ParseError {
    ParseError {
        line: at.0,
        column: at.1,
        message: e.to_string(),
    }
}

/// Parses a problem, reporting the first error with its position.
pub fn parse_csp(text: &str) -> Result<Csp, ParseError> {
    let toks = tokenize(text)?;
    let end = toks.last().map_or((1, 1), |s| (s.line, s.column));
    let mut p = Parser { toks, at: 0, end };
    let mut csp = Csp::new();
    loop {
        p.skip_newlines();
        let Some(head) = p.peek().cloned() else { break };
        let pos = (head.line, head.column);
        match &head.tok {
            Tok::Name(k) if k == "var" => {
                p.at += 1;
                let name = match p.peek() {
                    Some(Spanned { tok: Tok::Name(n), .. }) => n.clone(),
                    _ => return Err(p.unexpected("a variable name")),
                };
                p.at += 1;
                let mut domain = Vec::new();
                loop {
                    match p.peek().map(|s| &s.tok) {
                        Some(Tok::Int(v)) => {
                            domain.push(*v);
                            p.at += 1;
                        }
                        Some(Tok::Newline) | None => break,
                        _ => return Err(p.unexpected("a domain value or end of line")),
                    }
                }
                csp.add_variable(name, domain).map_err(|e| semantic(pos, e))?;
            }
            Tok::Name(k) if k == "con" => {
                p.at += 1;
                let name = p.name("a constraint name")?;
                p.expect_in_block(Tok::Open, "`(`")?;
                let mut scheme = Vec::new();
                loop {
                    match p.next_in_block() {
                        Some(Spanned { tok: Tok::Name(v), .. }) => scheme.push(v),
                        Some(Spanned { tok: Tok::Close, .. }) => break,
                        _ => {
                            p.at -= 1;
                            return Err(p.unexpected("a variable name or `)`"));
                        }
                    }
                }
                p.expect_in_block(Tok::OpenBrace, "`{`")?;
                let mut tuples: Vec<Tuple> = Vec::new();
                loop {
                    match p.next_in_block() {
                        Some(Spanned { tok: Tok::CloseBrace, .. }) => break,
                        Some(Spanned { tok: Tok::Open, .. }) => {
                            let mut t = Vec::new();
                            loop {
                                match p.next_in_block() {
                                    Some(Spanned { tok: Tok::Int(v), .. }) => t.push(v),
                                    Some(Spanned { tok: Tok::Close, .. }) => break,
                                    _ => {
                                        p.at -= 1;
                                        return Err(p.unexpected("a value or `)`"));
                                    }
                                }
                            }
                            tuples.push(t);
                        }
                        _ => {
                            p.at -= 1;
                            return Err(p.unexpected("`(` or `}`"));
                        }
                    }
                }
                let vars: Vec<&str> = scheme.iter().map(String::as_str).collect();
                csp.add_constraint(name, &vars, tuples)
                    .map_err(|e| semantic(pos, e))?;
                match p.peek().map(|s| &s.tok) {
                    Some(Tok::Newline) | None => {}
                    _ => return Err(p.unexpected("end of line")),
                }
            }
            _ => return Err(p.unexpected("`var` or `con`")),
        }
    }
    Ok(csp)
}

fn write_var(out: &mut String, name: &str, domain: impl Iterator<Item = Value>) {
    out.push_str("var ");
    out.push_str(name);
    for v in domain {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
}

fn write_con<'a>(out: &mut String, name: &str, vars: impl Iterator<Item = &'a str>, tuples: impl Iterator<Item = Tuple>) {
    let _ = write!(out, "con {name} (");
    for (k, v) in vars.enumerate() {
        if k > 0 {
            out.push(' ');
        }
        out.push_str(v);
    }
    out.push_str(") {");
    for t in tuples {
        out.push_str(" (");
        for (k, v) in t.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{v}");
        }
        out.push(')');
    }
    out.push_str(" }\n");
}

/// Only the `var` lines.
pub fn render_domains(p: &Csp) -> String {
    let mut out = String::new();
    for (v, d) in p.variables().iter().zip(p.domains()) {
        write_var(&mut out, v, d.iter().copied());
    }
    out
}

/// `var` lines, then one `con` block per constraint.
pub fn render_csp(p: &Csp) -> String {
    let mut out = render_domains(p);
    for c in p.constraints() {
        write_con(
            &mut out,
            c.name(),
            c.scheme().indices().iter().map(|&i| p.variables()[i].as_str()),
            c.tuples().iter().cloned(),
        );
    }
    out
}

/// `var` lines, then one `con c_x_y (x y)` block per pair.
pub fn render_normalized(p: &NormalizedCsp) -> String {
    let mut out = String::new();
    for (v, d) in p.variables().iter().zip(p.domains()) {
        write_var(&mut out, v, d.iter().copied());
    }
    for (i, j) in p.pairs() {
        let vars = [p.variables()[i].as_str(), p.variables()[j].as_str()];
        write_con(
            &mut out,
            &p.pair_name(i, j),
            vars.into_iter(),
            p.relation(i, j).iter().map(|(a, b)| vec![a, b]),
        );
    }
    out
}
