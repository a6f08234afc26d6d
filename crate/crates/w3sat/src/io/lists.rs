//! The bracketed list-of-lists format: an instance is written as
//! `[[-1, 2, 3], [1, 4, 5]]`, one inner list per clause, minus signs for
//! negation. The variable count defaults to the largest index mentioned
//! and can be overridden upward.

use std::fmt::Write as _;

use crate::clause::{Canonicalized, Clause};
use crate::instance::Instance;
use crate::io::{ParseError, ParsedInstance};

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected '{}'", byte as char))),
        }
    }

    fn error(&self, msg: String) -> ParseError {
        ParseError::SyntaxAt { pos: self.pos, msg }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.error("expected an integer".into()));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse().map_err(|_| ParseError::SyntaxAt {
            pos: start,
            msg: format!("integer '{text}' out of range"),
        })
    }
}

/// Parses the bracketed format. `vars_override`, when given, must be at
/// least the largest variable index mentioned.
pub fn parse_paper_lists(
    text: &str,
    vars_override: Option<u32>,
) -> Result<ParsedInstance, ParseError> {
    let mut s = Scanner::new(text);
    s.expect(b'[')?;
    let mut raw_clauses: Vec<Vec<i32>> = Vec::new();
    if s.peek() == Some(b']') {
        s.pos += 1;
    } else {
        loop {
            s.expect(b'[')?;
            let mut codes: Vec<i32> = Vec::new();
            if s.peek() == Some(b']') {
                s.pos += 1;
            } else {
                loop {
                    let value = s.integer()?;
                    if value == 0 || value.unsigned_abs() > i32::MAX as u64 {
                        return Err(s.error(format!("literal '{value}' out of range")));
                    }
                    codes.push(value as i32);
                    match s.peek() {
                        Some(b',') => s.pos += 1,
                        Some(b']') => {
                            s.pos += 1;
                            break;
                        }
                        _ => return Err(s.error("expected ',' or ']'".into())),
                    }
                }
            }
            raw_clauses.push(codes);
            match s.peek() {
                Some(b',') => s.pos += 1,
                Some(b']') => {
                    s.pos += 1;
                    break;
                }
                _ => return Err(s.error("expected ',' or ']'".into())),
            }
        }
    }
    if s.peek().is_some() {
        return Err(s.error("trailing input after instance".into()));
    }

    let max_var = raw_clauses
        .iter()
        .flat_map(|cl| cl.iter().map(|c| c.unsigned_abs()))
        .max()
        .unwrap_or(0);
    let n_vars = match vars_override {
        Some(n) if n < max_var => {
            return Err(ParseError::VarOutOfRange {
                var: max_var,
                n_vars: n,
            })
        }
        Some(n) => n,
        None => max_var,
    };

    let mut clauses = Vec::new();
    let mut tautologies_dropped = 0u32;
    for (index, codes) in raw_clauses.iter().enumerate() {
        if codes.is_empty() {
            return Err(ParseError::EmptyClause { index });
        }
        match Clause::from_codes(codes).expect("nonzero codes already checked") {
            Canonicalized::Tautology => tautologies_dropped += 1,
            Canonicalized::Clause(c) => {
                if c.width() > 3 {
                    return Err(ParseError::WidthTooLarge {
                        index,
                        width: c.width(),
                    });
                }
                clauses.push(c);
            }
        }
    }
    let instance = Instance::new(n_vars, clauses).expect("n_vars covers max_var");
    Ok(ParsedInstance {
        instance,
        tautologies_dropped,
    })
}

pub fn emit_paper_lists(inst: &Instance) -> String {
    let mut out = String::from("[");
    for (i, c) in inst.clauses().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push('[');
        for (j, l) in c.literals().iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            write!(out, "{}", l.code()).unwrap();
        }
        out.push(']');
    }
    out.push(']');
    out
}
