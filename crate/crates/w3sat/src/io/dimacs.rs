//! DIMACS CNF: `c` comments, a `p cnf <vars> <clauses>` header, and
//! zero-terminated clauses. The SATLIB `%` end marker is tolerated.

use std::fmt::Write as _;

use crate::clause::{Canonicalized, Clause};
use crate::instance::Instance;
use crate::io::{ParseError, ParsedInstance};

pub fn parse_dimacs(text: &str) -> Result<ParsedInstance, ParseError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut tautologies_dropped = 0u32;
    let mut pending: Vec<i32> = Vec::new();
    let mut done = false;

    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let trimmed = line.trim();
        if done || trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed == "%" {
            done = true;
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::Syntax {
                    line: line_no,
                    msg: "duplicate header".into(),
                });
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(ParseError::Syntax {
                    line: line_no,
                    msg: "expected 'p cnf <vars> <clauses>'".into(),
                });
            }
            let n_vars: u32 = fields[2].parse().map_err(|_| ParseError::Syntax {
                line: line_no,
                msg: format!("bad variable count '{}'", fields[2]),
            })?;
            let n_clauses: usize = fields[3].parse().map_err(|_| ParseError::Syntax {
                line: line_no,
                msg: format!("bad clause count '{}'", fields[3]),
            })?;
            header = Some((n_vars, n_clauses));
            continue;
        }
        let Some((n_vars, _)) = header else {
            return Err(ParseError::Syntax {
                line: line_no,
                msg: "clause before 'p cnf' header".into(),
            });
        };
        for token in trimmed.split_whitespace() {
            let code: i32 = token.parse().map_err(|_| ParseError::Syntax {
                line: line_no,
                msg: format!("bad literal '{token}'"),
            })?;
            if code == 0 {
                finish_clause(&mut pending, &mut clauses, &mut tautologies_dropped, n_vars)?;
            } else {
                if code.unsigned_abs() > n_vars {
                    return Err(ParseError::VarOutOfRange {
                        var: code.unsigned_abs(),
                        n_vars,
                    });
                }
                pending.push(code);
            }
        }
    }

    let Some((n_vars, declared_clauses)) = header else {
        return Err(ParseError::Syntax {
            line: 1,
            msg: "missing 'p cnf' header".into(),
        });
    };
    if !pending.is_empty() {
        return Err(ParseError::Syntax {
            line: text.lines().count(),
            msg: "unterminated clause at end of input".into(),
        });
    }
    let seen = clauses.len() + tautologies_dropped as usize;
    if seen != declared_clauses {
        return Err(ParseError::Syntax {
            line: text.lines().count(),
            msg: format!("header declares {declared_clauses} clauses, found {seen}"),
        });
    }
    let instance = Instance::new(n_vars, clauses).expect("variable range already checked");
    Ok(ParsedInstance {
        instance,
        tautologies_dropped,
    })
}

fn finish_clause(
    pending: &mut Vec<i32>,
    clauses: &mut Vec<Clause>,
    tautologies_dropped: &mut u32,
    _n_vars: u32,
) -> Result<(), ParseError> {
    let index = clauses.len() + *tautologies_dropped as usize;
    if pending.is_empty() {
        return Err(ParseError::EmptyClause { index });
    }
    let codes = std::mem::take(pending);
    match Clause::from_codes(&codes).expect("nonzero codes already checked") {
        Canonicalized::Tautology => *tautologies_dropped += 1,
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
    Ok(())
}

pub fn emit_dimacs(inst: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", inst.n_vars(), inst.len()).unwrap();
    for c in inst.clauses() {
        for l in c.literals() {
            write!(out, "{} ", l.code()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}
