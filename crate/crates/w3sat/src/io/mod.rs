//! Text formats: DIMACS CNF, the bracketed list-of-lists format, and run
//! records.
//!
//! Both parsers canonicalize clauses the same way: same-polarity duplicate
//! literals are merged silently, tautological clauses are dropped and
//! counted, and any clause wider than 3 after canonicalization is rejected.

mod dimacs;
mod lists;
mod record;

pub use dimacs::{emit_dimacs, parse_dimacs};
pub use lists::{emit_paper_lists, parse_paper_lists};
pub use record::{sha256_hex, RunRecord};

use thiserror::Error;

use crate::instance::Instance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("syntax error at byte {pos}: {msg}")]
    SyntaxAt { pos: usize, msg: String },
    #[error("clause {index} has width {width}; widths 1..=3 are accepted")]
    WidthTooLarge { index: usize, width: u32 },
    #[error("variable {var} out of range (declared n = {n_vars})")]
    VarOutOfRange { var: u32, n_vars: u32 },
    #[error("clause {index} is empty")]
    EmptyClause { index: usize },
}

/// A parsed instance plus canonicalization counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInstance {
    pub instance: Instance,
    pub tautologies_dropped: u32,
}
