//! Problem instances and total assignments.

use std::fmt;

use crate::clause::{Clause, CoreError};

/// A total assignment: one boolean per variable, variable 1 first.
#[derive(Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// The assignment at position `index` in lexicographic order over
    /// (x1, ..., xn) with false < true: variable 1 is the most significant
    /// bit of the index.
    pub fn from_index(index: u64, n_vars: u32) -> Self {
        debug_assert!(n_vars < 64);
        let values = (1..=n_vars)
            .map(|v| (index >> (n_vars - v)) & 1 == 1)
            .collect();
        Assignment { values }
    }

    pub fn n_vars(&self) -> u32 {
        self.values.len() as u32
    }

    /// Value of variable `var` (1-based). Panics when out of range.
    pub fn value(&self, var: u32) -> bool {
        self.values[(var - 1) as usize]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let var = i as i64 + 1;
            write!(f, "{}", if v { var } else { -var })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

/// A conjunction of canonical clauses over variables 1..=n_vars.
///
/// Clause widths are unrestricted here; the saturation engine and the text
/// parsers enforce the width-3 cap at their own boundaries, while oracle
/// constructions work with clauses up to width n.
#[derive(Clone, PartialEq, Eq)]
pub struct Instance {
    n_vars: u32,
    clauses: Vec<Clause>,
}

impl Instance {
    pub fn new(n_vars: u32, clauses: Vec<Clause>) -> Result<Self, CoreError> {
        for c in &clauses {
            if c.max_var() > n_vars {
                return Err(CoreError::VarOutOfRange {
                    var: c.max_var(),
                    n_vars,
                });
            }
        }
        Ok(Instance { n_vars, clauses })
    }

    pub fn empty(n_vars: u32) -> Self {
        Instance {
            n_vars,
            clauses: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> u32 {
        self.n_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// A copy with the clause at `index` removed; variable count unchanged.
    pub fn without_clause(&self, index: usize) -> Instance {
        let mut clauses = self.clauses.clone();
        clauses.remove(index);
        Instance {
            n_vars: self.n_vars,
            clauses,
        }
    }

    /// True iff every clause has some literal true under `a`.
    pub fn is_satisfied_by(&self, a: &Assignment) -> Result<bool, CoreError> {
        for c in &self.clauses {
            if c.blocks(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Instance(n={}, m={})", self.n_vars, self.clauses.len())
    }
}
