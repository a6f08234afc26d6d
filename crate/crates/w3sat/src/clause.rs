//! Clause algebra: literals, canonical clauses, blocking semantics, and the
//! derivation primitives (subsumption, resolution, expansion).
//!
//! A canonical clause is a nonempty, duplicate-free set of literals in which
//! no variable appears with both polarities, stored sorted by (variable,
//! polarity). Tautologies are unrepresentable after canonicalization; every
//! operation below relies on that invariant.

use std::cmp::Ordering;
use std::fmt;
use std::num::NonZeroI32;

use serde::Serialize;
use thiserror::Error;

use crate::instance::Assignment;

/// Errors from clause-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("empty clause input")]
    EmptyClauseInput,
    #[error("variable {var} out of range (n_vars = {n_vars})")]
    VarOutOfRange { var: u32, n_vars: u32 },
    #[error("clause width {width} exceeds n = {n}")]
    WidthExceedsN { width: u32, n: u32 },
}

/// A variable with a polarity, encoded as a nonzero signed integer:
/// `3` is the positive form of variable 3, `-3` the negated form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Literal(NonZeroI32);

impl Literal {
    /// Builds a literal from a signed code.
    ///
    /// Panics on zero; parsers reject zero codes before reaching here.
    pub fn new(code: i32) -> Self {
        Literal(NonZeroI32::new(code).expect("literal code must be nonzero"))
    }

    pub fn positive(var: u32) -> Self {
        Self::new(var as i32)
    }

    pub fn negated(var: u32) -> Self {
        Self::new(-(var as i32))
    }

    pub fn code(self) -> i32 {
        self.0.get()
    }

    pub fn var(self) -> u32 {
        self.0.get().unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0.get() > 0
    }

    /// Involution: `l.negate().negate() == l`.
    pub fn negate(self) -> Self {
        Self::new(-self.0.get())
    }

    /// True iff the literal evaluates to false under the assignment.
    fn is_false_under(self, a: &Assignment) -> bool {
        let value = a.value(self.var());
        if self.is_positive() {
            !value
        } else {
            value
        }
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> Ordering {
        // Canonical order: by variable, positive form first.
        (self.var(), !self.is_positive()).cmp(&(other.var(), !other.is_positive()))
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Outcome of canonicalizing a raw literal list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Canonicalized {
    Clause(Clause),
    /// Some variable appeared in both polarities; the clause blocks nothing.
    Tautology,
}

impl Canonicalized {
    /// Unwraps the clause variant; panics on a tautology.
    pub fn expect_clause(self) -> Clause {
        match self {
            Canonicalized::Clause(c) => c,
            Canonicalized::Tautology => panic!("expected a clause, got a tautology"),
        }
    }
}

/// A canonical clause: sorted, duplicate-free, tautology-free literals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Clause {
    lits: Vec<Literal>,
}

impl Clause {
    /// Canonicalizes a raw literal list: merges same-polarity duplicates,
    /// sorts by (variable, polarity), and reports a tautology when some
    /// variable appears in both polarities.
    pub fn canonicalize(raw: &[Literal]) -> Result<Canonicalized, CoreError> {
        if raw.is_empty() {
            return Err(CoreError::EmptyClauseInput);
        }
        let mut lits = raw.to_vec();
        lits.sort_unstable();
        lits.dedup();
        for pair in lits.windows(2) {
            if pair[0].var() == pair[1].var() {
                return Ok(Canonicalized::Tautology);
            }
        }
        Ok(Canonicalized::Clause(Clause { lits }))
    }

    /// Canonicalizes a list of signed codes. Zero codes are rejected as
    /// out-of-range variables.
    pub fn from_codes(codes: &[i32]) -> Result<Canonicalized, CoreError> {
        if codes.contains(&0) {
            return Err(CoreError::VarOutOfRange { var: 0, n_vars: 0 });
        }
        let raw: Vec<Literal> = codes.iter().map(|&c| Literal::new(c)).collect();
        Self::canonicalize(&raw)
    }

    /// Builds a clause from literals already known to be canonical.
    pub(crate) fn from_sorted(lits: Vec<Literal>) -> Self {
        debug_assert!(!lits.is_empty());
        debug_assert!(lits
            .windows(2)
            .all(|p| p[0] < p[1] && p[0].var() != p[1].var()));
        Clause { lits }
    }

    pub fn width(&self) -> u32 {
        self.lits.len() as u32
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn max_var(&self) -> u32 {
        self.lits.last().map_or(0, |l| l.var())
    }

    /// Returns the single literal of a unit clause.
    pub fn unit_literal(&self) -> Option<Literal> {
        if self.lits.len() == 1 {
            Some(self.lits[0])
        } else {
            None
        }
    }

    /// Polarity of `var` in this clause, if present.
    pub fn polarity_of(&self, var: u32) -> Option<bool> {
        self.lits
            .binary_search_by_key(&(var, false), |l| (l.var(), !l.is_positive()))
            .or_else(|_| {
                self.lits
                    .binary_search_by_key(&(var, true), |l| (l.var(), !l.is_positive()))
            })
            .ok()
            .map(|i| self.lits[i].is_positive())
    }

    /// True iff every literal evaluates to false under `a`, i.e. the clause
    /// rules the assignment out.
    pub fn blocks(&self, a: &Assignment) -> Result<bool, CoreError> {
        if self.max_var() > a.n_vars() {
            return Err(CoreError::VarOutOfRange {
                var: self.max_var(),
                n_vars: a.n_vars(),
            });
        }
        Ok(self.lits.iter().all(|l| l.is_false_under(a)))
    }

    /// Number of assignments over `n` variables blocked by this clause:
    /// exactly one value per clause variable is ruled out, leaving the rest
    /// free, so the count is `2^(n - width)`.
    pub fn blocked_count(&self, n: u32) -> Result<u64, CoreError> {
        let w = self.width();
        if w > n || self.max_var() > n {
            return Err(CoreError::WidthExceedsN { width: w, n });
        }
        assert!(
            n - w < 64,
            "blocked_count overflows u64 for n - width >= 64"
        );
        Ok(1u64 << (n - w))
    }

    /// True iff every literal of `self` occurs in `other`. When true, every
    /// assignment blocked by `other` is blocked by `self`.
    pub fn subsumes(&self, other: &Clause) -> bool {
        if self.lits.len() > other.lits.len() {
            return false;
        }
        let mut it = other.lits.iter();
        'outer: for l in &self.lits {
            for o in it.by_ref() {
                match o.cmp(l) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    /// All canonical strict superclauses of `self` with width up to
    /// `max_width`, built by appending literals over variables not in
    /// `self`, in both polarities. Returned in lexicographic generation
    /// order (ascending added variable, positive polarity first).
    pub fn expansions(&self, n_vars: u32, max_width: u32) -> Vec<Clause> {
        debug_assert!(self.width() <= max_width);
        debug_assert!(self.max_var() <= n_vars);
        let room = max_width.saturating_sub(self.width());
        if room == 0 {
            return Vec::new();
        }
        let free: Vec<u32> = (1..=n_vars)
            .filter(|&v| self.polarity_of(v).is_none())
            .collect();
        let mut out = Vec::new();
        let mut extras: Vec<Literal> = Vec::new();
        self.expand_rec(&free, 0, room as usize, &mut extras, &mut out);
        out
    }

    fn expand_rec(
        &self,
        free: &[u32],
        start: usize,
        room: usize,
        extras: &mut Vec<Literal>,
        out: &mut Vec<Clause>,
    ) {
        for i in start..free.len() {
            for lit in [Literal::positive(free[i]), Literal::negated(free[i])] {
                extras.push(lit);
                let mut lits = self.lits.clone();
                lits.extend_from_slice(extras);
                lits.sort_unstable();
                out.push(Clause { lits });
                if room > 1 {
                    self.expand_rec(free, i + 1, room - 1, extras, out);
                }
                extras.pop();
            }
        }
    }

    /// Bit masks over variables 1..=n (bit `n - v` for variable `v`),
    /// split by polarity. Requires all variables <= 64.
    pub(crate) fn masks(&self, n: u32) -> (u64, u64) {
        debug_assert!(n <= 64 && self.max_var() <= n);
        let mut pos = 0u64;
        let mut neg = 0u64;
        for l in &self.lits {
            let bit = 1u64 << (n - l.var());
            if l.is_positive() {
                pos |= bit;
            } else {
                neg |= bit;
            }
        }
        (pos, neg)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Outcome of resolving two canonical clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Resolution {
    /// Exactly one variable appeared with opposite polarity; the result is
    /// the canonical union of the remaining literals.
    Resolvent(Clause),
    /// No variable appears with opposite polarity across the pair.
    NoPivot,
    /// Two or more variables appear with opposite polarity; any choice of
    /// pivot leaves an opposing pair, so the result blocks nothing.
    Tautology,
    /// A unit resolved against its opposite unit; no literals remain.
    EmptyContradiction,
}

/// Resolves two canonical clauses on their unique opposite-polarity
/// variable, if any.
pub fn resolve(c: &Clause, d: &Clause) -> Resolution {
    let mut pivots = 0u32;
    {
        // First pass: count opposite-polarity variables.
        let (mut i, mut j) = (0, 0);
        let (a, b) = (c.literals(), d.literals());
        while i < a.len() && j < b.len() {
            match a[i].var().cmp(&b[j].var()) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    if a[i].is_positive() != b[j].is_positive() {
                        pivots += 1;
                        if pivots >= 2 {
                            return Resolution::Tautology;
                        }
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    if pivots == 0 {
        return Resolution::NoPivot;
    }
    // Second pass: merge, dropping the pivot pair and collapsing shared
    // literals (all remaining shared variables agree in polarity).
    let (a, b) = (c.literals(), d.literals());
    let mut lits = Vec::with_capacity(a.len() + b.len() - 2);
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if i == a.len() {
            lits.push(b[j]);
            j += 1;
        } else if j == b.len() {
            lits.push(a[i]);
            i += 1;
        } else {
            match a[i].var().cmp(&b[j].var()) {
                Ordering::Less => {
                    lits.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    lits.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    if a[i].is_positive() == b[j].is_positive() {
                        lits.push(a[i]);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    if lits.is_empty() {
        Resolution::EmptyContradiction
    } else {
        Resolution::Resolvent(Clause { lits })
    }
}

/// Width range of a non-tautological resolvent of clauses with widths `k`
/// and `m`: `[max(k, m) - 1, k + m - 2]`.
pub fn resolvent_width_bounds(k: u32, m: u32) -> (u32, u32) {
    debug_assert!(k >= 1 && m >= 1);
    (k.max(m) - 1, k + m - 2)
}

/// Allocation-free [`resolve`] outcome for the saturation hot loop; the
/// resolvent literals land in `buf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ResolveInto {
    Resolvent(usize),
    NoPivot,
    Tautology,
    EmptyContradiction,
}

/// Same classification as [`resolve`] for clauses of combined width <= 6,
/// writing the resolvent into `buf` instead of allocating.
pub(crate) fn resolve_into(c: &Clause, d: &Clause, buf: &mut [Literal; 6]) -> ResolveInto {
    let (a, b) = (c.literals(), d.literals());
    debug_assert!(a.len() + b.len() <= 8);
    let mut pivots = 0u32;
    {
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].var().cmp(&b[j].var()) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    if a[i].is_positive() != b[j].is_positive() {
                        pivots += 1;
                        if pivots >= 2 {
                            return ResolveInto::Tautology;
                        }
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    if pivots == 0 {
        return ResolveInto::NoPivot;
    }
    let mut len = 0usize;
    let mut push = |l: Literal, len: &mut usize| {
        buf[*len] = l;
        *len += 1;
    };
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if i == a.len() {
            push(b[j], &mut len);
            j += 1;
        } else if j == b.len() {
            push(a[i], &mut len);
            i += 1;
        } else {
            match a[i].var().cmp(&b[j].var()) {
                Ordering::Less => {
                    push(a[i], &mut len);
                    i += 1;
                }
                Ordering::Greater => {
                    push(b[j], &mut len);
                    j += 1;
                }
                Ordering::Equal => {
                    if a[i].is_positive() == b[j].is_positive() {
                        push(a[i], &mut len);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    if len == 0 {
        ResolveInto::EmptyContradiction
    } else {
        ResolveInto::Resolvent(len)
    }
}
