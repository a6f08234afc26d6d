//! Fixpoint saturation of a width-3 clause database under resolution and
//! expansion, with contradicting-unit detection and a replayable trace.
//!
//! The default schedule is a worklist: clauses are processed in id order and
//! each unordered pair is resolved exactly once, when its later member is
//! processed. Because insertion is monotone and both rules depend only on
//! their inputs, the resulting database is the same fixpoint the literal
//! repeat-until-stable sweep reaches; that sweep is available behind
//! `conformance_sweep` for cross-checking.
//!
//! Resolvents wider than 3 are discarded, never stored; the optional
//! `reduce_width4` experiment additionally resolves each width-4 resolvent
//! one more step and keeps any width-<=3 results.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::clause::{resolve, resolve_into, Clause, Literal, Resolution, ResolveInto};
use crate::db::{db_bound, ClauseDb, ClauseId};
use crate::instance::Instance;
use crate::trace::{ancestry_steps, DerivationStep, Rule};

/// Width cap for stored clauses.
pub const MAX_WIDTH: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineOptions {
    /// Generate all width-<=3 superclauses of every processed clause.
    pub expansion: bool,
    /// Replace the worklist with the literal repeat-until-stable sweep,
    /// checking units only after each full pass.
    pub conformance_sweep: bool,
    /// Safety cap on passes; defaults to the database bound plus one.
    pub max_passes: Option<u64>,
    /// Experiment: resolve width-4 resolvents one extra step instead of
    /// discarding them outright.
    pub reduce_width4: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            expansion: true,
            conformance_sweep: false,
            max_passes: None,
            reduce_width4: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EngineStats {
    /// Worklist waves, or full sweeps in conformance mode.
    pub passes: u64,
    pub resolutions_attempted: u64,
    /// Clauses stored beyond the givens.
    pub clauses_added: u64,
    /// Final database size; the database only grows, so this is its peak.
    pub db_size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Both units over `var` were derived; `trace` is the ancestry closure
    /// of the contradicting pair, in id order.
    Refuted {
        var: u32,
        trace: Vec<DerivationStep>,
        stats: EngineStats,
    },
    Saturated {
        stats: EngineStats,
    },
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn stats(&self) -> &EngineStats {
        match self {
            Verdict::Refuted { stats, .. } | Verdict::Saturated { stats } => stats,
        }
    }

    pub fn kind_str(&self) -> &'static str {
        match self {
            Verdict::Refuted { .. } => "refuted",
            Verdict::Saturated { .. } => "saturated",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("input clause {index} has width {width}; the engine accepts widths 1..=3")]
    WidthTooLarge { index: usize, width: u32 },
    #[error("instance has {n} variables; saturation supports at most {limit}")]
    TooManyVariables { n: u32, limit: u32 },
    #[error("pass limit {limit} exceeded")]
    PassLimitExceeded { limit: u64 },
}

/// Saturates the instance and returns the verdict.
pub fn saturate(inst: &Instance, opts: &EngineOptions) -> Result<Verdict, EngineError> {
    saturate_with_db(inst, opts).map(|(v, _)| v)
}

/// Saturates the instance and also returns the final clause database, for
/// closure comparisons.
pub fn saturate_with_db(
    inst: &Instance,
    opts: &EngineOptions,
) -> Result<(Verdict, ClauseDb), EngineError> {
    if inst.n_vars() > crate::db::MAX_DB_VARS {
        return Err(EngineError::TooManyVariables {
            n: inst.n_vars(),
            limit: crate::db::MAX_DB_VARS,
        });
    }
    for (index, c) in inst.clauses().iter().enumerate() {
        if c.width() > MAX_WIDTH {
            return Err(EngineError::WidthTooLarge {
                index,
                width: c.width(),
            });
        }
    }
    let mut run = Run::new(inst, opts.clone());
    let verdict = if opts.conformance_sweep {
        run.sweep()?
    } else {
        run.worklist()?
    };
    Ok((verdict, run.db))
}

struct Run {
    db: ClauseDb,
    opts: EngineOptions,
    stats: EngineStats,
    max_passes: u64,
    /// Width-4 resolvents already probed by the reduction experiment.
    seen_width4: HashSet<[i32; 4]>,
    givens: Vec<Clause>,
}

fn extend_prefix(out: &mut Vec<ClauseId>, list: &[ClauseId], below: ClauseId) {
    let cut = list.partition_point(|&id| id < below);
    out.extend_from_slice(&list[..cut]);
}

/// A contradicting unit pair: (variable, positive unit id, negated unit id).
type Contradiction = (u32, ClauseId, ClauseId);

impl Run {
    fn new(inst: &Instance, opts: EngineOptions) -> Self {
        let max_passes = opts
            .max_passes
            .unwrap_or(db_bound(inst.n_vars() as u64) + 1);
        Run {
            db: ClauseDb::new(inst.n_vars()),
            opts,
            stats: EngineStats::default(),
            max_passes,
            seen_width4: HashSet::new(),
            givens: inst.clauses().to_vec(),
        }
    }

    fn refuted(&mut self, (var, pos, neg): Contradiction) -> Verdict {
        self.stats.db_size = self.db.len() as u64;
        let trace = ancestry_steps(&self.db, &[pos, neg]);
        Verdict::Refuted {
            var,
            trace,
            stats: self.stats,
        }
    }

    fn saturated(&mut self) -> Verdict {
        self.stats.db_size = self.db.len() as u64;
        Verdict::Saturated { stats: self.stats }
    }

    /// Inserts a clause; when `check_units` is set, reports a fresh
    /// contradicting unit pair.
    fn insert(&mut self, clause: Clause, rule: Rule, check_units: bool) -> Option<Contradiction> {
        let is_given = matches!(rule, Rule::Given);
        let inserted = self.db.insert(clause, rule);
        self.note_insert_counted(inserted, check_units, is_given)
    }

    fn note_insert(
        &mut self,
        inserted: crate::db::Inserted,
        check_units: bool,
    ) -> Option<Contradiction> {
        self.note_insert_counted(inserted, check_units, false)
    }

    fn note_insert_counted(
        &mut self,
        inserted: crate::db::Inserted,
        check_units: bool,
        is_given: bool,
    ) -> Option<Contradiction> {
        if inserted.is_fresh() {
            if !is_given {
                self.stats.clauses_added += 1;
            }
            if check_units {
                return self.db.contradiction_with(inserted.id());
            }
        }
        None
    }

    /// Resolution partners for `clause` among ids below `below`, ascending
    /// and deduplicated. For a width-3 clause only pairs that can produce a
    /// storable resolvent are enumerated: the partner must hold a pivot
    /// plus a shared literal, or have width <= 2. With the width-4
    /// experiment on, every opposite-literal pair is enumerated instead.
    fn partners_below(&self, clause: &Clause, below: ClauseId) -> Vec<ClauseId> {
        let mut out = Vec::new();
        if clause.width() == 3 && !self.opts.reduce_width4 {
            for &pivot in clause.literals() {
                extend_prefix(
                    &mut out,
                    self.db.small_ids_with_literal(pivot.negate()),
                    below,
                );
                for &shared in clause.literals() {
                    if shared != pivot {
                        extend_prefix(
                            &mut out,
                            self.db.ids_with_pair(pivot.negate(), shared),
                            below,
                        );
                    }
                }
            }
        } else {
            for &l in clause.literals() {
                extend_prefix(&mut out, self.db.ids_with_literal(l.negate()), below);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// All opposite-literal partners of an unstored clause.
    fn partners_all(&self, clause: &Clause) -> Vec<ClauseId> {
        let mut out = Vec::new();
        for &l in clause.literals() {
            out.extend_from_slice(self.db.ids_with_literal(l.negate()));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Resolves the pair, stores a width-<=3 resolvent, and optionally runs
    /// the width-4 reduction experiment.
    fn resolve_pair(
        &mut self,
        a: ClauseId,
        b: ClauseId,
        check_units: bool,
    ) -> Option<Contradiction> {
        self.stats.resolutions_attempted += 1;
        let mut buf = [Literal::positive(1); 6];
        match resolve_into(self.db.clause(a), self.db.clause(b), &mut buf) {
            ResolveInto::Resolvent(w) if w <= MAX_WIDTH as usize => {
                let inserted = self.db.insert_lits(&buf[..w], Rule::Resolve(a, b));
                self.note_insert(inserted, check_units)
            }
            ResolveInto::Resolvent(4) if self.opts.reduce_width4 => {
                let r4 = Clause::from_sorted(buf[..4].to_vec());
                self.reduce_width4(r4, a, b, check_units)
            }
            _ => None,
        }
    }

    /// Resolves an unstored width-4 resolvent one more step against every
    /// stored clause sharing an opposite literal.
    fn reduce_width4(
        &mut self,
        r4: Clause,
        a: ClauseId,
        b: ClauseId,
        check_units: bool,
    ) -> Option<Contradiction> {
        let mut key = [0i32; 4];
        for (i, l) in r4.literals().iter().enumerate() {
            key[i] = l.code();
        }
        if !self.seen_width4.insert(key) {
            return None;
        }
        let partners = self.partners_all(&r4);
        for did in partners {
            self.stats.resolutions_attempted += 1;
            if let Resolution::Resolvent(r2) = resolve(&r4, self.db.clause(did)) {
                if r2.width() <= MAX_WIDTH {
                    let contra = self.insert(r2, Rule::ResolveThrough(a, b, did), check_units);
                    if contra.is_some() {
                        return contra;
                    }
                }
            }
        }
        None
    }

    /// Worklist schedule: process clauses in id order; pair each clause with
    /// all earlier ones; expand it; check units on every insertion.
    fn worklist(&mut self) -> Result<Verdict, EngineError> {
        let givens = std::mem::take(&mut self.givens);
        for c in givens {
            if let Some(contra) = self.insert(c, Rule::Given, true) {
                return Ok(self.refuted(contra));
            }
        }
        let n_vars = self.db.n_vars();
        let mut cursor = 0usize;
        let mut wave_end = self.db.len();
        if wave_end > 0 {
            self.stats.passes = 1;
        }
        while cursor < self.db.len() {
            if cursor == wave_end {
                wave_end = self.db.len();
                self.stats.passes += 1;
                if self.stats.passes > self.max_passes {
                    return Err(EngineError::PassLimitExceeded {
                        limit: self.max_passes,
                    });
                }
            }
            let cid = ClauseId(cursor as u32);
            let clause = self.db.clause(cid).clone();
            let partners = self.partners_below(&clause, cid);
            for did in partners {
                if let Some(contra) = self.resolve_pair(did, cid, true) {
                    return Ok(self.refuted(contra));
                }
            }
            if self.opts.expansion && clause.width() < MAX_WIDTH {
                for e in clause.expansions(n_vars, MAX_WIDTH) {
                    // Expansions have width >= 2, so they cannot complete a
                    // unit pair; the uniform check keeps the code obvious.
                    if let Some(contra) = self.insert(e, Rule::Expand(cid), true) {
                        return Ok(self.refuted(contra));
                    }
                }
            }
            cursor += 1;
        }
        Ok(self.saturated())
    }

    /// Literal schedule: repeat full passes of pairwise resolution plus
    /// expansion, then scan units, until a pass adds nothing.
    fn sweep(&mut self) -> Result<Verdict, EngineError> {
        let givens = std::mem::take(&mut self.givens);
        for c in givens {
            self.insert(c, Rule::Given, false);
        }
        let n_vars = self.db.n_vars();
        loop {
            self.stats.passes += 1;
            if self.stats.passes > self.max_passes {
                return Err(EngineError::PassLimitExceeded {
                    limit: self.max_passes,
                });
            }
            let before = self.db.len();
            let mut i = 0usize;
            while i < self.db.len() {
                let ci = ClauseId(i as u32);
                let mut j = 0usize;
                while j < self.db.len() {
                    let cj = ClauseId(j as u32);
                    self.resolve_pair(ci, cj, false);
                    j += 1;
                }
                let clause = self.db.clause(ci).clone();
                if self.opts.expansion && clause.width() < MAX_WIDTH {
                    for e in clause.expansions(n_vars, MAX_WIDTH) {
                        self.insert(e, Rule::Expand(ci), false);
                    }
                }
                i += 1;
            }
            if let Some(contra) = self.db.find_unit_contradiction() {
                return Ok(self.refuted(contra));
            }
            if self.db.len() == before {
                return Ok(self.saturated());
            }
        }
    }
}
