//! Width-3 clause saturation for 3SAT.
//!
//! The library has three layers:
//!
//! - [`clause`], [`instance`]: canonical clause algebra (blocking,
//!   subsumption, resolution, expansion) over signed-integer literals.
//! - [`engine`], [`db`], [`trace`]: a saturation engine that closes a
//!   deduplicating width-<=3 clause database under resolution and
//!   expansion, reports `Refuted` on a contradicting unit pair or
//!   `Saturated` at fixpoint, and emits replayable derivation traces.
//! - [`oracle`], [`harness`], [`io`]: independent ground truth (exhaustive
//!   enumeration and DPLL), full-width constructive derivations at tiny n,
//!   randomized experiments that measure where saturation disagrees with
//!   ground truth, and text formats (DIMACS CNF and bracketed lists).
//!
//! Refutations are sound and machine-checked; saturation is not a
//! satisfiability proof, and the harness exists to quantify exactly that
//! gap.

pub mod clause;
pub mod db;
pub mod engine;
pub mod harness;
pub mod instance;
pub mod io;
pub mod oracle;
pub mod trace;

pub use clause::{
    resolve, resolvent_width_bounds, Canonicalized, Clause, CoreError, Literal, Resolution,
};
pub use db::{db_bound, ClauseDb, ClauseId};
pub use engine::{saturate, saturate_with_db, EngineError, EngineOptions, EngineStats, Verdict};
pub use instance::{Assignment, Instance};

/// Every canonical clause over variables 1..=n with width 1..=max_width,
/// in ascending clause order.
pub fn enumerate_clauses(n_vars: u32, max_width: u32) -> Vec<Clause> {
    let mut out = Vec::new();
    let mut lits: Vec<Literal> = Vec::new();
    fn rec(out: &mut Vec<Clause>, lits: &mut Vec<Literal>, next_var: u32, n: u32, room: u32) {
        for v in next_var..=n {
            for l in [Literal::positive(v), Literal::negated(v)] {
                lits.push(l);
                out.push(Clause::canonicalize(lits).unwrap().expect_clause());
                if room > 1 {
                    rec(out, lits, v + 1, n, room - 1);
                }
                lits.pop();
            }
        }
    }
    if max_width > 0 && n_vars > 0 {
        rec(&mut out, &mut lits, 1, n_vars, max_width.min(n_vars));
    }
    out.sort_unstable();
    out
}
