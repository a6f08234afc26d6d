//! Ground truth: exhaustive and backtracking satisfiability decisions, plus
//! constructive full-width derivations at tiny n.
//!
//! Everything here is self-contained and auditable; the saturation engine is
//! never consulted.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::clause::{resolve, Clause, Literal, Resolution};
use crate::db::ClauseId;
use crate::instance::{Assignment, Instance};
use crate::trace::{DerivationStep, Rule};

/// Default variable cap for exhaustive enumeration.
pub const ENUMERATE_MAX_N: u32 = 24;
/// Default variable cap for full-width expansion.
pub const FULL_EXPANSION_MAX_N: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {n} variables, above the limit {limit}")]
    TooLarge { n: u32, limit: u32 },
    #[error("need all {expected} width-n clauses, got {got}")]
    IncompleteCover { expected: u64, got: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Sat(Assignment),
    Unsat,
}

impl Status {
    pub fn is_sat(&self) -> bool {
        matches!(self, Status::Sat(_))
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Sat(_) => "sat",
            Status::Unsat => "unsat",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub status: Status,
    pub nodes_explored: u64,
}

impl OracleResult {
    fn sat(inst: &Instance, witness: Assignment, nodes_explored: u64) -> Self {
        assert!(
            inst.is_satisfied_by(&witness).unwrap(),
            "oracle produced a non-satisfying witness"
        );
        OracleResult {
            status: Status::Sat(witness),
            nodes_explored,
        }
    }
}

/// Exhaustive search over all 2^n assignments in lexicographic order.
/// Returns the lexicographically smallest witness, or `Unsat` after
/// visiting every assignment.
pub fn solve_enumerate(inst: &Instance) -> Result<OracleResult, OracleError> {
    solve_enumerate_with_limit(inst, ENUMERATE_MAX_N)
}

pub fn solve_enumerate_with_limit(
    inst: &Instance,
    limit: u32,
) -> Result<OracleResult, OracleError> {
    let n = inst.n_vars();
    if n > limit || n >= 64 {
        return Err(OracleError::TooLarge {
            n,
            limit: limit.min(63),
        });
    }
    let masks: Vec<(u64, u64)> = inst.clauses().iter().map(|c| c.masks(n)).collect();
    let mut nodes = 0u64;
    for idx in 0..(1u64 << n) {
        nodes += 1;
        let blocked = masks
            .iter()
            .any(|&(pos, neg)| idx & pos == 0 && idx & neg == neg);
        if !blocked {
            let witness = Assignment::from_index(idx, n);
            return Ok(OracleResult::sat(inst, witness, nodes));
        }
    }
    Ok(OracleResult {
        status: Status::Unsat,
        nodes_explored: nodes,
    })
}

/// Backtracking search with unit propagation. Branching is deterministic:
/// lowest-index unassigned variable, false before true. Variables left
/// unassigned when the formula is satisfied default to false in the witness.
pub fn solve_dpll(inst: &Instance) -> OracleResult {
    let n = inst.n_vars() as usize;
    let clauses: Vec<&Clause> = inst.clauses().iter().collect();
    let mut assign: Vec<i8> = vec![0; n + 1];
    let mut nodes = 0u64;
    let mut witness: Option<Assignment> = None;
    let sat = search(&clauses, &mut assign, n, &mut nodes, &mut witness);
    if sat {
        OracleResult::sat(inst, witness.unwrap(), nodes)
    } else {
        OracleResult {
            status: Status::Unsat,
            nodes_explored: nodes,
        }
    }
}

fn lit_state(l: Literal, assign: &[i8]) -> i8 {
    let v = assign[l.var() as usize];
    if l.is_positive() {
        v
    } else {
        -v
    }
}

fn search(
    clauses: &[&Clause],
    assign: &mut Vec<i8>,
    n: usize,
    nodes: &mut u64,
    witness: &mut Option<Assignment>,
) -> bool {
    *nodes += 1;
    let mut trail: Vec<usize> = Vec::new();
    // Unit propagation to fixpoint; the first unit in clause order fires.
    loop {
        let mut forced: Option<Literal> = None;
        let mut conflict = false;
        'clauses: for c in clauses {
            let mut unassigned: Option<Literal> = None;
            let mut open = 0u32;
            for &l in c.literals() {
                match lit_state(l, assign) {
                    1 => continue 'clauses,
                    0 => {
                        open += 1;
                        if unassigned.is_none() {
                            unassigned = Some(l);
                        }
                    }
                    _ => {}
                }
            }
            if open == 0 {
                conflict = true;
                break;
            }
            if open == 1 {
                forced = unassigned;
                break;
            }
        }
        if conflict {
            for &v in &trail {
                assign[v] = 0;
            }
            return false;
        }
        match forced {
            Some(l) => {
                assign[l.var() as usize] = if l.is_positive() { 1 } else { -1 };
                trail.push(l.var() as usize);
            }
            None => break,
        }
    }

    let all_satisfied = clauses
        .iter()
        .all(|c| c.literals().iter().any(|&l| lit_state(l, assign) == 1));
    if all_satisfied {
        let values = (1..=n).map(|v| assign[v] == 1).collect();
        *witness = Some(Assignment::new(values));
        for &v in &trail {
            assign[v] = 0;
        }
        return true;
    }

    let branch = (1..=n).find(|&v| assign[v] == 0);
    if let Some(v) = branch {
        for value in [-1i8, 1] {
            assign[v] = value;
            if search(clauses, assign, n, nodes, witness) {
                assign[v] = 0;
                for &t in &trail {
                    assign[t] = 0;
                }
                return true;
            }
        }
        assign[v] = 0;
    }
    for &v in &trail {
        assign[v] = 0;
    }
    false
}

/// The width-n clauses subsumed by at least one given clause. Each such
/// clause blocks exactly one assignment, and the set is in bijection with
/// the assignments blocked by the instance (variable assigned false maps to
/// the positive literal).
pub fn full_expansion(inst: &Instance) -> Result<BTreeSet<Clause>, OracleError> {
    full_expansion_with_limit(inst, FULL_EXPANSION_MAX_N)
}

pub fn full_expansion_with_limit(
    inst: &Instance,
    limit: u32,
) -> Result<BTreeSet<Clause>, OracleError> {
    let n = inst.n_vars();
    if n > limit || n >= 64 {
        return Err(OracleError::TooLarge {
            n,
            limit: limit.min(63),
        });
    }
    let masks: Vec<(u64, u64)> = inst.clauses().iter().map(|c| c.masks(n)).collect();
    let mut out = BTreeSet::new();
    for idx in 0..(1u64 << n) {
        let blocked = masks
            .iter()
            .any(|&(pos, neg)| idx & pos == 0 && idx & neg == neg);
        if blocked {
            out.insert(blocking_clause(idx, n));
        }
    }
    Ok(out)
}

/// The unique width-n clause blocking exactly the assignment at `idx`.
fn blocking_clause(idx: u64, n: u32) -> Clause {
    let lits = (1..=n)
        .map(|v| {
            if (idx >> (n - v)) & 1 == 1 {
                Literal::negated(v)
            } else {
                Literal::positive(v)
            }
        })
        .collect();
    Clause::from_sorted(lits)
}

/// True iff the full expansion covers all 2^n width-n clauses, which holds
/// exactly when every assignment is blocked.
pub fn is_unsat_by_full_cover(inst: &Instance) -> Result<bool, OracleError> {
    let full = full_expansion(inst)?;
    Ok(full.len() as u64 == 1u64 << inst.n_vars())
}

/// A derivation of the contradicting unit pair over `keep_var` from the
/// complete width-n cover, replayable step by step.
#[derive(Debug, Clone)]
pub struct UnitReduction {
    pub units: (Clause, Clause),
    pub steps: Vec<DerivationStep>,
    pub resolutions: u64,
}

/// Reduces the complete set of 2^n width-n clauses to `([keep_var],
/// [-keep_var])` by eliminating one variable per round: clauses differing
/// only at the eliminated variable are paired and resolved. Elimination
/// order is descending variable index, skipping `keep_var`.
pub fn reduce_full_to_units(
    full: &BTreeSet<Clause>,
    n: u32,
    keep_var: u32,
) -> Result<UnitReduction, OracleError> {
    assert!((1..=n).contains(&keep_var));
    assert!(n < 32, "full cover reduction is a tiny-n construction");
    let expected = 1u64 << n;
    if full.len() as u64 != expected {
        return Err(OracleError::IncompleteCover {
            expected,
            got: full.len() as u64,
        });
    }

    let mut steps: Vec<DerivationStep> = Vec::new();
    let mut current: Vec<(Clause, ClauseId)> = Vec::new();
    for c in full {
        let id = ClauseId(steps.len() as u32);
        steps.push(DerivationStep {
            id,
            rule: Rule::Given,
            clause: c.clone(),
        });
        current.push((c.clone(), id));
    }

    let mut resolutions = 0u64;
    for var in (1..=n).rev().filter(|&v| v != keep_var) {
        let by_form: std::collections::HashMap<Clause, ClauseId> = current
            .iter()
            .filter(|(c, _)| c.polarity_of(var) == Some(false))
            .map(|(c, id)| (c.clone(), *id))
            .collect();
        let mut next: Vec<(Clause, ClauseId)> = Vec::new();
        for (c, pos_id) in current
            .iter()
            .filter(|(c, _)| c.polarity_of(var) == Some(true))
        {
            let mut partner_lits: Vec<Literal> = c.literals().to_vec();
            for l in &mut partner_lits {
                if l.var() == var {
                    *l = l.negate();
                }
            }
            let partner = Clause::from_sorted(partner_lits);
            let neg_id = by_form[&partner];
            let resolvent = match resolve(c, &partner) {
                Resolution::Resolvent(r) => r,
                other => unreachable!("cover pairing must resolve, got {other:?}"),
            };
            resolutions += 1;
            let id = ClauseId(steps.len() as u32);
            steps.push(DerivationStep {
                id,
                rule: Rule::Resolve(*pos_id, neg_id),
                clause: resolvent.clone(),
            });
            next.push((resolvent, id));
        }
        current = next;
    }

    debug_assert_eq!(current.len(), 2);
    let mut units = (current[0].0.clone(), current[1].0.clone());
    if !units.0.unit_literal().unwrap().is_positive() {
        units = (units.1, units.0);
    }
    Ok(UnitReduction {
        units,
        steps,
        resolutions,
    })
}

/// Derives `target` from the contradicting unit pair over `a_var`.
///
/// Targets mentioning `a_var` are a single expansion of the matching unit
/// (or the unit itself); any other target is reached by expanding `[a]` to
/// `[a, t0]` and `[-a]` to `[-a] + target`, then resolving on `a`.
pub fn units_imply_all(a_var: u32, target: &Clause, n: u32) -> Vec<DerivationStep> {
    debug_assert!(target.max_var() <= n);
    let pos_unit = Clause::from_sorted(vec![Literal::positive(a_var)]);
    let neg_unit = Clause::from_sorted(vec![Literal::negated(a_var)]);
    let mut steps = vec![
        DerivationStep {
            id: ClauseId(0),
            rule: Rule::Given,
            clause: pos_unit.clone(),
        },
        DerivationStep {
            id: ClauseId(1),
            rule: Rule::Given,
            clause: neg_unit.clone(),
        },
    ];
    if *target == pos_unit || *target == neg_unit {
        return steps;
    }
    match target.polarity_of(a_var) {
        Some(true) => {
            steps.push(DerivationStep {
                id: ClauseId(2),
                rule: Rule::Expand(ClauseId(0)),
                clause: target.clone(),
            });
        }
        Some(false) => {
            steps.push(DerivationStep {
                id: ClauseId(2),
                rule: Rule::Expand(ClauseId(1)),
                clause: target.clone(),
            });
        }
        None => {
            let first = target.literals()[0];
            let bridge = Clause::canonicalize(&[Literal::positive(a_var), first])
                .unwrap()
                .expect_clause();
            let mut wide_lits = target.literals().to_vec();
            wide_lits.push(Literal::negated(a_var));
            let wide = Clause::canonicalize(&wide_lits).unwrap().expect_clause();
            steps.push(DerivationStep {
                id: ClauseId(2),
                rule: Rule::Expand(ClauseId(0)),
                clause: bridge,
            });
            steps.push(DerivationStep {
                id: ClauseId(3),
                rule: Rule::Expand(ClauseId(1)),
                clause: wide,
            });
            steps.push(DerivationStep {
                id: ClauseId(4),
                rule: Rule::Resolve(ClauseId(2), ClauseId(3)),
                clause: target.clone(),
            });
        }
    }
    steps
}
