//! Derivation traces: replayable DAGs of clause derivations, an independent
//! checker for refutations, and text / DOT emission.
//!
//! Trace text is line oriented, one record per step:
//!
//! ```text
//! <id> <rule> <parents> <literals>
//! ```
//!
//! where `<rule>` is `given`, `resolve`, `expand`, or `resolve-through`,
//! `<parents>` is `-` for givens and otherwise comma-separated parent ids,
//! and `<literals>` are signed codes separated by spaces.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::clause::{resolve, Clause, Resolution};
use crate::db::{ClauseDb, ClauseId};
use crate::engine::Verdict;
use crate::instance::Instance;

/// How a stored clause came to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Present in the input instance.
    Given,
    /// Resolvent of two stored clauses.
    Resolve(ClauseId, ClauseId),
    /// Superclause of a stored clause.
    Expand(ClauseId),
    /// Resolvent of an unstored width-4 resolvent of the first two parents
    /// against the third parent. Only produced by the width-4 reduction
    /// experiment.
    ResolveThrough(ClauseId, ClauseId, ClauseId),
}

impl Rule {
    pub fn parents(&self) -> Vec<ClauseId> {
        match *self {
            Rule::Given => vec![],
            Rule::Resolve(a, b) => vec![a, b],
            Rule::Expand(p) => vec![p],
            Rule::ResolveThrough(a, b, c) => vec![a, b, c],
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Rule::Given => "given",
            Rule::Resolve(..) => "resolve",
            Rule::Expand(..) => "expand",
            Rule::ResolveThrough(..) => "resolve-through",
        }
    }
}

/// One derivation: the clause, how it was derived, and its id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub id: ClauseId,
    pub rule: Rule,
    pub clause: Clause,
}

/// Errors that make a trace unreadable, as opposed to invalid.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("step {step} references parent {parent} which is not an earlier step")]
    MalformedTrace { step: ClauseId, parent: ClauseId },
    #[error("step id {0} appears twice")]
    DuplicateStepId(ClauseId),
    #[error("verdict is not a refutation")]
    NotRefuted,
}

/// Why a step failed the replay check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureKind {
    GivenNotInInstance,
    ResolventMismatch,
    ExpansionNotSubsumed,
    MissingContradiction,
}

/// Outcome of replaying a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckReport {
    Pass,
    Fail { step: ClauseId, kind: FailureKind },
}

impl CheckReport {
    pub fn is_pass(&self) -> bool {
        matches!(self, CheckReport::Pass)
    }
}

/// Replays a refuted verdict's trace against the instance it came from.
pub fn check_trace(inst: &Instance, verdict: &Verdict) -> Result<CheckReport, TraceError> {
    match verdict {
        Verdict::Refuted { var, trace, .. } => check_refutation_steps(inst, *var, trace),
        Verdict::Saturated { .. } => Err(TraceError::NotRefuted),
    }
}

/// Replays a step list claiming to derive both units over `var`.
///
/// Every `Given` must occur in the instance, every `Resolve` must equal the
/// resolvent of its parents, every `Expand` must be subsumed by its parent,
/// and the trace must contain both `[var]` and `[-var]`.
pub fn check_refutation_steps(
    inst: &Instance,
    var: u32,
    steps: &[DerivationStep],
) -> Result<CheckReport, TraceError> {
    let mut by_id: HashMap<ClauseId, &DerivationStep> = HashMap::with_capacity(steps.len());
    for step in steps {
        if by_id.insert(step.id, step).is_some() {
            return Err(TraceError::DuplicateStepId(step.id));
        }
    }
    for step in steps {
        for parent in step.rule.parents() {
            if parent >= step.id || !by_id.contains_key(&parent) {
                return Err(TraceError::MalformedTrace {
                    step: step.id,
                    parent,
                });
            }
        }
    }

    let given_set: std::collections::HashSet<&Clause> = inst.clauses().iter().collect();
    let clause_of = |id: ClauseId| &by_id[&id].clause;
    for step in steps {
        let ok = match step.rule {
            Rule::Given => given_set.contains(&step.clause),
            Rule::Resolve(a, b) => {
                matches!(resolve(clause_of(a), clause_of(b)), Resolution::Resolvent(r) if r == step.clause)
            }
            Rule::Expand(p) => clause_of(p).subsumes(&step.clause),
            Rule::ResolveThrough(a, b, c) => match resolve(clause_of(a), clause_of(b)) {
                Resolution::Resolvent(mid) => {
                    matches!(resolve(&mid, clause_of(c)), Resolution::Resolvent(r) if r == step.clause)
                }
                _ => false,
            },
        };
        if !ok {
            let kind = match step.rule {
                Rule::Given => FailureKind::GivenNotInInstance,
                Rule::Expand(_) => FailureKind::ExpansionNotSubsumed,
                _ => FailureKind::ResolventMismatch,
            };
            return Ok(CheckReport::Fail {
                step: step.id,
                kind,
            });
        }
    }

    let has = |positive: bool| {
        steps.iter().any(|s| {
            s.clause
                .unit_literal()
                .is_some_and(|l| l.var() == var && l.is_positive() == positive)
        })
    };
    if !(has(true) && has(false)) {
        let last = steps.last().map_or(ClauseId(0), |s| s.id);
        return Ok(CheckReport::Fail {
            step: last,
            kind: FailureKind::MissingContradiction,
        });
    }
    Ok(CheckReport::Pass)
}

/// Extracts the ancestry closure of `seeds` from the database, sorted by id.
pub(crate) fn ancestry_steps(db: &ClauseDb, seeds: &[ClauseId]) -> Vec<DerivationStep> {
    let mut wanted: BTreeSet<ClauseId> = BTreeSet::new();
    let mut stack: Vec<ClauseId> = seeds.to_vec();
    while let Some(id) = stack.pop() {
        if wanted.insert(id) {
            stack.extend(db.rule(id).parents());
        }
    }
    wanted
        .into_iter()
        .map(|id| DerivationStep {
            id,
            rule: *db.rule(id),
            clause: db.clause(id).clone(),
        })
        .collect()
}

/// Renders steps in the line-oriented trace format.
pub fn write_trace(steps: &[DerivationStep]) -> String {
    let mut out = String::new();
    for step in steps {
        let parents = step.rule.parents();
        let parents_txt = if parents.is_empty() {
            "-".to_string()
        } else {
            parents
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let lits = step
            .clause
            .literals()
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(
            out,
            "{} {} {} {}",
            step.id,
            step.rule.name(),
            parents_txt,
            lits
        )
        .unwrap();
    }
    out
}

/// Emits the refutation DAG in DOT format: one node per step labeled with
/// the clause, one edge per parent labeled with the rule name, nodes in
/// ascending id order.
pub fn export_derivation_dag(verdict: &Verdict) -> Result<String, TraceError> {
    let trace = match verdict {
        Verdict::Refuted { trace, .. } => trace,
        Verdict::Saturated { .. } => return Err(TraceError::NotRefuted),
    };
    let mut out = String::new();
    out.push_str("digraph derivation {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [shape=box];\n");
    for step in trace {
        writeln!(out, "  n{} [label=\"{}\"];", step.id, step.clause).unwrap();
    }
    for step in trace {
        for parent in step.rule.parents() {
            writeln!(
                out,
                "  n{} -> n{} [label=\"{}\"];",
                parent,
                step.id,
                step.rule.name()
            )
            .unwrap();
        }
    }
    out.push_str("}\n");
    Ok(out)
}
