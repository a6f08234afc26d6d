//! Counterexample mining: hunt for instances that are unsatisfiable by
//! ground truth yet saturate without a contradicting unit pair, then shrink
//! them to 1-minimal form.

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{saturate, EngineOptions, EngineStats};
use crate::harness::{gen_random, GenConfig, HarnessError};
use crate::instance::Instance;
use crate::oracle::{solve_dpll, Status};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MineParams {
    /// Inclusive variable range; candidate i uses n = lo + (i mod span).
    pub n_lo: u32,
    pub n_hi: u32,
    /// Clauses per variable; m = round(density * n).
    pub density: f64,
    pub seed_start: u64,
    pub budget: u64,
    /// Also run the width-4 reduction variant on the minimized instance and
    /// record whether it refutes.
    pub probe_width4: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinedCounterexample {
    pub seed: u64,
    pub n: u32,
    pub m_original: u32,
    pub m_minimized: u32,
    #[serde(skip)]
    pub original: Instance,
    #[serde(skip)]
    pub minimized: Instance,
    /// Saturation stats on the minimized instance.
    pub engine_stats: EngineStats,
    pub oracle_status: &'static str,
    pub oracle_nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width4_variant_refutes: Option<bool>,
}

impl MinedCounterexample {
    /// The JSON sidecar persisted next to the DIMACS file.
    pub fn sidecar_json(&self) -> serde_json::Value {
        serde_json::json!({
            "seed": self.seed,
            "n": self.n,
            "m": self.m_minimized,
            "m_original": self.m_original,
            "engine_stats": self.engine_stats,
            "oracle_status": self.oracle_status,
            "width4_variant_refutes": self.width4_variant_refutes,
        })
    }
}

#[derive(Debug, Clone)]
pub enum MineOutcome {
    Found(Box<MinedCounterexample>),
    NotFound { attempts: u64 },
}

/// True iff DPLL says unsat while default saturation says saturated.
pub fn is_counterexample(inst: &Instance) -> Result<bool, HarnessError> {
    if solve_dpll(inst).status.is_sat() {
        return Ok(false);
    }
    let verdict = saturate(inst, &EngineOptions::default())?;
    Ok(!verdict.is_refuted())
}

/// Scans seeds `seed_start..seed_start + budget` in order and returns the
/// first counterexample, minimized and re-verified. Candidates are checked
/// in parallel; the reported one is still the first in seed order.
pub fn mine_counterexample(params: &MineParams) -> Result<MineOutcome, HarnessError> {
    if params.n_lo < 3 || params.n_hi < params.n_lo {
        return Err(HarnessError::BadParams(format!(
            "bad variable range {}..{}",
            params.n_lo, params.n_hi
        )));
    }
    if !params.density.is_finite() || params.density <= 0.0 {
        return Err(HarnessError::BadParams(format!(
            "bad density {}",
            params.density
        )));
    }
    let span = (params.n_hi - params.n_lo + 1) as u64;
    let candidate = |i: u64| -> GenConfig {
        let n = params.n_lo + (i % span) as u32;
        let m = (params.density * n as f64).round() as u32;
        GenConfig {
            n_vars: n,
            n_clauses: m,
            seed: params.seed_start + i,
        }
    };

    let found: Option<Result<u64, HarnessError>> = (0..params.budget)
        .into_par_iter()
        .map(|i| {
            (
                i,
                gen_random(&candidate(i)).and_then(|inst| is_counterexample(&inst)),
            )
        })
        .find_first(|(_, r)| !matches!(r, Ok(false)))
        .map(|(i, r)| r.map(|_| i));
    let Some(found) = found else {
        return Ok(MineOutcome::NotFound {
            attempts: params.budget,
        });
    };
    let index = found?;

    let cfg = candidate(index);
    let original = gen_random(&cfg)?;
    let minimized = minimize(&original)?;

    // Re-verify the minimized artifact with both deciders before reporting.
    let oracle = solve_dpll(&minimized);
    assert_eq!(
        oracle.status,
        Status::Unsat,
        "minimizer must preserve unsatisfiability"
    );
    let verdict = saturate(&minimized, &EngineOptions::default())?;
    assert!(!verdict.is_refuted(), "minimizer must preserve saturation");

    let width4_variant_refutes = if params.probe_width4 {
        let opts = EngineOptions {
            reduce_width4: true,
            ..EngineOptions::default()
        };
        Some(saturate(&minimized, &opts)?.is_refuted())
    } else {
        None
    };

    Ok(MineOutcome::Found(Box::new(MinedCounterexample {
        seed: cfg.seed,
        n: cfg.n_vars,
        m_original: original.len() as u32,
        m_minimized: minimized.len() as u32,
        original,
        minimized,
        engine_stats: *verdict.stats(),
        oracle_status: "unsat",
        oracle_nodes: oracle.nodes_explored,
        width4_variant_refutes,
    })))
}

/// Greedy clause-removal fixpoint preserving the counterexample property.
/// The final sweep tries every single removal against the final set, so the
/// output is 1-minimal by construction.
pub fn minimize(inst: &Instance) -> Result<Instance, HarnessError> {
    if !is_counterexample(inst)? {
        return Err(HarnessError::NotACounterexample);
    }
    let mut current = inst.clone();
    loop {
        let mut removed_any = false;
        let mut i = 0;
        while i < current.len() {
            let candidate = current.without_clause(i);
            if is_counterexample(&candidate)? {
                current = candidate;
                removed_any = true;
            } else {
                i += 1;
            }
        }
        if !removed_any {
            return Ok(current);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_budget_finds_nothing() {
        let params = MineParams {
            n_lo: 10,
            n_hi: 12,
            density: 4.27,
            seed_start: 1,
            budget: 0,
            probe_width4: false,
        };
        assert!(matches!(
            mine_counterexample(&params).unwrap(),
            MineOutcome::NotFound { attempts: 0 }
        ));
    }

    #[test]
    fn minimize_rejects_non_counterexamples() {
        let sat = gen_random(&GenConfig {
            n_vars: 5,
            n_clauses: 1,
            seed: 3,
        })
        .unwrap();
        assert_eq!(
            minimize(&sat).unwrap_err(),
            HarnessError::NotACounterexample
        );
    }

    #[test]
    fn mining_is_deterministic_and_verified() {
        let params = MineParams {
            n_lo: 10,
            n_hi: 12,
            density: 4.27,
            seed_start: 1,
            budget: 64,
            probe_width4: false,
        };
        let a = mine_counterexample(&params).unwrap();
        let b = mine_counterexample(&params).unwrap();
        match (&a, &b) {
            (MineOutcome::Found(x), MineOutcome::Found(y)) => {
                assert_eq!(x.seed, y.seed);
                assert_eq!(x.minimized, y.minimized);
                // 1-minimality audit: no single removal stays a counterexample.
                for i in 0..x.minimized.len() {
                    assert!(!is_counterexample(&x.minimized.without_clause(i)).unwrap());
                }
            }
            (MineOutcome::NotFound { attempts: x }, MineOutcome::NotFound { attempts: y }) => {
                assert_eq!(x, y);
            }
            _ => panic!("outcomes differ between identical runs"),
        }
    }

    #[test]
    fn duplicated_clause_is_removed_by_minimization() {
        // The parity instance is a known counterexample and already
        // 1-minimal; doubling a clause must shrink straight back.
        let text = include_str!("../../tests/data/parity_k4.cnf");
        let parity = crate::io::parse_dimacs(text).unwrap().instance;
        assert!(is_counterexample(&parity).unwrap());
        let mut clauses = parity.clauses().to_vec();
        clauses.push(clauses[0].clone());
        let doubled = Instance::new(parity.n_vars(), clauses).unwrap();
        let shrunk = minimize(&doubled).unwrap();
        assert_eq!(shrunk.len(), parity.len());
    }
}
