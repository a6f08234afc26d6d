//! Engine-versus-oracle comparison over seeded random instances.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::db::db_bound;
use crate::engine::{saturate, EngineOptions, Verdict};
use crate::harness::{gen_random, GenConfig, HarnessError};
use crate::oracle::solve_enumerate;
use crate::trace::check_trace;

/// One instance's outcome. `agree` is false exactly when the engine
/// saturated on an unsatisfiable instance.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub seed: u64,
    pub n: u32,
    pub m: u32,
    pub oracle_status: &'static str,
    pub engine_verdict: &'static str,
    pub agree: bool,
    pub engine_passes: u64,
    pub db_size: u64,
    pub db_bound: u64,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CompareAggregate {
    pub agree_sat: u64,
    pub agree_unsat: u64,
    /// Engine saturated, oracle unsat: the completeness claim failing.
    pub disagreements: u64,
    /// Engine refuted, oracle sat. Always zero in a returned report; a
    /// nonzero count aborts the run instead.
    pub soundness_violations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<CompareRow>,
    pub aggregate: CompareAggregate,
}

impl ComparisonReport {
    /// CSV with the documented header; RFC 4180 quoting is unnecessary
    /// because no field contains separators.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "seed,n,m,oracle_status,engine_verdict,agree,engine_passes,db_size,wall_time_ms\n",
        );
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{:.3}",
                r.seed,
                r.n,
                r.m,
                r.oracle_status,
                r.engine_verdict,
                r.agree,
                r.engine_passes,
                r.db_size,
                r.wall_time_ms
            )
            .unwrap();
        }
        out
    }

    /// The same CSV with the wall-time column dropped; byte-identical
    /// across reruns of the same configs.
    pub fn to_csv_deterministic(&self) -> String {
        let mut out =
            String::from("seed,n,m,oracle_status,engine_verdict,agree,engine_passes,db_size\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.seed,
                r.n,
                r.m,
                r.oracle_status,
                r.engine_verdict,
                r.agree,
                r.engine_passes,
                r.db_size
            )
            .unwrap();
        }
        out
    }

    pub fn summary_line(&self) -> String {
        let a = &self.aggregate;
        format!(
            "instances={} agree_sat={} agree_unsat={} disagreements={} soundness_violations={}",
            self.rows.len(),
            a.agree_sat,
            a.agree_unsat,
            a.disagreements,
            a.soundness_violations
        )
    }
}

/// Runs engine and enumeration oracle on every config. Fatal on a soundness
/// violation (engine refuted, oracle sat) and on any refutation whose trace
/// fails its replay check; instances are processed in parallel and merged
/// in input order.
pub fn compare(cfgs: &[GenConfig]) -> Result<ComparisonReport, HarnessError> {
    let results: Vec<Result<CompareRow, HarnessError>> = cfgs.par_iter().map(compare_one).collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut aggregate = CompareAggregate::default();
    for result in results {
        let row = result?;
        match (row.oracle_status, row.engine_verdict) {
            ("sat", "saturated") => aggregate.agree_sat += 1,
            ("unsat", "refuted") => aggregate.agree_unsat += 1,
            ("unsat", "saturated") => aggregate.disagreements += 1,
            _ => unreachable!("refuted-sat rows abort before reaching here"),
        }
        rows.push(row);
    }
    Ok(ComparisonReport { rows, aggregate })
}

fn compare_one(cfg: &GenConfig) -> Result<CompareRow, HarnessError> {
    let inst = gen_random(cfg)?;
    let start = Instant::now();
    let verdict = saturate(&inst, &EngineOptions::default())?;
    let oracle = solve_enumerate(&inst)?;
    if let Verdict::Refuted { .. } = &verdict {
        if oracle.status.is_sat() {
            return Err(HarnessError::SoundnessViolation {
                seed: cfg.seed,
                n: cfg.n_vars,
                m: cfg.n_clauses,
            });
        }
        let report = check_trace(&inst, &verdict).expect("refuted verdict");
        if !report.is_pass() {
            return Err(HarnessError::TraceCheckFailure {
                seed: cfg.seed,
                n: cfg.n_vars,
                m: cfg.n_clauses,
            });
        }
    }
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let stats = verdict.stats();
    Ok(CompareRow {
        seed: cfg.seed,
        n: cfg.n_vars,
        m: cfg.n_clauses,
        oracle_status: if oracle.status.is_sat() {
            "sat"
        } else {
            "unsat"
        },
        engine_verdict: verdict.kind_str(),
        agree: oracle.status.is_sat() != verdict.is_refuted(),
        engine_passes: stats.passes,
        db_size: stats.db_size,
        db_bound: db_bound(cfg.n_vars as u64),
        wall_time_ms,
    })
}
