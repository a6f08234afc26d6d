//! Database-bound measurement: saturate random instances per variable count
//! and record peak database size against the hard cap.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::db::db_bound;
use crate::engine::{saturate, EngineOptions};
use crate::harness::{gen_random, GenConfig, HarnessError};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: u32,
    pub seed: u64,
    pub m: u32,
    pub verdict: &'static str,
    pub passes: u64,
    pub resolutions_attempted: u64,
    pub db_size: u64,
    pub db_bound: u64,
    pub ratio: f64,
    pub wall_time_ms: f64,
}

/// One saturation run per (n, seed) at the given density. The db_size /
/// bound ratio is checked hard; everything else is measurement.
pub fn bench_bounds(
    n_list: &[u32],
    seeds: &[u64],
    density: f64,
) -> Result<Vec<BenchRow>, HarnessError> {
    if !density.is_finite() || density <= 0.0 {
        return Err(HarnessError::BadParams(format!("bad density {density}")));
    }
    let cells: Vec<(u32, u64)> = n_list
        .iter()
        .flat_map(|&n| seeds.iter().map(move |&s| (n, s)))
        .collect();
    let rows: Vec<Result<BenchRow, HarnessError>> = cells
        .par_iter()
        .map(|&(n, seed)| {
            let m = (density * n as f64).round() as u32;
            let inst = gen_random(&GenConfig {
                n_vars: n,
                n_clauses: m,
                seed,
            })?;
            let start = Instant::now();
            let verdict = saturate(&inst, &EngineOptions::default())?;
            let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            let stats = verdict.stats();
            let bound = db_bound(n as u64);
            let ratio = stats.db_size as f64 / bound as f64;
            assert!(
                ratio <= 1.0,
                "database bound violated: {} > {bound}",
                stats.db_size
            );
            Ok(BenchRow {
                n,
                seed,
                m,
                verdict: verdict.kind_str(),
                passes: stats.passes,
                resolutions_attempted: stats.resolutions_attempted,
                db_size: stats.db_size,
                db_bound: bound,
                ratio,
                wall_time_ms,
            })
        })
        .collect();
    rows.into_iter().collect()
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "n,seed,m,verdict,passes,resolutions_attempted,db_size,db_bound,ratio,wall_time_ms\n",
    );
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{:.6},{:.3}",
            r.n,
            r.seed,
            r.m,
            r.verdict,
            r.passes,
            r.resolutions_attempted,
            r.db_size,
            r.db_bound,
            r.ratio,
            r.wall_time_ms
        )
        .unwrap();
    }
    out
}
