//! Randomized experiments: engine-versus-oracle comparison, counterexample
//! mining and minimization, derivation-rearrangement shape checks, and
//! database-bound measurement.
//!
//! Every operation here is a pure function of its configuration, seeds
//! included. Work may fan out across threads, but results are always merged
//! in seed order, so reports are reproducible byte for byte (wall-clock
//! measurements excepted).

mod bench;
mod compare;
mod lemmas;
mod mine;

pub use bench::{bench_bounds, bench_csv, BenchRow};
pub use compare::{compare, CompareAggregate, CompareRow, ComparisonReport};
pub use lemmas::{
    check_lemma_shape, sample_lemma_premise, FailureWitness, LemmaId, LemmaSample, LemmaShapeReport,
};
pub use mine::{
    is_counterexample, mine_counterexample, minimize, MineOutcome, MineParams, MinedCounterexample,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::clause::Literal;
use crate::engine::EngineError;
use crate::instance::Instance;
use crate::oracle::OracleError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("bad generator config: {0}")]
    BadConfig(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("instance too large for the oracle: {0}")]
    OracleTooLarge(#[from] OracleError),
    #[error("input is not a counterexample (need oracle unsat and engine saturated)")]
    NotACounterexample,
    #[error(
        "soundness violation: engine refuted a satisfiable instance (seed {seed}, n {n}, m {m})"
    )]
    SoundnessViolation { seed: u64, n: u32, m: u32 },
    #[error("refutation trace failed its replay check (seed {seed}, n {n}, m {m})")]
    TraceCheckFailure { seed: u64, n: u32, m: u32 },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Configuration for the random width-3 instance generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub n_vars: u32,
    pub n_clauses: u32,
    pub seed: u64,
}

/// Generates `n_clauses` clauses of exactly 3 distinct variables drawn
/// uniformly without replacement, each polarity a fair coin, from a ChaCha8
/// stream keyed by the 64-bit seed. Clauses may repeat across the instance.
pub fn gen_random(cfg: &GenConfig) -> Result<Instance, HarnessError> {
    if cfg.n_vars < 3 {
        return Err(HarnessError::BadConfig(format!(
            "need at least 3 variables, got {}",
            cfg.n_vars
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut clauses = Vec::with_capacity(cfg.n_clauses as usize);
    for _ in 0..cfg.n_clauses {
        let mut vars = [0u32; 3];
        for i in 0..3 {
            loop {
                let v = rng.gen_range(1..=cfg.n_vars);
                if !vars[..i].contains(&v) {
                    vars[i] = v;
                    break;
                }
            }
        }
        let lits: Vec<Literal> = vars
            .iter()
            .map(|&v| {
                if rng.gen::<bool>() {
                    Literal::positive(v)
                } else {
                    Literal::negated(v)
                }
            })
            .collect();
        clauses.push(
            crate::clause::Clause::canonicalize(&lits)
                .expect("nonempty")
                .expect_clause(),
        );
    }
    Ok(Instance::new(cfg.n_vars, clauses).expect("vars within range"))
}

/// Per-trial seed derivation (splitmix64 over the base seed and index);
/// stable, so any sampled object can be regenerated from its trial seed.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed.wrapping_add(trial.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{solve_enumerate, Status};

    #[test]
    fn zero_clauses_is_an_empty_instance() {
        let inst = gen_random(&GenConfig {
            n_vars: 3,
            n_clauses: 0,
            seed: 7,
        })
        .unwrap();
        assert!(inst.is_empty());
        assert_eq!(inst.n_vars(), 3);
    }

    #[test]
    fn identical_configs_generate_identical_instances() {
        let cfg = GenConfig {
            n_vars: 10,
            n_clauses: 43,
            seed: 1,
        };
        let a = gen_random(&cfg).unwrap();
        let b = gen_random(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 43);
    }

    #[test]
    fn too_few_variables_is_a_bad_config() {
        assert!(matches!(
            gen_random(&GenConfig {
                n_vars: 2,
                n_clauses: 1,
                seed: 0
            }),
            Err(HarnessError::BadConfig(_))
        ));
    }

    #[test]
    fn generated_clauses_are_width_three_and_tautology_free() {
        let inst = gen_random(&GenConfig {
            n_vars: 6,
            n_clauses: 100,
            seed: 99,
        })
        .unwrap();
        assert!(inst.clauses().iter().all(|c| c.width() == 3));
    }

    #[test]
    fn near_threshold_density_mixes_sat_and_unsat() {
        // m/n = 4.27 at n = 12 over 1000 instances: the unsat fraction must
        // land strictly inside (0, 1); the observed count goes into the
        // assertion message for the record.
        use rayon::prelude::*;
        let unsat: u32 = (0..1000u64)
            .into_par_iter()
            .map(|seed| {
                let inst = gen_random(&GenConfig {
                    n_vars: 12,
                    n_clauses: 51,
                    seed,
                })
                .unwrap();
                match solve_enumerate(&inst).unwrap().status {
                    Status::Sat(_) => 0,
                    Status::Unsat => 1,
                }
            })
            .sum();
        assert!(
            unsat > 0 && unsat < 1000,
            "observed unsat fraction {unsat}/1000"
        );
    }
}
