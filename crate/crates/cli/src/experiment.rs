//! Deterministic trial execution: a config names an algorithm and an
//! n-grid; every trial derives its instance and run seeds from the master
//! seed, so record streams are byte-reproducible.

use anyhow::Context;
use qsearch_core::{
    collision_range, derive_seed, distinctness_range, gen_distinctness_instance, gen_one_to_one,
    gen_two_to_one, parallel_search, run_algorithm, trial_seed, AlgorithmId, Promise, RunConfig,
    RunReport,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::CliError;

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmId,
    pub n_grid: Vec<u64>,
    pub trials: u64,
    pub master_seed: u64,
    /// Promise used for collision-problem instances.
    pub promise: Promise,
    /// Planted collision pairs for distinctness instances.
    pub planted_pairs: u64,
    /// Marked items for parallel search spaces.
    pub marked_count: u64,
    pub processors: u64,
    pub run: RunConfig,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if self.n_grid.is_empty() {
            return usage("the size grid is empty".into());
        }
        if !self.n_grid.windows(2).all(|w| w[0] < w[1]) {
            return usage("the size grid must be strictly ascending".into());
        }
        if self.trials == 0 {
            return usage("at least one trial per size is required".into());
        }
        for &n in &self.n_grid {
            if n == 0 {
                return usage("sizes must be positive".into());
            }
            match self.algorithm {
                AlgorithmId::NaiveCollision
                | AlgorithmId::ClassicalBirthday
                | AlgorithmId::BhtCollision => {
                    if self.promise == Promise::TwoToOne && n % 2 != 0 {
                        return usage(format!("two-to-one instances need even n, got {n}"));
                    }
                }
                AlgorithmId::ClassicalSortDistinctness
                | AlgorithmId::NaiveDistinctness
                | AlgorithmId::TwoLevelDistinctness => {
                    if 2 * self.planted_pairs > n {
                        return usage(format!(
                            "cannot plant {} pairs in a domain of {n}",
                            self.planted_pairs
                        ));
                    }
                }
                AlgorithmId::ParallelSearch => {
                    if self.processors == 0 || self.processors > n {
                        return usage(format!(
                            "processor count {} must lie in 1..={n}",
                            self.processors
                        ));
                    }
                    if self.marked_count > n {
                        return usage(format!("marked count {} exceeds n={n}", self.marked_count));
                    }
                }
            }
        }
        Ok(())
    }

    /// Runs every (n, trial) cell in deterministic order.
    pub fn execute(&self) -> anyhow::Result<Vec<RunReport>> {
        let mut records = Vec::with_capacity(self.n_grid.len() * self.trials as usize);
        for &n in &self.n_grid {
            for trial in 0..self.trials {
                records.push(self.run_one(n, trial)?);
            }
        }
        Ok(records)
    }

    fn run_one(&self, n: u64, trial: u64) -> anyhow::Result<RunReport> {
        let ts = trial_seed(self.master_seed, self.algorithm.name(), n, trial);
        let instance_seed = derive_seed(ts, 0);
        let run_seed = derive_seed(ts, 1);
        let ctx = || format!("{} at n={n}, trial {trial}", self.algorithm);

        let report = match self.algorithm {
            AlgorithmId::NaiveCollision
            | AlgorithmId::ClassicalBirthday
            | AlgorithmId::BhtCollision => {
                let instance = match self.promise {
                    Promise::TwoToOne => gen_two_to_one(n, collision_range(n), instance_seed),
                    Promise::OneToOne => gen_one_to_one(n, collision_range(n), instance_seed),
                    Promise::Arbitrary => unreachable!("validated"),
                }
                .with_context(ctx)?;
                run_algorithm(self.algorithm, &instance, run_seed, &self.run).with_context(ctx)?
            }
            AlgorithmId::ClassicalSortDistinctness
            | AlgorithmId::NaiveDistinctness
            | AlgorithmId::TwoLevelDistinctness => {
                let instance = gen_distinctness_instance(
                    n,
                    self.planted_pairs,
                    distinctness_range(n),
                    instance_seed,
                )
                .with_context(ctx)?;
                run_algorithm(self.algorithm, &instance, run_seed, &self.run).with_context(ctx)?
            }
            AlgorithmId::ParallelSearch => {
                let mut rng = ChaCha8Rng::seed_from_u64(instance_seed);
                let marked: Vec<u64> =
                    rand::seq::index::sample(&mut rng, n as usize, self.marked_count as usize)
                        .into_iter()
                        .map(|i| i as u64)
                        .collect();
                parallel_search(n, &marked, self.processors, run_seed, &self.run)
                    .with_context(ctx)?
            }
        };
        Ok(report)
    }
}
