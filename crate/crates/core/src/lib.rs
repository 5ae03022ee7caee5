//! Simulation workbench for query-counted search algorithms.
//!
//! The crate provides:
//!
//! - black-box promise-problem instances behind query-counting oracles
//!   ([`instances`]);
//! - exact amplitude-amplification dynamics in the 2D invariant subspace,
//!   including the exponential-growth driver for unknown marked counts
//!   ([`engine`]);
//! - the end-to-end collision / element-distinctness / partitioned-search
//!   procedures ([`algorithms`]);
//! - resource ledgers, log-log scaling fits, and the significance
//!   criterion that compares an algorithm's speedup over plain search
//!   against the square root of the hardware it consumes
//!   ([`accounting`]).

pub mod accounting;
pub mod algorithms;
pub mod engine;
pub mod error;
pub mod instances;
pub mod pairs;
pub mod seed;

pub use accounting::{
    analytic_entry, evaluate_significance, fit_exponent, AnalyticEntry, Metric, ResourceLedger,
    ScalingFit, SignificanceVerdict, DEFAULT_SIGNIFICANCE_MARGIN,
};
pub use algorithms::{
    bht_collision, classical_birthday, classical_sort_distinctness, naive_collision,
    naive_distinctness, parallel_search, run_algorithm, two_level_distinctness, AlgorithmId,
    RunConfig, RunReport,
};
pub use engine::{
    plan_grover, run_bbht, run_grover, success_probability, BbhtConfig, FnSpace, GroverPlan,
    MarkedSet, SearchOutcome, SearchSpace, TruthSpace,
};
pub use error::{Error, Result};
pub use instances::{
    collision_range, distinctness_range, gen_distinctness_instance, gen_one_to_one, gen_two_to_one,
    verify_answer, Answer, CountingOracle, FunctionInstance, Promise,
};
pub use seed::{derive_seed, trial_seed};
