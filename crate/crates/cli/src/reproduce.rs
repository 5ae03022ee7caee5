//! The built-in benchmark pipeline: measures every simulated procedure on
//! its default grid, fits time and hardware exponents, applies the
//! significance criterion against the plain-search baselines, and runs
//! the processor-count sweep for partitioned search.

use std::fmt::Write as _;

use anyhow::Context;
use qsearch_core::{
    analytic_entry, evaluate_significance, AlgorithmId, Metric, Promise, RunConfig, ScalingFit,
    SignificanceVerdict, DEFAULT_SIGNIFICANCE_MARGIN,
};
use serde_json::json;

use crate::experiment::ExperimentConfig;
use crate::records::fit_records;

/// Default grid for collision-problem runs: 2^9 .. 2^18.
pub fn collision_grid() -> Vec<u64> {
    (9..=18).map(|k| 1u64 << k).collect()
}

/// Default grid for distinctness runs (the two-level search is costlier):
/// 2^8 .. 2^16.
pub fn distinctness_grid() -> Vec<u64> {
    (8..=16).map(|k| 1u64 << k).collect()
}

pub struct VerdictRow {
    pub label: String,
    pub time_exponent: f64,
    pub verdict: Option<SignificanceVerdict>,
}

pub struct ParallelRow {
    pub processors: u64,
    pub mean_wall: f64,
    pub speedup: f64,
    pub ratio_to_sqrt_p: f64,
}

pub struct Reproduction {
    pub rows: Vec<VerdictRow>,
    pub parallel_n: u64,
    pub parallel: Vec<ParallelRow>,
}

fn experiment(algorithm: AlgorithmId, grid: Vec<u64>, trials: u64, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        algorithm,
        n_grid: grid,
        trials,
        master_seed: seed,
        promise: Promise::TwoToOne,
        planted_pairs: 1,
        marked_count: 1,
        processors: 1,
        run: RunConfig::default(),
    }
}

fn measure_fits(
    algorithm: AlgorithmId,
    grid: Vec<u64>,
    trials: u64,
    seed: u64,
) -> anyhow::Result<(ScalingFit, ScalingFit)> {
    let records = experiment(algorithm, grid, trials, seed)
        .execute()
        .with_context(|| format!("measuring {algorithm}"))?;
    let time = fit_records(&records, algorithm, Metric::TimeSteps)?;
    let hardware = fit_records(&records, algorithm, Metric::Hardware)?;
    Ok((time, hardware))
}

pub fn run(seed: u64, trials: u64, parallel_trials: u64) -> anyhow::Result<Reproduction> {
    let margin = DEFAULT_SIGNIFICANCE_MARGIN;

    // Plain-search baselines on the two problems.
    let (naive_coll_time, _) =
        measure_fits(AlgorithmId::NaiveCollision, collision_grid(), trials, seed)?;
    let (naive_dist_time, _) = measure_fits(
        AlgorithmId::NaiveDistinctness,
        distinctness_grid(),
        trials,
        seed,
    )?;

    // The structured algorithms.
    let (bht_time, bht_hw) =
        measure_fits(AlgorithmId::BhtCollision, collision_grid(), trials, seed)?;
    let (two_time, two_hw) = measure_fits(
        AlgorithmId::TwoLevelDistinctness,
        distinctness_grid(),
        trials,
        seed,
    )?;

    let bht_verdict = evaluate_significance(
        AlgorithmId::BhtCollision.name(),
        &bht_time,
        &bht_hw,
        &naive_coll_time,
        margin,
    )?;
    let two_verdict = evaluate_significance(
        AlgorithmId::TwoLevelDistinctness.name(),
        &two_time,
        &two_hw,
        &naive_dist_time,
        margin,
    )?;

    // Walk-based distinctness entry, by its stated costs only.
    let ambainis = analytic_entry("ambainis (analytic)", 2.0 / 3.0, 2.0 / 3.0);
    let plain_search = analytic_entry("plain-search (analytic)", 1.0, 0.0);
    let ambainis_verdict = evaluate_significance(
        &ambainis.name,
        &ambainis.time,
        &ambainis.hardware,
        &plain_search.time,
        margin,
    )?;

    let rows = vec![
        VerdictRow {
            label: format!("{} (baseline)", AlgorithmId::NaiveCollision),
            time_exponent: naive_coll_time.exponent,
            verdict: None,
        },
        VerdictRow {
            label: format!("{} (baseline)", AlgorithmId::NaiveDistinctness),
            time_exponent: naive_dist_time.exponent,
            verdict: None,
        },
        VerdictRow {
            label: AlgorithmId::BhtCollision.name().to_string(),
            time_exponent: bht_time.exponent,
            verdict: Some(bht_verdict),
        },
        VerdictRow {
            label: AlgorithmId::TwoLevelDistinctness.name().to_string(),
            time_exponent: two_time.exponent,
            verdict: Some(two_verdict),
        },
        VerdictRow {
            label: ambainis.name.clone(),
            time_exponent: ambainis.time.exponent,
            verdict: Some(ambainis_verdict),
        },
    ];

    // Processor sweep at fixed size, one marked item.
    let parallel_n = 1u64 << 16;
    let mut walls = Vec::new();
    for processors in [1u64, 4, 16, 64] {
        let mut cfg = experiment(
            AlgorithmId::ParallelSearch,
            vec![parallel_n],
            parallel_trials,
            seed,
        );
        cfg.processors = processors;
        let records = cfg.execute()?;
        let mean_wall = records
            .iter()
            .map(|r| r.ledger.time_steps() as f64)
            .sum::<f64>()
            / records.len() as f64;
        walls.push((processors, mean_wall));
    }
    let base_wall = walls[0].1;
    let parallel = walls
        .into_iter()
        .skip(1)
        .map(|(processors, mean_wall)| {
            let speedup = base_wall / mean_wall;
            ParallelRow {
                processors,
                mean_wall,
                speedup,
                ratio_to_sqrt_p: speedup / (processors as f64).sqrt(),
            }
        })
        .collect();

    Ok(Reproduction {
        rows,
        parallel_n,
        parallel,
    })
}

impl Reproduction {
    /// Fixed-precision table, one line per algorithm plus the sweep.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<34} {:>8} {:>10} {:>9} {:>11}  verdict",
            "algorithm", "time", "hardware", "speedup", "threshold"
        );
        for row in &self.rows {
            match &row.verdict {
                Some(v) => {
                    let _ = writeln!(
                        out,
                        "{:<34} {:>8.4} {:>10.4} {:>9.4} {:>11.4}  {}",
                        row.label,
                        row.time_exponent,
                        v.hardware_exponent,
                        v.speedup_exponent,
                        v.threshold,
                        if v.significant {
                            "SIGNIFICANT"
                        } else {
                            "not significant"
                        }
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "{:<34} {:>8.4} {:>10} {:>9} {:>11}  -",
                        row.label, row.time_exponent, "-", "-", "-"
                    );
                }
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "partitioned search at n={}, one marked item:",
            self.parallel_n
        );
        let _ = writeln!(
            out,
            "{:<6} {:>12} {:>9} {:>9} {:>9}",
            "procs", "mean wall", "speedup", "sqrt(P)", "ratio"
        );
        for p in &self.parallel {
            let _ = writeln!(
                out,
                "{:<6} {:>12.4} {:>9.4} {:>9.4} {:>9.4}",
                p.processors,
                p.mean_wall,
                p.speedup,
                (p.processors as f64).sqrt(),
                p.ratio_to_sqrt_p
            );
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "verdicts": self.rows.iter().map(|r| json!({
                "algorithm": r.label,
                "time_exponent": r.time_exponent,
                "verdict": r.verdict,
            })).collect::<Vec<_>>(),
            "parallel": {
                "n": self.parallel_n,
                "rows": self.parallel.iter().map(|p| json!({
                    "processors": p.processors,
                    "mean_wall": p.mean_wall,
                    "speedup": p.speedup,
                    "ratio_to_sqrt_p": p.ratio_to_sqrt_p,
                })).collect::<Vec<_>>(),
            },
        })
    }
}
