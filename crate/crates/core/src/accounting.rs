//! Resource accounting: per-run ledgers, log-log scaling fits, and the
//! parallel-search significance criterion.
//!
//! The cost convention is deliberately coarse so that fitted exponents are
//! not contaminated by logarithmic factors: one time step per oracle query,
//! one per amplification iteration, one per table lookup or comparison, and
//! K steps to sort K items. Hardware pools processors and peak memory
//! registers into a single count.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tie tolerance for exponent comparisons in verdicts. A speedup that
/// matches the threshold up to representation error must not count as
/// beating it.
const EXPONENT_TIE_EPS: f64 = 1e-12;

/// Default slack added to the significance threshold to absorb finite-size
/// fit error on desk-scale grids.
pub const DEFAULT_SIGNIFICANCE_MARGIN: f64 = 0.03;

/// Queries, time steps, peak memory registers, and processors consumed by
/// one run.
///
/// Queries and time steps accumulate; memory registers and processors are
/// peak-simultaneous values updated by max. Charging takes `&self` so a
/// counting oracle and the search engine can share one ledger; counters
/// are relaxed atomics, and a ledger is still single-owner per trial.
#[derive(Debug, Serialize, Deserialize)]
pub struct ResourceLedger {
    queries: AtomicU64,
    time_steps: AtomicU64,
    memory_registers: AtomicU64,
    processors: AtomicU64,
}

impl Default for ResourceLedger {
    fn default() -> Self {
        ResourceLedger {
            queries: AtomicU64::new(0),
            time_steps: AtomicU64::new(0),
            memory_registers: AtomicU64::new(0),
            processors: AtomicU64::new(1),
        }
    }
}

impl Clone for ResourceLedger {
    fn clone(&self) -> Self {
        let out = ResourceLedger::new();
        out.queries.store(self.queries(), Ordering::Relaxed);
        out.time_steps.store(self.time_steps(), Ordering::Relaxed);
        out.memory_registers
            .store(self.memory_registers(), Ordering::Relaxed);
        out.processors.store(self.processors(), Ordering::Relaxed);
        out
    }
}

impl PartialEq for ResourceLedger {
    fn eq(&self, other: &Self) -> bool {
        self.queries() == other.queries()
            && self.time_steps() == other.time_steps()
            && self.memory_registers() == other.memory_registers()
            && self.processors() == other.processors()
    }
}

impl Eq for ResourceLedger {}

impl ResourceLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds queries/steps and raises the memory/processor peaks.
    pub fn charge(&self, queries: u64, steps: u64, memory_peak: u64, processors: u64) {
        self.add_queries(queries);
        self.add_steps(steps);
        self.note_memory(memory_peak);
        self.note_processors(processors);
    }

    pub fn add_queries(&self, delta: u64) {
        self.queries.fetch_add(delta, Ordering::Relaxed);
    }

    pub fn add_steps(&self, delta: u64) {
        self.time_steps.fetch_add(delta, Ordering::Relaxed);
    }

    /// Peak update: records `registers` if it exceeds the current peak.
    pub fn note_memory(&self, registers: u64) {
        self.memory_registers
            .fetch_max(registers, Ordering::Relaxed);
    }

    /// Peak update: records `count` if it exceeds the current processor count.
    pub fn note_processors(&self, count: u64) {
        self.processors.fetch_max(count, Ordering::Relaxed);
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    pub fn time_steps(&self) -> u64 {
        self.time_steps.load(Ordering::Relaxed)
    }

    pub fn memory_registers(&self) -> u64 {
        self.memory_registers.load(Ordering::Relaxed)
    }

    pub fn processors(&self) -> u64 {
        self.processors.load(Ordering::Relaxed)
    }

    /// Pooled hardware: processors plus peak memory registers.
    pub fn hardware(&self) -> u64 {
        self.processors() + self.memory_registers()
    }

    /// Field-wise merge of two trial ledgers: (sum, sum, max, max).
    pub fn merged(&self, other: &ResourceLedger) -> ResourceLedger {
        let out = ResourceLedger::new();
        out.queries
            .store(self.queries() + other.queries(), Ordering::Relaxed);
        out.time_steps
            .store(self.time_steps() + other.time_steps(), Ordering::Relaxed);
        out.memory_registers.store(
            self.memory_registers().max(other.memory_registers()),
            Ordering::Relaxed,
        );
        out.processors
            .store(self.processors().max(other.processors()), Ordering::Relaxed);
        out
    }

    /// Value of one metric under this ledger.
    pub fn metric(&self, metric: Metric) -> u64 {
        match metric {
            Metric::Queries => self.queries(),
            Metric::TimeSteps | Metric::WallTime => self.time_steps(),
            Metric::Hardware => self.hardware(),
        }
    }
}

/// Which ledger quantity a fit describes. `WallTime` reads the same field
/// as `TimeSteps`; for parallel runs that field already holds the
/// max-over-processors wall clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Queries,
    TimeSteps,
    Hardware,
    WallTime,
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Metric::Queries => "queries",
            Metric::TimeSteps => "time-steps",
            Metric::Hardware => "hardware",
            Metric::WallTime => "wall-time",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "queries" => Ok(Metric::Queries),
            "time-steps" | "time_steps" => Ok(Metric::TimeSteps),
            "hardware" => Ok(Metric::Hardware),
            "wall-time" | "wall_time" => Ok(Metric::WallTime),
            other => Err(Error::invalid(format!("unknown metric `{other}`"))),
        }
    }
}

/// Least-squares power-law fit of a metric against instance size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingFit {
    pub metric: Metric,
    /// Slope of log(value) vs log(n).
    pub exponent: f64,
    /// Intercept of the same regression (natural log).
    pub intercept: f64,
    pub r_squared: f64,
    /// The fitted (n, mean value) points. Analytic entries carry none.
    pub points: Vec<(f64, f64)>,
}

impl ScalingFit {
    fn grid(&self) -> Vec<u64> {
        self.points.iter().map(|&(n, _)| n.to_bits()).collect()
    }
}

/// Ordinary least squares on (log n, log value).
pub fn fit_exponent(metric: Metric, points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::invalid(format!(
            "power-law fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    for &(n, v) in points {
        if !n.is_finite() || !v.is_finite() || n <= 0.0 || v <= 0.0 {
            return Err(Error::invalid(format!(
                "fit points must be positive, got ({n}, {v})"
            )));
        }
    }
    let mut ns: Vec<u64> = points.iter().map(|&(n, _)| n.to_bits()).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() != points.len() {
        return Err(Error::invalid("fit points must have distinct n"));
    }

    let m = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(n, v)| (n.ln(), v.ln())).unzip();
    let mean_x = lx.iter().sum::<f64>() / m;
    let mean_y = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;

    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let ss_tot: f64 = ly.iter().map(|y| (y - mean_y).powi(2)).sum();
    let r_squared = if ss_tot <= f64::EPSILON {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };

    Ok(ScalingFit {
        metric,
        exponent: slope,
        intercept,
        r_squared,
        points: points.to_vec(),
    })
}

/// Outcome of the significance criterion for one algorithm: a speedup
/// exponent over the plain-search baseline versus the square-root of the
/// hardware exponent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignificanceVerdict {
    pub algorithm: String,
    /// Baseline time exponent minus algorithm time exponent.
    pub speedup_exponent: f64,
    pub hardware_exponent: f64,
    /// Half the hardware exponent: the speedup available by partitioning
    /// the space over that much hardware running plain search.
    pub threshold: f64,
    pub margin: f64,
    pub significant: bool,
}

/// Applies the criterion. All fits must describe the same n-grid; analytic
/// entries (no points) match any grid. Speedups that only tie the
/// threshold do not count: the bar is strict.
pub fn evaluate_significance(
    algorithm: &str,
    alg_time: &ScalingFit,
    alg_hardware: &ScalingFit,
    baseline_time: &ScalingFit,
    margin: f64,
) -> Result<SignificanceVerdict> {
    if margin < 0.0 {
        return Err(Error::invalid("margin must be non-negative"));
    }
    let grids: Vec<Vec<u64>> = [alg_time, alg_hardware, baseline_time]
        .iter()
        .map(|f| f.grid())
        .filter(|g| !g.is_empty())
        .collect();
    if grids.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::invalid("fits do not share the same n-grid"));
    }

    let speedup_exponent = baseline_time.exponent - alg_time.exponent;
    let hardware_exponent = alg_hardware.exponent;
    let threshold = hardware_exponent / 2.0;
    let significant = speedup_exponent > threshold + margin + EXPONENT_TIE_EPS;
    Ok(SignificanceVerdict {
        algorithm: algorithm.to_string(),
        speedup_exponent,
        hardware_exponent,
        threshold,
        margin,
        significant,
    })
}

/// Literature-stated cost entry for an algorithm that is not simulated,
/// expressed as pseudo-fits so it can be judged by the same criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyticEntry {
    pub name: String,
    pub time: ScalingFit,
    pub hardware: ScalingFit,
}

pub fn analytic_entry(name: &str, time_exponent: f64, hardware_exponent: f64) -> AnalyticEntry {
    assert!(
        time_exponent >= 0.0 && hardware_exponent >= 0.0,
        "analytic exponents must be non-negative"
    );
    let fit = |metric, exponent| ScalingFit {
        metric,
        exponent,
        intercept: 0.0,
        r_squared: 1.0,
        points: Vec::new(),
    };
    AnalyticEntry {
        name: name.to_string(),
        time: fit(Metric::TimeSteps, time_exponent),
        hardware: fit(Metric::Hardware, hardware_exponent),
    }
}
