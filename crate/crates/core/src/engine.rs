//! Exact amplitude-amplification dynamics in the two-dimensional invariant
//! subspace spanned by the marked and unmarked uniform superpositions.
//!
//! Because the diffusion operator acts symmetrically within each class,
//! the success probability after `j` iterations is exactly
//! `sin^2((2j+1)*theta)` with `theta = asin(sqrt(k/n))`. Runs therefore
//! sample measurement outcomes from the closed form instead of evolving a
//! state vector; query and time-step charges are realized by invoking the
//! space's membership predicate the same number of times a real execution
//! would.
//!
//! Measurement outcomes (which item is observed) are drawn from a
//! ground-truth [`MarkedSet`] supplied by the harness. That view is a
//! simulation internal: it never charges the ledger, and algorithms only
//! see the sampled outcomes and the charged verification result.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::accounting::ResourceLedger;
use crate::error::{Error, Result};

/// Planned amplification run: space size, marked count, rotation angle,
/// iteration count, and the success probability the plan predicts.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverPlan {
    pub n_space: u64,
    pub k_marked: u64,
    /// `asin(sqrt(k/n))`, radians.
    pub theta: f64,
    /// `floor(pi / (4 theta))` for `0 < k < n`, else 0.
    pub j_opt: u64,
    pub predicted_success: f64,
}

/// Plans a run over `n_space` items with `k_marked` marked.
pub fn plan_grover(n_space: u64, k_marked: u64) -> Result<GroverPlan> {
    if n_space == 0 {
        return Err(Error::invalid("search space must be non-empty"));
    }
    if k_marked > n_space {
        return Err(Error::invalid(format!(
            "marked count {k_marked} exceeds space size {n_space}"
        )));
    }
    let theta = rotation_angle(n_space, k_marked);
    let (j_opt, predicted_success) = if k_marked == 0 {
        (0, 0.0)
    } else if k_marked == n_space {
        (0, 1.0)
    } else {
        let j = (std::f64::consts::PI / (4.0 * theta)).floor() as u64;
        (j, amplified_probability(theta, j))
    };
    Ok(GroverPlan {
        n_space,
        k_marked,
        theta,
        j_opt,
        predicted_success,
    })
}

fn rotation_angle(n_space: u64, k_marked: u64) -> f64 {
    (k_marked as f64 / n_space as f64).sqrt().asin()
}

fn amplified_probability(theta: f64, j: u64) -> f64 {
    ((2 * j + 1) as f64 * theta).sin().powi(2)
}

/// Success probability after `j` iterations under `plan`; 0 when nothing
/// is marked.
pub fn success_probability(plan: &GroverPlan, j: u64) -> f64 {
    if plan.k_marked == 0 {
        0.0
    } else {
        amplified_probability(plan.theta, j)
    }
}

/// Ground-truth marked subset of a search space, used by the measurement
/// simulator to draw observed items. Construction and use are uncharged.
#[derive(Debug, Clone)]
pub struct MarkedSet {
    space_size: u64,
    items: Vec<u64>,
}

impl MarkedSet {
    pub fn new(space_size: u64, mut items: Vec<u64>) -> Self {
        items.sort_unstable();
        items.dedup();
        debug_assert!(items.iter().all(|&i| i < space_size));
        MarkedSet { space_size, items }
    }

    pub fn space_size(&self) -> u64 {
        self.space_size
    }

    pub fn count(&self) -> u64 {
        self.items.len() as u64
    }

    pub fn contains(&self, index: u64) -> bool {
        self.items.binary_search(&index).is_ok()
    }

    pub fn items(&self) -> &[u64] {
        &self.items
    }

    /// Uniformly random marked item.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Option<u64> {
        if self.items.is_empty() {
            None
        } else {
            Some(self.items[rng.gen_range(0..self.items.len())])
        }
    }

    /// Uniformly random unmarked item, by rejection.
    pub fn sample_unmarked(&self, rng: &mut ChaCha8Rng) -> Option<u64> {
        if self.count() == self.space_size {
            return None;
        }
        loop {
            let candidate = rng.gen_range(0..self.space_size);
            if !self.contains(candidate) {
                return Some(candidate);
            }
        }
    }
}

/// A searchable space: a charged membership predicate plus the uncharged
/// ground-truth view that drives measurement sampling.
pub trait SearchSpace {
    fn size(&self) -> u64;

    /// Ground truth for the measurement simulator.
    fn truth(&self) -> &MarkedSet;

    /// Charged membership test. Each invocation must charge exactly the
    /// cost of one oracle query under the space's cost model.
    fn is_marked(&mut self, index: u64) -> bool;
}

/// Space backed by a charged predicate closure.
pub struct FnSpace<F: FnMut(u64) -> bool> {
    truth: MarkedSet,
    predicate: F,
}

impl<F: FnMut(u64) -> bool> FnSpace<F> {
    pub fn new(truth: MarkedSet, predicate: F) -> Self {
        FnSpace { truth, predicate }
    }
}

impl<F: FnMut(u64) -> bool> SearchSpace for FnSpace<F> {
    fn size(&self) -> u64 {
        self.truth.space_size()
    }

    fn truth(&self) -> &MarkedSet {
        &self.truth
    }

    fn is_marked(&mut self, index: u64) -> bool {
        (self.predicate)(index)
    }
}

/// Space whose predicate is the ground truth itself and charges nothing.
/// Used for engine statistics and for costing schedules before they are
/// replayed against a real oracle.
pub struct TruthSpace {
    truth: MarkedSet,
}

impl TruthSpace {
    pub fn new(truth: MarkedSet) -> Self {
        TruthSpace { truth }
    }
}

impl SearchSpace for TruthSpace {
    fn size(&self) -> u64 {
        self.truth.space_size()
    }

    fn truth(&self) -> &MarkedSet {
        &self.truth
    }

    fn is_marked(&mut self, index: u64) -> bool {
        self.truth.contains(index)
    }
}

/// Result of one engine run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: Option<u64>,
    pub success: bool,
    /// Predicate invocations made (iterations plus verifications). The
    /// ledger may show more oracle queries when one predicate evaluation
    /// costs several.
    pub queries_charged: u64,
    pub iterations_used: u64,
}

/// Draws the measured item for a round that amplified for `j` iterations.
/// Returns (hit, item). Dynamics use the true marked count, so a caller
/// whose plan disagrees with the space still gets physical behavior.
fn measure<S: SearchSpace>(space: &S, theta: f64, j: u64, rng: &mut ChaCha8Rng) -> (bool, u64) {
    let truth = space.truth();
    let p = if truth.count() == 0 {
        0.0
    } else {
        amplified_probability(theta, j)
    };
    let mut hit = truth.count() == space.size() || rng.gen_bool(p.clamp(0.0, 1.0));
    let item = if hit {
        truth.sample(rng)
    } else {
        truth.sample_unmarked(rng)
    };
    let item = match item {
        Some(i) => i,
        // Unreachable for consistent spaces; fall back to the other class.
        None => {
            hit = !hit;
            if hit {
                truth.sample(rng).unwrap()
            } else {
                truth.sample_unmarked(rng).unwrap()
            }
        }
    };
    (hit, item)
}

/// One charged accounting query on a uniformly random index, standing in
/// for the oracle call inside an amplification iteration, plus the
/// diffusion step.
fn charge_iteration<S: SearchSpace>(space: &mut S, rng: &mut ChaCha8Rng, ledger: &ResourceLedger) {
    let idx = rng.gen_range(0..space.size());
    let _ = space.is_marked(idx);
    ledger.add_steps(1);
}

/// Runs the planned number of iterations and samples the outcome.
///
/// Charges `plan.j_opt` predicate queries plus one verification query and
/// `plan.j_opt` diffusion steps. The verification result is authoritative
/// for `success`.
pub fn run_grover<S: SearchSpace>(
    space: &mut S,
    plan: &GroverPlan,
    rng: &mut ChaCha8Rng,
    ledger: &ResourceLedger,
) -> SearchOutcome {
    debug_assert_eq!(plan.n_space, space.size());
    for _ in 0..plan.j_opt {
        charge_iteration(space, rng, ledger);
    }
    let (hit, measured) = measure(space, plan.theta, plan.j_opt, rng);
    let verified = space.is_marked(measured);
    SearchOutcome {
        found: if verified || !hit {
            Some(measured)
        } else {
            None
        },
        success: verified,
        queries_charged: plan.j_opt + 1,
        iterations_used: plan.j_opt,
    }
}

/// Parameters of the exponential-growth driver for unknown marked counts.
#[derive(Debug, Clone)]
pub struct BbhtConfig {
    /// Growth factor for the iteration bound per round.
    pub growth: f64,
    /// Abort after `cutoff_factor * sqrt(space)` total iterations.
    pub cutoff_factor: f64,
}

impl Default for BbhtConfig {
    fn default() -> Self {
        BbhtConfig {
            growth: 1.2,
            cutoff_factor: 9.0,
        }
    }
}

/// Outcome plus the engine-unit clock (2 units per iteration, 1 per
/// verification). For unit-cost predicates the clock equals the ledger
/// time-step delta, which lets a scheduler cost a run before replaying it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BbhtRun {
    pub outcome: SearchOutcome,
    pub engine_steps: u64,
}

/// Searches a space with an unknown marked count.
///
/// Each round draws `j` uniformly below the current bound `m`, amplifies
/// for `j` iterations, measures, and spends one verification query on the
/// observed item; `m` then grows by the configured factor up to
/// `sqrt(space)`. The run aborts unsuccessfully once the iteration cutoff
/// is exhausted, which is the expected outcome when nothing is marked.
pub fn run_bbht<S: SearchSpace>(
    space: &mut S,
    cfg: &BbhtConfig,
    rng: &mut ChaCha8Rng,
    ledger: &ResourceLedger,
) -> SearchOutcome {
    run_bbht_capped(space, cfg, rng, ledger, None).outcome
}

/// [`run_bbht`] with an optional engine-step cap. A capped run executes
/// exactly the events that finish within the cap and then halts; the
/// partitioned-search harness uses this to stop every processor at the
/// moment the first one succeeds.
pub fn run_bbht_capped<S: SearchSpace>(
    space: &mut S,
    cfg: &BbhtConfig,
    rng: &mut ChaCha8Rng,
    ledger: &ResourceLedger,
    step_cap: Option<u64>,
) -> BbhtRun {
    let size = space.size();
    let theta = rotation_angle(size, space.truth().count());
    let sqrt_size = (size as f64).sqrt();
    let max_iters = (cfg.cutoff_factor * sqrt_size).ceil() as u64;
    // Round cap guarantees termination even when m stays pinned at 1
    // (size-1 spaces with nothing marked draw j = 0 forever).
    let max_rounds = 64 + 2 * max_iters;

    let mut m = 1.0f64;
    let mut iterations = 0u64;
    let mut invocations = 0u64;
    let mut clock = 0u64;

    let fits = |clock: u64, cost: u64| step_cap.is_none_or(|cap| clock + cost <= cap);
    let halted = |iterations, invocations, clock| BbhtRun {
        outcome: SearchOutcome {
            found: None,
            success: false,
            queries_charged: invocations,
            iterations_used: iterations,
        },
        engine_steps: clock,
    };

    for _ in 0..max_rounds {
        let bound = m.ceil() as u64;
        let j_drawn = rng.gen_range(0..bound);
        let j = j_drawn.min(max_iters - iterations);

        for _ in 0..j {
            if !fits(clock, 2) {
                return halted(iterations, invocations, clock);
            }
            charge_iteration(space, rng, ledger);
            invocations += 1;
            iterations += 1;
            clock += 2;
        }

        let (_, measured) = measure(space, theta, j, rng);
        if !fits(clock, 1) {
            return halted(iterations, invocations, clock);
        }
        let verified = space.is_marked(measured);
        invocations += 1;
        clock += 1;

        if verified {
            return BbhtRun {
                outcome: SearchOutcome {
                    found: Some(measured),
                    success: true,
                    queries_charged: invocations,
                    iterations_used: iterations,
                },
                engine_steps: clock,
            };
        }
        if iterations >= max_iters {
            break;
        }
        m = (cfg.growth * m).min(sqrt_size.max(1.0));
    }
    halted(iterations, invocations, clock)
}
