//! Partitioned parallel search: the space is split into equal blocks,
//! each handed to a simulated processor running an independent
//! unknown-count search. Processors halt the moment the first one
//! verifies a find, so wall time is the winner's clock; queries sum.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::accounting::ResourceLedger;
use crate::engine::{run_bbht_capped, FnSpace, MarkedSet, TruthSpace};
use crate::error::{Error, Result};
use crate::instances::{Answer, CountingOracle, FunctionInstance};
use crate::seed::derive_seed;

use super::{report, AlgorithmId, RunConfig, RunReport};

/// Searches `n_space` items with the given marked set using `processors`
/// independent block searches.
///
/// The space is padded to equal blocks when the processor count does not
/// divide it. Per-processor seeds derive from `seed` by processor index,
/// so a single-processor run is identical to one plain unknown-count
/// search with the derived seed.
pub fn parallel_search(
    n_space: u64,
    marked: &[u64],
    processors: u64,
    seed: u64,
    cfg: &RunConfig,
) -> Result<RunReport> {
    if n_space == 0 {
        return Err(Error::invalid("search space must be non-empty"));
    }
    if processors == 0 || processors > n_space {
        return Err(Error::invalid(format!(
            "processor count must lie in 1..={n_space}, got {processors}"
        )));
    }
    let block = n_space.div_ceil(processors);
    let padded = block * processors;
    let instance = FunctionInstance::indicator(padded, marked)?;

    let block_truth = |p: u64| -> MarkedSet {
        let start = p * block;
        let local: Vec<u64> = marked
            .iter()
            .filter(|&&m| m >= start && m < start + block)
            .map(|&m| m - start)
            .collect();
        MarkedSet::new(block, local)
    };

    // Cost every processor's schedule against ground truth, then stop the
    // fleet at the first verified success.
    let mut finish_times = Vec::with_capacity(processors as usize);
    let mut stop_at: Option<u64> = None;
    for p in 0..processors {
        let mut probe = TruthSpace::new(block_truth(p));
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, p));
        let run = run_bbht_capped(
            &mut probe,
            &cfg.bbht,
            &mut rng,
            &ResourceLedger::new(),
            None,
        );
        if run.outcome.success {
            stop_at = Some(stop_at.map_or(run.engine_steps, |t| t.min(run.engine_steps)));
        }
        finish_times.push(run.engine_steps);
    }

    // Replay for real: identical seeds give identical schedules, truncated
    // at the fleet stop time. Each processor owns an oracle and a
    // sub-ledger over the shared table.
    let mut wall = 0u64;
    let mut total = ResourceLedger::new();
    let mut answer = Answer::NotFound;
    for p in 0..processors {
        let sub = ResourceLedger::new();
        let oracle = CountingOracle::new(&instance, &sub);
        let start = p * block;
        let truth = block_truth(p);
        let mut space = FnSpace::new(truth, |i| {
            oracle
                .evaluate(start + i)
                .expect("block index within padded domain")
                == 1
        });
        sub.note_memory(1);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, p));
        let run = run_bbht_capped(&mut space, &cfg.bbht, &mut rng, &sub, stop_at);
        debug_assert_eq!(sub.queries(), oracle.queries());
        debug_assert!(stop_at.is_some() || run.engine_steps == finish_times[p as usize]);

        if run.outcome.success {
            let local = run.outcome.found.expect("successful search yields an item");
            answer = Answer::Found {
                index: start + local,
            };
        }
        wall = wall.max(run.engine_steps);
        total = total.merged(&sub);
    }

    // Wall clock replaces the summed per-processor steps.
    let ledger = ResourceLedger::new();
    ledger.charge(total.queries(), wall, total.memory_registers(), processors);

    let mut rep = report(
        AlgorithmId::ParallelSearch,
        &instance,
        seed,
        answer,
        &ledger,
        1,
    );
    rep.n = n_space;
    Ok(rep)
}
