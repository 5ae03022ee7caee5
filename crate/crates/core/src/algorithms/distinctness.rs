//! Element-distinctness procedures: classical sort-and-scan, naive
//! pair-space quantum search, and the two-level grouped search.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{run_bbht, FnSpace, MarkedSet, SearchSpace};
use crate::error::Result;
use crate::instances::{Answer, CountingOracle};
use crate::pairs::{index_to_pair, pair_count};
use crate::seed::derive_seed;

use super::{pair_collides, pair_space_truth, report, AlgorithmId, RunConfig, RunReport};

/// Evaluates every point, sorts by value, and scans adjacent entries.
/// Exact by construction: n queries, n registers.
pub fn classical_sort_distinctness(oracle: &CountingOracle<'_>) -> Result<RunReport> {
    let instance = oracle.instance();
    let n = instance.n;
    let mut table: Vec<(u64, u64)> = (0..n)
        .map(|x| (oracle.evaluate(x).expect("index within domain"), x))
        .collect();
    table.sort_unstable();
    oracle.ledger().add_steps(n); // sort
    oracle.ledger().add_steps(n.saturating_sub(1)); // adjacent comparisons
    oracle.ledger().note_memory(n);

    let answer = table
        .windows(2)
        .find(|w| w[0].0 == w[1].0)
        .map(|w| Answer::Collision {
            x: w[0].1.min(w[1].1),
            y: w[0].1.max(w[1].1),
        })
        .unwrap_or(Answer::AllDistinct);
    Ok(report(
        AlgorithmId::ClassicalSortDistinctness,
        instance,
        instance.seed,
        answer,
        oracle.ledger(),
        1,
    ))
}

/// Unknown-count quantum search over the pair space; the collision count
/// may be anything including zero, so every pass runs the growth driver
/// to success or cutoff.
pub fn naive_distinctness(
    oracle: &CountingOracle<'_>,
    seed: u64,
    cfg: &RunConfig,
) -> Result<RunReport> {
    let instance = oracle.instance();
    let n = instance.n;
    if pair_count(n) == 0 {
        return Ok(report(
            AlgorithmId::NaiveDistinctness,
            instance,
            seed,
            Answer::AllDistinct,
            oracle.ledger(),
            1,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let truth = pair_space_truth(instance);
    let mut space = FnSpace::new(truth, |t| {
        let (x, y) = index_to_pair(t);
        pair_collides(oracle, x, y)
    });
    oracle.ledger().note_memory(1);

    let mut repetitions_used = 0;
    for _ in 0..cfg.repetitions {
        repetitions_used += 1;
        let out = run_bbht(&mut space, &cfg.bbht, &mut rng, oracle.ledger());
        if out.success {
            let (x, y) = index_to_pair(out.found.expect("successful search yields an item"));
            return Ok(report(
                AlgorithmId::NaiveDistinctness,
                instance,
                seed,
                Answer::Collision { x, y },
                oracle.ledger(),
                repetitions_used,
            ));
        }
    }
    Ok(report(
        AlgorithmId::NaiveDistinctness,
        instance,
        seed,
        Answer::AllDistinct,
        oracle.ledger(),
        repetitions_used,
    ))
}

/// Smallest g with g^2 >= n.
fn sqrt_ceil(n: u64) -> u64 {
    let mut g = (n as f64).sqrt().round() as u64;
    while g * g < n {
        g += 1;
    }
    while g > 1 && (g - 1) * (g - 1) >= n {
        g -= 1;
    }
    g
}

/// Top-level search space over groups of ~sqrt(n) items.
///
/// Each membership test charges the full inner cost: evaluating and
/// sorting the group table, then an unknown-count search over all n items
/// for a point whose value appears in the table under a different
/// preimage. The group's true marked status drives the outer dynamics
/// (exact-marking execution); the charged inner run supplies the
/// verification result and the concrete witness pair.
struct GroupSpace<'a, 'o> {
    oracle: &'a CountingOracle<'o>,
    group_size: u64,
    group_count: u64,
    truth: MarkedSet,
    /// value -> domain indices, from an uncharged scan; measurement
    /// ground truth for inner runs.
    classes: HashMap<u64, Vec<u64>>,
    inner_rng: ChaCha8Rng,
    cfg: RunConfig,
    witness: Option<(u64, u64)>,
}

impl<'a, 'o> GroupSpace<'a, 'o> {
    fn new(oracle: &'a CountingOracle<'o>, cfg: &RunConfig, seed: u64) -> Self {
        let instance = oracle.instance();
        let n = instance.n;
        let group_size = sqrt_ceil(n);
        let group_count = n.div_ceil(group_size);

        let mut classes: HashMap<u64, Vec<u64>> = HashMap::new();
        for (i, &v) in instance.values.iter().enumerate() {
            classes.entry(v).or_default().push(i as u64);
        }
        let marked_groups: Vec<u64> = (0..group_count)
            .filter(|&g| {
                let start = g * group_size;
                let end = (start + group_size).min(n);
                (start..end).any(|y| classes[&instance.values[y as usize]].len() > 1)
            })
            .collect();

        GroupSpace {
            oracle,
            group_size,
            group_count,
            truth: MarkedSet::new(group_count, marked_groups),
            classes,
            inner_rng: ChaCha8Rng::seed_from_u64(derive_seed(seed, 1)),
            cfg: cfg.clone(),
            witness: None,
        }
    }

    fn members(&self, group: u64) -> std::ops::Range<u64> {
        let start = group * self.group_size;
        start..(start + self.group_size).min(self.oracle.instance().n)
    }
}

impl SearchSpace for GroupSpace<'_, '_> {
    fn size(&self) -> u64 {
        self.group_count
    }

    fn truth(&self) -> &MarkedSet {
        &self.truth
    }

    fn is_marked(&mut self, group: u64) -> bool {
        let instance = self.oracle.instance();
        let ledger = self.oracle.ledger();
        let n = instance.n;

        // Evaluate and sort the group table.
        let mut table: Vec<(u64, u64)> = self
            .members(group)
            .map(|y| {
                (
                    self.oracle.evaluate(y).expect("group member within domain"),
                    y,
                )
            })
            .collect();
        table.sort_unstable();
        ledger.add_steps(table.len() as u64); // sort
        ledger.note_memory(self.group_size); // table capacity

        // Inner ground truth: points colliding with the table under a
        // different preimage.
        let mut inner_marked = Vec::new();
        for &(v, y) in &table {
            for &x in &self.classes[&v] {
                if x != y {
                    inner_marked.push(x);
                }
            }
        }
        let inner_truth = MarkedSet::new(n, inner_marked);

        let oracle = self.oracle;
        let witness = std::cell::Cell::new(None);
        let mut inner_space = FnSpace::new(inner_truth, |x| {
            let v = oracle.evaluate(x).expect("index within domain");
            ledger.add_steps(1); // sorted-table lookup
            let mut i = table.partition_point(|&(tv, _)| tv < v);
            while i < table.len() && table[i].0 == v {
                if table[i].1 != x {
                    witness.set(Some((x.min(table[i].1), x.max(table[i].1))));
                    return true;
                }
                i += 1;
            }
            false
        });
        let out = run_bbht(
            &mut inner_space,
            &self.cfg.bbht,
            &mut self.inner_rng,
            ledger,
        );
        if out.success {
            self.witness = witness.get();
        }
        out.success
    }
}

/// Two-level grouped search: an outer unknown-count search over
/// ~sqrt(n) groups whose membership test sorts the group and searches all
/// n items against it.
pub fn two_level_distinctness(
    oracle: &CountingOracle<'_>,
    seed: u64,
    cfg: &RunConfig,
) -> Result<RunReport> {
    let instance = oracle.instance();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0));
    let mut space = GroupSpace::new(oracle, cfg, seed);

    let mut repetitions_used = 0;
    for _ in 0..cfg.repetitions {
        repetitions_used += 1;
        let out = run_bbht(&mut space, &cfg.bbht, &mut rng, oracle.ledger());
        if out.success {
            let (x, y) = space
                .witness
                .expect("verified group run recorded a witness");
            return Ok(report(
                AlgorithmId::TwoLevelDistinctness,
                instance,
                seed,
                Answer::Collision { x, y },
                oracle.ledger(),
                repetitions_used,
            ));
        }
    }
    Ok(report(
        AlgorithmId::TwoLevelDistinctness,
        instance,
        seed,
        Answer::AllDistinct,
        oracle.ledger(),
        repetitions_used,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accounting::ResourceLedger;
    use crate::instances::{gen_distinctness_instance, gen_two_to_one, FunctionInstance};

    fn fresh(instance: &FunctionInstance) -> (ResourceLedger, &FunctionInstance) {
        (ResourceLedger::new(), instance)
    }

    #[test]
    fn sqrt_ceil_is_exact() {
        assert_eq!(sqrt_ceil(1), 1);
        assert_eq!(sqrt_ceil(2), 2);
        assert_eq!(sqrt_ceil(4), 2);
        assert_eq!(sqrt_ceil(5), 3);
        assert_eq!(sqrt_ceil(10), 4);
        assert_eq!(sqrt_ceil(65536), 256);
    }

    #[test]
    fn sort_distinctness_single_item() {
        let inst = gen_distinctness_instance(1, 0, 2, 0).unwrap();
        let (ledger, inst) = fresh(&inst);
        let oracle = CountingOracle::new(inst, &ledger);
        let rep = classical_sort_distinctness(&oracle).unwrap();
        assert_eq!(rep.answer, Answer::AllDistinct);
        assert_eq!(rep.ledger.queries(), 1);
    }

    #[test]
    fn sort_distinctness_reports_the_planted_pair() {
        let inst = gen_distinctness_instance(64, 1, 128, 5).unwrap();
        let (ledger, inst2) = fresh(&inst);
        let oracle = CountingOracle::new(inst2, &ledger);
        let rep = classical_sort_distinctness(&oracle).unwrap();
        assert_eq!(
            rep.answer,
            Answer::Collision {
                x: inst.planted[0].0,
                y: inst.planted[0].1
            }
        );
        assert!(rep.correct);
    }

    #[test]
    fn sort_distinctness_queries_equal_n_on_a_grid() {
        for n in [1u64, 2, 7, 32, 100] {
            let inst = gen_distinctness_instance(n, 0, 2 * n, 3).unwrap();
            let (ledger, inst) = fresh(&inst);
            let oracle = CountingOracle::new(inst, &ledger);
            let rep = classical_sort_distinctness(&oracle).unwrap();
            assert_eq!(rep.ledger.queries(), n);
            assert_eq!(rep.ledger.memory_registers(), n);
            assert!(rep.correct);
        }
    }

    #[test]
    fn naive_distinctness_all_distinct_after_cutoff() {
        let inst = gen_distinctness_instance(256, 0, 512, 1).unwrap();
        let (ledger, inst) = fresh(&inst);
        let oracle = CountingOracle::new(inst, &ledger);
        let rep = naive_distinctness(&oracle, 9, &RunConfig::default()).unwrap();
        assert_eq!(rep.answer, Answer::AllDistinct);
        assert!(rep.correct);
    }

    #[test]
    fn naive_distinctness_finds_the_pair_at_n2() {
        let inst = gen_distinctness_instance(2, 1, 4, 2).unwrap();
        let (ledger, inst) = fresh(&inst);
        let oracle = CountingOracle::new(inst, &ledger);
        let rep = naive_distinctness(&oracle, 4, &RunConfig::default()).unwrap();
        assert_eq!(rep.answer, Answer::Collision { x: 0, y: 1 });
        assert!(rep.repetitions_used <= 3);
    }

    #[test]
    fn two_level_finds_the_planted_pair_at_n4() {
        let inst = gen_distinctness_instance(4, 1, 8, 3).unwrap();
        for seed in 0..20 {
            let (ledger, inst2) = fresh(&inst);
            let oracle = CountingOracle::new(inst2, &ledger);
            let rep = two_level_distinctness(&oracle, seed, &RunConfig::default()).unwrap();
            assert_eq!(
                rep.answer,
                Answer::Collision {
                    x: inst.planted[0].0,
                    y: inst.planted[0].1
                }
            );
            assert!(rep.correct);
        }
    }

    #[test]
    fn two_level_memory_is_the_group_size_exactly() {
        for n in [10u64, 64, 100, 1024] {
            let inst = gen_distinctness_instance(n, 1, 2 * n, 7).unwrap();
            let (ledger, inst) = fresh(&inst);
            let oracle = CountingOracle::new(inst, &ledger);
            let rep = two_level_distinctness(&oracle, 11, &RunConfig::default()).unwrap();
            assert_eq!(rep.ledger.memory_registers(), sqrt_ceil(n));
        }
    }

    #[test]
    fn two_level_all_distinct_instance() {
        let inst = gen_distinctness_instance(16, 0, 32, 2).unwrap();
        let (ledger, inst) = fresh(&inst);
        let oracle = CountingOracle::new(inst, &ledger);
        let rep = two_level_distinctness(&oracle, 0, &RunConfig::default()).unwrap();
        assert_eq!(rep.answer, Answer::AllDistinct);
        assert!(rep.correct);
        assert_eq!(rep.repetitions_used, RunConfig::default().repetitions);
    }

    #[test]
    fn two_level_on_a_two_to_one_table_finds_some_collision() {
        let inst = gen_two_to_one(16, 16, 6).unwrap();
        let (ledger, inst) = fresh(&inst);
        let oracle = CountingOracle::new(inst, &ledger);
        let rep = two_level_distinctness(&oracle, 8, &RunConfig::default()).unwrap();
        assert!(matches!(rep.answer, Answer::Collision { .. }));
        assert!(rep.correct);
    }
}
