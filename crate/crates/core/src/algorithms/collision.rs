//! Collision-problem procedures: naive pair-space quantum search, the
//! classical birthday sampler, and the sample-sort-search algorithm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{plan_grover, run_bbht, run_grover, FnSpace, MarkedSet};
use crate::error::{Error, Result};
use crate::instances::{Answer, CountingOracle, Promise};
use crate::pairs::{index_to_pair, pair_count};

use super::{pair_collides, pair_space_truth, report, AlgorithmId, RunConfig, RunReport};

fn require_collision_promise(oracle: &CountingOracle<'_>) -> Result<()> {
    match oracle.instance().promise {
        Promise::OneToOne | Promise::TwoToOne => Ok(()),
        Promise::Arbitrary => Err(Error::invalid(
            "collision procedures need a one-to-one/two-to-one promise",
        )),
    }
}

/// Quantum search over the space of all index pairs for a colliding one.
///
/// The run is planned for the n/2 colliding pairs a two-to-one table
/// holds. If the planned attempts fail, an unknown-count search decides
/// between an unlucky miss and a genuinely one-to-one table by running to
/// its cutoff.
pub fn naive_collision(
    oracle: &CountingOracle<'_>,
    seed: u64,
    cfg: &RunConfig,
) -> Result<RunReport> {
    require_collision_promise(oracle)?;
    let instance = oracle.instance();
    let n = instance.n;
    if n < 2 {
        return Ok(report(
            AlgorithmId::NaiveCollision,
            instance,
            seed,
            Answer::OneToOne,
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

    let plan = plan_grover(pair_count(n), n / 2)?;
    let mut repetitions_used = 0;
    for _ in 0..cfg.repetitions {
        repetitions_used += 1;
        let out = run_grover(&mut space, &plan, &mut rng, oracle.ledger());
        if out.success {
            let (x, y) = index_to_pair(out.found.expect("successful search yields an item"));
            return Ok(report(
                AlgorithmId::NaiveCollision,
                instance,
                seed,
                Answer::Collision { x, y },
                oracle.ledger(),
                repetitions_used,
            ));
        }
    }

    // Planned attempts exhausted: decide one-to-one vs unlucky miss.
    let out = run_bbht(&mut space, &cfg.bbht, &mut rng, oracle.ledger());
    repetitions_used += 1;
    let answer = match out.found.filter(|_| out.success) {
        Some(t) => {
            let (x, y) = index_to_pair(t);
            Answer::Collision { x, y }
        }
        None => Answer::OneToOne,
    };
    Ok(report(
        AlgorithmId::NaiveCollision,
        instance,
        seed,
        answer,
        oracle.ledger(),
        repetitions_used,
    ))
}

/// Classical birthday sampler: evaluates a random `c * sqrt(n)` subset,
/// sorts it, and reports any duplicate.
pub fn classical_birthday(
    oracle: &CountingOracle<'_>,
    seed: u64,
    cfg: &RunConfig,
) -> Result<RunReport> {
    require_collision_promise(oracle)?;
    let instance = oracle.instance();
    let n = instance.n;
    let sample_size = ((cfg.birthday_factor * (n as f64).sqrt()).ceil() as u64).clamp(1, n);

    // Sampling without replacement via partial shuffle.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut domain: Vec<u64> = (0..n).collect();
    for i in 0..sample_size as usize {
        let j = rng.gen_range(i..domain.len());
        domain.swap(i, j);
    }

    let mut table: Vec<(u64, u64)> = domain[..sample_size as usize]
        .iter()
        .map(|&x| (oracle.evaluate(x).expect("sampled index within domain"), x))
        .collect();
    table.sort_unstable();
    oracle.ledger().add_steps(sample_size); // sort
    oracle.ledger().add_steps(sample_size.saturating_sub(1)); // adjacent comparisons
    oracle.ledger().note_memory(sample_size);

    let answer = table
        .windows(2)
        .find(|w| w[0].0 == w[1].0)
        .map(|w| {
            let (x, y) = (w[0].1, w[1].1);
            Answer::Collision {
                x: x.min(y),
                y: x.max(y),
            }
        })
        .unwrap_or(Answer::OneToOne);
    Ok(report(
        AlgorithmId::ClassicalBirthday,
        instance,
        seed,
        answer,
        oracle.ledger(),
        1,
    ))
}

/// Smallest K with K^3 >= n (integer cube-root ceiling).
fn cbrt_ceil(n: u64) -> u64 {
    let mut k = (n as f64).cbrt().round() as u64;
    while k.saturating_pow(3) < n {
        k += 1;
    }
    while k > 1 && (k - 1).pow(3) >= n {
        k -= 1;
    }
    k
}

/// Sample-sort-search collision algorithm: evaluates a random table of
/// `ceil(n^(1/3))` items, then searches the remainder for an item whose
/// value already appears in the sorted table.
pub fn bht_collision(oracle: &CountingOracle<'_>, seed: u64, cfg: &RunConfig) -> Result<RunReport> {
    require_collision_promise(oracle)?;
    let instance = oracle.instance();
    let n = instance.n;
    let table_size = cbrt_ceil(n).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut repetitions_used = 0;
    for _ in 0..cfg.repetitions {
        repetitions_used += 1;

        // Distinct random sample, evaluated and sorted by value.
        let mut domain: Vec<u64> = (0..n).collect();
        for i in 0..table_size as usize {
            let j = rng.gen_range(i..domain.len());
            domain.swap(i, j);
        }
        let sample = &domain[..table_size as usize];
        let mut table: Vec<(u64, u64)> = sample
            .iter()
            .map(|&x| (oracle.evaluate(x).expect("sampled index within domain"), x))
            .collect();
        table.sort_unstable();
        oracle.ledger().add_steps(table_size); // sort
        oracle.ledger().add_steps(table_size.saturating_sub(1)); // duplicate scan
        oracle.ledger().note_memory(table_size);

        if let Some(w) = table.windows(2).find(|w| w[0].0 == w[1].0) {
            let (x, y) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
            return Ok(report(
                AlgorithmId::BhtCollision,
                instance,
                seed,
                Answer::Collision { x, y },
                oracle.ledger(),
                repetitions_used,
            ));
        }
        if table_size == n {
            // Table covers the domain and holds no duplicate.
            return Ok(report(
                AlgorithmId::BhtCollision,
                instance,
                seed,
                Answer::OneToOne,
                oracle.ledger(),
                repetitions_used,
            ));
        }

        // Remainder space: the n - K unsampled items, in domain order.
        let mut sampled_sorted: Vec<u64> = sample.to_vec();
        sampled_sorted.sort_unstable();
        let remainder_size = n - table_size;
        let to_domain = |r: u64| {
            let mut d = r;
            for &s in &sampled_sorted {
                if s <= d {
                    d += 1;
                } else {
                    break;
                }
            }
            d
        };

        // Ground truth: remainder items colliding with the table.
        let mut in_sample = vec![false; n as usize];
        for &s in &sampled_sorted {
            in_sample[s as usize] = true;
        }
        let table_values: std::collections::HashSet<u64> = table.iter().map(|&(v, _)| v).collect();
        let mut marked = Vec::new();
        let mut r = 0u64;
        for x in 0..n {
            if in_sample[x as usize] {
                continue;
            }
            if table_values.contains(&instance.values[x as usize]) {
                marked.push(r);
            }
            r += 1;
        }
        let truth = MarkedSet::new(remainder_size, marked);

        let witness = std::cell::Cell::new(None);
        let mut space = FnSpace::new(truth, |r| {
            let x = to_domain(r);
            let v = oracle.evaluate(x).expect("remainder index within domain");
            oracle.ledger().add_steps(1); // sorted-table lookup
            match table.binary_search_by_key(&v, |&(tv, _)| tv) {
                Ok(i) => {
                    witness.set(Some((x, table[i].1)));
                    true
                }
                Err(_) => false,
            }
        });
        let out = run_bbht(&mut space, &cfg.bbht, &mut rng, oracle.ledger());
        if out.success {
            let (x, y) = witness
                .get()
                .expect("verified remainder item has a table partner");
            return Ok(report(
                AlgorithmId::BhtCollision,
                instance,
                seed,
                Answer::Collision {
                    x: x.min(y),
                    y: x.max(y),
                },
                oracle.ledger(),
                repetitions_used,
            ));
        }
    }

    Ok(report(
        AlgorithmId::BhtCollision,
        instance,
        seed,
        Answer::OneToOne,
        oracle.ledger(),
        repetitions_used,
    ))
}
