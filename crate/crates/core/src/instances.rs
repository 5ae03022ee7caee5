//! Promise-problem instances and the query-counting black box through
//! which every algorithm sees them.
//!
//! Instances are explicit value tables: at desk scale they fit in memory
//! and allow exhaustive ground-truth verification. Algorithms never read
//! the table directly; they go through a [`CountingOracle`] that charges
//! the active ledger one query and one time step per evaluation. The
//! `planted` field is ground truth for tests and answer verification only.

use std::cell::Cell;
use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::accounting::ResourceLedger;
use crate::error::{Error, Result};

/// Structural promise carried by an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Promise {
    /// All values pairwise distinct.
    OneToOne,
    /// Every value in the table appears exactly twice.
    TwoToOne,
    /// No structural promise.
    Arbitrary,
}

/// A concrete black-box function table `values[x] = F(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionInstance {
    pub n: u64,
    pub range_size: u64,
    pub promise: Promise,
    pub seed: u64,
    pub values: Vec<u64>,
    /// Colliding index pairs planted at generation time, `x < y`.
    /// Exhaustive for the generators in this module; tests and
    /// [`verify_answer`] may read it, algorithms must not.
    pub planted: Vec<(u64, u64)>,
}

/// Default range cardinality for collision-problem instances.
pub fn collision_range(n: u64) -> u64 {
    n
}

/// Default range cardinality for distinctness instances.
pub fn distinctness_range(n: u64) -> u64 {
    2 * n
}

/// Draws `count` distinct values uniformly from `[0, range)`, in random
/// order. Uses a partial shuffle when the range is small enough to
/// materialize, otherwise rejection sampling.
fn sample_distinct(rng: &mut ChaCha8Rng, count: u64, range: u64) -> Vec<u64> {
    debug_assert!(count <= range);
    if count == 0 {
        return Vec::new();
    }
    let materialize_limit = (4 * count).max(1 << 12);
    if range <= materialize_limit && range <= (1 << 24) {
        let mut pool: Vec<u64> = (0..range).collect();
        for i in 0..count as usize {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        pool.truncate(count as usize);
        pool
    } else {
        let mut seen = HashSet::with_capacity(count as usize);
        let mut out = Vec::with_capacity(count as usize);
        while out.len() < count as usize {
            let v = rng.gen_range(0..range);
            if seen.insert(v) {
                out.push(v);
            }
        }
        out
    }
}

fn shuffled_domain(rng: &mut ChaCha8Rng, n: u64) -> Vec<u64> {
    let mut domain: Vec<u64> = (0..n).collect();
    domain.shuffle(rng);
    domain
}

/// Uniformly random injection of `[0, n)` into `[0, range_size)`.
pub fn gen_one_to_one(n: u64, range_size: u64, seed: u64) -> Result<FunctionInstance> {
    if n == 0 {
        return Err(Error::invalid("domain cardinality must be positive"));
    }
    if range_size < n {
        return Err(Error::invalid(format!(
            "one-to-one needs range_size >= n, got range_size={range_size} n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = sample_distinct(&mut rng, n, range_size);
    Ok(FunctionInstance {
        n,
        range_size,
        promise: Promise::OneToOne,
        seed,
        values,
        planted: Vec::new(),
    })
}

/// Uniformly random perfect matching on the domain; each matched pair
/// shares a distinct random value. `planted` lists all n/2 pairs.
pub fn gen_two_to_one(n: u64, range_size: u64, seed: u64) -> Result<FunctionInstance> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "two-to-one needs even positive n, got {n}"
        )));
    }
    if range_size < n / 2 {
        return Err(Error::invalid(format!(
            "two-to-one needs range_size >= n/2, got range_size={range_size} n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = shuffled_domain(&mut rng, n);
    let pair_values = sample_distinct(&mut rng, n / 2, range_size);

    let mut values = vec![0u64; n as usize];
    let mut planted = Vec::with_capacity((n / 2) as usize);
    for (i, chunk) in domain.chunks_exact(2).enumerate() {
        let (a, b) = (chunk[0], chunk[1]);
        values[a as usize] = pair_values[i];
        values[b as usize] = pair_values[i];
        planted.push((a.min(b), a.max(b)));
    }
    planted.sort_unstable();
    Ok(FunctionInstance {
        n,
        range_size,
        promise: Promise::TwoToOne,
        seed,
        values,
        planted,
    })
}

/// Instance with exactly `planted_pairs` colliding pairs (each pair shares
/// its own value; all other values are distinct singletons).
pub fn gen_distinctness_instance(
    n: u64,
    planted_pairs: u64,
    range_size: u64,
    seed: u64,
) -> Result<FunctionInstance> {
    if n == 0 {
        return Err(Error::invalid("domain cardinality must be positive"));
    }
    if 2 * planted_pairs > n {
        return Err(Error::invalid(format!(
            "cannot plant {planted_pairs} disjoint pairs in a domain of {n}"
        )));
    }
    let distinct_needed = n - planted_pairs;
    if distinct_needed > range_size {
        return Err(Error::invalid(format!(
            "need {distinct_needed} distinct values but range_size={range_size}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = shuffled_domain(&mut rng, n);
    let distinct = sample_distinct(&mut rng, distinct_needed, range_size);

    let mut values = vec![0u64; n as usize];
    let mut planted = Vec::with_capacity(planted_pairs as usize);
    for i in 0..planted_pairs as usize {
        let (a, b) = (domain[2 * i], domain[2 * i + 1]);
        values[a as usize] = distinct[i];
        values[b as usize] = distinct[i];
        planted.push((a.min(b), a.max(b)));
    }
    for (j, &x) in domain[2 * planted_pairs as usize..].iter().enumerate() {
        values[x as usize] = distinct[planted_pairs as usize + j];
    }
    planted.sort_unstable();
    Ok(FunctionInstance {
        n,
        range_size,
        promise: Promise::Arbitrary,
        seed,
        values,
        planted,
    })
}

impl FunctionInstance {
    /// Indicator table for a plain marked-item search space: marked items
    /// map to 1, everything else to 0. Used by the partitioned-search
    /// harness, where the black box is a membership predicate.
    pub fn indicator(n: u64, marked: &[u64]) -> Result<FunctionInstance> {
        let mut values = vec![0u64; n as usize];
        for &m in marked {
            if m >= n {
                return Err(Error::invalid(format!(
                    "marked index {m} out of range 0..{n}"
                )));
            }
            values[m as usize] = 1;
        }
        Ok(FunctionInstance {
            n,
            range_size: 2,
            promise: Promise::Arbitrary,
            seed: 0,
            values,
            planted: Vec::new(),
        })
    }

    /// Exhaustively checks the stored promise and planted pairs.
    pub fn validate(&self) -> Result<()> {
        if self.values.len() as u64 != self.n {
            return Err(Error::invalid("values length differs from n"));
        }
        if let Some(&v) = self.values.iter().find(|&&v| v >= self.range_size) {
            return Err(Error::invalid(format!(
                "value {v} outside range 0..{}",
                self.range_size
            )));
        }
        let mut sorted: Vec<u64> = self.values.clone();
        sorted.sort_unstable();
        match self.promise {
            Promise::OneToOne => {
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::invalid(
                        "one-to-one table contains a duplicate value",
                    ));
                }
            }
            Promise::TwoToOne => {
                if !self.n.is_multiple_of(2) {
                    return Err(Error::invalid("two-to-one table has odd cardinality"));
                }
                let ok = sorted.chunks(2).all(|c| c.len() == 2 && c[0] == c[1])
                    && sorted.windows(3).all(|w| !(w[0] == w[1] && w[1] == w[2]));
                if !ok {
                    return Err(Error::invalid(
                        "two-to-one table has a value multiplicity != 2",
                    ));
                }
            }
            Promise::Arbitrary => {}
        }
        for &(x, y) in &self.planted {
            if x >= self.n || y >= self.n || x == y {
                return Err(Error::invalid(format!(
                    "planted pair ({x},{y}) is malformed"
                )));
            }
            if self.values[x as usize] != self.values[y as usize] {
                return Err(Error::invalid(format!(
                    "planted pair ({x},{y}) does not collide"
                )));
            }
        }
        Ok(())
    }

    /// All colliding pairs, found by exhaustive scan of the table
    /// (never reads `planted`, never charges a ledger).
    pub fn collisions_by_scan(&self) -> Vec<(u64, u64)> {
        let mut by_value: Vec<(u64, u64)> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u64))
            .collect();
        by_value.sort_unstable();
        let mut pairs = Vec::new();
        let mut start = 0;
        while start < by_value.len() {
            let mut end = start + 1;
            while end < by_value.len() && by_value[end].0 == by_value[start].0 {
                end += 1;
            }
            for i in start..end {
                for j in i + 1..end {
                    let (x, y) = (by_value[i].1, by_value[j].1);
                    pairs.push((x.min(y), x.max(y)));
                }
            }
            start = end;
        }
        pairs.sort_unstable();
        pairs
    }
}

/// A claimed problem answer, as reported by an algorithm run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    /// Witness pair with equal values.
    Collision { x: u64, y: u64 },
    /// Claim: the function is one-to-one.
    OneToOne,
    /// Claim: no two domain points share a value.
    AllDistinct,
    /// Marked item located by a plain search.
    Found { index: u64 },
    /// Claim: the searched space holds no marked item.
    NotFound,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Answer::Collision { x, y } => write!(f, "collision({x},{y})"),
            Answer::OneToOne => f.write_str("one-to-one"),
            Answer::AllDistinct => f.write_str("all-distinct"),
            Answer::Found { index } => write!(f, "found({index})"),
            Answer::NotFound => f.write_str("not-found"),
        }
    }
}

impl std::str::FromStr for Answer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_args = |s: &str, head: &str| -> Option<String> {
            s.strip_prefix(head)?
                .strip_prefix('(')?
                .strip_suffix(')')
                .map(str::to_string)
        };
        match s {
            "one-to-one" => return Ok(Answer::OneToOne),
            "all-distinct" => return Ok(Answer::AllDistinct),
            "not-found" => return Ok(Answer::NotFound),
            _ => {}
        }
        if let Some(args) = parse_args(s, "collision") {
            let mut it = args.split(',').map(str::trim);
            if let (Some(x), Some(y), None) = (it.next(), it.next(), it.next()) {
                if let (Ok(x), Ok(y)) = (x.parse(), y.parse()) {
                    return Ok(Answer::Collision { x, y });
                }
            }
        }
        if let Some(arg) = parse_args(s, "found") {
            if let Ok(index) = arg.trim().parse() {
                return Ok(Answer::Found { index });
            }
        }
        Err(Error::invalid(format!("unparseable answer `{s}`")))
    }
}

impl Serialize for Answer {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Answer {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Checks a claimed answer against the full table by exhaustive scan.
/// Never charges a ledger.
pub fn verify_answer(instance: &FunctionInstance, claimed: &Answer) -> bool {
    match *claimed {
        Answer::Collision { x, y } => {
            x != y
                && x < instance.n
                && y < instance.n
                && instance.values[x as usize] == instance.values[y as usize]
        }
        Answer::OneToOne | Answer::AllDistinct => instance.collisions_by_scan().is_empty(),
        Answer::Found { index } => index < instance.n && instance.values[index as usize] == 1,
        Answer::NotFound => !instance.values.contains(&1),
    }
}

/// Counting wrapper around an instance: every evaluation increments the
/// query counter and charges the active ledger one query and one step.
#[derive(Debug)]
pub struct CountingOracle<'a> {
    instance: &'a FunctionInstance,
    ledger: &'a ResourceLedger,
    queries: Cell<u64>,
}

impl<'a> CountingOracle<'a> {
    pub fn new(instance: &'a FunctionInstance, ledger: &'a ResourceLedger) -> Self {
        CountingOracle {
            instance,
            ledger,
            queries: Cell::new(0),
        }
    }

    /// Evaluates `F(x)`, charging one query and one time step.
    pub fn evaluate(&self, x: u64) -> Result<u64> {
        if x >= self.instance.n {
            return Err(Error::invalid(format!(
                "index {x} outside domain 0..{}",
                self.instance.n
            )));
        }
        self.queries.set(self.queries.get() + 1);
        self.ledger.charge(1, 1, 0, 1);
        Ok(self.instance.values[x as usize])
    }

    /// Evaluations since construction or the last reset.
    pub fn queries(&self) -> u64 {
        self.queries.get()
    }

    pub fn reset_queries(&self) {
        self.queries.set(0);
    }

    pub fn instance(&self) -> &FunctionInstance {
        self.instance
    }

    pub fn ledger(&self) -> &ResourceLedger {
        self.ledger
    }
}
