//! Balanced mappings: exhaustive enumeration, seeded sampling, and capacity
//! statistics over either stream.
//!
//! Statistics are deterministic in the worker count. Mappings are processed
//! in fixed-size batches, capacities within a batch are computed in parallel
//! but collected in stream order, and the reduction runs sequentially.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::capacity::{capacity_spectral_with, CapacityOptions};
use crate::channel::Mapping;
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;
const BATCH: usize = 4096;

/// `(4^k)! / ((4^k / b)!)^b`, or `None` when `b` does not divide `4^k`.
pub fn balanced_count(k: usize, b: u32) -> Option<BigUint> {
    let n = 1u64 << (2 * k);
    if b == 0 || !n.is_multiple_of(b as u64) {
        return None;
    }
    let per = n / b as u64;
    // product of binomials C(per * (i + 1), per)
    let mut total = BigUint::one();
    for i in 0..b as u64 {
        total *= binomial(per * (i + 1), per);
    }
    Some(total)
}

fn binomial(n: u64, r: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn check_divisible(k: usize, b: u32) -> Result<()> {
    if k == 0 || k > crate::channel::MAX_K || b == 0 || !(1u64 << (2 * k)).is_multiple_of(b as u64) {
        return Err(Error::InvalidParameters(format!("balanced mappings need b dividing 4^k, got k = {k}, b = {b}")));
    }
    Ok(())
}

/// Every balanced mapping exactly once, in lexicographic order of the level
/// table (multiset permutations of `0^n 1^n ... (b-1)^n`).
pub struct BalancedEnumerator {
    k: usize,
    b: u32,
    next: Option<Vec<u32>>,
}

impl Iterator for BalancedEnumerator {
    type Item = Mapping;

    fn next(&mut self) -> Option<Mapping> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Mapping::new(self.k, self.b, current).expect("balanced table is valid"))
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

pub fn enumerate_balanced(k: usize, b: u32, cap: u64) -> Result<BalancedEnumerator> {
    check_divisible(k, b)?;
    let count = balanced_count(k, b).unwrap();
    if count > BigUint::from(cap) {
        return Err(Error::EnumerationCapExceeded { count: count.to_string(), cap });
    }
    let n = 1usize << (2 * k);
    let per = n / b as usize;
    let first = (0..n).map(|i| (i / per) as u32).collect();
    Ok(BalancedEnumerator { k, b, next: Some(first) })
}

/// Draw `index` of a seeded sample stream. Each draw owns a ChaCha stream,
/// so the sequence does not depend on how draws are scheduled.
fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn sample_balanced_one(k: usize, b: u32, seed: u64, index: u64) -> Mapping {
    let n = 1usize << (2 * k);
    let per = n / b as usize;
    let mut table: Vec<u32> = (0..n).map(|i| (i / per) as u32).collect();
    table.shuffle(&mut draw_rng(seed, index));
    Mapping::new(k, b, table).expect("shuffled balanced table is valid")
}

/// `n` independent uniform balanced mappings.
pub fn sample_balanced(k: usize, b: u32, n: usize, seed: u64) -> Result<impl Iterator<Item = Mapping>> {
    check_divisible(k, b)?;
    Ok((0..n as u64).map(move |i| sample_balanced_one(k, b, seed, i)))
}

/// A mapping with every level drawn independently and uniformly.
pub fn sample_uniform_one(k: usize, b: u32, seed: u64, index: u64) -> Mapping {
    let mut rng = draw_rng(seed, index);
    Mapping::from_fn(k, b, |_| rng.gen_range(0..b)).expect("uniform table is valid")
}

pub fn sample_uniform(k: usize, b: u32, n: usize, seed: u64) -> impl Iterator<Item = Mapping> {
    (0..n as u64).map(move |i| sample_uniform_one(k, b, seed, i))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsMode {
    Exact,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityStats {
    pub k: usize,
    pub b: u32,
    pub count_evaluated: u64,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    pub mode: StatsMode,
}

impl CapacityStats {
    pub const CSV_HEADER: &'static str = "k,b,mode,count,min,mean,max";

    pub fn csv_row(&self) -> String {
        let mode = match self.mode {
            StatsMode::Exact => "exact",
            StatsMode::Sampled { .. } => "sampled",
        };
        format!("{},{},{},{},{:.6},{:.6},{:.6}", self.k, self.b, mode, self.count_evaluated, self.min, self.mean, self.max)
    }
}

impl fmt::Display for CapacityStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.csv_row())
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Running min/max/mean over a stream of capacities.
#[derive(Debug, Clone)]
pub struct StatsAccumulator {
    count: u64,
    min: f64,
    max: f64,
    sum: CompensatedSum,
}

impl Default for StatsAccumulator {
    fn default() -> Self {
        StatsAccumulator { count: 0, min: f64::INFINITY, max: f64::NEG_INFINITY, sum: CompensatedSum::default() }
    }
}

impl StatsAccumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.min = self.min.min(x);
        self.max = self.max.max(x);
        self.sum.add(x);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.sum.value() / self.count as f64
    }
}

/// Maps `eval` over `mappings` on a pool of `workers` threads, feeding the
/// results to `sink` in stream order.
pub fn for_each_ordered<I, T, F, S>(mappings: I, workers: usize, eval: F, mut sink: S) -> Result<()>
where
    I: Iterator<Item = Mapping>,
    T: Send,
    F: Fn(&Mapping) -> Result<T> + Sync,
    S: FnMut(&Mapping, T),
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameters(format!("cannot start worker pool: {e}")))?;
    let mut mappings = mappings.peekable();
    while mappings.peek().is_some() {
        let batch: Vec<Mapping> = mappings.by_ref().take(BATCH).collect();
        let results: Vec<Result<T>> = pool.install(|| batch.par_iter().map(&eval).collect());
        for (f, r) in batch.iter().zip(results) {
            sink(f, r?);
        }
    }
    Ok(())
}

pub fn capacity_stats(k: usize, b: u32, mode: StatsMode, workers: usize) -> Result<CapacityStats> {
    capacity_stats_with(k, b, mode, workers, DEFAULT_ENUMERATION_CAP, &CapacityOptions::default())
}

pub fn capacity_stats_with(
    k: usize,
    b: u32,
    mode: StatsMode,
    workers: usize,
    enumeration_cap: u64,
    opts: &CapacityOptions,
) -> Result<CapacityStats> {
    let stream: Box<dyn Iterator<Item = Mapping>> = match mode {
        StatsMode::Exact => Box::new(enumerate_balanced(k, b, enumeration_cap)?),
        StatsMode::Sampled { samples, seed } => Box::new(sample_balanced(k, b, samples, seed)?),
    };
    let mut acc = StatsAccumulator::default();
    for_each_ordered(
        stream,
        workers,
        |f| capacity_spectral_with(f, opts).map(|r| r.capacity_bits_per_base),
        |_, c| acc.push(c),
    )?;
    if acc.count() == 0 {
        return Err(Error::InvalidParameters("no mappings evaluated".into()));
    }
    Ok(CapacityStats { k, b, count_evaluated: acc.count(), min: acc.min, mean: acc.mean(), max: acc.max, mode })
}

/// Expected stream length for exact mode, if it fits in a `u64`.
pub fn exact_count_u64(k: usize, b: u32) -> Option<u64> {
    balanced_count(k, b).and_then(|c| c.to_u64())
}
