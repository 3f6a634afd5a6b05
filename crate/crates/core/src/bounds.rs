//! Closed-form capacity bounds over all mappings for given `(k, b)`, and the
//! extremal mappings that witness them.

use crate::channel::Mapping;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityBounds {
    pub k: usize,
    pub b: u32,
    /// Best capacity over all mappings, `min(log2 b, 2)`.
    pub max_capacity: f64,
    /// Every mapping reaches at least `log2(b) / k`.
    pub min_capacity_lower: f64,
    /// Some balanced mapping has capacity at most 1; only known for `b <= 2^k`.
    pub min_capacity_upper: Option<f64>,
}

impl CapacityBounds {
    pub const CSV_HEADER: &'static str = "b,max,min_lower,min_upper";

    /// `b,max,min_lower,min_upper` with an empty last field when the upper
    /// bound on the worst case is unknown.
    pub fn csv_row(&self) -> String {
        let upper = self.min_capacity_upper.map(|u| format!("{u:.9}")).unwrap_or_default();
        format!("{},{:.9},{:.9},{}", self.b, self.max_capacity, self.min_capacity_lower, upper)
    }
}

pub fn bounds(k: usize, b: u32) -> CapacityBounds {
    let log_b = (b as f64).log2();
    let below_binary = (b as u128) <= 1u128 << k.min(127);
    CapacityBounds {
        k,
        b,
        max_capacity: log_b.min(2.0),
        min_capacity_lower: log_b / k as f64,
        min_capacity_upper: below_binary.then_some(1.0),
    }
}

/// Bounds for `b = 1, 2, 4, ...` up to `max_b`.
pub fn bounds_sweep(k: usize, max_b: u32) -> Vec<CapacityBounds> {
    std::iter::successors(Some(1u32), |&b| b.checked_mul(2)).take_while(|&b| b <= max_b).map(|b| bounds(k, b)).collect()
}

/// A balanced mapping whose level determines the first base of the window,
/// which makes it capacity-optimal.
///
/// For `b = 2` the level is 0 exactly when the first base is A or C. For
/// `b >= 4` each first base owns `b / 4` levels, split evenly by the base-4
/// value of the remaining `k - 1` bases.
pub fn build_first_symbol_mapping(k: usize, b: u32) -> Result<Mapping> {
    if k == 0 {
        return Err(Error::InvalidParameters("k must be at least 1".into()));
    }
    let rest = 1usize << (2 * (k - 1));
    if b == 2 {
        return Mapping::from_fn(k, 2, |i| ((i / rest) / 2) as u32);
    }
    let kmers = 4 * rest as u64;
    if b < 4 || b as u64 > kmers || !kmers.is_multiple_of(b as u64) {
        return Err(Error::InvalidParameters(format!(
            "first-symbol mapping needs b = 2 or 4 <= b <= 4^k with b dividing 4^k, got k = {k}, b = {b}"
        )));
    }
    let per_base = (b / 4) as usize;
    Mapping::from_fn(k, b, |i| {
        let (first, tail) = (i / rest, i % rest);
        (first * per_base + tail * per_base / rest) as u32
    })
}

/// A mapping on `{A, G}^k`, indexed by the binary value with `A = 0, G = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMapping {
    k: usize,
    b: u32,
    table: Vec<u32>,
}

impl BinaryMapping {
    /// Requires `f'` to be balanced: each level has exactly `2^k / b` preimages.
    pub fn new(k: usize, b: u32, table: Vec<u32>) -> Result<Self> {
        if k == 0 || k > crate::channel::MAX_K || b == 0 {
            return Err(Error::InvalidParameters(format!("invalid binary mapping parameters k = {k}, b = {b}")));
        }
        let n = 1usize << k;
        if table.len() != n {
            return Err(Error::InvalidParameters(format!("binary table needs 2^{k} = {n} entries, got {}", table.len())));
        }
        if table.iter().any(|&l| l >= b) {
            return Err(Error::InvalidParameters("binary table level not below b".into()));
        }
        let mut counts = vec![0usize; b as usize];
        for &l in &table {
            counts[l as usize] += 1;
        }
        if !n.is_multiple_of(b as usize) || counts.iter().any(|&c| c != n / b as usize) {
            return Err(Error::InvalidParameters("binary mapping is not balanced".into()));
        }
        Ok(BinaryMapping { k, b, table })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }
}

/// Lifts `f'` to `{A, C, G, T}^k` by reading C as A and T as G.
///
/// Only `2^n` strands of length `n` are distinguishable afterwards, so the
/// result has capacity at most 1.
pub fn build_merged_mapping(f_prime: &BinaryMapping) -> Result<Mapping> {
    let k = f_prime.k;
    Mapping::from_fn(k, f_prime.b, |i| {
        let binary = (0..k).fold(0usize, |acc, pos| {
            let base = (i >> (2 * (k - 1 - pos))) & 3;
            (acc << 1) | (base >> 1)
        });
        f_prime.table[binary]
    })
}
