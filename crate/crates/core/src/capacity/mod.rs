//! Channel capacity in bits per base.
//!
//! The number of achievable readouts of length `m` is the number of length-`m`
//! words accepted by the trimmed DFA. Its exponential growth rate is the
//! Perron root of the DFA's transfer matrix, equivalently the reciprocal of
//! the smallest positive root of `det(I - zT)`. Both routes are implemented
//! and are expected to agree.

mod charpoly;
mod matrix;
mod spectral;

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::automata::{build_dfa, ChannelDfa, DEFAULT_STATE_CAP};
use crate::channel::Mapping;
use crate::error::{Error, Result};

pub use charpoly::{det_one_minus_zt, smallest_root_in_unit_interval};
pub use matrix::TransferMatrix;
pub use spectral::spectral_radius;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;
pub const DEFAULT_CHARPOLY_DIM_CAP: usize = 64;
/// Maximum allowed gap between the two methods.
pub const METHOD_AGREEMENT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Spectral,
    CharPoly,
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Spectral => "spectral",
            Method::CharPoly => "charpoly",
            Method::Both => "both",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Method::Spectral),
            "charpoly" => Ok(Method::CharPoly),
            "both" => Ok(Method::Both),
            other => Err(Error::InvalidParameters(format!("unknown capacity method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CapacityOptions {
    pub state_cap: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub charpoly_dim_cap: usize,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        CapacityOptions {
            state_cap: DEFAULT_STATE_CAP,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            charpoly_dim_cap: DEFAULT_CHARPOLY_DIM_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub capacity_bits_per_base: f64,
    /// `2^capacity`; the reciprocal of the smallest positive singularity.
    pub spectral_radius: f64,
    pub dfa_states: usize,
    pub method: Method,
}

impl CapacityResult {
    fn from_radius(spectral_radius: f64, dfa_states: usize, method: Method) -> Self {
        CapacityResult { capacity_bits_per_base: spectral_radius.log2(), spectral_radius, dfa_states, method }
    }
}

pub fn capacity_spectral(f: &Mapping) -> Result<CapacityResult> {
    capacity_spectral_with(f, &CapacityOptions::default())
}

pub fn capacity_spectral_with(f: &Mapping, opts: &CapacityOptions) -> Result<CapacityResult> {
    let dfa = build_dfa(f, opts.state_cap)?;
    spectral_from_dfa(&dfa, opts)
}

pub fn spectral_from_dfa(dfa: &ChannelDfa, opts: &CapacityOptions) -> Result<CapacityResult> {
    let t = TransferMatrix::from_dfa(dfa);
    let rho = spectral_radius(&t, opts.tolerance, opts.max_iterations)?;
    Ok(CapacityResult::from_radius(rho, dfa.state_count(), Method::Spectral))
}

pub fn capacity_charpoly(f: &Mapping) -> Result<CapacityResult> {
    capacity_charpoly_with(f, &CapacityOptions::default())
}

pub fn capacity_charpoly_with(f: &Mapping, opts: &CapacityOptions) -> Result<CapacityResult> {
    let dfa = build_dfa(f, opts.state_cap)?;
    charpoly_from_dfa(&dfa, opts)
}

pub fn charpoly_from_dfa(dfa: &ChannelDfa, opts: &CapacityOptions) -> Result<CapacityResult> {
    let dim = dfa.state_count();
    if dim > opts.charpoly_dim_cap {
        return Err(Error::DimensionCapExceeded { dim, cap: opts.charpoly_dim_cap });
    }
    let p = det_one_minus_zt(&TransferMatrix::from_dfa(dfa));
    // Every nonempty subset has a successor, so the Perron root is >= 1 and
    // its reciprocal lies in (0, 1].
    let r = smallest_root_in_unit_interval(&p, 60)
        .ok_or_else(|| Error::InvalidParameters("det(I - zT) has no root in (0, 1]".into()))?;
    Ok(CapacityResult::from_radius(1.0 / r, dim, Method::CharPoly))
}

/// Runs both methods and insists they agree to within [`METHOD_AGREEMENT`].
pub fn capacity_both_with(f: &Mapping, opts: &CapacityOptions) -> Result<CapacityResult> {
    let dfa = build_dfa(f, opts.state_cap)?;
    let spectral = spectral_from_dfa(&dfa, opts)?;
    let exact = charpoly_from_dfa(&dfa, opts)?;
    let gap = (spectral.capacity_bits_per_base - exact.capacity_bits_per_base).abs();
    if gap > METHOD_AGREEMENT {
        return Err(Error::InvalidParameters(format!(
            "spectral ({}) and characteristic-polynomial ({}) capacities disagree",
            spectral.capacity_bits_per_base, exact.capacity_bits_per_base
        )));
    }
    Ok(CapacityResult { method: Method::Both, ..spectral })
}

pub fn capacity_with(f: &Mapping, method: Method, opts: &CapacityOptions) -> Result<CapacityResult> {
    match method {
        Method::Spectral => capacity_spectral_with(f, opts),
        Method::CharPoly => capacity_charpoly_with(f, opts),
        Method::Both => capacity_both_with(f, opts),
    }
}

/// Achievable readout counts `N_0, ..., N_max_len` by propagating path
/// counts through the DFA.
pub fn readout_counts(dfa: &ChannelDfa, max_len: usize) -> Vec<BigUint> {
    let n = dfa.state_count();
    let mut occupancy = vec![BigUint::zero(); n];
    occupancy[dfa.initial()] = BigUint::one();
    let mut out = Vec::with_capacity(max_len + 1);
    out.push(BigUint::one());
    for _ in 0..max_len {
        let mut next = vec![BigUint::zero(); n];
        for (state, count) in occupancy.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            for &(_, target) in dfa.transitions(state) {
                next[target as usize] += count;
            }
        }
        occupancy = next;
        out.push(occupancy.iter().sum());
    }
    out
}

/// Exact number of readouts of length `m` produced by some strand.
pub fn count_readouts(f: &Mapping, m: usize) -> Result<BigUint> {
    count_readouts_with(f, m, DEFAULT_STATE_CAP)
}

pub fn count_readouts_with(f: &Mapping, m: usize, state_cap: usize) -> Result<BigUint> {
    let dfa = build_dfa(f, state_cap)?;
    Ok(readout_counts(&dfa, m).pop().unwrap())
}

/// `log2` of an arbitrarily large integer.
pub fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().unwrap().log2() + shift as f64
}

/// Rate of the block scheme at block length `ell`: `log2 N_{ell-k+1} / ell`.
pub fn fixed_length_capacity(f: &Mapping, ell: usize) -> Result<f64> {
    if ell < f.k() {
        return Err(Error::BlockTooShort { block_length: ell, k: f.k() });
    }
    Ok(log2_big(&count_readouts(f, ell - f.k() + 1)?) / ell as f64)
}

/// Same as [`fixed_length_capacity`], for every `ell` in `k..=max_ell`,
/// sharing one DFA.
pub fn fixed_length_capacities(dfa: &ChannelDfa, k: usize, max_ell: usize) -> Vec<(usize, f64)> {
    if max_ell < k {
        return Vec::new();
    }
    let counts = readout_counts(dfa, max_ell - k + 1);
    (k..=max_ell).map(|ell| (ell, log2_big(&counts[ell - k + 1]) / ell as f64)).collect()
}
