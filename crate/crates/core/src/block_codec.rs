//! Block coding scheme.
//!
//! A codebook holds one strand of length `ell` for each readout of length
//! `ell - k + 1` that some strand produces: the lexicographically least such
//! strand. Messages are cut into blocks, every block becomes one codebook
//! strand, and the strands are concatenated. The `k - 1` readings straddling
//! two blocks are ignored on decoding.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::automata::{build_dfa, build_nfa, ChannelDfa, ChannelNfa, StateSet, DEFAULT_STATE_CAP};
use crate::capacity::{fixed_length_capacities, spectral_from_dfa, CapacityOptions};
use crate::channel::{apply_channel, Base, Mapping, Readout, Strand};
use crate::error::{Error, Result};

/// Largest `4^ell` handled by enumerating every strand.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 26;
pub const DEFAULT_LENGTH_SEARCH_CAP: usize = 200;
pub const CODEBOOK_FORMAT: &str = "porecap-block-codebook";
pub const CODEBOOK_VERSION: u32 = 1;

/// Slack on the rate comparison in [`choose_block_length`], so that a block
/// length landing exactly on `C_f - eps` is not rejected by rounding.
const RATE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodeMode {
    /// Each `bits_per_block` bits select one strand; linear time.
    Chunked,
    /// The whole message is one number written in base `|E|`.
    Radix,
}

impl fmt::Display for EncodeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodeMode::Chunked => "chunked",
            EncodeMode::Radix => "radix",
        })
    }
}

impl FromStr for EncodeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chunked" => Ok(EncodeMode::Chunked),
            "radix" => Ok(EncodeMode::Radix),
            other => Err(Error::InvalidParameters(format!("unknown encoding mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BlockCodebook {
    f: Mapping,
    block_length: usize,
    /// Index to strand, in lexicographic strand order.
    strands: Vec<Strand>,
    /// Readout of each strand back to its index.
    inverse: HashMap<Vec<u32>, u32>,
    bits_per_block: usize,
}

impl BlockCodebook {
    fn from_strands(f: Mapping, block_length: usize, strands: Vec<Strand>) -> Result<Self> {
        let mut inverse = HashMap::with_capacity(strands.len());
        for (i, s) in strands.iter().enumerate() {
            if s.len() != block_length {
                return Err(Error::MalformedCodebook(format!("strand {i} has length {}", s.len())));
            }
            let r = apply_channel(&f, s)?;
            if inverse.insert(r.into_levels(), i as u32).is_some() {
                return Err(Error::MalformedCodebook(format!("strand {i} repeats an earlier readout")));
            }
        }
        let bits_per_block = floor_log2(strands.len());
        Ok(BlockCodebook { f, block_length, strands, inverse, bits_per_block })
    }

    pub fn mapping(&self) -> &Mapping {
        &self.f
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }

    /// Readings per block that carry data, `ell - k + 1`.
    pub fn payload_readings(&self) -> usize {
        self.block_length - self.f.k() + 1
    }

    pub fn size(&self) -> usize {
        self.strands.len()
    }

    pub fn strands(&self) -> &[Strand] {
        &self.strands
    }

    pub fn strand(&self, index: usize) -> &Strand {
        &self.strands[index]
    }

    pub fn index_of(&self, block_readout: &[u32]) -> Option<usize> {
        self.inverse.get(block_readout).map(|&i| i as usize)
    }

    /// `floor(log2 |E|)`.
    pub fn bits_per_block(&self) -> usize {
        self.bits_per_block
    }

    /// Bits per base realised by chunked encoding.
    pub fn chunked_rate(&self) -> f64 {
        self.bits_per_block as f64 / self.block_length as f64
    }

    /// `log2 |E| / ell`, the rate radix encoding approaches.
    pub fn radix_rate(&self) -> f64 {
        (self.strands.len() as f64).log2() / self.block_length as f64
    }

    pub fn to_json(&self, mode: EncodeMode) -> String {
        let file = CodebookFile {
            format: CODEBOOK_FORMAT.to_string(),
            version: CODEBOOK_VERSION,
            k: self.f.k(),
            b: self.f.b(),
            block_length: self.block_length,
            size: self.strands.len(),
            mode,
            mapping: serde_json::from_str(&self.f.to_json()).expect("mapping JSON is valid"),
            strands: self.strands.iter().map(|s| s.to_string()).collect(),
        };
        serde_json::to_string(&file).expect("codebook serializes")
    }

    /// Loads a persisted codebook, re-checking injectivity. Returns the
    /// encoding mode recorded in the header as well.
    pub fn from_json(text: &str) -> Result<(Self, EncodeMode)> {
        let file: CodebookFile = serde_json::from_str(text).map_err(|e| Error::MalformedCodebook(e.to_string()))?;
        if file.format != CODEBOOK_FORMAT || file.version != CODEBOOK_VERSION {
            return Err(Error::MalformedCodebook(format!("unsupported format {} v{}", file.format, file.version)));
        }
        let f = Mapping::from_json(&file.mapping.to_string())?;
        if f.k() != file.k || f.b() != file.b || file.size != file.strands.len() {
            return Err(Error::MalformedCodebook("header disagrees with contents".into()));
        }
        let strands = file.strands.iter().map(|s| s.parse()).collect::<Result<Vec<Strand>>>()?;
        Ok((BlockCodebook::from_strands(f, file.block_length, strands)?, file.mode))
    }
}

#[derive(Serialize, Deserialize)]
struct CodebookFile {
    format: String,
    version: u32,
    k: usize,
    b: u32,
    block_length: usize,
    size: usize,
    mode: EncodeMode,
    mapping: serde_json::Value,
    strands: Vec<String>,
}

fn floor_log2(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (usize::BITS - 1 - n.leading_zeros()) as usize
    }
}

pub fn build_codebook(f: &Mapping, block_length: usize) -> Result<BlockCodebook> {
    build_codebook_with(f, block_length, DEFAULT_ENUMERATION_CAP, DEFAULT_STATE_CAP)
}

/// Enumerates strands when `4^ell <= enumeration_cap`, otherwise walks the
/// automata. Both routes produce the same codebook.
pub fn build_codebook_with(f: &Mapping, block_length: usize, enumeration_cap: u64, state_cap: usize) -> Result<BlockCodebook> {
    if block_length < f.k() {
        return Err(Error::BlockTooShort { block_length, k: f.k() });
    }
    if block_length <= 31 && 1u64 << (2 * block_length) <= enumeration_cap {
        build_codebook_enumerated(f, block_length)
    } else {
        build_codebook_from_automata(f, block_length, state_cap)
    }
}

/// Scans all `4^ell` strands in lexicographic order and keeps the first
/// strand seen for each readout.
pub fn build_codebook_enumerated(f: &Mapping, block_length: usize) -> Result<BlockCodebook> {
    let k = f.k();
    if block_length < k {
        return Err(Error::BlockTooShort { block_length, k });
    }
    let m = block_length - k + 1;
    let mask = f.kmer_count() - 1;
    let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut strands = Vec::new();
    let mut readout = vec![0u32; m];
    for value in 0..1u64 << (2 * block_length) {
        let mut window = (value >> (2 * m)) as usize;
        for (j, slot) in readout.iter_mut().enumerate() {
            let base = (value >> (2 * (m - 1 - j))) as usize & 3;
            window = ((window << 2) | base) & mask;
            *slot = f.level(window);
        }
        if !seen.contains_key(readout.as_slice()) {
            seen.insert(readout.clone(), strands.len() as u32);
            strands.push(Strand::from_index(value, block_length));
        }
    }
    Ok(BlockCodebook {
        bits_per_block: floor_log2(strands.len()),
        f: f.clone(),
        block_length,
        strands,
        inverse: seen,
    })
}

/// Lists every accepted readout by depth-first search on the DFA and builds
/// its least preimage from the NFA, then orders the strands.
pub fn build_codebook_from_automata(f: &Mapping, block_length: usize, state_cap: usize) -> Result<BlockCodebook> {
    let k = f.k();
    if block_length < k {
        return Err(Error::BlockTooShort { block_length, k });
    }
    let m = block_length - k + 1;
    let nfa = build_nfa(f);
    let dfa = build_dfa(f, state_cap)?;
    let mut strands = Vec::new();
    let mut path = Vec::with_capacity(m);
    collect_readouts(&dfa, dfa.initial(), m, &mut path, &mut |r| {
        strands.push(least_preimage(&nfa, r).expect("accepted readout has a preimage"));
    });
    strands.sort_unstable();
    BlockCodebook::from_strands(f.clone(), block_length, strands)
}

fn collect_readouts(dfa: &ChannelDfa, state: usize, remaining: usize, path: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if remaining == 0 {
        emit(path);
        return;
    }
    for &(level, next) in dfa.transitions(state) {
        path.push(level);
        collect_readouts(dfa, next as usize, remaining - 1, path, emit);
        path.pop();
    }
}

/// Lexicographically least strand whose readout is `readout`.
pub fn least_preimage(nfa: &ChannelNfa, readout: &[u32]) -> Option<Strand> {
    let width = nfa.state_count();
    let m = readout.len();
    // live[j]: states from which readout[j..] can still be read
    let mut live = vec![StateSet::full(width); m + 1];
    for j in (0..m).rev() {
        let mut set = StateSet::empty(width);
        for q in 0..width {
            if nfa.edges(q).iter().any(|&(l, t)| l == readout[j] && live[j + 1].contains(t)) {
                set.insert(q);
            }
        }
        live[j] = set;
    }
    let start = live[0].iter().next()?;
    let k = nfa.k();
    let mut bases: Vec<Base> = Strand::from_index(start as u64, k - 1).into_bases();
    let mut q = start;
    for j in 0..m {
        let (x, t) = nfa
            .edges(q)
            .iter()
            .enumerate()
            .find(|(_, &(l, t))| l == readout[j] && live[j + 1].contains(t))
            .map(|(x, &(_, t))| (x, t))?;
        bases.push(Base::from_index(x));
        q = t;
    }
    Some(Strand::new(bases))
}

/// Smallest `ell >= k` whose block rate is within `eps` of capacity.
pub fn choose_block_length(f: &Mapping, eps: f64) -> Result<usize> {
    choose_block_length_with(f, eps, DEFAULT_LENGTH_SEARCH_CAP, &CapacityOptions::default())
}

pub fn choose_block_length_with(f: &Mapping, eps: f64, cap: usize, opts: &CapacityOptions) -> Result<usize> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidParameters(format!("eps must be positive, got {eps}")));
    }
    let dfa = build_dfa(f, opts.state_cap)?;
    let target = spectral_from_dfa(&dfa, opts)?.capacity_bits_per_base - eps;
    let rates = fixed_length_capacities(&dfa, f.k(), cap);
    if let Some(&(ell, _)) = rates.iter().find(|&&(_, rate)| rate >= target - RATE_SLACK) {
        return Ok(ell);
    }
    let (best_length, best_rate) = rates.iter().copied().fold((f.k(), f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    Err(Error::BlockLengthSearchExhausted { cap, best_length, best_rate })
}

fn require_information(cb: &BlockCodebook) -> Result<()> {
    if cb.bits_per_block == 0 {
        return Err(Error::EmptyCodebook { size: cb.size() });
    }
    Ok(())
}

fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

fn strand_from_indices(cb: &BlockCodebook, indices: impl IntoIterator<Item = usize>) -> Strand {
    let mut out = Strand::default();
    for i in indices {
        out.extend_from_slice(cb.strands[i].bases());
    }
    out
}

/// Chunked encoding of a message whose length is a multiple of
/// `bits_per_block`. Bits are read most significant first within a chunk.
pub fn block_encode(cb: &BlockCodebook, message: &[bool]) -> Result<Strand> {
    require_information(cb)?;
    let chunk = cb.bits_per_block;
    if !message.len().is_multiple_of(chunk) {
        return Err(Error::UnalignedMessage { len: message.len(), chunk });
    }
    Ok(strand_from_indices(cb, message.chunks(chunk).map(bits_to_index)))
}

/// Codebook indices of the blocks of a channel output.
pub fn decode_indices(cb: &BlockCodebook, readout: &Readout) -> Result<Vec<usize>> {
    let levels = readout.levels();
    if levels.is_empty() {
        return Ok(Vec::new());
    }
    let ell = cb.block_length;
    let payload = cb.payload_readings();
    let total = levels.len() + cb.f.k() - 1;
    if !total.is_multiple_of(ell) {
        return Err(Error::ReadoutLengthMismatch { len: levels.len() });
    }
    (0..total / ell)
        .map(|block| {
            let start = block * ell;
            cb.index_of(&levels[start..start + payload]).ok_or(Error::UnreachableReadout { block })
        })
        .collect()
}

/// Inverse of [`block_encode`] composed with the channel.
pub fn block_decode(cb: &BlockCodebook, readout: &Readout) -> Result<Vec<bool>> {
    require_information(cb)?;
    let chunk = cb.bits_per_block;
    let indices = decode_indices(cb, readout)?;
    let mut bits = Vec::with_capacity(indices.len() * chunk);
    for i in indices {
        if i >> chunk != 0 {
            return Err(Error::UnreachableReadout { block: bits.len() / chunk });
        }
        bits.extend((0..chunk).rev().map(|s| (i >> s) & 1 == 1));
    }
    Ok(bits)
}

/// Appends a 1 and then zeros up to the next chunk boundary.
pub fn pad_message(message: &[bool], chunk: usize) -> Vec<bool> {
    let mut out = message.to_vec();
    out.push(true);
    while !out.len().is_multiple_of(chunk) {
        out.push(false);
    }
    out
}

/// Strips trailing zeros and the final 1 added by [`pad_message`].
pub fn unpad_message(mut bits: Vec<bool>) -> Result<Vec<bool>> {
    let one = bits.iter().rposition(|&b| b).ok_or(Error::BadPadding)?;
    bits.truncate(one);
    Ok(bits)
}

/// Encodes any message; chunked mode pads, radix mode is self-delimiting.
pub fn encode_message(cb: &BlockCodebook, message: &[bool], mode: EncodeMode) -> Result<Strand> {
    require_information(cb)?;
    match mode {
        EncodeMode::Chunked => block_encode(cb, &pad_message(message, cb.bits_per_block)),
        EncodeMode::Radix => Ok(strand_from_indices(cb, radix_digits(message, cb.size()))),
    }
}

pub fn decode_message(cb: &BlockCodebook, readout: &Readout, mode: EncodeMode) -> Result<Vec<bool>> {
    require_information(cb)?;
    match mode {
        EncodeMode::Chunked => unpad_message(block_decode(cb, readout)?),
        EncodeMode::Radix => radix_bits(&decode_indices(cb, readout)?, cb.size()),
    }
}

/// Digits of `1 · message` (a leading sentinel bit) in base `radix`, most
/// significant first.
fn radix_digits(message: &[bool], radix: usize) -> Vec<usize> {
    let mut bytes = vec![0u8; (message.len() + 1).div_ceil(8)];
    for (i, &bit) in std::iter::once(&true).chain(message).enumerate() {
        if bit {
            let pos = message.len() - i;
            bytes[pos / 8] |= 1 << (pos % 8);
        }
    }
    let value = BigUint::from_bytes_le(&bytes);
    if radix.is_power_of_two() {
        let mut digits = Vec::new();
        let mut v = value;
        let mask = BigUint::from(radix - 1);
        let shift = radix.trailing_zeros();
        while !v.is_zero() {
            digits.push((&v & &mask).to_usize().unwrap());
            v >>= shift;
        }
        digits.reverse();
        digits
    } else {
        value.to_radix_be(radix as u32).into_iter().map(|d| d as usize).collect()
    }
}

fn radix_bits(digits: &[usize], radix: usize) -> Result<Vec<bool>> {
    let mut value = BigUint::zero();
    for &d in digits {
        value = value * radix + d;
    }
    let bits = value.bits() as usize;
    if bits == 0 {
        return Err(Error::BadPadding);
    }
    Ok((0..bits - 1).rev().map(|i| value.bit(i as u64)).collect())
}

/// Parses a text message of `0`/`1` characters, ignoring whitespace.
pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidParameters(format!("invalid bit {c:?} at position {i}"))),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::count_readouts;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn first_base() -> Mapping {
        Mapping::from_fn(2, 2, |i| (i >> 3) as u32).unwrap()
    }

    fn random_mapping(k: usize, b: u32, seed: u64) -> Mapping {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Mapping::from_fn(k, b, |_| rng.gen_range(0..b)).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        parse_bits(s).unwrap()
    }

    #[test]
    fn first_base_block3_codebook() {
        let cb = build_codebook(&first_base(), 3).unwrap();
        let strands: Vec<String> = cb.strands().iter().map(|s| s.to_string()).collect();
        assert_eq!(strands, ["AAA", "AGA", "GAA", "GGA"]);
        for (i, r) in [[0, 0], [0, 1], [1, 0], [1, 1]].iter().enumerate() {
            assert_eq!(cb.index_of(r), Some(i));
        }
        assert_eq!(cb.bits_per_block(), 2);
    }

    #[test]
    fn worked_encode_decode() {
        let cb = build_codebook(&first_base(), 3).unwrap();
        let s = block_encode(&cb, &bits("0111")).unwrap();
        assert_eq!(s.to_string(), "AGAGGA");
        let r = apply_channel(cb.mapping(), &s).unwrap();
        assert_eq!(r.levels(), &[0, 1, 0, 1, 1]);
        assert_eq!(block_decode(&cb, &r).unwrap(), bits("0111"));
        // the straddling reading is ignored
        let tampered = Readout::new(vec![0, 1, 1, 1, 1]);
        assert_eq!(block_decode(&cb, &tampered).unwrap(), bits("0111"));

        assert!(block_encode(&cb, &[]).unwrap().is_empty());
        assert!(block_decode(&cb, &Readout::default()).unwrap().is_empty());
        let zero = apply_channel(cb.mapping(), cb.strand(0)).unwrap();
        assert_eq!(block_decode(&cb, &zero).unwrap(), bits("00"));
    }

    #[test]
    fn decode_errors() {
        let cb = build_codebook(&first_base(), 3).unwrap();
        assert!(matches!(block_decode(&cb, &Readout::new(vec![0, 1, 0])), Err(Error::ReadoutLengthMismatch { len: 3 })));
        assert!(matches!(block_encode(&cb, &bits("011")), Err(Error::UnalignedMessage { len: 3, chunk: 2 })));
        let f = Mapping::from_fn(2, 3, |i| (i >> 3) as u32).unwrap();
        let cb3 = build_codebook(&f, 2).unwrap();
        // level 2 never occurs
        assert!(matches!(block_decode(&cb3, &Readout::new(vec![2])), Err(Error::UnreachableReadout { block: 0 })));
    }

    #[test]
    fn single_window_blocks() {
        let f = Mapping::from_fn(2, 4, |i| [0, 0, 3, 3][i >> 2]).unwrap();
        let cb = build_codebook(&f, 2).unwrap();
        assert_eq!(cb.size(), f.image_size());
        let constant = build_codebook(&Mapping::constant(2, 2, 0).unwrap(), 4).unwrap();
        assert_eq!(constant.size(), 1);
        assert!(matches!(block_encode(&constant, &bits("0")), Err(Error::EmptyCodebook { size: 1 })));
        assert!(matches!(build_codebook(&f, 1), Err(Error::BlockTooShort { .. })));
    }

    #[test]
    fn codebook_size_matches_count_and_is_injective() {
        let f = random_mapping(2, 4, 1);
        let cb = build_codebook(&f, 5).unwrap();
        assert_eq!(BigUint::from(cb.size()), count_readouts(&f, 4).unwrap());
        let readouts: std::collections::HashSet<Readout> =
            cb.strands().iter().map(|s| apply_channel(&f, s).unwrap()).collect();
        assert_eq!(readouts.len(), cb.size());
        assert!(cb.strands().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn automata_route_matches_enumeration() {
        for (seed, (k, b)) in [(2, 2), (2, 4), (3, 2), (3, 3), (1, 4)].iter().enumerate() {
            let f = random_mapping(*k, *b, seed as u64);
            for ell in *k..=8.min(*k + 5) {
                let a = build_codebook_enumerated(&f, ell).unwrap();
                let d = build_codebook_from_automata(&f, ell, DEFAULT_STATE_CAP).unwrap();
                assert_eq!(a.strands(), d.strands(), "k {k} b {b} ell {ell}");
            }
        }
        let f = random_mapping(2, 2, 77);
        let a = build_codebook_enumerated(&f, 8).unwrap();
        let d = build_codebook_with(&f, 8, 16, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(a.strands(), d.strands());
    }

    #[test]
    fn block_length_choice() {
        assert_eq!(choose_block_length(&first_base(), 0.1).unwrap(), 10);
        assert_eq!(choose_block_length(&first_base(), 1.0).unwrap(), 2);
        let f = random_mapping(2, 4, 5);
        let ell = choose_block_length(&f, 0.2).unwrap();
        let c = crate::capacity::capacity_spectral(&f).unwrap().capacity_bits_per_base;
        assert!(crate::capacity::fixed_length_capacity(&f, ell).unwrap() >= c - 0.2 - 1e-9);
        assert!(choose_block_length(&first_base(), 0.0).is_err());
        assert!(matches!(
            choose_block_length_with(&first_base(), 0.01, 20, &CapacityOptions::default()),
            Err(Error::BlockLengthSearchExhausted { cap: 20, best_length: 20, .. })
        ));
    }

    #[test]
    fn rate_realization() {
        let f = random_mapping(2, 3, 8);
        for ell in 2..=9 {
            let cb = build_codebook(&f, ell).unwrap();
            let c_ell = crate::capacity::fixed_length_capacity(&f, ell).unwrap();
            assert!(cb.chunked_rate() >= c_ell - 1.0 / ell as f64);
            assert!((cb.radix_rate() - c_ell).abs() < 1e-12);
        }
    }

    #[test]
    fn padded_and_radix_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cb = build_codebook(&random_mapping(2, 3, 2), 6).unwrap();
        assert!(!cb.size().is_power_of_two());
        for len in 0..40 {
            let msg: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
            for mode in [EncodeMode::Chunked, EncodeMode::Radix] {
                let s = encode_message(&cb, &msg, mode).unwrap();
                assert_eq!(s.len() % 6, 0);
                let r = apply_channel(cb.mapping(), &s).unwrap();
                assert_eq!(decode_message(&cb, &r, mode).unwrap(), msg, "mode {mode} len {len}");
            }
        }
    }

    #[test]
    fn codebook_file_roundtrip() {
        let cb = build_codebook(&random_mapping(2, 4, 9), 4).unwrap();
        let text = cb.to_json(EncodeMode::Radix);
        let (back, mode) = BlockCodebook::from_json(&text).unwrap();
        assert_eq!(mode, EncodeMode::Radix);
        assert_eq!(back.strands(), cb.strands());
        assert_eq!(back.block_length(), 4);
        let broken = text.replacen("\"version\":1", "\"version\":9", 1);
        assert!(matches!(BlockCodebook::from_json(&broken), Err(Error::MalformedCodebook(_))));
    }

    #[test]
    fn bit_text() {
        assert_eq!(format_bits(&bits("01 1\n0")), "0110");
        assert!(parse_bits("012").is_err());
        assert_eq!(unpad_message(bits("0111")).unwrap(), bits("011"));
        assert_eq!(unpad_message(pad_message(&bits("01"), 4)).unwrap(), bits("01"));
        assert!(unpad_message(bits("000")).is_err());
    }
}
