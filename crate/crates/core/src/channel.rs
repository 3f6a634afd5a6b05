//! DNA strands, current readouts, k-mer mappings, and the sliding-window
//! channel that turns a strand into its readout.
//!
//! A k-mer indexes a mapping table by its base-4 value with `A=0, C=1,
//! G=2, T=3`, most significant base first. The same order is used for all
//! lexicographic tie-breaking in the crate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer};

use crate::error::{Error, Result};

/// Largest supported window size. The determinized automaton uses subsets
/// of `4^(k-1)` states, so anything beyond this is out of reach anyway.
pub const MAX_K: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Base {
    A = 0,
    C = 1,
    G = 2,
    T = 3,
}

impl Base {
    pub const ALL: [Base; 4] = [Base::A, Base::C, Base::G, Base::T];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Base {
        Base::ALL[i & 3]
    }

    /// Uppercase only; lowercase input is rejected rather than coerced.
    pub fn from_char(c: char) -> Option<Base> {
        match c {
            'A' => Some(Base::A),
            'C' => Some(Base::C),
            'G' => Some(Base::G),
            'T' => Some(Base::T),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Base::A => 'A',
            Base::C => 'C',
            Base::G => 'G',
            Base::T => 'T',
        }
    }
}

/// A DNA strand over `{A, C, G, T}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Strand(Vec<Base>);

impl Strand {
    pub fn new(bases: Vec<Base>) -> Self {
        Strand(bases)
    }

    /// Strand of length `len` whose bases spell `value` in base 4.
    pub fn from_index(value: u64, len: usize) -> Self {
        let bases = (0..len)
            .rev()
            .map(|shift| Base::from_index((value >> (2 * shift)) as usize))
            .collect();
        Strand(bases)
    }

    pub fn bases(&self) -> &[Base] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn extend_from_slice(&mut self, bases: &[Base]) {
        self.0.extend_from_slice(bases);
    }

    pub fn into_bases(self) -> Vec<Base> {
        self.0
    }
}

impl FromStr for Strand {
    type Err = Error;

    /// Parses the single-line strand format. One trailing newline is accepted.
    fn from_str(text: &str) -> Result<Self> {
        let line = text
            .strip_suffix("\r\n")
            .or_else(|| text.strip_suffix('\n'))
            .unwrap_or(text);
        line.chars()
            .enumerate()
            .map(|(position, c)| Base::from_char(c).ok_or(Error::InvalidBase { found: c, position }))
            .collect::<Result<Vec<_>>>()
            .map(Strand)
    }
}

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|b| b.to_char()).collect();
        f.write_str(&s)
    }
}

/// Sequence of current levels produced by the channel.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Readout(Vec<u32>);

impl Readout {
    pub fn new(levels: Vec<u32>) -> Self {
        Readout(levels)
    }

    pub fn levels(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_levels(self) -> Vec<u32> {
        self.0
    }

    /// Checks that every level is below `b`.
    pub fn check_levels(&self, b: u32) -> Result<()> {
        match self.0.iter().position(|&l| l >= b) {
            Some(position) => Err(Error::ReadoutLevelOutOfRange { level: self.0[position], position, b }),
            None => Ok(()),
        }
    }
}

impl FromStr for Readout {
    type Err = Error;

    /// Parses comma-separated decimal levels on a single line.
    fn from_str(text: &str) -> Result<Self> {
        let line = text.trim();
        if line.is_empty() {
            return Ok(Readout(Vec::new()));
        }
        line.split(',')
            .enumerate()
            .map(|(position, field)| {
                field
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidReadout { text: field.to_string(), position })
            })
            .collect::<Result<Vec<_>>>()
            .map(Readout)
    }
}

impl fmt::Display for Readout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, level) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{level}")?;
        }
        Ok(())
    }
}

/// The channel-defining function from k-mers to `b` current levels.
///
/// `b` is stored explicitly so that mappings which never use some level
/// (a constant mapping with `b = 2`, say) remain representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mapping {
    k: usize,
    b: u32,
    table: Vec<u32>,
}

impl Mapping {
    pub fn new(k: usize, b: u32, table: Vec<u32>) -> Result<Self> {
        check_params(k, b)?;
        if table.len() != 1usize << (2 * k) {
            return Err(Error::InvalidParameters(format!(
                "table has {} entries, expected 4^{k} = {}",
                table.len(),
                1usize << (2 * k)
            )));
        }
        if let Some(i) = table.iter().position(|&l| l >= b) {
            return Err(Error::LevelOutOfRange { kmer: kmer_string(i, k), level: table[i] as u64, b });
        }
        Ok(Mapping { k, b, table })
    }

    /// Builds a mapping by evaluating `level` on every k-mer index.
    pub fn from_fn(k: usize, b: u32, level: impl FnMut(usize) -> u32) -> Result<Self> {
        check_params(k, b)?;
        Mapping::new(k, b, (0..1usize << (2 * k)).map(level).collect())
    }

    pub fn constant(k: usize, b: u32, level: u32) -> Result<Self> {
        Mapping::from_fn(k, b, |_| level)
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

    /// Number of k-mers, `4^k`.
    pub fn kmer_count(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn level(&self, kmer_index: usize) -> u32 {
        self.table[kmer_index]
    }

    pub fn level_of(&self, kmer: &[Base]) -> u32 {
        debug_assert_eq!(kmer.len(), self.k);
        self.table[kmer_index(kmer)]
    }

    /// Preimage size of every level.
    pub fn preimage_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.b as usize];
        for &l in &self.table {
            counts[l as usize] += 1;
        }
        counts
    }

    pub fn is_balanced(&self) -> bool {
        let n = self.table.len();
        let b = self.b as usize;
        n.is_multiple_of(b) && self.preimage_counts().iter().all(|&c| c == n / b)
    }

    pub fn is_surjective(&self) -> bool {
        self.preimage_counts().iter().all(|&c| c > 0)
    }

    /// Number of distinct levels the mapping actually produces.
    pub fn image_size(&self) -> usize {
        self.preimage_counts().iter().filter(|&&c| c > 0).count()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawMapping = serde_json::from_str(text).map_err(|e| Error::MalformedJson(e.to_string()))?;
        check_params(raw.k, raw.b)?;
        let k = raw.k;
        let mut table = vec![u32::MAX; 1usize << (2 * k)];
        for (key, level) in raw.table.0 {
            let index = parse_kmer(&key, k).ok_or_else(|| Error::InvalidKmer(key.clone()))?;
            if table[index] != u32::MAX {
                return Err(Error::DuplicateKmer(key));
            }
            if level >= raw.b as u64 {
                return Err(Error::LevelOutOfRange { kmer: key, level, b: raw.b });
            }
            table[index] = level as u32;
        }
        if let Some(missing) = table.iter().position(|&l| l == u32::MAX) {
            return Err(Error::MissingKmer(kmer_string(missing, k)));
        }
        Mapping::new(k, raw.b, table)
    }

    /// Canonical JSON: keys in ACGT lexicographic order.
    pub fn to_json(&self) -> String {
        let table: BTreeMap<String, u32> =
            self.table.iter().enumerate().map(|(i, &l)| (kmer_string(i, self.k), l)).collect();
        serde_json::json!({ "k": self.k, "b": self.b, "table": table }).to_string()
    }
}

fn check_params(k: usize, b: u32) -> Result<()> {
    if k == 0 || k > MAX_K {
        return Err(Error::InvalidParameters(format!("k = {k} must lie in 1..={MAX_K}")));
    }
    if b == 0 {
        return Err(Error::InvalidParameters("b must be at least 1".into()));
    }
    Ok(())
}

#[derive(Deserialize)]
struct RawMapping {
    k: usize,
    b: u32,
    table: TableEntries,
}

/// Keeps every key of the JSON object, so duplicates can be reported
/// instead of silently overwritten.
struct TableEntries(Vec<(String, u64)>);

impl<'de> Deserialize<'de> for TableEntries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = TableEntries;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object from k-mers to levels")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<TableEntries, A::Error> {
                let mut entries = Vec::with_capacity(access.size_hint().unwrap_or(0));
                while let Some(entry) = access.next_entry::<String, u64>()? {
                    entries.push(entry);
                }
                Ok(TableEntries(entries))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

pub fn parse_mapping(text: &str) -> Result<Mapping> {
    Mapping::from_json(text)
}

pub fn serialize_mapping(f: &Mapping) -> String {
    f.to_json()
}

/// Base-4 value of a k-mer.
#[inline]
pub fn kmer_index(kmer: &[Base]) -> usize {
    kmer.iter().fold(0, |acc, b| (acc << 2) | b.index())
}

pub fn kmer_string(index: usize, k: usize) -> String {
    (0..k).rev().map(|shift| Base::from_index(index >> (2 * shift)).to_char()).collect()
}

fn parse_kmer(text: &str, k: usize) -> Option<usize> {
    if text.len() != k {
        return None;
    }
    text.chars().try_fold(0usize, |acc, c| Base::from_char(c).map(|b| (acc << 2) | b.index()))
}

/// Slides the k-wide window over `s` and reads one level per position.
pub fn apply_channel(f: &Mapping, s: &Strand) -> Result<Readout> {
    let k = f.k();
    if s.len() < k {
        return Err(Error::StrandTooShort { len: s.len(), k });
    }
    let mask = f.kmer_count() - 1;
    let bases = s.bases();
    let mut window = kmer_index(&bases[..k - 1]);
    let levels = bases[k - 1..]
        .iter()
        .map(|b| {
            window = ((window << 2) | b.index()) & mask;
            f.level(window)
        })
        .collect();
    Ok(Readout(levels))
}
