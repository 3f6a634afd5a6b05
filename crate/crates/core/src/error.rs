use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("strand too short for window: length {len} < k = {k}")]
    StrandTooShort { len: usize, k: usize },

    #[error("invalid base {found:?} at position {position} (expected uppercase A, C, G or T)")]
    InvalidBase { found: char, position: usize },

    #[error("invalid readout level {text:?} at position {position}")]
    InvalidReadout { text: String, position: usize },

    #[error("readout level {level} at position {position} is not below b = {b}")]
    ReadoutLevelOutOfRange { level: u32, position: usize, b: u32 },

    #[error("malformed mapping JSON: {0}")]
    MalformedJson(String),

    #[error("invalid k-mer key {0:?}")]
    InvalidKmer(String),

    #[error("missing k-mer {0}")]
    MissingKmer(String),

    #[error("duplicate k-mer {0}")]
    DuplicateKmer(String),

    #[error("level {level} for k-mer {kmer} is not below b = {b}")]
    LevelOutOfRange { kmer: String, level: u64, b: u32 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("subset construction exceeded the state cap of {cap} subsets")]
    StateCapExceeded { cap: usize },

    #[error("power iteration did not converge after {iterations} iterations (last iterates {previous} and {last})")]
    NotConverged { iterations: usize, previous: f64, last: f64 },

    #[error("transfer matrix dimension {dim} exceeds the characteristic-polynomial cap of {cap}; use the spectral method instead")]
    DimensionCapExceeded { dim: usize, cap: usize },

    #[error("{count} balanced mappings exceed the enumeration cap of {cap}; use sampling instead")]
    EnumerationCapExceeded { count: String, cap: u64 },

    #[error("block length {block_length} is shorter than the window size k = {k}")]
    BlockTooShort { block_length: usize, k: usize },

    #[error("no block length up to {cap} reaches the target rate (best length {best_length} with rate {best_rate})")]
    BlockLengthSearchExhausted { cap: usize, best_length: usize, best_rate: f64 },

    #[error("codebook carries no information (it holds {size} strand)")]
    EmptyCodebook { size: usize },

    #[error("message of {len} bits is not a multiple of the {chunk}-bit block payload")]
    UnalignedMessage { len: usize, chunk: usize },

    #[error("readout of length {len} does not match a whole number of blocks")]
    ReadoutLengthMismatch { len: usize },

    #[error("unreachable readout in block {block}")]
    UnreachableReadout { block: usize },

    #[error("missing or malformed padding in decoded message")]
    BadPadding,

    #[error("the greedy scheme needs exactly two levels, got b = {b}")]
    NotBinary { b: u32 },

    #[error("prefix length {ell} must satisfy 1 <= ell < k = {k}")]
    InvalidPrefixLength { ell: usize, k: usize },

    #[error("mapping lacks the prefix property at prefix length {ell}")]
    PrefixPropertyViolated { ell: usize },

    #[error("message must not be empty")]
    EmptyMessage,

    #[error("malformed codebook file: {0}")]
    MalformedCodebook(String),
}
