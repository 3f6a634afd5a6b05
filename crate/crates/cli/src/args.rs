use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use porecap::block_codec::EncodeMode;
use porecap::capacity::Method;

const FORMATS: &str = "\
File formats:
  mapping    JSON object {\"k\": K, \"b\": B, \"table\": {\"AC\": 0, ...}} with one entry per k-mer
  strand     one line over A, C, G, T
  readout    one line of comma-separated levels, e.g. 0,1,1,0
  bits       one line of 0/1 characters; whitespace is ignored
  codebook   JSON with header fields format, version, k, b, block_length, size, mode

The DFA state cap defaults to 2^20 and can be overridden with PORECAP_STATE_CAP.
Exit codes: 0 success, 1 usage or input error, 2 computation error.";

#[derive(Debug, Parser)]
#[command(name = "porecap", version, about = "Capacity and coding for the abstract nanopore channel", after_help = FORMATS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the capacity of a mapping in bits per base, with 9 decimals.
    Capacity(CapacityArgs),
    /// Emit capacity bounds as CSV "b,max,min_lower,min_upper".
    Bounds(BoundsArgs),
    /// Emit capacity statistics over balanced mappings as CSV.
    Stats(StatsArgs),
    /// Build a block codebook, or encode and decode with one.
    #[command(subcommand, name = "block-codec")]
    BlockCodec(BlockCommand),
    /// Analyze, run and simulate the greedy two-level scheme.
    #[command(subcommand)]
    Greedy(GreedyCommand),
    /// Regenerate the data behind the bounds and statistics plots as CSV.
    #[command(subcommand)]
    Figures(FigureCommand),
}

#[derive(Debug, Args)]
#[command(after_help = FORMATS)]
pub struct CapacityArgs {
    /// Mapping JSON file.
    #[arg(long)]
    pub mapping: PathBuf,
    #[arg(long, default_value_t = Method::Spectral)]
    pub method: Method,
    /// Also print the fixed-length rate log2|Sigma(L-k+1)| / L on a second line.
    #[arg(long, value_name = "L")]
    pub block_length: Option<usize>,
    /// Write the DFA edge list "subset_hex level subset_hex" to this file.
    #[arg(long, value_name = "PATH")]
    pub dump_dfa: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub k: usize,
    /// A single number of levels.
    #[arg(long, required_unless_present = "sweep_b", conflicts_with = "sweep_b")]
    pub b: Option<u32>,
    /// Sweep b over the powers of two up to MAX.
    #[arg(long, value_name = "MAX")]
    pub sweep_b: Option<u32>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub b: u32,
    /// Enumerate every balanced mapping.
    #[arg(long, conflicts_with_all = ["samples", "seed"], required_unless_present = "samples")]
    pub exact: bool,
    /// Number of balanced mappings to sample.
    #[arg(long, requires = "seed")]
    pub samples: Option<usize>,
    #[arg(long, requires = "samples")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub pool: PoolArgs,
}

#[derive(Debug, Args)]
pub struct PoolArgs {
    /// Worker threads; output does not depend on this.
    #[arg(long, value_name = "W")]
    pub workers: Option<usize>,
    /// Allow exact enumeration of more than 10^7 mappings.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Subcommand)]
pub enum BlockCommand {
    /// Build a codebook and write it as JSON.
    Build(BlockBuildArgs),
    /// Encode a bit string read from --input (or stdin) into a strand.
    Encode(BlockCodeArgs),
    /// Decode a readout read from --input (or stdin) into a bit string.
    Decode(BlockCodeArgs),
}

#[derive(Debug, Args)]
#[command(after_help = FORMATS)]
pub struct BlockBuildArgs {
    #[arg(long)]
    pub mapping: PathBuf,
    #[arg(long, value_name = "L", required_unless_present = "epsilon", conflicts_with = "epsilon")]
    pub block_length: Option<usize>,
    /// Pick the shortest block length whose rate is within EPS of capacity.
    #[arg(long, value_name = "EPS")]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = EncodeMode::Chunked)]
    pub mode: EncodeMode,
    /// Codebook output file; stdout if absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(after_help = FORMATS)]
pub struct BlockCodeArgs {
    /// Codebook JSON produced by `block-codec build`.
    #[arg(long, conflicts_with_all = ["mapping", "block_length"], required_unless_present = "mapping")]
    pub codebook: Option<PathBuf>,
    /// Build the codebook on the fly from this mapping.
    #[arg(long, requires = "block_length")]
    pub mapping: Option<PathBuf>,
    #[arg(long, value_name = "L")]
    pub block_length: Option<usize>,
    /// Defaults to the codebook's recorded mode, or chunked.
    #[arg(long)]
    pub mode: Option<EncodeMode>,
    /// Input file; stdin if absent.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GreedyCommand {
    /// Print the largest feasible prefix length, its rate and success bound as CSV.
    Analyze(GreedyAnalyzeArgs),
    /// Encode a bit string read from --input (or stdin) into a strand.
    Encode(GreedyCodeArgs),
    /// Decode a readout read from --input (or stdin) into a bit string.
    Decode(GreedyCodeArgs),
    /// Estimate the feasibility rate of random two-level mappings.
    Montecarlo(MonteCarloArgs),
}

#[derive(Debug, Args)]
pub struct GreedyAnalyzeArgs {
    #[arg(long)]
    pub mapping: PathBuf,
}

#[derive(Debug, Args)]
#[command(after_help = FORMATS)]
pub struct GreedyCodeArgs {
    #[arg(long)]
    pub mapping: PathBuf,
    #[arg(long, value_name = "L")]
    pub prefix_len: usize,
    #[arg(long, short)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub ell: usize,
    #[arg(long)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    /// Sample balanced mappings instead of uniform ones.
    #[arg(long)]
    pub balanced: bool,
    #[arg(long, value_name = "W")]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum FigureCommand {
    /// Bounds on the maximum and minimum capacity against b.
    Fig1(Fig1Args),
    /// Min, mean and max capacity over balanced mappings against b.
    Fig2(Fig2Args),
}

#[derive(Debug, Args)]
pub struct Fig1Args {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_name = "MAX", default_value_t = 16)]
    pub sweep_b: u32,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Level counts evaluated by full enumeration.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub exact_b: Vec<u32>,
    /// Level counts evaluated by sampling.
    #[arg(long, value_delimiter = ',', default_value = "4,8")]
    pub sample_b: Vec<u32>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[command(flatten)]
    pub pool: PoolArgs,
}
