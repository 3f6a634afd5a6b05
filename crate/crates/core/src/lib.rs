//! Capacity computation and coding schemes for the deterministic abstract
//! nanopore channel, where a strand is read through a k-wide window and each
//! window position produces one of `b` current levels.

pub mod automata;
pub mod block_codec;
pub mod bounds;
pub mod capacity;
pub mod channel;
mod error;
pub mod greedy_codec;
pub mod mapping_space;

pub use error::{Error, Result};
