//! Multi-way combinatorial trades.
//!
//! A μ-way `(v, k, t)` trade is a family of μ pairwise disjoint collections
//! of `k`-subsets (blocks) such that every `t`-subset lies in the same number
//! of blocks of each collection. This crate verifies such families, builds
//! them by blow-up, disjoint sum and padding, answers volume-spectrum
//! queries with replayable witnesses, and certifies small-volume
//! non-existence by bounded exhaustive search.

pub mod analysis;
pub mod canon;
pub mod catalog;
pub mod cli;
pub mod construct;
pub mod error;
pub mod model;
pub mod search;
pub mod spectrum;
pub mod verify;

pub use error::{Citation, Error, Result};
pub use model::{Block, Collection, Element, TradeFamily};
pub use verify::{verify, VerificationReport};
