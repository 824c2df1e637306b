//! Simulation and analysis of hidden-signaling models for (2,2,2) Bell
//! correlations, with and without memory between rounds.
//!
//! Everything in this crate is pure computation and builds without `std`;
//! file formats and the command-line front end live in the `boxsim` crate.

#![no_std]
#![forbid(unsafe_code)]
// NaN-rejecting range checks are written as negated comparisons on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod behavior;
pub mod boxworld;
mod error;
pub mod harness;
pub mod memory;
pub mod protocol;
pub mod sigfun;
pub mod stats;

pub use behavior::{Behavior, ExactBehavior, Marginal, PrRelabeling, Side};
pub use boxworld::Strategy;
pub use error::{Error, ErrorKind, Result};
pub use harness::{InputSource, RoundRecord, Transcript};
pub use memory::{BiasConfig, MemoryKernel};
pub use protocol::{GEstimate, SignalingConfig, SuperluminalParams};
pub use sigfun::Partition;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
