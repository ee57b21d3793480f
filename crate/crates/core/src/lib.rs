#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
//! Sampling, exact combinatorics and asymptotic diagnostics for hard-edge
//! power-law random graphs, where `i ~ j` iff `X_i X_j > a_n`.

extern crate alloc;

pub mod accum;
pub mod bernoulli;
pub mod dist;
pub mod error;
pub mod exec;
pub mod graphex;
pub mod graphon;
pub mod hardgraph;
pub mod height;
pub mod quad;
pub mod rng;
pub mod stats;

pub use dist::{Regime, ScalingSequence, TailModel};
pub use error::{Error, Result};
pub use hardgraph::{HardGraph, KVector, WeightedSample};
