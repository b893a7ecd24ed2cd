//! Training lab for variational quantum circuits.
//!
//! The crate bundles a small statevector simulator, the ansätze used for the
//! regression, classification and toy benchmarks, three gradient estimators
//! (parameter-shift, SPSA and Guided-SPSA), classical optimizers, the
//! training loops with circuit-evaluation accounting, and the `gspsa` CLI.
//!
//! Basis ordering is little-endian throughout: qubit 0 is the least
//! significant bit of a basis index.

pub mod circuit;
pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod exec;
pub mod grad;
pub mod optim;
pub mod seed;
pub mod sim;
pub mod train;

pub use error::{Error, Result};
pub use seed::Seed;
