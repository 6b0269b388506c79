//! Identification of unused (zero) blocks of a block-sparse signal from
//! sub-Nyquist compressive measurements.
//!
//! The crate is organised bottom-up:
//!
//! - [`blocksparse`]: block partitions, signals, sensing matrices with cached
//!   whitening factors, block correlations, block coherence and least squares.
//! - [`detectors`]: BOMP, ZD-GroTh, Least Matching Pursuit (LMP), the
//!   baselines, and the ZD-GroTh success guarantee.
//! - [`nuws`]: Haar-like wavelet dictionaries and greedy coherence-minimising
//!   row selection for non-uniform wavelet sampling.
//! - [`rfsim`]: a Monte-Carlo RF whitespace benchmark producing error curves.
//! - [`cli`]: configuration, subcommands and SVG report emission.
//!
//! Block indices are zero-based throughout the API and in every file format.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod blocksparse;
pub mod cli;
pub mod detectors;
mod error;
pub mod nuws;
pub mod rfsim;
pub(crate) mod seeding;

pub use error::{Error, Result};
pub use num_complex::Complex64;
