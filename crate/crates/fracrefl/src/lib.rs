//! Trace synthesis, file formats and the command-line driver built on [`fracrefl_core`].
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod compute;
mod error;
pub mod io;
pub mod synth;
pub mod validate;

pub use error::{Error, Result};
pub use fracrefl_core as core;
