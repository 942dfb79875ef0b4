//! Experiment harness: TOML-configured commands writing schema-stable CSV outputs.

// `!(x > 0)` deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod fit;
pub mod linear;
pub mod output;
pub mod simulate;
pub mod weights_check;

pub use config::{load_config, parse_config, RegimeFlags, RunConfig};
pub use error::HarnessError;
