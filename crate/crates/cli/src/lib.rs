//! Command-line driver for the `alp-core` spectral analysis and solver
//! library: configuration parsing, subcommand dispatch, and file emission.
//!
//! The binary is `alp`:
//!
//! ```text
//! alp <decompose|norms|verify|solve|experiment> --config <path> [--seed n] [--out dir]
//! ```
//!
//! Exit status: 0 when every checked assertion passed, 1 when an assertion
//! failed, 2 on configuration errors (including unknown subcommands).

pub mod config;
pub mod dispatch;

pub use config::{parse_config, parse_config_str, ConfigError, RunConfig};
pub use dispatch::{dispatch, DispatchResult, Subcommand};
