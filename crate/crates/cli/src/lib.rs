//! Front end for the privacy-channel library: JSON file formats for
//! channels and queries, canonical deterministic rendering, and one
//! subcommand per procedure (construct, calibrate, capacity, audit,
//! balance, noise comparison).

pub mod commands;
pub mod error;
pub mod files;
pub mod json;

pub use commands::{run, Cli};
pub use error::{CliError, Result};
