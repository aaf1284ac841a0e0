//! File formats and command implementations behind the `stinespring`
//! binary.

pub mod commands;
pub mod error;
pub mod format;

pub use commands::{GridSpec, Output, Representation, Settings};
pub use error::CliError;

/// Environment variable that overrides the default tolerance.
pub const TOL_ENV: &str = "STINESPRING_TOL";
pub const DEFAULT_SEED: u64 = 0x5eed_5717;
