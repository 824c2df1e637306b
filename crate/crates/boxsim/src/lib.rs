//! File formats, named models, self-checks and the command-line front end
//! for `boxsim-core`.

pub mod cli;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod models;
pub mod verify;

pub use error::{CliError, CliResult};
