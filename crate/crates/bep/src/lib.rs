//! File formats and command-line tooling around `bep-core`.

pub use bep_core;

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod game_file;
pub mod manifest;
pub mod numfmt;
pub mod pd_scan;
pub mod trajectory;
pub mod verdict;

pub use error::{CliError, CliResult};
pub use game_file::{Game, GameFile};
