//! Configuration files, output formats and commands for the opinion3wd
//! simulator. The binary in `main.rs` is a thin wrapper over [`commands`].

pub mod commands;
pub mod config;
pub mod edgelist;
pub mod error;
pub mod models;
pub mod output;

pub use config::ConfigFile;
pub use error::{CliError, CliResult};
