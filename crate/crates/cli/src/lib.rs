//! Configuration, output formats and subcommands of the `nmlm` binary.

pub mod commands;
pub mod config;
pub mod output;
