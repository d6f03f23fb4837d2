//! Command-line driver for `lenscale-core`: settings, file formats, the
//! `run`, `calibrate` and `verify` subcommands and their exit codes.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod summary;

pub use error::{exit, Error, Result};
