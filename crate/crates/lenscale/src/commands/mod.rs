//! The three subcommands.

pub mod calibrate;
pub mod run;
pub mod verify;
