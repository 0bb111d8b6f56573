//! Library side of the `blowup` command: the bundle document format and the
//! subcommand implementations, kept here so they can be tested directly.

pub mod commands;
pub mod document;
