//! Command implementations and output plumbing for the `chirpgate`
//! binary. The binary itself only parses arguments and picks exit codes;
//! everything testable lives here.

pub mod commands;
pub mod sweep;
