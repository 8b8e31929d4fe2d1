//! Library surface behind the `npqs` binary: configuration files, the
//! default expression corpus, report generation, and the command
//! implementations. Kept as a library so integration tests drive the exact
//! code paths the binary runs.

pub mod commands;
pub mod config;
pub mod corpus;
pub mod report;

/// Process exit codes, stable across releases: 0 success, 1 invariant
/// violation, 2 input error.
pub mod exit_code {
    pub const OK: u8 = 0;
    pub const VIOLATION: u8 = 1;
    pub const INPUT: u8 = 2;
}
