//! Command implementations behind the `powerfree` binary. Each command
//! returns a [`output::Table`] plus an exit code so it can be driven from
//! tests without spawning a process.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{
    cmd_alpha_table, cmd_count, cmd_eval, cmd_verify, EvalArgs, Outcome, SetArgs, VerifyArgs,
    EXIT_ERROR, EXIT_OK, EXIT_VIOLATION,
};
pub use config::{OutputFormat, RunConfig};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "POWERFREE_THREADS";
