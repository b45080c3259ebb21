//! Monte Carlo estimation of LRPC decoding failure rates, with per-condition
//! attribution and the matching analytic bounds.

pub mod config;
pub mod harness;
pub mod output;
pub mod stats;

pub use config::{ConfigDraft, ConfigError, SimConfig};
pub use harness::{bounds_only, run_sweep, run_trial, CellCounts, SimError, SimRow, TrialOutcome};

/// Environment variable overriding the worker thread count.
pub const THREADS_ENV: &str = "LRPC_THREADS";

/// Worker threads: `LRPC_THREADS` when set to a positive integer, otherwise
/// the available parallelism.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}
