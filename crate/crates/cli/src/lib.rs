//! Sweep configuration, Monte Carlo sampling, result persistence, and the
//! invariant check suite behind the `lgsim` command-line interface.

pub mod check;
pub mod config;
pub mod output;
pub mod sample;
pub mod sweep;
