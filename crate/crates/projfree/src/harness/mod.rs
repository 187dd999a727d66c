//! Benchmark harness: CLI, CSV output, sweeps, rate fitting, and the
//! accounting verifier.

pub mod accounting;
pub mod cli;
pub mod csv;
pub mod rate;
pub mod sweep;

pub use accounting::verify_accounting;
pub use cli::run_cli;
pub use rate::fit_rate;
