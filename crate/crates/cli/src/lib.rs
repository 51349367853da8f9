//! File formats, instance generators, run modes and the scaling harness
//! behind the `sclub` binary.

pub mod bench;
pub mod formats;
pub mod generate;
pub mod report;
pub mod run;

pub use generate::{generate_planted, GeneratedInstance};
pub use run::{run_cli, run_cli_observed, Mode, Outcome, OutputFormat, RunConfig};
