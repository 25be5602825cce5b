//! Batch runner for the `qpurify` experiments.
//!
//! Commands:
//!
//! * `reconstruct`: one initial state (`--psi`) or record (`--probs`)
//! * `montecarlo`: closed forms against constructed states over Haar samples
//! * `entropy-sweep`: entropy against determinant
//! * `kraus-audit`: dilation and entropy checks over random purifications
//!
//! Every number in the output comes from `qpurify-core`; this crate only
//! resolves configuration and serializes.

pub mod config;
pub mod error;
pub mod output;
pub mod record;
pub mod run;

pub use config::{Args, CommandName, ConfigFile, ExperimentConfig, Format};
pub use error::{exit, CliError};
pub use record::{Payload, ResultRecord};

/// Runs `args` end to end and returns the process exit code.
pub fn main_with(args: &Args) -> i32 {
    match execute(args) {
        Ok(record) if record.violations > 0 => {
            eprintln!("qpurify: {} invariant violation(s)", record.violations);
            exit::VIOLATIONS
        }
        Ok(_) => exit::OK,
        Err(e) => {
            eprintln!("qpurify: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(args: &Args) -> Result<ResultRecord, CliError> {
    let cfg = ExperimentConfig::from_args(args)?;
    let record = run::run(&cfg)?;
    output::write(&record, cfg.format, cfg.output_path.as_deref())?;
    Ok(record)
}
