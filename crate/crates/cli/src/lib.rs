//! Configuration, run orchestration, CSV output and the validation suite
//! behind the `nanoqed` command.

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod validate;

pub use config::{ConfigError, ModelConfig, RunConfig, SweepConfig};
pub use error::CliError;
pub use output::write_bundle;
pub use run::{run, Mode, ResultBundle};
pub use validate::{validate, ValidationOptions, ValidationReport};
