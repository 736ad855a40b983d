//! Experiment harness around the `irsnet` library: angular capacity
//! surfaces, Monte-Carlo scheme comparisons, topology bound grids, scenario
//! evaluation and the oracle validation suite. Every experiment writes CSV
//! with a units-bearing header and is byte-reproducible under a fixed seed.

pub mod fig5;
pub mod fig6;
pub mod fig7;
pub mod fig8;
pub mod output;
pub mod scenario_run;
pub mod validate;

use std::fmt;

/// Harness-level failures; model errors bubble up unchanged.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Model(irsnet::Error),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config: {msg}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "io: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<irsnet::Error> for CliError {
    fn from(e: irsnet::Error) -> Self {
        CliError::Model(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
