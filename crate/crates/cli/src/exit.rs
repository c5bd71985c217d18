//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | any other failure (I/O, backend error) |
//! | 2 | configuration error: bad flags, config file or input document |
//! | 3 | the model is infeasible |
//! | 4 | time limit reached without an incumbent |

use std::process::ExitCode;

use chemosched::io::IoError;
use chemosched::MethodError;

pub const OTHER: u8 = 1;
pub const CONFIG: u8 = 2;
pub const INFEASIBLE: u8 = 3;
pub const TIMEOUT: u8 = 4;

/// A problem with what the user asked for rather than with the run.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

pub fn code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() {
            return CONFIG;
        }
        if let Some(e) = cause.downcast_ref::<MethodError>() {
            return if e.is_infeasible() {
                INFEASIBLE
            } else if e.is_timeout() {
                TIMEOUT
            } else if e.is_config() {
                CONFIG
            } else {
                OTHER
            };
        }
        if let Some(e) = cause.downcast_ref::<IoError>() {
            return match e {
                IoError::Io { .. } => OTHER,
                IoError::Json { .. } | IoError::InvalidInstance { .. } => CONFIG,
            };
        }
    }
    OTHER
}

pub fn report(err: &anyhow::Error) -> ExitCode {
    eprintln!("error: {err:#}");
    ExitCode::from(code_for(err))
}
