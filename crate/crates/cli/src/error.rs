use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] evsc_core::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Core(evsc_core::Error::Domain(_)) => 3,
            CliError::Core(_) => 4,
            CliError::Io(_) => 1,
        })
    }
}

/// Treat a rejected argument from the core crate as a usage error. Other
/// failures keep their own exit status.
pub fn usage<T>(r: evsc_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        evsc_core::Error::Domain(msg) => CliError::Usage(msg),
        other => CliError::Core(other),
    })
}
