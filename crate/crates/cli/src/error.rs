use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Numerical(_) => ExitCode::from(3),
            CliError::Io(_) => ExitCode::from(1),
        }
    }
}

fn is_numerical(e: &pulseq::Error) -> bool {
    use pulseq::Error as E;
    match e {
        E::NonFinite { .. }
        | E::QuadratureNotConverged { .. }
        | E::NotHermitian(_)
        | E::Compilation(_) => true,
        E::SweepPoint { source, .. } => is_numerical(source),
        _ => false,
    }
}

impl From<pulseq::Error> for CliError {
    fn from(e: pulseq::Error) -> Self {
        if is_numerical(&e) {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}
