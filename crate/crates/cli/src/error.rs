use std::io;
use std::path::PathBuf;

/// Failure of a command, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("bundle member `{0}` is missing")]
    MissingMember(&'static str),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub const EXIT_INPUT: i32 = 2;
    pub const EXIT_RUNTIME: i32 = 3;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. }
            | CliError::Parse { .. }
            | CliError::MissingMember(_)
            | CliError::Input(_) => Self::EXIT_INPUT,
            CliError::Write { .. } | CliError::Runtime(_) => Self::EXIT_RUNTIME,
        }
    }

    /// A core error caused by the contents of an input file.
    pub fn input(err: qkd_audit_core::Error) -> Self {
        CliError::Input(err.to_string())
    }

    /// A core error raised while computing on validated input.
    pub fn runtime(err: qkd_audit_core::Error) -> Self {
        CliError::Runtime(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
