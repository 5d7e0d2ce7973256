use std::io;
use std::path::Path;

use prosodika::alignment::{AlignmentError, TextGridError};
use prosodika::dsp::DspError;
use prosodika::eval::EvalError;
use prosodika::prosody::ProsodyError;
use prosodika::records::RecordError;
use prosodika::ssml::SsmlError;
use thiserror::Error;

/// Every failure maps to one of the stable process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Pairing(String),
    #[error("{0}")]
    Empty(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Format(_) => 3,
            CliError::Pairing(_) => 4,
            CliError::Empty(_) => 5,
        }
    }

    pub fn io(path: impl AsRef<Path>, err: io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }

    /// Prefixes the message with the input it concerns.
    pub fn context(self, what: impl std::fmt::Display) -> Self {
        match self {
            CliError::Io { path, message } => CliError::Io { path, message },
            CliError::Format(m) => CliError::Format(format!("{what}: {m}")),
            CliError::Pairing(m) => CliError::Pairing(format!("{what}: {m}")),
            CliError::Empty(m) => CliError::Empty(format!("{what}: {m}")),
        }
    }
}

impl From<DspError> for CliError {
    fn from(e: DspError) -> Self {
        match e {
            DspError::Unreadable { path, source } => CliError::Io {
                path,
                message: source.to_string(),
            },
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<TextGridError> for CliError {
    fn from(e: TextGridError) -> Self {
        match e {
            TextGridError::Io { path, message } => CliError::Io { path, message },
            other => CliError::Format(format!("TextGrid {other}")),
        }
    }
}

impl From<AlignmentError> for CliError {
    fn from(e: AlignmentError) -> Self {
        match e {
            AlignmentError::TextGrid(t) => t.into(),
            AlignmentError::Pairing { .. } => CliError::Pairing(e.to_string()),
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<ProsodyError> for CliError {
    fn from(e: ProsodyError) -> Self {
        match e {
            ProsodyError::Pairing { .. } => CliError::Pairing(e.to_string()),
            ProsodyError::AllAbsent => CliError::Empty(e.to_string()),
            other => CliError::Format(other.to_string()),
        }
    }
}

impl From<SsmlError> for CliError {
    fn from(e: SsmlError) -> Self {
        CliError::Format(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Pairing(m) => CliError::Pairing(m),
            EvalError::Empty(m) => CliError::Empty(m),
            EvalError::Domain(m) => CliError::Format(m),
        }
    }
}

impl From<RecordError> for CliError {
    fn from(e: RecordError) -> Self {
        match e {
            RecordError::Io { path, source } => CliError::Io {
                path,
                message: source.to_string(),
            },
            other => CliError::Format(other.to_string()),
        }
    }
}
