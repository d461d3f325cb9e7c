use std::path::{Path, PathBuf};

use kolan_core::metrics::MetricsError;
use kolan_core::model::ModelError;
use kolan_core::pca::PcaError;
use kolan_core::sentiment::SentimentError;
use kolan_core::textprep::TextError;
use thiserror::Error;

pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_IO: u8 = 2;
pub const EXIT_PROVIDER: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{}: {cause}", path.display())]
    Io { path: PathBuf, cause: String },
    #[error("{0}\nhint: check the endpoint and {key}, then rerun; translations already fetched stay in the cache", key = kolan_core::sentiment::API_KEY_ENV)]
    Provider(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Io { .. } => EXIT_IO,
            CliError::Provider(_) => EXIT_PROVIDER,
        }
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            cause: err.to_string(),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Io { path, source } => CliError::io(&path, source),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<PcaError> for CliError {
    fn from(e: PcaError) -> Self {
        match e {
            PcaError::InvalidK | PcaError::KTooLarge { .. } => CliError::Usage(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<TextError> for CliError {
    fn from(e: TextError) -> Self {
        match e {
            TextError::Io { path, source } => CliError::io(&path, source),
            TextError::MissingStoplist(path) => CliError::io(&path, "stopword list not readable"),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<SentimentError> for CliError {
    fn from(e: SentimentError) -> Self {
        match e {
            SentimentError::Io { path, source } => CliError::io(&path, source),
            SentimentError::CacheIo { path, cause } => CliError::Io { path, cause },
            e @ SentimentError::ProviderUnavailable(_) => CliError::Provider(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}
