//! Report envelope, run manifest and the exit-code contract.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use expanders::generators::GenError;
use expanders::graph::GraphError;
use expanders::io::ParseError;
use expanders::oracles::OracleError;
use expanders::partition::PartitionError;
use expanders::spectral::SpectralError;
use serde::Serialize;
use thiserror::Error;

pub const SCHEMA: u32 = 1;

/// Process exit codes.
pub mod exit {
    pub const FAILURE: u8 = 1;
    pub const PARSE: u8 = 3;
    pub const PRECONDITION: u8 = 4;
    pub const CAP_EXCEEDED: u8 = 5;
    pub const BUDGET: u8 = 6;
    pub const IO: u8 = 7;
    pub const NOT_CERTIFIED: u8 = 8;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Generator(#[from] GenError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    CapExceeded(String),
    #[error("{0}")]
    Budget(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    NotCertified(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            Self::Parse { .. } | Self::Generator(_) | Self::Input(_) => exit::PARSE,
            Self::Precondition(_) => exit::PRECONDITION,
            Self::CapExceeded(_) => exit::CAP_EXCEEDED,
            Self::Budget(_) => exit::BUDGET,
            Self::Io { .. } => exit::IO,
            Self::NotCertified(_) => exit::NOT_CERTIFIED,
            Self::Failure(_) => exit::FAILURE,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Budget { .. } => Self::Budget(e.to_string()),
            OracleError::Graph(_) | OracleError::InvalidK { .. } | OracleError::NotDisjoint { .. } => {
                Self::Input(e.to_string())
            }
            other => Self::Failure(other.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::InvalidCount { .. } | SpectralError::TooSmall | SpectralError::Graph(_) => {
                Self::Input(e.to_string())
            }
            other => Self::Failure(other.to_string()),
        }
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        match e {
            PartitionError::LambdaTooSmall { .. } | PartitionError::InvalidConfig(_) => Self::Precondition(e.to_string()),
            PartitionError::CapExceeded { .. } => Self::CapExceeded(e.to_string()),
            PartitionError::TooLargeForExact { .. } => Self::Budget(e.to_string()),
            PartitionError::Oracle(o) => o.into(),
            PartitionError::Graph(_) | PartitionError::State(_) => Self::Input(e.to_string()),
            other => Self::Failure(other.to_string()),
        }
    }
}

/// Where the graph came from.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputRef {
    Path(PathBuf),
    Generator(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<C: Serialize> {
    pub command: &'static str,
    pub input: Option<InputRef>,
    /// Every option that shaped the result.
    pub config: C,
    pub version: &'static str,
    pub seed: Option<u64>,
    /// Seconds since the Unix epoch; the only field that varies between
    /// reruns of the same manifest.
    pub timestamp: u64,
}

impl<C: Serialize> Manifest<C> {
    pub fn new(command: &'static str, input: Option<InputRef>, config: C, seed: Option<u64>) -> Self {
        Self {
            command,
            input,
            config,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report<C: Serialize, R: Serialize> {
    pub schema: u32,
    pub manifest: Manifest<C>,
    pub result: R,
}

/// Serializes `value` as pretty JSON to `out`, or to standard output.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failure(e.to_string()))?;
    text.push('\n');
    write_text(&text, out)
}

pub fn write_text(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
