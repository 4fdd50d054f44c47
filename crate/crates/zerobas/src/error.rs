//! Error types shared across the crate.

use std::path::PathBuf;

/// Which output channel a stage was processing when it failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Left,
    Right,
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Channel::Left => write!(f, "left"),
            Channel::Right => write!(f, "right"),
        }
    }
}

/// Errors produced while parsing or writing WAV files.
#[derive(Debug, thiserror::Error)]
pub enum WavError {
    /// The file is not a RIFF/WAVE container or a required chunk is inconsistent.
    #[error("WAV header mismatch: {0}")]
    HeaderMismatch(String),
    /// The container is valid but uses an encoding this reader does not handle.
    #[error("unsupported WAV codec: format tag {format_tag}, {bits_per_sample} bits, {channels} channels")]
    UnsupportedCodec {
        format_tag: u16,
        bits_per_sample: u16,
        channels: u16,
    },
    /// The file ended before the declared chunk sizes were satisfied.
    #[error("truncated WAV file: {0}")]
    Truncated(String),
    #[error("WAV I/O: {0}")]
    Io(#[from] std::io::Error),
}

/// Errors from a denoising-vocoder backend.
#[derive(Debug, thiserror::Error)]
pub enum VocoderError {
    #[error("vocoder request timed out")]
    Timeout,
    #[error("vocoder connection refused at {address}")]
    ConnectionRefused { address: String },
    #[error("vocoder connection failed at {address}: {message}")]
    Connect { address: String, message: String },
    #[error("malformed vocoder frame: {0}")]
    MalformedFrame(String),
    #[error("vocoder returned {actual} samples, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("vocoder backend error (status {status}): {message}")]
    Backend { status: u32, message: String },
    #[error("vocoder payload of {size} bytes exceeds limit of {max} bytes")]
    PayloadTooLarge { size: u64, max: u64 },
    #[error("vocoder input invalid: {0}")]
    InvalidInput(String),
    #[error("vocoder I/O: {0}")]
    Io(#[from] std::io::Error),
}

/// One offending row in an event manifest.
#[derive(Debug, Clone)]
pub struct ManifestRowError {
    /// 1-based data row number (excluding the header line).
    pub row: usize,
    pub message: String,
}

impl std::fmt::Display for ManifestRowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "row {}: {}", self.row, self.message)
    }
}

/// Top-level error type for the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error(transparent)]
    Wav(#[from] WavError),
    #[error(transparent)]
    Vocoder(#[from] VocoderError),
    /// A vocoder failure inside the refinement loop, tagged with where it happened.
    #[error("vocoder stage failed at iteration {iteration} ({channel} channel): {source}")]
    RefineStage {
        iteration: usize,
        channel: Channel,
        source: VocoderError,
    },
    #[error("invalid manifest ({} offending rows): {}", .rows.len(), format_rows(.rows))]
    InvalidManifest { rows: Vec<ManifestRowError> },
    #[error("I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn format_rows(rows: &[ManifestRowError]) -> String {
    rows.iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub fn invalid_input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
