use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero-length direction vector")]
    ZeroVector,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{field} out of range: {value}")]
    Range { field: &'static str, value: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("wav error on {path}: {source}")]
    Wav {
        path: PathBuf,
        #[source]
        source: hound::Error,
    },

    #[error("empty signal")]
    EmptySignal,

    #[error("expected {expected} channels, got {got}")]
    ChannelCount { expected: usize, got: usize },

    #[error("sample rate {got} Hz does not match the clip spec ({expected} Hz)")]
    SampleRate { expected: u32, got: u32 },

    #[error("bad configuration: {0}")]
    BadConfig(String),

    #[error("more than {max} simultaneous events of class {class_id} at frame {frame}")]
    TrackOverflow {
        frame: usize,
        class_id: usize,
        max: usize,
    },

    #[error("two events of class {class_id} at frame {frame} cannot share a classwise output")]
    ClasswiseCollision { frame: usize, class_id: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("relative loss needs strictly positive targets (index {index}, value {value})")]
    ZeroTargetDenominator { index: usize, value: f64 },

    #[error("track count must be {expected}, got {got}")]
    BadTrackCount { expected: usize, got: usize },

    #[error("event at frame {frame} is not on the label grid of {frames} frames")]
    GridMismatch { frame: usize, frames: usize },

    #[error("error rate undefined: no reference events")]
    EmptyReference,

    #[error("jackknife needs at least 2 clips, got {0}")]
    TooFewClips(usize),

    #[error("invalid trajectory: {0}")]
    BadTrajectory(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("tensor file: {0}")]
    TensorFormat(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
