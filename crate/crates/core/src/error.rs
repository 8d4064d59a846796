use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("event stream is empty")]
    EmptyStream,

    #[error("polarity value {value} is outside the {encoding} domain")]
    InvalidPolarity { value: i64, encoding: &'static str },

    #[error("events are not sorted by timestamp (index {index})")]
    Unsorted { index: usize },

    #[error("event {index} at ({x}, {y}) lies outside the {width}x{height} sensor")]
    OutOfBounds {
        index: usize,
        x: i64,
        y: i64,
        width: u32,
        height: u32,
    },

    #[error("event at t={t} us arrived after t={last} us on the same polarity stream")]
    OutOfOrder { t: u64, last: u64 },

    #[error("invalid matcher parameters: {0}")]
    InvalidParams(String),

    #[error("bin count must be at least 1")]
    InvalidBinCount,

    #[error("bin {bin} out of range for {bins} bins")]
    BinOutOfRange { bin: usize, bins: usize },

    #[error("time interval must be positive (got {0} s)")]
    InvalidInterval(f64),

    #[error("resolution mismatch: {0}x{1} vs {2}x{3}")]
    ResolutionMismatch(u32, u32, u32, u32),

    #[error("flow records do not line up with the event batch ({flows} flows, {events} events)")]
    Misaligned { flows: usize, events: usize },

    #[error("no pixel is valid in both prediction and ground truth")]
    NoOverlap,

    #[error("zero-flow image of warped events has zero variance")]
    Degenerate,

    #[error("scene produced no events")]
    EmptyScene,

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("malformed flow file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),
}
