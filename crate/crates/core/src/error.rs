use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left_w}x{left_h} vs {right_w}x{right_h}")]
    DimensionMismatch {
        left_w: usize,
        left_h: usize,
        right_w: usize,
        right_h: usize,
    },

    #[error("image has zero area ({width}x{height})")]
    ZeroArea { width: usize, height: usize },

    #[error("pixel buffer holds {actual} values, expected {expected}")]
    BufferLength { expected: usize, actual: usize },

    #[error("mask pixel {index} has value {value}; masks hold only 0 or 1")]
    NotBinary { index: usize, value: u8 },

    #[error("value {value} at pixel {index} lies outside [0, 1]")]
    OutOfUnitRange { index: usize, value: f64 },

    #[error("failed to read {path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("failed to write {path}: {source}")]
    Encode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("{path}: {channels}-channel {what} needs a channel-reduction rule")]
    MultiChannel {
        path: PathBuf,
        what: &'static str,
        channels: u8,
    },

    #[error("{path}: unsupported pixel format {format} for {what}")]
    UnsupportedFormat {
        path: PathBuf,
        what: &'static str,
        format: String,
    },

    #[error("need at least {required} values, got {actual}")]
    TooFewValues { required: usize, actual: usize },

    #[error("all values are identical; {0} is undefined")]
    ConstantInput(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("image sets differ: {0}")]
    ImageSetMismatch(String),

    #[error("manifest violation: {0}")]
    Manifest(String),
}
