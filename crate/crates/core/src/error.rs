use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("MCS index {0} out of range 0..=14")]
    McsOutOfRange(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("segmentation required for {0} bits (single code block limit is 3840)")]
    SegmentationRequired(usize),

    #[error("bandwidth too small for the PCFICH layout: {0} RBs, need at least 19")]
    BandwidthTooSmall(usize),

    #[error("invalid base graph data: {0}")]
    BaseGraphData(String),

    #[error("frame error: {0}")]
    Frame(#[from] crate::transport::frame::FrameError),

    #[error("{context}: {message}")]
    Io { context: String, message: String },

    #[error("timed out: {0}")]
    Timeout(String),
}

impl Error {
    /// Short stable identifier, used for machine-parseable CLI errors.
    pub fn code(&self) -> &'static str {
        match self {
            Error::McsOutOfRange(_) => "mcs_out_of_range",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::SegmentationRequired(_) => "segmentation_required",
            Error::BandwidthTooSmall(_) => "bandwidth_too_small",
            Error::BaseGraphData(_) => "base_graph_data",
            Error::Frame(e) => e.code(),
            Error::Io { .. } => "io",
            Error::Timeout(_) => "timeout",
        }
    }
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, err: std::io::Error) -> Self {
        Error::Io { context: context.into(), message: err.to_string() }
    }
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}
