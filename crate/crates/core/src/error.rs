use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported strand count {0} (expected 2..=16)")]
    StrandCount(usize),

    #[error("letter index {letter} out of range for an alphabet of {size} letters")]
    LetterOutOfRange { letter: u8, size: usize },

    #[error("packed byte {value} at offset {offset} exceeds the {slots}-letter capacity")]
    InvalidPackedByte { offset: usize, value: u8, slots: usize },

    #[error("packed word needs {expected} bytes, got {actual}")]
    PackedLength { expected: usize, actual: usize },

    #[error("Dynnikov coordinate overflow at word position {position}")]
    CoordinateOverflow { position: usize },

    #[error("geodesic count overflow while accumulating omega")]
    OmegaOverflow,

    #[error("level count overflow at length {level}")]
    CountOverflow { level: usize },

    #[error("map {map} is not defined on {kind} words")]
    MapKind { map: &'static str, kind: &'static str },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("task for template {template} needs about {needed} bytes, above the cap of {cap}")]
    MemoryCap { template: String, needed: u64, cap: u64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: corrupt representative file: {reason}")]
    CorruptFile { path: PathBuf, reason: String },

    #[error("{path}: checksum mismatch (manifest {expected:016x}, file {actual:016x})")]
    ChecksumMismatch { path: PathBuf, expected: u64, actual: u64 },

    #[error("manifest {path}: {reason}")]
    Manifest { path: PathBuf, reason: String },

    #[error("run interrupted after {0} tasks")]
    Interrupted(usize),

    #[error("node cap of {0} exceeded during breadth-first enumeration")]
    NodeCap(usize),

    #[error("series: {0}")]
    Series(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Overflow and resource exhaustion, as opposed to bad input or I/O.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::CoordinateOverflow { .. }
                | Error::OmegaOverflow
                | Error::CountOverflow { .. }
                | Error::MemoryCap { .. }
                | Error::NodeCap(_)
                | Error::Io { .. }
        )
    }
}
