use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed image: {0}")]
    MalformedImage(String),
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("radon transform needs a square image, got {width}x{height}")]
    NonSquareInput { width: usize, height: usize },
    #[error("kernel {kernel_w}x{kernel_h} is larger than image {image_w}x{image_h}")]
    KernelLargerThanImage {
        kernel_w: usize,
        kernel_h: usize,
        image_w: usize,
        image_h: usize,
    },
    #[error("vector dimension {numerator}/{denominator} is not an integer")]
    NonIntegerDimension {
        numerator: usize,
        denominator: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("binary training data contains only one label")]
    SingleClassData,
    #[error("non-finite feature value in sample {0}")]
    NonFiniteFeature(usize),
    #[error("multiclass training needs at least two classes, got {0}")]
    FewerThanTwoClasses(usize),
    #[error("accuracy over an empty test set")]
    EmptyTestSet,

    #[error("bit length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("duplicate image id {0:?}")]
    DuplicateId(String),
    #[error("class {0:?} is not present in the index")]
    UnknownClass(String),

    #[error("IRMA code {0:?} must have 13 characters (or 16 with hyphens)")]
    BadLength(String),
    #[error("IRMA code {code:?} has invalid character {ch:?}")]
    BadCharacter { code: String, ch: char },
    #[error("IRMA code {0:?} has hyphens outside the TTTT-DDD-AAA-BBB layout")]
    MisplacedHyphen(String),
    #[error("alphabet table has no entry for position {0}")]
    PositionNotInTable(usize),
    #[error("cannot build an alphabet table from zero codes")]
    EmptyInput,

    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("{}:{line}: malformed row: {reason}", path.display())]
    MalformedRow {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("{}: {reason}", path.display())]
    BadArtifact { path: PathBuf, reason: String },
    #[error("parameter fingerprint mismatch: {what} has {found:016x}, expected {expected:016x}")]
    FingerprintMismatch {
        what: String,
        expected: u64,
        found: u64,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("{} image(s) failed to process", .0)]
    PartialFailure(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) => 1,
            Error::FingerprintMismatch { .. } | Error::BadArtifact { .. } => 3,
            _ => 2,
        }
    }
}
