use core::fmt;

/// Errors produced by optimizer steps, objectives, and the harness.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two sequences that must agree in length do not.
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    /// A value that must be finite is NaN or infinite.
    NonFinite(&'static str),
    /// An input that must be non-empty is empty.
    Empty(&'static str),
    /// Batch statistics (mu, nu) are required by the active DFC variant
    /// but were not supplied.
    MissingBatchStats,
    /// Batch statistics were supplied to a DFC variant that does not take them.
    UnexpectedBatchStats,
    /// A hyperparameter or spec field violates its invariant.
    InvalidSpec(&'static str),
    /// A stated precondition does not hold (e.g. gamma >= 1 in the regret bound).
    Precondition(&'static str),
    /// A class label lies outside [0, classes).
    LabelOutOfRange { label: usize, classes: usize },
    /// Dataset size must be even (two balanced classes).
    OddSampleCount(usize),
    /// A window or count argument is out of range.
    BadWindow { window: usize, len: usize },
    /// Malformed CSV input.
    CsvParse { line: usize, reason: &'static str },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LengthMismatch {
                what,
                expected,
                actual,
            } => write!(f, "length mismatch for {what}: expected {expected}, got {actual}"),
            Error::NonFinite(what) => write!(f, "non-finite value: {what}"),
            Error::Empty(what) => write!(f, "empty input: {what}"),
            Error::MissingBatchStats => {
                write!(f, "dfc3/dfc4/dfc5 require batch gradient statistics (mu, nu)")
            }
            Error::UnexpectedBatchStats => {
                write!(f, "batch gradient statistics are only accepted by dfc3/dfc4/dfc5")
            }
            Error::InvalidSpec(why) => write!(f, "invalid optimizer spec: {why}"),
            Error::Precondition(why) => write!(f, "precondition violated: {why}"),
            Error::LabelOutOfRange { label, classes } => {
                write!(f, "label {label} out of range for {classes} classes")
            }
            Error::OddSampleCount(n) => {
                write!(f, "sample count must be even and >= 2, got {n}")
            }
            Error::BadWindow { window, len } => {
                write!(f, "window {window} invalid for series of length {len}")
            }
            Error::CsvParse { line, reason } => write!(f, "csv parse error at line {line}: {reason}"),
        }
    }
}

impl core::error::Error for Error {}
