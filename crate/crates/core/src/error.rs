use thiserror::Error;

/// Errors produced by the gatecut library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A constructor or generator received an out-of-range parameter.
    #[error("invalid parameter `{field}`: {reason}")]
    Param { field: &'static str, reason: String },

    /// Text input (graph, circuit, observable) could not be parsed.
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },

    #[error("circuit has no two-qubit gates")]
    NoTwoQubitGates,

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("division by zero: {0}")]
    DivisionDomain(&'static str),

    #[error("circuit needs {needed} qubits but the device has {available}")]
    DeviceTooSmall { needed: usize, available: usize },

    #[error("simulation limit exceeded: {0}")]
    SimulationLimit(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("statistics: {0}")]
    Statistics(&'static str),

    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Param {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn format(line: usize, reason: impl Into<String>) -> Self {
        Error::Format {
            line,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
