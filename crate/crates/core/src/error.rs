use thiserror::Error;

/// Errors raised by table construction, sampling and the experiment drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("table mode mismatch: {0}")]
    Mode(String),

    #[error("table is not of finite length: Hilbert function does not vanish past degree {degree}")]
    NotFiniteLength { degree: usize },

    #[error("degenerate normalizer: {0}")]
    DegenerateNormalizer(String),

    #[error("value {value} is out of range {min}..={max}")]
    Range { value: i64, min: i64, max: i64 },

    #[error("p = {p} lies outside the formula regime 1..={max}")]
    OutOfRegime { p: u64, max: u64 },

    #[error("degenerate quadrature interval: {0}")]
    DegenerateInterval(String),

    #[error("unsupported number of rows n = {0}; only n = 2 is supported here")]
    UnsupportedDimension(usize),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("table is not in the span of the pure diagrams (equation {row} inconsistent)")]
    NotInSpan { row: usize },

    #[error("table is outside the cone: coefficient x_{index} = {value} is negative")]
    NotInCone { index: usize, value: String },

    #[error("floating point overflow: {0}")]
    Overflow(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name, used in the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Capacity(_) => "capacity",
            Error::Mode(_) => "mode",
            Error::NotFiniteLength { .. } => "not_finite_length",
            Error::DegenerateNormalizer(_) => "degenerate_normalizer",
            Error::Range { .. } => "range",
            Error::OutOfRegime { .. } => "out_of_regime",
            Error::DegenerateInterval(_) => "degenerate_interval",
            Error::UnsupportedDimension(_) => "unsupported_dimension",
            Error::HypothesisViolation(_) => "hypothesis_violation",
            Error::NotInSpan { .. } => "not_in_span",
            Error::NotInCone { .. } => "not_in_cone",
            Error::Overflow(_) => "overflow",
            Error::Io(_) => "io",
            Error::Parse(_) => "parse",
        }
    }

    /// Process exit code: 2 parameter, 3 capacity, 4 cone/span, 5 hypothesis.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity(_) | Error::Overflow(_) => 3,
            Error::NotInSpan { .. } | Error::NotInCone { .. } => 4,
            Error::HypothesisViolation(_) => 5,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
