use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// What went wrong while reading a matrix file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// No header line was found.
    Empty,
    /// The header is not `rows cols`.
    BadHeader,
    /// A row holds the wrong number of values.
    RowLength { expected: usize, found: usize },
    /// The file ended before every declared row was read.
    MissingRow { row: usize },
    /// More rows than the header declared.
    ExtraRow,
    /// A token that is not a decimal number.
    NonNumeric(String),
    /// A value that parses but is NaN or infinite.
    NonFinite(String),
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseErrorKind::Empty => write!(f, "empty input"),
            ParseErrorKind::BadHeader => write!(f, "expected header `rows cols`"),
            ParseErrorKind::RowLength { expected, found } => {
                write!(f, "dimension mismatch: expected {expected} values, found {found}")
            }
            ParseErrorKind::MissingRow { row } => write!(f, "row {row} missing"),
            ParseErrorKind::ExtraRow => write!(f, "dimension mismatch: more rows than declared"),
            ParseErrorKind::NonNumeric(tok) => write!(f, "non-numeric token `{tok}`"),
            ParseErrorKind::NonFinite(tok) => write!(f, "non-finite value `{tok}`"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },

    #[error("invalid descriptor: {0}")]
    Descriptor(String),

    #[error("{what}: size {size} exceeds limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: u64,
        limit: u64,
    },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("spectral norm did not converge after {iterations} iterations (best {best}, residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        best: f64,
        residual: f64,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, kind: ParseErrorKind) -> Self {
        Error::Parse { line, kind }
    }
}
