use thiserror::Error;

/// Error classes shared by every engine operation.
///
/// The variants map one-to-one onto the CLI exit codes.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("internal consistency failure: {0}")]
    Anomaly(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse_at(text: &str, offset: usize, message: impl Into<String>) -> Error {
        let (line, column) = line_col(text, offset);
        Error::Parse { line, column, message: message.into() }
    }
}

/// One-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(offset, |i| offset - i - 1) + 1;
    (line, column)
}
