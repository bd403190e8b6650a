use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar parameter lies outside its admissible range.
    #[error("{name} = {value} is out of range: expected {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    /// A structural parameter (count, array, pairing) is unusable.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Two fields that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
