use thiserror::Error;

/// Failure modes shared by every module in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    /// An operation was called outside its domain (non-square, non-Hermitian, singular, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Malformed or inconsistent caller input (dimension mismatch, unknown name, bad index).
    #[error("invalid input: {0}")]
    Input(String),
    /// The system is not a frame for the requested operator.
    #[error("range inclusion fails: {0}")]
    NotAFrame(String),
    /// Two algebraically equivalent routes disagreed beyond tolerance.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, FrameError>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(FrameError::Precondition(msg.into()))
}

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(FrameError::Input(msg.into()))
}
