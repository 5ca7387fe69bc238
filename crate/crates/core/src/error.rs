//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown vertex: {0}")]
    UnknownVertex(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}
