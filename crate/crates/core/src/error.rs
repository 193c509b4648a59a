use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid arguments: {0}")]
    BadArgs(String),

    #[error("vertex {vertex} is outside [1, {n}]")]
    BadVertex { vertex: usize, n: usize },

    #[error("color {color} is outside [1, {k}]")]
    BadColor { color: usize, k: usize },

    #[error("edge {{{0},{1}}} of the subtracted graph is not an edge of the host graph")]
    EdgeNotSubset(usize, usize),

    #[error("{what} is limited to n <= {cap}, got {n}")]
    TooLarge { what: &'static str, n: usize, cap: usize },

    #[error("order {0} is odd; a 1-factorization needs an even order")]
    OddOrder(usize),

    #[error("no built-in affine plane of order {0}")]
    UnsupportedOrder(usize),

    #[error("class profiles do not partition the edges: {0}")]
    BadProfiles(String),

    #[error("premise {0} has no finite upper bound")]
    MissingPremise(String),

    #[error("color class {0} is not a disjoint union of equal cliques")]
    NotResolvable(usize),

    #[error("row and column classes do not form a grid: {0}")]
    NotGrid(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),

    #[error("parse error in {location}: {message}")]
    Parse { location: String, message: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
