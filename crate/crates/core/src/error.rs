use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("elimination is degenerate for every leg pair")]
    DegenerateElimination,

    /// Leg number is 1-based.
    #[error("leg {leg} is at a serial singularity; its force line is undefined")]
    SerialDegenerate { leg: u8 },

    #[error("architectural singularity: {0}")]
    ArchitecturalSingularity(String),

    #[error("no leg has a passage that is free of parallel singularity")]
    NoSafePassage,

    /// Leg number is 1-based.
    #[error("ambiguous sign continuation for leg {leg} near t = {t:.6}")]
    AmbiguousContinuation { leg: u8, t: f64 },

    #[error("no admissible path found ({explored} cells explored)")]
    NoPathFound { explored: usize },

    #[error("invalid start: {0}")]
    InvalidStart(String),

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
