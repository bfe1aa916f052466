use thiserror::Error;

use crate::genre::ValidationReport;

/// Errors raised by the domain layer.
///
/// Every variant maps to a stable machine-readable code via [`GenreError::code`];
/// the HTTP service and the CLI print those codes verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenreError {
    #[error("expected {expected} components, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("component {index} is negative ({value})")]
    NegativeWeight { index: usize, value: f64 },

    #[error("component {index} is not a finite number")]
    NonFiniteWeight { index: usize },

    #[error("all components are zero")]
    ZeroMass,

    #[error("k must be at least 1, got {0}")]
    InvalidK(usize),

    #[error("dataset contains no songs")]
    EmptyDataset,

    #[error("a genre space needs at least 2 genres, got {0}")]
    TooFewGenres(usize),

    #[error("genre name {0:?} appears more than once")]
    DuplicateGenre(String),

    #[error("genre names must not be empty")]
    EmptyGenreName,

    #[error("invalid genre vector: {0}")]
    InvalidVector(ValidationReport),

    #[error("song id {0:?} appears more than once")]
    DuplicateSongId(String),

    #[error("song ids must not be empty")]
    EmptySongId,

    #[error("handle {index} lies before its left neighbor")]
    NonMonotonicHandles { index: usize },

    #[error("handle {index} is outside [0, 1] ({value})")]
    OutOfRangeHandle { index: usize, value: f64 },

    #[error("handle index {index} out of range for {handles} handles")]
    HandleIndexOutOfRange { index: usize, handles: usize },
}

impl GenreError {
    pub fn code(&self) -> &'static str {
        match self {
            GenreError::DimensionMismatch { .. } => "DimensionMismatch",
            GenreError::NegativeWeight { .. } => "NegativeWeight",
            GenreError::NonFiniteWeight { .. } => "NonFiniteWeight",
            GenreError::ZeroMass => "ZeroMass",
            GenreError::InvalidK(_) => "InvalidK",
            GenreError::EmptyDataset => "EmptyDataset",
            GenreError::TooFewGenres(_) => "TooFewGenres",
            GenreError::DuplicateGenre(_) => "DuplicateGenre",
            GenreError::EmptyGenreName => "EmptyGenreName",
            GenreError::InvalidVector(_) => "InvalidVector",
            GenreError::DuplicateSongId(_) => "DuplicateSongId",
            GenreError::EmptySongId => "EmptySongId",
            GenreError::NonMonotonicHandles { .. } => "NonMonotonicHandles",
            GenreError::OutOfRangeHandle { .. } => "OutOfRangeHandle",
            GenreError::HandleIndexOutOfRange { .. } => "HandleIndexOutOfRange",
        }
    }
}

pub type Result<T, E = GenreError> = std::result::Result<T, E>;
