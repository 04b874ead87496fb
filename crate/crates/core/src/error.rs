use thiserror::Error;

use crate::validation::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input data does not describe a valid complex or adjunction system.
    #[error("invalid input: {0}")]
    Invalid(ValidationReport),

    /// A hypothesis of the requested computation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown cell id `{id}` in piece {piece}")]
    UnknownCell { piece: usize, id: String },

    #[error(
        "cochain components disagree at ({}, {left_cell}) vs ({}, {right_cell}){}",
        left_piece + 1,
        right_piece + 1,
        if *on_frontier { " on the frontier" } else { "" }
    )]
    Incompatible {
        left_piece: usize,
        left_cell: String,
        right_piece: usize,
        right_cell: String,
        on_frontier: bool,
    },

    #[error("induced gluing map is multivalued at cell `{cell}` of the last piece")]
    Multivalued { cell: String },

    #[error("degree mismatch: expected {expected}, found {found}")]
    Degree { expected: usize, found: usize },

    #[error("differentials do not compose to zero at degree {0}")]
    NotAComplex(usize),

    #[error("unknown flavor `{0}`")]
    UnknownFlavor(String),

    #[error("parse error at {at}: {message}")]
    Parse { at: String, message: String },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
