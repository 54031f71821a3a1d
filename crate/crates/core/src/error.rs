use thiserror::Error;

use crate::arith::Int;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form is not positive semidefinite")]
    NotPositiveSemidefinite,
    #[error("the zero form lies in no L-type domain")]
    ZeroForm,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("cone is not pointed; lineality direction {0:?}")]
    NotPointed(Vec<Int>),
    #[error("cone is empty or lower-dimensional")]
    EmptyCone,
    #[error("vector is not an extreme ray of the cone")]
    NotExtreme,
    #[error("group generator {0} does not map the cone onto itself")]
    NotStabilizing(usize),
    #[error("facet is degenerate: no positive definite form in its relative interior")]
    DegenerateFacet,
    #[error("functional is not a facet of the secondary cone")]
    NotAFacet,
    #[error("Delone star does not match its form: {0}")]
    StaleStar(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
