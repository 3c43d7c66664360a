use thiserror::Error;

use crate::coloring::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid grid spec: {0}")]
    InvalidSpec(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("cell is not a member of the ambient complex: {0}")]
    Membership(String),

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("input is not a cocycle (coboundary has norm {residual})")]
    NotCocycle { residual: u64 },

    #[error("filling is only supported for cochains of dimension >= 1")]
    UnsupportedDimension,

    #[error("coloring violates the face constraint: {0}")]
    InvalidColoring(Box<Violation>),

    #[error("color tuple error: {0}")]
    ColorTuple(String),

    #[error("no candidate simplex colored by {colors:?} to realize a nonzero primitive")]
    InfeasibleRealization { colors: Vec<u32> },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("instance too large for exhaustive search: {vertices} vertices (limit {limit})")]
    SizeGuard { vertices: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
