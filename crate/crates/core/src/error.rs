use thiserror::Error;

use crate::geometry::Point;

/// Errors raised by the geometric and numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero vector")]
    ZeroVector,

    #[error("collinear axes")]
    CollinearAxes,

    #[error("degenerate pair")]
    DegeneratePair,

    #[error("degenerate segment")]
    DegenerateSegment,

    /// A norm description failed validation. `vertex` names the offending
    /// input vertex (or sample) when one can be singled out.
    #[error("invalid norm: {reason}{}", vertex_suffix(.vertex))]
    InvalidNorm {
        reason: String,
        vertex: Option<(usize, Point)>,
    },

    /// Bracket expansion or an iterative refinement exceeded its limits.
    #[error("numeric non-convergence: {0}")]
    NonConvergence(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn vertex_suffix(vertex: &Option<(usize, Point)>) -> String {
    match vertex {
        Some((i, p)) => format!(" (offending vertex #{i} at ({}, {}))", p.u, p.v),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn invalid_norm(reason: impl Into<String>) -> Self {
        Error::InvalidNorm {
            reason: reason.into(),
            vertex: None,
        }
    }

    pub(crate) fn invalid_vertex(reason: impl Into<String>, index: usize, p: Point) -> Self {
        Error::InvalidNorm {
            reason: reason.into(),
            vertex: Some((index, p)),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
