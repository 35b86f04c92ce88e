use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("coloring value out of range: facet {facet} has color {color}, expected 1..={max}")]
    ColorOutOfRange { facet: usize, color: usize, max: usize },

    #[error("coloring is improper: facets {facet_a} and {facet_b} share vertex {vertex} and both have color {color}")]
    ImproperColoring {
        facet_a: usize,
        facet_b: usize,
        vertex: String,
        color: usize,
    },

    #[error("no proper coloring in {n} colors exists: 2-face {face} has {edges} edges (odd)")]
    NotNColorable { n: usize, face: String, edges: usize },

    #[error("characteristic pair invalid: {0}")]
    InvalidCharPair(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("cohomology construction failed h-vector audit at degree {degree}: dimension {got}, expected {expected}")]
    RingAudit {
        degree: usize,
        got: usize,
        expected: usize,
    },

    #[error("polynomial is not homogeneous")]
    NonHomogeneous,

    #[error("elements belong to different rings")]
    RingMismatch,

    #[error("integer overflow in exact determinant")]
    DetOverflow,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
