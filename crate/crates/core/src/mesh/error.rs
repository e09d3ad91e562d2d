use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("face {face} violates the strict triangle inequality")]
    TriangleInequalityViolation { face: usize },
    #[error("glued sides {a:?} and {b:?} have different lengths ({len_a} vs {len_b})")]
    GluingLengthMismatch { a: (usize, usize), b: (usize, usize), len_a: f64, len_b: f64 },
    #[error("not a sphere: {0}")]
    NotASphere(String),
    #[error("gluing of sides {a:?} and {b:?} is orientation-preserving")]
    NonOrientable { a: (usize, usize), b: (usize, usize) },
    #[error("invalid gluing: {0}")]
    InvalidGluing(String),
    #[error("invalid vertex ids: {0}")]
    InvalidVertexIds(String),
    #[error("face {face} is degenerate (collinear corners)")]
    DegenerateFace { face: usize },
    #[error("face on line {line} is not a triangle")]
    NonTriangularFace { line: usize },
    #[error("no shelling found")]
    ShellingNotFound,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant failure: {0}")]
    Internal(String),
}
