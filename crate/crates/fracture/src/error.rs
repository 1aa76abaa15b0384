//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mesh parse error at line {line}: {msg}")]
    MeshParse { line: usize, msg: String },

    #[error("triangle {element} has non-positive signed area {area:.6e}")]
    InvertedElement { element: usize, area: f64 },

    #[error("node index {index} out of range (node count {count})")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("non-manifold or unmatched boundary at edge ({a}, {b})")]
    BadBoundary { a: usize, b: usize },

    #[error("element {element} inverted during mesh deformation")]
    ElementInversion { element: usize },

    #[error("degenerate zero-length segment between nodes {a} and {b}")]
    DegenerateSegment { a: usize, b: usize },

    #[error("degenerate triangle with signed area {area:.6e}")]
    DegenerateTriangle { area: f64 },

    #[error("conflicting Dirichlet values {first} and {second} on DOF {dof}")]
    ConflictingConstraint { dof: usize, first: f64, second: f64 },

    #[error("linear system is singular or ill-conditioned (relative residual {residual:.3e})")]
    SingularSystem { residual: f64 },

    #[error("stiffness matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("Eikonal Newton iteration did not converge in {iters} iterations (residual {residual:.3e})")]
    EikonalDiverged { iters: usize, residual: f64 },

    #[error("unknown boundary tag '{0}'")]
    UnknownTag(String),

    #[error("invalid material: {0}")]
    Material(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("crack curve error: {0}")]
    Curve(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
