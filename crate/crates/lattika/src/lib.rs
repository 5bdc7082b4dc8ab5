//! Exact-arithmetic toolkit for even integral lattices and finite
//! discriminant quadratic forms: Gram-matrix lattices, discriminant groups,
//! overlattice gluing, primitive embeddings, Eichler transvections, isometry
//! and involution analysis, and a machine-checkable verification suite over
//! the built-in lattices.

pub mod density;
pub mod disc;
pub mod embed;
pub mod invol;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod shortvec;
pub mod verify;

pub use lattice::{Lattice, LatticeVector, Sublattice};
pub use linalg::{Int, IntMatrix, Rat, RatMatrix};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("even lattice requires even diagonal, found odd entry at index {0}")]
    OddDiagonal(usize),
    #[error("degenerate form where a nondegenerate one is required")]
    Degenerate,
    #[error("vectors belong to different lattices")]
    MismatchedLattices,
    #[error("zero vector not allowed here")]
    ZeroVector,
    #[error("operation requires a definite lattice")]
    IndefiniteLattice,
    #[error("operation requires an indefinite lattice")]
    DefiniteLattice,
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("bounded search exhausted: {0}")]
    SearchExhausted(String),
    #[error("matrix does not preserve the Gram form")]
    NotAnIsometry,
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("isometry is not an involution")]
    NotInvolution,
    #[error("invariant mismatch: {0}")]
    InvariantMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no vectors with the requested properties exist: {0}")]
    Obstruction(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
