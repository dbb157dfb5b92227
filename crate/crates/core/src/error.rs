use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("lattice generators have rank {rank}, ambient dimension is {dim}")]
    RankDeficient { rank: usize, dim: usize },

    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("not a regular subgroup: {0}")]
    NotRegular(String),

    #[error("group order {order} exceeds the enumeration budget of {budget}")]
    BudgetExceeded { order: usize, budget: usize },

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("element of L[N] is not G-fixed: twisting by group element {g} changes it")]
    NotFixed { g: usize },

    #[error("lattice is not G-stable: group element {sigma} moves basis vector {vector} outside")]
    Unstable { sigma: usize, vector: usize },

    #[error("element does not lie in the lattice")]
    NotInLattice,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("claim {claim} failed for element {index}: {witness}")]
    ClaimFailed {
        index: usize,
        claim: String,
        witness: String,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("fixture: {0}")]
    Fixture(String),
}
