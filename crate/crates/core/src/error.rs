use thiserror::Error;

use crate::grid::Location;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars from different fields")]
    ContextMismatch,
    #[error("subspaces or vectors of different ambient dimension")]
    AmbientMismatch,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("field has no distinguished element q")]
    NoVariable,
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("locations from grids of different diameter")]
    GridMismatch,
    #[error("axes must be distinct values in 1..=3")]
    BadAxes,
    #[error("{0:?} is outside the grid or poset")]
    OutOfRange(Location),
    #[error("{0:?} and {1:?} are not adjacent")]
    NotAdjacent(Location, Location),
    #[error("sequence of locations is not a walk")]
    NotAWalk,
    #[error("grid of diameter {0} is too small for this operation")]
    DiameterTooSmall(usize),
    #[error("edge set is not a spanning tree of the grid")]
    NotASpanningTree,
    #[error("tree values are missing or not reciprocal on some edge")]
    InconsistentTreeValues,
    #[error("parts do not form a decomposition")]
    NotADecomposition,
    #[error("not a flag: {0}")]
    NotAFlag(String),
    #[error("flags are not totally opposite")]
    NotTotallyOpposite,
    #[error("array fails the axioms: {0}")]
    InvalidArray(String),
    #[error("labelling fails the axioms: {0}")]
    InvalidLabelling(String),
    #[error("zero vector")]
    ZeroVector,
    #[error("vector does not lie in the required subspace")]
    NotInSubspace,
    #[error("value function is not the required constant")]
    WrongValueFunction,
    #[error("field characteristic rules out this construction")]
    BadCharacteristic,
    #[error("parameter q is not admissible")]
    BadQ,
    #[error("q is a root of unity of order at most 2N")]
    RootOfUnityObstruction,
    #[error("parameters violate xbar*ybar*zbar = q^(N-1)")]
    ConstraintViolation,
    #[error("bad diameter {0}")]
    BadDiameter(usize),
    #[error("gave up after {0} attempts")]
    RetriesExhausted(usize),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
