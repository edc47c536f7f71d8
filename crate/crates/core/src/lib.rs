//! Exact computation with Billiard Arrays.
//!
//! A Billiard Array of diameter `N` assigns a line of `F^(N+1)` to every point
//! of the triangular grid Δ_N so that lines along each grid line are
//! independent and lines on each black 3-clique are dependent. The crate
//! builds and verifies such arrays over ℚ, GF(p) and ℚ(q), converts them to
//! and from triples of totally opposite flags, classifies them by value
//! functions on white 3-cliques, and constructs the equitable sl₂ and
//! U_q(sl₂) actions they carry.

pub mod billiard;
pub mod error;
pub mod families;
pub mod field;
pub mod flags;
pub mod grid;
pub mod json;
pub mod labelling;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod rep;

pub use billiard::{BilliardArray, ConcreteBilliardArray, TransitionTable, Verdict, Violation};
pub use error::{Error, Result};
pub use field::{FieldContext, Scalar};
pub use flags::{Flag, FlagTriple};
pub use grid::{loc, Clique, Color, DeltaGrid, Location, SpanningTree};
pub use labelling::{EdgeLabelling, ValueFunction};
pub use linalg::{Matrix, Subspace, Vector};
pub use rep::{EquitableOperators, Flavor};
