//! Exact computer algebra for curved algebras, curved augmented coalgebras,
//! their bar and cobar constructions, the adjunction between them and
//! twisting cochains, over small graded strongly commutative rings.

pub mod adjoint;
pub mod barcobar;
pub mod curved;
pub mod error;
pub mod gmod;
pub mod gring;
pub mod json;
pub mod linsolve;
pub mod tca;

pub use error::AlgebraError;
pub use gmod::{Expr, GradedMap, GradedModule, SparseVec};
pub use gring::{Ring, RingElement};
