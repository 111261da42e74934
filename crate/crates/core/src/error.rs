use thiserror::Error;

use crate::gring::Ring;

/// Errors raised by the algebraic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid ring descriptor: {0}")]
    InvalidRing(String),
    #[error("ring descriptor mismatch: {0} vs {1}")]
    DescriptorMismatch(Ring, Ring),
    #[error("degree {degree} is not realizable in {ring}")]
    UnsupportedDegree { ring: Ring, degree: i32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("entry ({row}, {col}) is not homogeneous of degree {expected}")]
    InhomogeneousEntry { row: usize, col: usize, expected: i32 },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("operator position {position} out of range for word of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("result exceeds truncation cap {cap}; {dropped} terms beyond the cap")]
    CapOverflow { cap: usize, dropped: usize },
    #[error("a coalgebra homomorphism with nonzero arity-0 component is unbounded on a truncated module")]
    NonzeroArityZero,
    #[error("reduced coproduct is not conilpotent up to {cap}")]
    NotConilpotentUpToCap { cap: usize },
    #[error("cap {given} too small; at least {required} is required")]
    CapTooSmall { given: usize, required: usize },
    #[error("linear system has no solution")]
    EmptySolutionSpace,
    #[error("map is not invertible: {0}")]
    NotInvertible(String),
    #[error("not a twisting cochain: {equation} fails at {witness:?}")]
    TwistingCochainViolation { equation: String, witness: Vec<usize> },
    #[error("structure is not valid: {0}")]
    InvalidStructure(String),
}
