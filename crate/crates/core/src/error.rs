use thiserror::Error;

use crate::tiling::LatticePoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division is not exact in the Laurent ring")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("cannot substitute a non-unit into negative powers of {0}")]
    NonUnitIntoNegativeExponent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("vertex {0} is frozen and cannot be mutated")]
    FrozenVertex(usize),
    #[error("vertex {0} does not exist in this quiver")]
    NoSuchVertex(usize),
    #[error("tau index {0} is out of range 1..=5")]
    BadTau(u8),
    #[error("contour at ({0}, {1}, {2}) is self-intersecting")]
    SelfIntersecting(i64, i64, i64),
    #[error("point {0:?} is not on the lattice")]
    NotOnLattice(LatticePoint),
    #[error("face is not twistable in this matching")]
    NotTwistable,
    #[error("too many perfect matchings to exhaust (cap {cap})")]
    TooLarge { cap: usize },
    #[error("castle has no perfect matching")]
    NoMatching,
    #[error("minimal matching construction failed: {0}")]
    ConstructionGap(String),
}
