use thiserror::Error;

use crate::hypercomplex::BasisCondition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("algebra mismatch: {left} vs {right}")]
    AlgebraMismatch { left: String, right: String },

    #[error("unknown algebra {0:?}")]
    UnknownAlgebra(String),

    #[error("zero has no inverse")]
    ZeroInput,

    #[error("element lies outside the quadratic cone")]
    OutsideCone,

    #[error("not a hypercomplex basis: {0}")]
    InvalidBasis(String),

    #[error("hat extension of a basis with m = {m} fails: {failed}")]
    NotExtendable { m: usize, failed: BasisCondition },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("element lies outside the subspace spanned by the basis")]
    OutsideSubspace,

    #[error("norm of block {block} is not a perfect square in this scalar field")]
    IrrationalNorm { block: usize },

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("invalid torus point: {0}")]
    InvalidTorusPoint(String),

    #[error("variable count mismatch: expected {expected}, found {found}")]
    VarCountMismatch { expected: usize, found: usize },

    #[error("stem parity violated for component {component:#b} in beta_{h}")]
    InvalidStem { component: usize, h: usize },

    #[error("polynomial is not a homogeneous (1,3)-regular map of degree {degree}")]
    NotInUk { degree: u32 },

    #[error("polynomial is not (1,3)-regular: series reconstruction leaves a residual")]
    NotRegular,

    #[error("the two slice units coincide")]
    SingularPair,

    #[error("kernel evaluated at coincident points")]
    CoincidentPoints,

    #[error("point lies outside the open ball")]
    OutsideBall,

    #[error("quadrature order must be at least 2, got {0}")]
    OrderTooSmall(usize),

    #[error("parse error: {0}")]
    Parse(String),
}
