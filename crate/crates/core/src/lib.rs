//! T-regular functions on alternative real *-algebras.
//!
//! The stack is generic over a [`Scalar`] field: exact [`Rational`] for
//! verification, `f64`/`f32` for numerics.

pub mod acceptance;
pub mod algebra;
pub mod cauchy;
pub mod error;
pub mod fan;
pub mod hypercomplex;
pub mod linalg;
pub mod poly;
pub mod quat13;
pub mod sampling;
pub mod scalar;
pub mod tregular;

pub use algebra::{algebra_by_name, make_algebra, AlgebraSpec, Element, Preset, SignedIndex};
pub use error::{Error, Result};
pub use fan::{make_fan, Sampler, SlicePoint, TFan, TorusPoint};
pub use hypercomplex::{BasisCondition, BasisViolation, HypercomplexBasis};
pub use poly::{MultiIndex, PolyMap, ScalarPoly};
pub use scalar::Scalar;

/// Exact arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;

pub type ElementQ = Element<Rational>;
pub type ElementF = Element<f64>;
pub type ElementF32 = Element<f32>;
pub type BasisQ = HypercomplexBasis<Rational>;
pub type BasisF = HypercomplexBasis<f64>;
pub type FanQ = TFan<Rational>;
pub type FanF = TFan<f64>;
pub type PolyMapQ = PolyMap<Rational>;
pub type PolyMapF = PolyMap<f64>;
