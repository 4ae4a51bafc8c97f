//! Exact-arithmetic toolkit for degree-d invariant laminations of the disk,
//! built by backward lifting from primitive majors, plus Thurston's
//! core-entropy algorithm for quadratic angles.
//!
//! Circle geometry is exact and generic over the integer type ([`ExactInt`]);
//! the crate-root aliases fix it to `BigInt`. Eigenvalue and growth-rate code
//! is generic over [`Real`]; the SVG writers work in `f64`.

pub mod angle;
pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod lamination;
pub mod major;
pub mod render;
pub mod scalar;
pub mod torus;

pub use error::{Error, Result};
pub use scalar::{ExactInt, Real};

pub use num_bigint::BigInt;

/// Exact rational with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::Ratio<BigInt>;
pub type Angle = angle::Angle<BigInt>;
pub type OrbitInfo = angle::OrbitInfo<BigInt>;
pub type Leaf = lamination::Leaf<BigInt>;
pub type FiniteLamination = lamination::FiniteLamination<BigInt>;
pub type PrimitiveMajor = major::PrimitiveMajor<BigInt>;
pub type EquivalenceClass = major::EquivalenceClass<BigInt>;
pub type StartSequence = major::StartSequence<BigInt>;
pub type QuotientGraph = major::QuotientGraph<BigInt>;
pub type RectangleSet = torus::RectangleSet<BigInt>;
pub type CircleArc = torus::CircleArc<BigInt>;
pub type PairBasis = entropy::PairBasis<BigInt>;
pub type OmegaLevel = dynamics::OmegaLevel<BigInt>;
pub type SeparatingSet = dynamics::SeparatingSet<BigInt>;
