//! Scalar traits the library is generic over.
//!
//! Exact circle geometry runs on any [`ExactInt`] (machine integers or
//! `BigInt`); only the eigenvalue and rendering code touches [`Real`].

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub trait ExactInt:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromStr
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("integer type narrower than i64")
    }
}

impl ExactInt for i64 {}
impl ExactInt for i128 {}
impl ExactInt for BigInt {}

pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + FromPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Stopping tolerance for iterative eigenvalue estimates.
    fn spectral_tolerance() -> Self {
        let floor = Self::from_f64(1e-12).unwrap();
        let eps = Self::epsilon() * Self::from_f64(64.0).unwrap();
        if eps > floor {
            eps
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}
