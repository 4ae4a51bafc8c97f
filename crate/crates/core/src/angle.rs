//! Exact points of the circle R/Z and the d-tupling map.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::ExactInt;

/// Reduce a rational into [0, 1).
pub fn frac<I: ExactInt>(r: &Ratio<I>) -> Ratio<I> {
    r - r.floor()
}

pub(crate) fn ratio<I: ExactInt>(p: i64, q: i64) -> Ratio<I> {
    Ratio::new(I::from_i64_exact(p), I::from_i64_exact(q))
}

pub(crate) fn int<I: ExactInt>(n: i64) -> Ratio<I> {
    Ratio::from_integer(I::from_i64_exact(n))
}

/// A point of R/Z stored as a reduced fraction in [0, 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle<I: ExactInt> {
    value: Ratio<I>,
}

impl<I: ExactInt> Angle<I> {
    pub fn zero() -> Self {
        Angle { value: Ratio::zero() }
    }

    /// Reduce an arbitrary rational mod 1.
    pub fn from_ratio(r: Ratio<I>) -> Self {
        Angle { value: frac(&r) }
    }

    pub fn new(p: I, q: I) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidDenominator(format!("{p}/{q}")));
        }
        Ok(Self::from_ratio(Ratio::new(p, q)))
    }

    pub fn value(&self) -> &Ratio<I> {
        &self.value
    }

    pub fn numerator(&self) -> &I {
        self.value.numer()
    }

    pub fn denominator(&self) -> &I {
        self.value.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Rotate by an arbitrary rational amount.
    pub fn add(&self, r: &Ratio<I>) -> Self {
        Self::from_ratio(&self.value + r)
    }

    /// The d preimages (x + k)/d, sorted.
    pub fn preimages(&self, d: u32) -> Vec<Self> {
        let dd = int::<I>(d as i64);
        (0..d as i64)
            .map(|k| Angle { value: (&self.value + int::<I>(k)) / &dd })
            .collect()
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.numerator().to_f64().unwrap_or(f64::NAN);
        let d = self.denominator().to_f64().unwrap_or(f64::NAN);
        if n.is_finite() && d.is_finite() {
            n / d
        } else {
            // Huge denominators: fall back to a scaled integer division.
            let scale = I::from_i64_exact(1 << 52);
            let q = (self.numerator().clone() * scale.clone()) / self.denominator().clone();
            q.to_f64().unwrap_or(0.0) / (1u64 << 52) as f64
        }
    }

    /// Convert into another integer representation.
    pub fn convert<J: ExactInt>(&self) -> Option<Angle<J>> {
        let p = J::from_str(&self.numerator().to_string()).ok()?;
        let q = J::from_str(&self.denominator().to_string()).ok()?;
        Some(Angle { value: Ratio::new(p, q) })
    }
}

impl<I: ExactInt> fmt::Display for Angle<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator(), self.denominator())
    }
}

impl<I: ExactInt> fmt::Debug for Angle<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parse "p/q" or "p" into an unreduced rational.
pub fn parse_ratio<I: ExactInt>(s: &str) -> Result<Ratio<I>> {
    let bad = || Error::Parse { what: "rational", input: s.to_string() };
    let t = s.trim();
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p = I::from_str(p).map_err(|_| bad())?;
    let q = I::from_str(q).map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::InvalidDenominator(s.to_string()));
    }
    Ok(Ratio::new(p, q))
}

pub fn format_ratio<I: ExactInt>(r: &Ratio<I>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl<I: ExactInt> FromStr for Angle<I> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r = parse_ratio::<I>(s).map_err(|e| match e {
            Error::Parse { input, .. } => Error::Parse { what: "angle", input },
            e => e,
        })?;
        Ok(Self::from_ratio(r))
    }
}

impl<I: ExactInt> Serialize for Angle<I> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de, I: ExactInt> Deserialize<'de> for Angle<I> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn make_angle<I: ExactInt>(p: I, q: I) -> Result<Angle<I>> {
    Angle::new(p, q)
}

pub fn tuple_map<I: ExactInt>(x: &Angle<I>, d: u32) -> Angle<I> {
    Angle::from_ratio(x.value() * int::<I>(d as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitInfo<I: ExactInt> {
    pub preperiod: usize,
    pub period: usize,
    pub points: Vec<Angle<I>>,
}

impl<I: ExactInt> OrbitInfo<I> {
    pub fn is_periodic(&self) -> bool {
        self.preperiod == 0
    }
}

pub fn orbit<I: ExactInt>(x: &Angle<I>, d: u32) -> OrbitInfo<I> {
    let mut seen: HashMap<Angle<I>, usize> = HashMap::new();
    let mut points = Vec::new();
    let mut cur = x.clone();
    loop {
        if let Some(&j) = seen.get(&cur) {
            let period = points.len() - j;
            return OrbitInfo { preperiod: j, period, points };
        }
        seen.insert(cur.clone(), points.len());
        let next = tuple_map(&cur, d);
        points.push(cur);
        cur = next;
    }
}

/// Periodicity under doubling is exactly oddness of the reduced denominator.
fn periodic_under_doubling<I: ExactInt>(x: &Angle<I>) -> bool {
    x.denominator().is_odd()
}

/// The preimage of θ under doubling used to start the post-major orbit:
/// the periodic one of θ/2, (θ+1)/2 if any, else θ/2.
pub fn preferred_half_preimage<I: ExactInt>(theta: &Angle<I>) -> Result<Angle<I>> {
    if theta.is_zero() {
        return Err(Error::Domain("angle 0 is excluded".into()));
    }
    let half = ratio::<I>(1, 2);
    let lo = Angle::from_ratio(theta.value() * &half);
    let hi = Angle::from_ratio((theta.value() + Ratio::one()) * &half);
    if periodic_under_doubling(&hi) {
        Ok(hi)
    } else {
        Ok(lo)
    }
}

/// ccw displacement from a to x, in [0, 1).
pub fn ccw_offset<I: ExactInt>(a: &Angle<I>, x: &Angle<I>) -> Ratio<I> {
    frac(&(x.value() - a.value()))
}

/// True iff x lies strictly inside the counterclockwise arc from a to b.
/// When a = b the arc is the whole circle minus that point.
pub fn cyclic_between<I: ExactInt>(a: &Angle<I>, x: &Angle<I>, b: &Angle<I>) -> bool {
    let ox = ccw_offset(a, x);
    if ox.is_zero() {
        return false;
    }
    let ob = ccw_offset(a, b);
    ob.is_zero() || ox < ob
}

pub fn arc_distance<I: ExactInt>(x: &Angle<I>, y: &Angle<I>) -> Ratio<I> {
    let d = (x.value() - y.value()).abs();
    let other = Ratio::one() - &d;
    if d < other {
        d
    } else {
        other
    }
}
