//! Closed arcs on the circle and finite rectangle unions on the torus,
//! all with exact rational coordinates.

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::angle::{ccw_offset, format_ratio, frac, int, parse_ratio, Angle};
use crate::error::{Error, Result};
use crate::scalar::ExactInt;

/// Closed arc [start, start + len] traversed counterclockwise, 0 < len ≤ 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircleArc<I: ExactInt> {
    pub start: Angle<I>,
    pub len: Ratio<I>,
}

impl<I: ExactInt> CircleArc<I> {
    pub fn new(start: Angle<I>, len: Ratio<I>) -> Result<Self> {
        if len <= Ratio::zero() || len > Ratio::one() {
            return Err(Error::Domain(format!("arc length {} outside (0,1]", format_ratio(&len))));
        }
        Ok(CircleArc { start, len })
    }

    pub fn full() -> Self {
        CircleArc { start: Angle::zero(), len: Ratio::one() }
    }

    /// Counterclockwise arc from a to b; a = b gives the full circle.
    pub fn between(a: &Angle<I>, b: &Angle<I>) -> Self {
        let len = ccw_offset(a, b);
        let len = if len.is_zero() { Ratio::one() } else { len };
        CircleArc { start: a.clone(), len }
    }

    pub fn end(&self) -> Angle<I> {
        self.start.add(&self.len)
    }

    /// Unrolled end coordinate start + len (may exceed 1).
    pub fn end_unrolled(&self) -> Ratio<I> {
        self.start.value() + &self.len
    }

    pub fn is_full(&self) -> bool {
        self.len.is_one()
    }

    pub fn contains(&self, x: &Angle<I>) -> bool {
        self.is_full() || ccw_offset(&self.start, x) <= self.len
    }

    pub fn contains_open(&self, x: &Angle<I>) -> bool {
        let o = ccw_offset(&self.start, x);
        if self.is_full() {
            return !o.is_zero();
        }
        !o.is_zero() && o < self.len
    }

    /// Positive-length pieces of the intersection (at most two).
    pub fn intersect(&self, other: &Self) -> Vec<Self> {
        let a0 = self.start.value().clone();
        let a1 = &a0 + &self.len;
        let mut out = Vec::new();
        for k in -1..=1i64 {
            let b0 = other.start.value() + int::<I>(k);
            let b1 = &b0 + &other.len;
            let lo = if a0 > b0 { a0.clone() } else { b0 };
            let hi = if a1 < b1 { a1.clone() } else { b1 };
            if lo < hi {
                out.push(CircleArc { start: Angle::from_ratio(lo.clone()), len: hi - lo });
            }
        }
        out
    }

    /// Length of the overlap.
    pub fn overlap(&self, other: &Self) -> Ratio<I> {
        self.intersect(other).into_iter().fold(Ratio::zero(), |acc, a| acc + a.len)
    }

    /// The d preimage arcs under x ↦ d·x (a full arc splits into d arcs of length 1/d).
    pub fn preimages(&self, d: u32) -> Vec<Self> {
        let dd = int::<I>(d as i64);
        let len = &self.len / &dd;
        (0..d as i64)
            .map(|k| CircleArc {
                start: Angle::from_ratio((self.start.value() + int::<I>(k)) / &dd),
                len: len.clone(),
            })
            .collect()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let s = self.start.to_f64();
        (s, s + ratio_to_f64(&self.len))
    }
}

pub(crate) fn ratio_to_f64<I: ExactInt>(r: &Ratio<I>) -> f64 {
    let whole = r.floor().to_integer().to_f64().unwrap_or(0.0);
    whole + Angle::from_ratio(r.clone()).to_f64()
}


/// Closed rectangle X × Y on R²/Z².
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusRect<I: ExactInt> {
    pub x: CircleArc<I>,
    pub y: CircleArc<I>,
}

impl<I: ExactInt> TorusRect<I> {
    pub fn area(&self) -> Ratio<I> {
        &self.x.len * &self.y.len
    }

    pub fn contains(&self, x: &Angle<I>, y: &Angle<I>) -> bool {
        self.x.contains(x) && self.y.contains(y)
    }

    pub fn swapped(&self) -> Self {
        TorusRect { x: self.y.clone(), y: self.x.clone() }
    }

    pub fn intersect(&self, other: &Self) -> Vec<Self> {
        let xs = self.x.intersect(&other.x);
        if xs.is_empty() {
            return Vec::new();
        }
        let ys = self.y.intersect(&other.y);
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for x in &xs {
            for y in &ys {
                out.push(TorusRect { x: x.clone(), y: y.clone() });
            }
        }
        out
    }

    /// Circle distance between the two sides, i.e. how far every point of the
    /// rectangle stays from the diagonal; 0 when the sides meet.
    pub fn diagonal_gap(&self) -> Ratio<I> {
        let g1 = frac(&(self.y.start.value() - self.x.end_unrolled()));
        let g2 = frac(&(self.x.start.value() - self.y.end_unrolled()));
        let disjoint = !g1.is_zero()
            && !g2.is_zero()
            && &g1 + &g2 + &self.x.len + &self.y.len == Ratio::one();
        if disjoint {
            g1.min(g2)
        } else {
            Ratio::zero()
        }
    }

    /// True when the rectangle meets the diagonal in more than a corner.
    pub fn meets_diagonal(&self) -> bool {
        !self.x.intersect(&self.y).is_empty()
    }
}

/// Finite union of closed torus rectangles with pairwise disjoint interiors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RectangleSet<I: ExactInt> {
    pub rects: Vec<TorusRect<I>>,
}

impl<I: ExactInt> RectangleSet<I> {
    pub fn new(rects: Vec<TorusRect<I>>) -> Self {
        RectangleSet { rects }
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn area(&self) -> Ratio<I> {
        self.rects.iter().fold(Ratio::zero(), |acc, r| acc + r.area())
    }

    pub fn contains(&self, x: &Angle<I>, y: &Angle<I>) -> bool {
        self.rects.iter().any(|r| r.contains(x, y))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let index = XIndex::new(&other.rects);
        let mut rects = Vec::new();
        for a in &self.rects {
            for j in index.candidates(&a.x) {
                rects.extend(a.intersect(&other.rects[j]));
            }
        }
        RectangleSet { rects }
    }

    /// Area of the intersection of two sets.
    pub fn overlap_area(&self, other: &Self) -> Ratio<I> {
        self.intersect(other).area()
    }

    /// Checks that no two rectangles overlap in a set of positive area.
    pub fn interiors_disjoint(&self) -> bool {
        let index = XIndex::new(&self.rects);
        self.rects.iter().enumerate().all(|(i, a)| {
            index.candidates(&a.x).into_iter().filter(|&j| j > i).all(|j| a.intersect(&self.rects[j]).is_empty())
        })
    }

    /// True when the set is invariant (as a point set) under (x, y) ↦ (y, x).
    pub fn is_swap_symmetric(&self) -> bool {
        let swapped = RectangleSet { rects: self.rects.iter().map(|r| r.swapped()).collect() };
        let a = self.area();
        a == swapped.area() && self.overlap_area(&swapped) == a
    }

    /// Preimage under F(x, y) = (d·x, d·y).
    pub fn preimage(&self, d: u32) -> Self {
        let mut rects = Vec::with_capacity(self.rects.len() * (d * d) as usize);
        for r in &self.rects {
            let xs = r.x.preimages(d);
            let ys = r.y.preimages(d);
            for x in &xs {
                for y in &ys {
                    rects.push(TorusRect { x: x.clone(), y: y.clone() });
                }
            }
        }
        RectangleSet { rects }
    }

    /// Canonical order (by x start, y start, lengths); used for stable output.
    pub fn sorted(mut self) -> Self {
        self.rects.sort_by(|a, b| {
            (&a.x.start, &a.y.start, &a.x.len, &a.y.len).cmp(&(&b.x.start, &b.y.start, &b.x.len, &b.y.len))
        });
        self
    }
}

/// Rectangles sorted by x start, for finding the ones whose x sides can
/// overlap a given arc without scanning everything.
struct XIndex<I: ExactInt> {
    order: Vec<usize>,
    starts: Vec<Ratio<I>>,
    max_len: Ratio<I>,
}

impl<I: ExactInt> XIndex<I> {
    fn new(rects: &[TorusRect<I>]) -> Self {
        let mut order: Vec<usize> = (0..rects.len()).collect();
        order.sort_by(|&i, &j| rects[i].x.start.cmp(&rects[j].x.start));
        let starts = order.iter().map(|&i| rects[i].x.start.value().clone()).collect();
        let max_len = rects.iter().map(|r| r.x.len.clone()).max().unwrap_or_else(Ratio::zero);
        XIndex { order, starts, max_len }
    }

    /// Superset of the indices whose x arc overlaps `arc` in positive length,
    /// ascending.
    fn candidates(&self, arc: &CircleArc<I>) -> Vec<usize> {
        let s = arc.start.value();
        let e = arc.end_unrolled();
        let mut out = Vec::new();
        // a start b₀ can only overlap after a shift t when b₀ + t lies in (s − max_len, e)
        for t in -1..=1i64 {
            let t = int::<I>(t);
            let lo = s - &self.max_len - &t;
            let hi = &e - &t;
            let i0 = self.starts.partition_point(|x| x <= &lo);
            let i1 = self.starts.partition_point(|x| x < &hi);
            if i0 < i1 {
                out.extend_from_slice(&self.order[i0..i1]);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// JSON form of a rectangle: each side is [start, end] with `end` unrolled
/// so that start < end ≤ start + 1.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RectDoc {
    pub x: [String; 2],
    pub y: [String; 2],
}

fn arc_doc<I: ExactInt>(a: &CircleArc<I>) -> [String; 2] {
    [a.start.to_string(), format_ratio(&a.end_unrolled())]
}

fn arc_from_doc<I: ExactInt>(d: &[String; 2]) -> Result<CircleArc<I>> {
    let s = parse_ratio::<I>(&d[0])?;
    let e = parse_ratio::<I>(&d[1])?;
    CircleArc::new(Angle::from_ratio(s.clone()), e - s)
}

impl<I: ExactInt> From<&TorusRect<I>> for RectDoc {
    fn from(r: &TorusRect<I>) -> Self {
        RectDoc { x: arc_doc(&r.x), y: arc_doc(&r.y) }
    }
}

impl<I: ExactInt> RectangleSet<I> {
    pub fn to_docs(&self) -> Vec<RectDoc> {
        self.rects.iter().map(RectDoc::from).collect()
    }

    pub fn from_docs(docs: &[RectDoc]) -> Result<Self> {
        let rects = docs
            .iter()
            .map(|d| Ok(TorusRect { x: arc_from_doc(&d.x)?, y: arc_from_doc(&d.y)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(RectangleSet { rects })
    }
}
