use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::ops::Bound;
use std::hash::Hash;

use num_rational::Ratio;
use num_traits::{One, Signed};

use super::{FiniteLamination, Leaf};
use crate::angle::{int, Angle};
use crate::error::{Error, Result};
use crate::major::PrimitiveMajor;
use crate::scalar::ExactInt;

pub const DEFAULT_DEPTH_CAP: usize = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LiftVariant {
    /// Keep every preimage compatible with the lamination built so far.
    #[default]
    Literal,
    /// Lift the major rotated by a symbolic −ε, then let ε → 0 and drop
    /// leaves that collapse to a point.
    EpsLimit,
}

/// b_0 ⊆ b_1 ⊆ … recorded generation by generation.
#[derive(Clone, Debug)]
pub struct BackwardLift<I: ExactInt> {
    pub degree: u32,
    /// generations[k] holds the leaves first added at depth k.
    pub generations: Vec<Vec<Leaf<I>>>,
}

impl<I: ExactInt> BackwardLift<I> {
    pub fn depth(&self) -> usize {
        self.generations.len() - 1
    }

    /// b_i as a lamination.
    pub fn level(&self, i: usize) -> FiniteLamination<I> {
        FiniteLamination::new(self.degree, self.generations[..=i].iter().flatten().cloned())
    }

    pub fn lamination(&self) -> FiniteLamination<I> {
        self.level(self.depth())
    }

    pub fn generation_of(&self, l: &Leaf<I>) -> Option<usize> {
        self.generations.iter().position(|g| g.contains(l))
    }
}

/// A point model of the circle cut at 0 that supports taking preimages.
trait LiftPoint: Clone + Ord + Hash {
    fn preimages(&self, d: u32) -> Vec<Self>;
}

impl<I: ExactInt> LiftPoint for Angle<I> {
    fn preimages(&self, d: u32) -> Vec<Self> {
        Angle::preimages(self, d)
    }
}

/// base + coef·ε for an infinitesimal ε > 0.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct EpsPoint<I: ExactInt> {
    base: Angle<I>,
    coef: Ratio<I>,
}

impl<I: ExactInt> EpsPoint<I> {
    // 0 − ε sits just below 1 on the cut circle
    fn wraps(&self) -> bool {
        self.base.is_zero() && self.coef.is_negative()
    }
}

impl<I: ExactInt> Ord for EpsPoint<I> {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.wraps(), &self.base, &self.coef).cmp(&(o.wraps(), &o.base, &o.coef))
    }
}

impl<I: ExactInt> PartialOrd for EpsPoint<I> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<I: ExactInt> LiftPoint for EpsPoint<I> {
    fn preimages(&self, d: u32) -> Vec<Self> {
        let dd = int::<I>(d as i64);
        let coef = &self.coef / &dd;
        (0..d as i64)
            .map(|k| EpsPoint {
                base: Angle::from_ratio((self.base.value() + int::<I>(k)) / &dd),
                coef: coef.clone(),
            })
            .collect()
    }
}

fn ordered<P: Ord>(x: P, y: P) -> (P, P) {
    if x < y {
        (x, y)
    } else {
        (y, x)
    }
}

/// Leaves indexed by each endpoint, for crossing queries.
struct CrossIndex<P: Ord> {
    by_low: BTreeMap<P, Vec<P>>,
    by_high: BTreeMap<P, Vec<P>>,
}

impl<P: LiftPoint> CrossIndex<P> {
    fn new() -> Self {
        CrossIndex { by_low: BTreeMap::new(), by_high: BTreeMap::new() }
    }

    fn insert(&mut self, a: &P, b: &P) {
        self.by_low.entry(a.clone()).or_default().push(b.clone());
        self.by_high.entry(b.clone()).or_default().push(a.clone());
    }

    /// Does some indexed leaf have exactly one endpoint strictly inside (a, b)?
    fn crosses(&self, a: &P, b: &P) -> bool {
        let inner = (Bound::Excluded(a), Bound::Excluded(b));
        self.by_low.range::<P, _>(inner).any(|(_, highs)| highs.iter().any(|h| h > b))
            || self.by_high.range::<P, _>(inner).any(|(_, lows)| lows.iter().any(|l| l < a))
    }
}

/// b_{i+1} = b_i ∪ {preimages of b_i compatible with every leaf of b_i}.
fn lift_generic<P: LiftPoint>(major: &[(P, P)], d: u32, depth: usize) -> Vec<Vec<(P, P)>> {
    let mut seen: HashSet<(P, P)> = major.iter().cloned().collect();
    let mut index = CrossIndex::new();
    for (a, b) in major {
        index.insert(a, b);
    }
    let mut gens = vec![major.to_vec()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (x, y) in gens.last().unwrap() {
            let px = x.preimages(d);
            let py = y.preimages(d);
            for u in &px {
                for v in &py {
                    let (a, b) = ordered(u.clone(), v.clone());
                    if a != b && !index.crosses(&a, &b) && seen.insert((a.clone(), b.clone())) {
                        next.push((a, b));
                    }
                }
            }
        }
        next.sort();
        for (a, b) in &next {
            index.insert(a, b);
        }
        gens.push(next);
    }
    gens
}

pub fn backward_lift<I: ExactInt>(m: &PrimitiveMajor<I>, depth: usize) -> Result<BackwardLift<I>> {
    backward_lift_with(m, depth, LiftVariant::Literal, DEFAULT_DEPTH_CAP)
}

pub fn backward_lift_with<I: ExactInt>(
    m: &PrimitiveMajor<I>,
    depth: usize,
    variant: LiftVariant,
    cap: usize,
) -> Result<BackwardLift<I>> {
    if depth > cap {
        return Err(Error::ResourceLimit { cap, requested: depth });
    }
    let d = m.degree;
    let major: Vec<Leaf<I>> = m.leaves();
    let generations = match variant {
        LiftVariant::Literal => {
            let pairs: Vec<_> = major.iter().map(|l| (l.a.clone(), l.b.clone())).collect();
            lift_generic(&pairs, d, depth)
                .into_iter()
                .map(|g| g.into_iter().map(|(a, b)| Leaf { a, b }).collect())
                .collect()
        }
        LiftVariant::EpsLimit => {
            let shift = |x: &Angle<I>| EpsPoint { base: x.clone(), coef: -Ratio::<I>::one() };
            let pairs: Vec<_> = major.iter().map(|l| ordered(shift(&l.a), shift(&l.b))).collect();
            let mut seen = BTreeSet::new();
            lift_generic(&pairs, d, depth)
                .into_iter()
                .map(|g| {
                    let mut out: Vec<Leaf<I>> = g
                        .into_iter()
                        .filter_map(|(a, b)| Leaf::new(a.base, b.base).ok())
                        .filter(|l| seen.insert(l.clone()))
                        .collect();
                    out.sort();
                    out
                })
                .collect()
        }
    };
    Ok(BackwardLift { degree: d, generations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::{check_forward_invariant, good_region_area};
    use num_bigint::BigInt;

    fn major(d: u32, classes: &[&[&str]]) -> PrimitiveMajor<BigInt> {
        PrimitiveMajor::parse(d, classes).unwrap()
    }

    fn leaf(x: &str, y: &str) -> Leaf<BigInt> {
        Leaf::new(x.parse().unwrap(), y.parse().unwrap()).unwrap()
    }

    /// b_{i+1} = b_i ∪ {preimages of any leaf of b_i crossing no leaf of b_i}, by brute force.
    fn oracle(m: &PrimitiveMajor<BigInt>, depth: usize) -> BTreeSet<Leaf<BigInt>> {
        let mut b: BTreeSet<Leaf<BigInt>> = m.leaves().into_iter().collect();
        for _ in 0..depth {
            let mut next = b.clone();
            for l in &b {
                for u in l.a().preimages(m.degree) {
                    for v in l.b().preimages(m.degree) {
                        let c = Leaf::new(u.clone(), v).unwrap();
                        if b.iter().all(|x| !crate::lamination::leaves_cross(x, &c)) {
                            next.insert(c);
                        }
                    }
                }
            }
            b = next;
        }
        b
    }

    #[test]
    fn rabbit_depth_one() {
        let m = major(2, &[&["1/7", "9/14"]]);
        let b = backward_lift(&m, 1).unwrap();
        assert_eq!(b.generations[1], vec![leaf("1/14", "23/28"), leaf("9/28", "4/7")]);
    }

    #[test]
    fn matches_recursion_oracle() {
        for (d, cls) in [
            (2, vec![vec!["1/7", "9/14"]]),
            (2, vec![vec!["0", "1/2"]]),
            (3, vec![vec!["1/10", "13/30"], vec!["1/2", "5/6"]]),
            (3, vec![vec!["0", "1/3", "2/3"]]),
        ] {
            let refs: Vec<&[&str]> = cls.iter().map(|c| c.as_slice()).collect();
            let m = major(d, &refs);
            for depth in 0..4 {
                let got = backward_lift(&m, depth).unwrap().lamination().leaves;
                assert_eq!(got, oracle(&m, depth), "{refs:?} depth {depth}");
            }
        }
    }

    #[test]
    fn diameter_literal_and_eps_limit() {
        let m = major(2, &[&["0", "1/2"]]);
        let lit = backward_lift(&m, 1).unwrap();
        assert_eq!(
            lit.generations[1],
            vec![leaf("0", "1/4"), leaf("0", "3/4"), leaf("1/4", "1/2"), leaf("1/2", "3/4")]
        );
        let eps = backward_lift_with(&m, 1, LiftVariant::EpsLimit, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(eps.generations[1], vec![leaf("0", "1/4"), leaf("1/2", "3/4")]);
        let deep = backward_lift_with(&m, 6, LiftVariant::EpsLimit, DEFAULT_DEPTH_CAP).unwrap();
        assert!(deep.lamination().is_compatible());
    }

    #[test]
    fn depth_zero_and_cap() {
        let m = major(2, &[&["1/7", "9/14"]]);
        assert_eq!(backward_lift(&m, 0).unwrap().lamination().leaves.len(), 1);
        assert!(matches!(
            backward_lift(&m, DEFAULT_DEPTH_CAP + 1),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn lift_is_forward_invariant() {
        for cls in [["1/7", "9/14"], ["0", "1/2"], ["1/12", "7/12"]] {
            let m = major(2, &[&cls]);
            let b = backward_lift(&m, 5).unwrap();
            assert!(check_forward_invariant(&b.lamination(), 2).is_ok(), "{cls:?}");
        }
    }

    #[test]
    fn periodic_rabbit_stays_a_lamination() {
        let m = major(2, &[&["1/7", "9/14"]]);
        let b = backward_lift(&m, 8).unwrap();
        for i in 0..=8 {
            assert!(b.level(i).is_compatible(), "depth {i}");
        }
    }

    #[test]
    fn generic_quadratic_growth_and_area() {
        // 1/6 is strictly preperiodic, so no preimage lands back on the major
        let m = major(2, &[&["1/12", "7/12"]]);
        let b = backward_lift(&m, 8).unwrap();
        for i in 1..=8 {
            assert_eq!(b.generations[i].len(), 1 << i);
            assert!(b.level(i).is_compatible(), "depth {i}");
        }
        for i in 0..=3 {
            let want = Ratio::new(BigInt::from(1), BigInt::from(2u32.pow(i as u32 + 1)));
            assert_eq!(good_region_area(&b.level(i)).unwrap(), want, "depth {i}");
        }
    }
}
