//! Starting-point parametrization, the normalization map, derived majors,
//! the cubic bisector chart and seeded random majors.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{validate, PrimitiveMajor};
use crate::angle::{int, ratio, Angle};
use crate::error::{Error, Result};
use crate::scalar::ExactInt;

/// Strictly increasing starting points s_1 < … < s_{d−1} with s_i < i/d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StartSequence<I: ExactInt> {
    starts: Vec<Angle<I>>,
}

impl<I: ExactInt> StartSequence<I> {
    pub fn new(starts: Vec<Angle<I>>, d: u32) -> Result<Self> {
        if d < 2 || starts.len() != (d - 1) as usize {
            return Err(Error::Precondition(format!(
                "degree {d} needs {} starting points, got {}",
                d.saturating_sub(1),
                starts.len()
            )));
        }
        for (i, w) in starts.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::Precondition(format!(
                    "starting points not increasing at position {}: {} then {}",
                    i + 1,
                    w[0],
                    w[1]
                )));
            }
        }
        for (i, s) in starts.iter().enumerate() {
            let bound = ratio::<I>(i as i64 + 1, d as i64);
            if s.value() >= &bound {
                return Err(Error::Precondition(format!("s_{} = {s} is not below {}/{d}", i + 1, i + 1)));
            }
        }
        Ok(StartSequence { starts })
    }

    pub fn starts(&self) -> &[Angle<I>] {
        &self.starts
    }

    pub fn degree(&self) -> u32 {
        self.starts.len() as u32 + 1
    }
}

/// Merge the intervals [s, t] (t unrolled, t > s) into disjoint sorted pieces.
fn merge_intervals<I: ExactInt>(mut iv: Vec<(Ratio<I>, Ratio<I>)>) -> Vec<(Ratio<I>, Ratio<I>)> {
    iv.sort();
    let mut out: Vec<(Ratio<I>, Ratio<I>)> = Vec::new();
    for (s, t) in iv {
        match out.last_mut() {
            Some(last) if s <= last.1 => {
                if t > last.1 {
                    last.1 = t;
                }
            }
            _ => out.push((s, t)),
        }
    }
    out
}

/// The unique generic major with the given starting points. Terminal points
/// are built from the last leaf backwards: t_i is the least point such that
/// [s_i, t_i] minus the later intervals has measure 1/d.
pub fn from_starting_points<I: ExactInt>(s: &StartSequence<I>, d: u32) -> Result<PrimitiveMajor<I>> {
    let s = StartSequence::new(s.starts.clone(), d)?;
    let n = s.starts.len();
    let step = ratio::<I>(1, d as i64);
    let mut terminal: Vec<Ratio<I>> = vec![Ratio::zero(); n];
    for i in (0..n).rev() {
        let si = s.starts[i].value().clone();
        let later: Vec<_> = (i + 1..n).map(|j| (s.starts[j].value().clone(), terminal[j].clone())).collect();
        let mut pos = si;
        let mut remaining = step.clone();
        for (a, b) in merge_intervals(later) {
            if b <= pos {
                continue;
            }
            let gap = &a - &pos;
            if gap >= remaining {
                break;
            }
            remaining = remaining - gap;
            pos = b;
        }
        terminal[i] = pos + remaining;
    }
    // leaves sharing an endpoint belong to one polygon class
    let mut classes: BTreeMap<Angle<I>, BTreeSet<Angle<I>>> = BTreeMap::new();
    let mut owner: BTreeMap<Angle<I>, Angle<I>> = BTreeMap::new();
    for (sv, t) in s.starts.iter().zip(&terminal) {
        let tv = Angle::from_ratio(t.clone());
        let mut members: BTreeSet<Angle<I>> = [sv.clone(), tv].into_iter().collect();
        for p in members.clone() {
            if let Some(root) = owner.get(&p).cloned() {
                if let Some(old) = classes.remove(&root) {
                    members.extend(old);
                }
            }
        }
        let root = members.iter().next().unwrap().clone();
        for p in &members {
            owner.insert(p.clone(), root.clone());
        }
        classes.insert(root, members);
    }
    let m = PrimitiveMajor::new(d, classes.into_values().map(|c| c.into_iter().collect()).collect());
    let v = validate(&m);
    if !v.is_empty() {
        return Err(Error::Internal(format!("constructed major fails validation: {}", v[0])));
    }
    Ok(m)
}

/// Iterate the normalization map A to its fixed point; also reports the
/// number of applications that changed something.
pub fn normalize_starts_counted<I: ExactInt>(xs: &[Angle<I>], d: u32) -> Result<(StartSequence<I>, usize)> {
    if d < 2 || xs.len() != (d - 1) as usize {
        return Err(Error::Precondition(format!("degree {d} needs {} angles, got {}", d.saturating_sub(1), xs.len())));
    }
    let step = ratio::<I>(1, d as i64);
    let mut cur: Vec<Ratio<I>> = xs.iter().map(|a| a.value().clone()).collect();
    let distinct = |v: &[Ratio<I>]| v.iter().collect::<BTreeSet<_>>().len() == v.len();
    if !distinct(&cur) {
        return Err(Error::DegenerateInput("input angles are not distinct".into()));
    }
    let mut iterations = 0;
    loop {
        cur.sort();
        let mut changed = false;
        for (i, x) in cur.iter_mut().enumerate() {
            if *x >= ratio::<I>(i as i64 + 1, d as i64) {
                *x = &*x - &step;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        iterations += 1;
        if !distinct(&cur) {
            return Err(Error::DegenerateInput(format!("two angles collide after {iterations} iterations")));
        }
    }
    let starts = cur.into_iter().map(Angle::from_ratio).collect();
    Ok((StartSequence::new(starts, d)?, iterations))
}

pub fn normalize_starts<I: ExactInt>(xs: &[Angle<I>], d: u32) -> Result<StartSequence<I>> {
    normalize_starts_counted(xs, d).map(|(s, _)| s)
}

fn require_generic<I: ExactInt>(m: &PrimitiveMajor<I>) -> Result<()> {
    if m.is_generic() {
        Ok(())
    } else {
        Err(Error::UnsupportedShape("operation needs a generic major (leaves only, no polygons)".into()))
    }
}

pub fn starting_points<I: ExactInt>(m: &PrimitiveMajor<I>) -> Result<StartSequence<I>> {
    require_generic(m)?;
    let mut starts: Vec<Angle<I>> = m.classes.iter().map(|c| c.angles[0].clone()).collect();
    starts.sort();
    StartSequence::new(starts, m.degree)
}

/// Collapse the leaf with the largest starting point and rescale by d/(d−1),
/// keeping 0 fixed.
pub fn derive<I: ExactInt>(m: &PrimitiveMajor<I>) -> Result<PrimitiveMajor<I>> {
    let d = m.degree;
    if d <= 2 {
        return Err(Error::CannotDerive(format!("degree {d} has no derived major")));
    }
    require_generic(m)?;
    let last = m.classes.iter().max_by(|a, b| a.angles[0].cmp(&b.angles[0])).unwrap();
    let (s, t) = (last.angles[0].value().clone(), last.angles[1].value().clone());
    let scale = ratio::<I>(d as i64, d as i64 - 1);
    let shrink = ratio::<I>(1, d as i64);
    // x inside the collapsed interval cannot occur: its inner region has measure exactly 1/d
    let map = |x: &Angle<I>| -> Angle<I> {
        let v = x.value();
        if v <= &s {
            Angle::from_ratio(v * &scale)
        } else {
            debug_assert!(v >= &t);
            Angle::from_ratio((v - &shrink) * &scale)
        }
    };
    let classes = m
        .classes
        .iter()
        .filter(|c| !std::ptr::eq(*c, last))
        .map(|c| c.angles.iter().map(map).collect())
        .collect();
    let out = PrimitiveMajor::new(d - 1, classes);
    let v = validate(&out);
    if !v.is_empty() {
        return Err(Error::Internal(format!("derived major fails validation: {}", v[0])));
    }
    Ok(out)
}

/// PM(3) chart: I = (θ − a/2, θ + a/2) of length a, J centred at θ + 1/2 of
/// length 1/3 − a.
pub fn cubic_from_bisector<I: ExactInt>(a: &Ratio<I>, theta: &Angle<I>) -> Result<PrimitiveMajor<I>> {
    let third = ratio::<I>(1, 3);
    if a <= &Ratio::zero() || a >= &third {
        return Err(Error::Domain("bisector parameter a must lie strictly between 0 and 1/3".into()));
    }
    let half = a / int::<I>(2);
    let p = theta.add(&half);
    let q = theta.add(&(&half + &third));
    let r = theta.add(&-(&half + &third));
    let s = theta.add(&-half.clone());
    PrimitiveMajor::checked(3, vec![vec![p, q], vec![r, s]])
}

/// d − 1 seeded random angles pushed through normalize_starts; draws that
/// collide are redrawn.
pub fn random_start_sequence<I: ExactInt, R: Rng>(d: u32, rng: &mut R) -> StartSequence<I> {
    assert!(d >= 2, "degree must be at least 2");
    loop {
        let xs: Vec<Angle<I>> = (0..d - 1)
            .map(|_| {
                let q: i64 = rng.gen_range(2..=720);
                let p: i64 = rng.gen_range(0..q);
                Angle::from_ratio(ratio(p, q))
            })
            .collect();
        if let Ok(s) = normalize_starts(&xs, d) {
            return s;
        }
    }
}

pub fn random_generic_major<I: ExactInt>(d: u32, seed: u64) -> PrimitiveMajor<I> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let s = random_start_sequence::<I, _>(d, &mut rng);
        if let Ok(m) = from_starting_points(&s, d) {
            if m.is_generic() {
                return m;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::major::Violation;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type M = PrimitiveMajor<BigInt>;

    fn a(s: &str) -> Angle<BigInt> {
        s.parse().unwrap()
    }

    fn seq(d: u32, xs: &[&str]) -> StartSequence<BigInt> {
        StartSequence::new(xs.iter().map(|x| a(x)).collect(), d).unwrap()
    }

    fn major(d: u32, classes: &[&[&str]]) -> M {
        M::parse(d, classes).unwrap()
    }

    #[test]
    fn from_starts_examples() {
        assert_eq!(from_starting_points(&seq(2, &["1/10"]), 2).unwrap(), major(2, &[&["1/10", "3/5"]]));
        assert_eq!(
            from_starting_points(&seq(3, &["1/10", "1/2"]), 3).unwrap(),
            major(3, &[&["1/10", "13/30"], &["1/2", "5/6"]])
        );
        assert_eq!(
            from_starting_points(&seq(3, &["7/78", "10/91"]), 3).unwrap(),
            major(3, &[&["10/91", "121/273"], &["7/78", "59/78"]])
        );
        assert!(StartSequence::new(vec![a("10/91"), a("7/78")], 3).is_err());
        assert!(StartSequence::new(vec![a("1/10"), a("2/3")], 3).is_err());
    }

    #[test]
    fn shared_endpoints_become_a_polygon() {
        // (0, 1/3) and (1/3, 2/3) would share 1/3
        let m = from_starting_points(&seq(3, &["0", "1/3"]), 3);
        let m = m.unwrap();
        assert_eq!(m, major(3, &[&["0", "1/3", "2/3"]]));
    }

    #[test]
    fn normalize_examples() {
        let s = normalize_starts(&[a("1/2"), a("3/5")], 3).unwrap();
        assert_eq!(s.starts(), &[a("1/6"), a("3/5")]);
        let s = normalize_starts(&[a("1/10"), a("1/2")], 3).unwrap();
        assert_eq!(s.starts(), &[a("1/10"), a("1/2")]);
        let (s, it) = normalize_starts_counted(&[a("3/4"), a("7/8"), a("11/12")], 4).unwrap();
        assert_eq!(s.starts(), &[a("0"), a("3/8"), a("2/3")]);
        assert_eq!(it, 3);
        assert!(matches!(normalize_starts(&[a("1/3"), a("1/3")], 3), Err(Error::DegenerateInput(_))));
        assert_eq!(normalize_starts(&[a("1/3"), a("2/3")], 3).unwrap().starts(), &[a("0"), a("1/3")]);
    }

    #[test]
    fn starting_points_examples() {
        assert_eq!(starting_points(&major(2, &[&["1/10", "3/5"]])).unwrap(), seq(2, &["1/10"]));
        let example = major(3, &[&["10/91", "121/273"], &["7/78", "59/78"]]);
        assert_eq!(starting_points(&example).unwrap(), seq(3, &["7/78", "10/91"]));
        assert!(matches!(
            starting_points(&major(3, &[&["0", "1/3", "2/3"]])),
            Err(Error::UnsupportedShape(_))
        ));
    }

    #[test]
    fn derive_examples() {
        let example = major(3, &[&["10/91", "121/273"], &["7/78", "59/78"]]);
        assert_eq!(derive(&example).unwrap(), major(2, &[&["7/52", "33/52"]]));
        let m = major(3, &[&["1/10", "13/30"], &["1/2", "5/6"]]);
        assert_eq!(derive(&m).unwrap(), major(2, &[&["3/20", "13/20"]]));
        assert!(matches!(derive(&major(2, &[&["1/10", "3/5"]])), Err(Error::CannotDerive(_))));
        assert!(matches!(derive(&major(3, &[&["0", "1/3", "2/3"]])), Err(Error::UnsupportedShape(_))));
    }

    #[test]
    fn bisector_chart() {
        let half = ratio::<BigInt>(1, 6);
        let m = cubic_from_bisector(&half, &a("0")).unwrap();
        assert_eq!(m, major(3, &[&["1/12", "5/12"], &["7/12", "11/12"]]));
        let r = cubic_from_bisector(&half, &a("1/4")).unwrap();
        assert_eq!(r, m.rotate(&ratio(1, 4)));
        for (an, ad, t) in [(1, 12, "0"), (1, 5, "2/7"), (3, 10, "9/11")] {
            let x = ratio::<BigInt>(an, ad);
            let y = ratio::<BigInt>(1, 3) - &x;
            let m1 = cubic_from_bisector(&x, &a(t)).unwrap();
            let m2 = cubic_from_bisector(&y, &a(t).add(&ratio(1, 2))).unwrap();
            assert_eq!(m1, m2);
        }
        assert!(matches!(cubic_from_bisector(&ratio::<BigInt>(1, 3), &a("0")), Err(Error::Domain(_))));
        assert!(matches!(cubic_from_bisector(&ratio::<BigInt>(0, 1), &a("0")), Err(Error::Domain(_))));
    }

    #[test]
    fn random_majors() {
        let m: M = random_generic_major(2, 42);
        assert!(validate(&m).is_empty());
        let m: M = random_generic_major(5, 7);
        assert!(validate(&m).is_empty());
        assert_eq!(m.classes.len(), 4);
        assert_eq!(m, random_generic_major(5, 7));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip_and_derive_chain(d in 2u32..7, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_start_sequence::<BigInt, _>(d, &mut rng);
            let m = from_starting_points(&s, d).unwrap();
            prop_assert_eq!(validate(&m), Vec::<Violation<BigInt>>::new());
            if m.is_generic() {
                prop_assert_eq!(starting_points(&m).unwrap(), s);
                let mut cur = m;
                while cur.degree > 2 {
                    let next = derive(&cur).unwrap();
                    prop_assert_eq!(next.degree, cur.degree - 1);
                    cur = next;
                }
                prop_assert_eq!(cur.classes.len(), 1);
            }
        }

        #[test]
        fn normalization_bound(d in 2u32..7, xs in prop::collection::vec((0i64..97, 1i64..97), 6)) {
            let xs: Vec<Angle<i64>> = xs[..(d - 1) as usize]
                .iter()
                .map(|&(p, q)| Angle::new(p % q, q).unwrap())
                .collect();
            let bound: i64 = xs
                .iter()
                .map(|x| (x.value() * ratio::<i64>(d as i64, 1)).ceil().to_integer())
                .sum();
            if let Ok((s, it)) = normalize_starts_counted(&xs, d) {
                prop_assert!(it as i64 <= bound);
                prop_assert_eq!(normalize_starts(s.starts(), d).unwrap(), s);
            }
        }
    }
}
