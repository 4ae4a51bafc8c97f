//! Primitive majors of degree d.

mod metric;
mod params;

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::angle::{format_ratio, int, tuple_map, Angle};
use crate::error::{Error, Result};
use crate::lamination::{complementary_regions, hull_edges, Leaf};
use crate::scalar::ExactInt;

pub use metric::{distance, met_eval, quotient_graph, MetricDistance, QuotientEdge, QuotientGraph};
pub use params::{
    cubic_from_bisector, derive, from_starting_points, normalize_starts, normalize_starts_counted,
    random_generic_major, random_start_sequence, starting_points, StartSequence,
};

/// Vertices of one critical leaf or polygon, sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent, bound = "")]
pub struct EquivalenceClass<I: ExactInt> {
    pub angles: Vec<Angle<I>>,
}

impl<I: ExactInt> EquivalenceClass<I> {
    pub fn new(mut angles: Vec<Angle<I>>) -> Self {
        angles.sort();
        EquivalenceClass { angles }
    }

    pub fn criticality(&self) -> usize {
        self.angles.len().saturating_sub(1)
    }

    pub fn leaves(&self) -> Vec<Leaf<I>> {
        let mut v = self.angles.clone();
        v.dedup();
        hull_edges(&v)
    }
}

impl<I: ExactInt> fmt::Debug for EquivalenceClass<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.angles).finish()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PrimitiveMajor<I: ExactInt> {
    pub degree: u32,
    pub classes: Vec<EquivalenceClass<I>>,
}

impl<I: ExactInt> PrimitiveMajor<I> {
    /// Canonicalizes (sorted classes, sorted by least angle) without validating.
    pub fn new(degree: u32, classes: Vec<Vec<Angle<I>>>) -> Self {
        let mut classes: Vec<EquivalenceClass<I>> = classes.into_iter().map(EquivalenceClass::new).collect();
        classes.sort();
        PrimitiveMajor { degree, classes }
    }

    /// Canonicalize and require `validate` to pass.
    pub fn checked(degree: u32, classes: Vec<Vec<Angle<I>>>) -> Result<Self> {
        let m = Self::new(degree, classes);
        let v = validate(&m);
        if v.is_empty() {
            Ok(m)
        } else {
            let msg: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            Err(Error::Precondition(msg.join("; ")))
        }
    }

    pub fn parse(degree: u32, classes: &[&[&str]]) -> Result<Self> {
        let classes = classes
            .iter()
            .map(|c| c.iter().map(|s| s.parse()).collect::<Result<Vec<Angle<I>>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(degree, classes))
    }

    pub fn is_generic(&self) -> bool {
        self.classes.iter().all(|c| c.angles.len() == 2)
    }

    /// Boundary chords of all classes.
    pub fn leaves(&self) -> Vec<Leaf<I>> {
        let mut v: Vec<Leaf<I>> = self.classes.iter().flat_map(|c| c.leaves()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn angles(&self) -> BTreeSet<Angle<I>> {
        self.classes.iter().flat_map(|c| c.angles.iter().cloned()).collect()
    }

    pub fn rotate(&self, r: &Ratio<I>) -> Self {
        Self::new(
            self.degree,
            self.classes.iter().map(|c| c.angles.iter().map(|a| a.add(r)).collect()).collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation<I: ExactInt> {
    DegreeTooSmall(u32),
    ClassTooSmall(EquivalenceClass<I>),
    DuplicateAngle(Angle<I>),
    NotCollapsing { class: EquivalenceClass<I>, images: Vec<Angle<I>> },
    Linked(EquivalenceClass<I>, EquivalenceClass<I>),
    Criticality { found: usize, expected: usize },
    RegionMeasure { region: Vec<Angle<I>>, measure: Ratio<I> },
}

impl<I: ExactInt> fmt::Display for Violation<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegreeTooSmall(d) => write!(f, "degree {d} is below 2"),
            Violation::ClassTooSmall(c) => write!(f, "class {c:?} has fewer than 2 angles"),
            Violation::DuplicateAngle(a) => write!(f, "angle {a} appears more than once"),
            Violation::NotCollapsing { class, images } => {
                write!(f, "class {class:?} does not collapse: images {images:?}")
            }
            Violation::Linked(a, b) => write!(f, "classes {a:?} and {b:?} are linked"),
            Violation::Criticality { found, expected } => {
                write!(f, "total criticality {found}, expected {expected}")
            }
            Violation::RegionMeasure { region, measure } => write!(
                f,
                "region with boundary points {region:?} has measure {}",
                format_ratio(measure)
            ),
        }
    }
}

/// Index of the gap of sorted `verts` containing x (x not a vertex).
fn gap_index<I: ExactInt>(verts: &[Angle<I>], x: &Angle<I>) -> usize {
    match verts.binary_search(x) {
        Ok(i) | Err(i) => i % verts.len(),
    }
}

fn linked<I: ExactInt>(a: &EquivalenceClass<I>, b: &EquivalenceClass<I>) -> bool {
    if a.angles.iter().any(|x| b.angles.binary_search(x).is_ok()) {
        return true;
    }
    let g = gap_index(&a.angles, &b.angles[0]);
    b.angles.iter().any(|x| gap_index(&a.angles, x) != g)
}

/// Every violated major invariant; empty means valid.
pub fn validate<I: ExactInt>(m: &PrimitiveMajor<I>) -> Vec<Violation<I>> {
    let mut out = Vec::new();
    let d = m.degree;
    if d < 2 {
        out.push(Violation::DegreeTooSmall(d));
        return out;
    }
    let mut seen = BTreeSet::new();
    for c in &m.classes {
        if c.angles.len() < 2 {
            out.push(Violation::ClassTooSmall(c.clone()));
        }
        for a in &c.angles {
            if !seen.insert(a.clone()) {
                out.push(Violation::DuplicateAngle(a.clone()));
            }
        }
        let images: BTreeSet<Angle<I>> = c.angles.iter().map(|a| tuple_map(a, d)).collect();
        if images.len() > 1 {
            out.push(Violation::NotCollapsing { class: c.clone(), images: images.into_iter().collect() });
        }
    }
    let mut any_linked = false;
    for (i, a) in m.classes.iter().enumerate() {
        for b in &m.classes[i + 1..] {
            if a.angles.len() >= 2 && b.angles.len() >= 2 && linked(a, b) {
                any_linked = true;
                out.push(Violation::Linked(a.clone(), b.clone()));
            }
        }
    }
    let crit: usize = m.classes.iter().map(|c| c.criticality()).sum();
    if crit != (d - 1) as usize {
        out.push(Violation::Criticality { found: crit, expected: (d - 1) as usize });
    }
    if !any_linked && out.iter().all(|v| !matches!(v, Violation::DuplicateAngle(_))) {
        let leaves: BTreeSet<Leaf<I>> = m.leaves().into_iter().collect();
        if let Ok(regions) = complementary_regions(&leaves) {
            let target = Ratio::new(I::one(), I::from_i64_exact(d as i64));
            for arcs in regions.iter().filter(|r| !r.is_empty()) {
                let measure = arcs.iter().fold(int::<I>(0), |acc, a| acc + &a.len);
                if measure != target {
                    let region = arcs.iter().map(|a| a.start.clone()).collect();
                    out.push(Violation::RegionMeasure { region, measure });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MajorDoc<I: ExactInt> {
    pub degree: u32,
    pub classes: Vec<Vec<Angle<I>>>,
}

impl<I: ExactInt> From<&PrimitiveMajor<I>> for MajorDoc<I> {
    fn from(m: &PrimitiveMajor<I>) -> Self {
        MajorDoc { degree: m.degree, classes: m.classes.iter().map(|c| c.angles.clone()).collect() }
    }
}

impl<I: ExactInt> From<MajorDoc<I>> for PrimitiveMajor<I> {
    fn from(doc: MajorDoc<I>) -> Self {
        PrimitiveMajor::new(doc.degree, doc.classes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type M = PrimitiveMajor<BigInt>;

    fn major(d: u32, classes: &[&[&str]]) -> M {
        M::parse(d, classes).unwrap()
    }

    #[test]
    fn valid_examples() {
        assert!(validate(&major(3, &[&["10/91", "121/273"], &["7/78", "59/78"]])).is_empty());
        assert!(validate(&major(2, &[&["0", "1/2"]])).is_empty());
        assert!(validate(&major(3, &[&["0", "1/3", "2/3"]])).is_empty());
        assert!(validate(&major(4, &[&["0", "1/4"], &["1/3", "7/12"], &["2/3", "11/12"]])).is_empty());
    }

    #[test]
    fn crossing_chords_are_linked() {
        let v = validate(&major(3, &[&["0", "1/3"], &["1/6", "1/2"]]));
        assert!(v.iter().any(|x| matches!(x, Violation::Linked(..))), "{v:?}");
    }

    #[test]
    fn other_violations() {
        let v = validate(&major(2, &[&["0", "1/3"]]));
        assert!(v.iter().any(|x| matches!(x, Violation::NotCollapsing { .. })));
        let v = validate(&major(3, &[&["0", "1/3"]]));
        assert!(v.iter().any(|x| matches!(x, Violation::Criticality { found: 1, expected: 2 })));
        let v = validate(&major(3, &[&["0", "1/3"], &["0", "2/3"]]));
        assert!(v.iter().any(|x| matches!(x, Violation::DuplicateAngle(_))));
        // a lone cubic critical leaf leaves a region of measure 2/3
        let v = validate(&major(3, &[&["0", "1/3"]]));
        assert!(v.iter().any(|x| matches!(x, Violation::RegionMeasure { .. })), "{v:?}");
        assert!(validate(&major(3, &[&["0", "1/3"], &["1/2", "5/6"]])).is_empty());
        assert_eq!(validate(&major(1, &[])), vec![Violation::DegreeTooSmall(1)]);
    }

    #[test]
    fn canonical_json() {
        let m = major(3, &[&["121/273", "10/91"], &["59/78", "7/78"]]);
        let s = serde_json::to_string(&MajorDoc::from(&m)).unwrap();
        assert_eq!(s, r#"{"degree":3,"classes":[["7/78","59/78"],["10/91","121/273"]]}"#);
        let back: MajorDoc<BigInt> = serde_json::from_str(&s).unwrap();
        assert_eq!(M::from(back), m);
    }
}
