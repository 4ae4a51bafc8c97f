//! Finite laminations: leaves, compatibility, torus good regions, backward
//! lifts, forward invariance and Lam∘Rel cleaning.

mod lift;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::angle::{tuple_map, Angle};
use crate::error::{Error, Result};
use crate::scalar::ExactInt;
use crate::torus::{CircleArc, RectangleSet, TorusRect};

pub use lift::{backward_lift, backward_lift_with, BackwardLift, LiftVariant, DEFAULT_DEPTH_CAP};

/// Unordered pair of distinct circle points, stored with a < b.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leaf<I: ExactInt> {
    a: Angle<I>,
    b: Angle<I>,
}

impl<I: ExactInt> Leaf<I> {
    pub fn new(x: Angle<I>, y: Angle<I>) -> Result<Self> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Ok(Leaf { a: x, b: y }),
            std::cmp::Ordering::Greater => Ok(Leaf { a: y, b: x }),
            std::cmp::Ordering::Equal => Err(Error::Domain(format!("leaf endpoints coincide at {x}"))),
        }
    }

    pub fn a(&self) -> &Angle<I> {
        &self.a
    }

    pub fn b(&self) -> &Angle<I> {
        &self.b
    }

    pub fn has_endpoint(&self, x: &Angle<I>) -> bool {
        &self.a == x || &self.b == x
    }

    /// Image under the d-tupling map, or None if the leaf collapses.
    pub fn image(&self, d: u32) -> Option<Self> {
        Leaf::new(tuple_map(&self.a, d), tuple_map(&self.b, d)).ok()
    }

    /// Length of the arc (a, b) that does not pass through 0.
    pub fn inner_length(&self) -> Ratio<I> {
        self.b.value() - self.a.value()
    }
}

impl<I: ExactInt> Serialize for Leaf<I> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [&self.a, &self.b].serialize(s)
    }
}

impl<I: ExactInt> fmt::Debug for Leaf<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.a, self.b)
    }
}

/// Generic crossing test on any linearly ordered model of the cut circle.
pub(crate) fn cross_ordered<P: Ord>(a: &P, b: &P, c: &P, d: &P) -> bool {
    let inside = |x: &P| a < x && x < b;
    let outside = |x: &P| x < a || x > b;
    (inside(c) && outside(d)) || (outside(c) && inside(d))
}

/// True iff the endpoints strictly interleave; shared endpoints never cross.
pub fn leaves_cross<I: ExactInt>(l1: &Leaf<I>, l2: &Leaf<I>) -> bool {
    cross_ordered(&l1.a, &l1.b, &l2.a, &l2.b)
}

/// Some crossing pair, found by a stack sweep in O(n log n).
pub fn find_crossing<'a, I: ExactInt>(leaves: impl IntoIterator<Item = &'a Leaf<I>>) -> Option<(Leaf<I>, Leaf<I>)> {
    let mut sorted: Vec<&Leaf<I>> = leaves.into_iter().collect();
    sorted.sort_by(|l, m| l.a.cmp(&m.a).then_with(|| m.b.cmp(&l.b)));
    let mut stack: Vec<&Leaf<I>> = Vec::new();
    for l in sorted {
        while stack.last().is_some_and(|t| t.b <= l.a) {
            stack.pop();
        }
        if let Some(t) = stack.last() {
            if l.b > t.b {
                return Some(((*t).clone(), l.clone()));
            }
        }
        stack.push(l);
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLamination<I: ExactInt> {
    pub degree: u32,
    pub leaves: BTreeSet<Leaf<I>>,
}

impl<I: ExactInt> FiniteLamination<I> {
    pub fn new(degree: u32, leaves: impl IntoIterator<Item = Leaf<I>>) -> Self {
        FiniteLamination { degree, leaves: leaves.into_iter().collect() }
    }

    /// Like `new` but rejects crossing leaves.
    pub fn checked(degree: u32, leaves: impl IntoIterator<Item = Leaf<I>>) -> Result<Self> {
        let lam = Self::new(degree, leaves);
        if let Some((l, m)) = lam.first_crossing() {
            return Err(Error::Precondition(format!("leaves {l:?} and {m:?} cross")));
        }
        Ok(lam)
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn first_crossing(&self) -> Option<(Leaf<I>, Leaf<I>)> {
        find_crossing(&self.leaves)
    }

    pub fn is_compatible(&self) -> bool {
        self.first_crossing().is_none()
    }

    pub fn endpoints(&self) -> BTreeSet<Angle<I>> {
        self.leaves.iter().flat_map(|l| [l.a.clone(), l.b.clone()]).collect()
    }
}

/// Boundary arcs of each complementary region of a non-crossing leaf set.
///
/// Region 0 is the one containing the arc through 0; the others are keyed by
/// the innermost leaf enclosing them. Regions bounded only by chords (the
/// interior of an ideal polygon) come back with no arcs.
pub fn complementary_regions<I: ExactInt>(leaves: &BTreeSet<Leaf<I>>) -> Result<Vec<Vec<CircleArc<I>>>> {
    if let Some((l, m)) = find_crossing(leaves) {
        return Err(Error::Precondition(format!("leaves {l:?} and {m:?} cross")));
    }
    if leaves.is_empty() {
        return Ok(vec![vec![CircleArc::full()]]);
    }
    let pts: Vec<Angle<I>> = leaves
        .iter()
        .flat_map(|l| [l.a.clone(), l.b.clone()])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut sorted: Vec<&Leaf<I>> = leaves.iter().collect();
    sorted.sort_by(|l, m| l.a.cmp(&m.a).then_with(|| m.b.cmp(&l.b)));
    let index: HashMap<&Leaf<I>, usize> = sorted.iter().enumerate().map(|(i, l)| (*l, i + 1)).collect();

    let mut regions = vec![Vec::new(); sorted.len() + 1];
    let mut stack: Vec<&Leaf<I>> = Vec::new();
    let mut next = 0;
    for k in 0..pts.len() {
        let e = &pts[k];
        while stack.last().is_some_and(|t| &t.b <= e) {
            stack.pop();
        }
        while next < sorted.len() && &sorted[next].a == e {
            stack.push(sorted[next]);
            next += 1;
        }
        let arc = if k + 1 < pts.len() {
            CircleArc { start: e.clone(), len: pts[k + 1].value() - e.value() }
        } else {
            CircleArc { start: e.clone(), len: Ratio::one() - e.value() + pts[0].value() }
        };
        let region = stack.last().map_or(0, |t| index[t]);
        regions[region].push(arc);
    }
    Ok(regions)
}

/// Rectangles J × J' over all pairs of boundary arcs of a common region:
/// exactly the leaves compatible with every leaf of λ.
pub fn good_region<I: ExactInt>(lam: &FiniteLamination<I>) -> Result<RectangleSet<I>> {
    let regions = complementary_regions(&lam.leaves)?;
    let mut rects = Vec::new();
    for arcs in &regions {
        for x in arcs {
            for y in arcs {
                rects.push(TorusRect { x: x.clone(), y: y.clone() });
            }
        }
    }
    Ok(RectangleSet::new(rects))
}

/// Complement of the good region, as rectangles.
pub fn excluded_region<I: ExactInt>(lam: &FiniteLamination<I>) -> Result<RectangleSet<I>> {
    let regions = complementary_regions(&lam.leaves)?;
    let mut rects = Vec::new();
    for (i, ri) in regions.iter().enumerate() {
        for (j, rj) in regions.iter().enumerate() {
            if i == j {
                continue;
            }
            for x in ri {
                for y in rj {
                    rects.push(TorusRect { x: x.clone(), y: y.clone() });
                }
            }
        }
    }
    Ok(RectangleSet::new(rects))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct InvarianceReport<I: ExactInt> {
    /// Leaves whose image is a leaf missing from the lamination.
    pub missing_images: Vec<(Leaf<I>, Leaf<I>)>,
}

impl<I: ExactInt> InvarianceReport<I> {
    pub fn is_ok(&self) -> bool {
        self.missing_images.is_empty()
    }
}

pub fn check_forward_invariant<I: ExactInt>(lam: &FiniteLamination<I>, d: u32) -> InvarianceReport<I> {
    let missing_images = lam
        .leaves
        .iter()
        .filter_map(|l| l.image(d).filter(|im| !lam.leaves.contains(im)).map(|im| (l.clone(), im)))
        .collect();
    InvarianceReport { missing_images }
}

/// Lam∘Rel: group leaves into classes of endpoints connected through shared
/// endpoints, then keep the boundary edges of each class's convex hull.
pub fn clean<I: ExactInt>(lam: &FiniteLamination<I>) -> Result<FiniteLamination<I>> {
    let pts: Vec<Angle<I>> = lam.endpoints().into_iter().collect();
    let idx: HashMap<&Angle<I>, usize> = pts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut parent: Vec<usize> = (0..pts.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for l in &lam.leaves {
        let (x, y) = (find(&mut parent, idx[&l.a]), find(&mut parent, idx[&l.b]));
        parent[x.max(y)] = x.min(y);
    }
    let mut classes: Vec<Vec<Angle<I>>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..pts.len() {
        let r = find(&mut parent, i);
        let s = *slot.entry(r).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[s].push(pts[i].clone());
    }
    let mut leaves = BTreeSet::new();
    for class in &classes {
        leaves.extend(hull_edges(class));
    }
    let out = FiniteLamination { degree: lam.degree, leaves };
    if let Some((l, m)) = out.first_crossing() {
        return Err(Error::Internal(format!("cleaned classes are linked: {l:?} crosses {m:?}")));
    }
    Ok(out)
}

/// Boundary edges of the ideal polygon on sorted vertices.
pub(crate) fn hull_edges<I: ExactInt>(sorted: &[Angle<I>]) -> Vec<Leaf<I>> {
    match sorted.len() {
        0 | 1 => Vec::new(),
        2 => vec![Leaf { a: sorted[0].clone(), b: sorted[1].clone() }],
        n => {
            let mut out: Vec<Leaf<I>> =
                sorted.windows(2).map(|w| Leaf { a: w[0].clone(), b: w[1].clone() }).collect();
            out.push(Leaf { a: sorted[0].clone(), b: sorted[n - 1].clone() });
            out
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LaminationDoc<I: ExactInt> {
    pub degree: u32,
    pub leaves: Vec<[Angle<I>; 2]>,
}

impl<I: ExactInt> From<&FiniteLamination<I>> for LaminationDoc<I> {
    fn from(l: &FiniteLamination<I>) -> Self {
        LaminationDoc {
            degree: l.degree,
            leaves: l.leaves.iter().map(|x| [x.a.clone(), x.b.clone()]).collect(),
        }
    }
}

impl<I: ExactInt> TryFrom<LaminationDoc<I>> for FiniteLamination<I> {
    type Error = Error;

    fn try_from(doc: LaminationDoc<I>) -> Result<Self> {
        let leaves = doc
            .leaves
            .into_iter()
            .map(|[x, y]| Leaf::new(x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteLamination::new(doc.degree, leaves))
    }
}

/// Sum of squared region lengths: the area of the good region without
/// materializing rectangles.
pub fn good_region_area<I: ExactInt>(lam: &FiniteLamination<I>) -> Result<Ratio<I>> {
    let regions = complementary_regions(&lam.leaves)?;
    Ok(regions.iter().fold(Ratio::zero(), |acc, arcs| {
        let s = arcs.iter().fold(Ratio::zero(), |a, arc| a + &arc.len);
        acc + &s * &s
    }))
}
