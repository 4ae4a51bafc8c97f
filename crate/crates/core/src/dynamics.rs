//! Finite-depth structures for the quadratic torus map F(x, y) = (2x, 2y):
//! the non-escaping refinements Ω_n and the separating leaves S_θ.

use std::collections::BTreeSet;

use num_rational::Ratio;

use serde::Serialize;

use crate::angle::{cyclic_between, preferred_half_preimage, ratio, tuple_map, Angle};
use crate::error::{Error, Result};
use crate::lamination::{backward_lift_with, Leaf, LiftVariant, DEFAULT_DEPTH_CAP};
use crate::major::PrimitiveMajor;
use crate::scalar::{ExactInt, Real};
use crate::torus::{CircleArc, RectangleSet, TorusRect};

pub const DEFAULT_OMEGA_CAP: usize = 16;

/// {2^n θ : n ≥ −1} in orbit order, starting from the preferred half preimage.
pub fn post_major<I: ExactInt>(theta: &Angle<I>) -> Result<Vec<Angle<I>>> {
    if theta.is_zero() {
        return Err(Error::Domain("post-major set is undefined at θ = 0".into()));
    }
    let half = preferred_half_preimage(theta)?;
    let mut out = vec![half];
    let mut x = theta.clone();
    while !out.contains(&x) {
        out.push(x.clone());
        x = tuple_map(&x, 2);
    }
    Ok(out)
}

/// The major leaf {θ/2, (θ+1)/2}.
pub fn theta_major<I: ExactInt>(theta: &Angle<I>) -> Result<PrimitiveMajor<I>> {
    let c1 = Angle::from_ratio(theta.value() / crate::angle::int::<I>(2));
    let c2 = c1.add(&ratio(1, 2));
    Ok(PrimitiveMajor::new(2, vec![vec![c1, c2]]))
}

#[derive(Clone, Debug)]
pub struct OmegaLevel<I: ExactInt> {
    pub theta: Angle<I>,
    pub level: usize,
    pub cells: RectangleSet<I>,
}

impl<I: ExactInt> OmegaLevel<I> {
    /// Cells at circle distance ≥ gap from the diagonal.
    pub fn separated_count(&self, gap: &Ratio<I>) -> usize {
        self.cells.rects.iter().filter(|r| &r.diagonal_gap() >= gap).count()
    }
}

/// Ω_0: the two closed squares over the half circles cut at θ/2 and (θ+1)/2.
pub fn omega_zero<I: ExactInt>(theta: &Angle<I>) -> Result<RectangleSet<I>> {
    let m = theta_major(theta)?;
    let ends: Vec<Angle<I>> = m.angles().into_iter().collect();
    let (a, b) = (CircleArc::between(&ends[0], &ends[1]), CircleArc::between(&ends[1], &ends[0]));
    Ok(RectangleSet::new(vec![TorusRect { x: a.clone(), y: a }, TorusRect { x: b.clone(), y: b }]))
}

/// Ω_0, …, Ω_n with Ω_{i+1} = F^{-1}(Ω_i) ∩ Ω_0.
pub fn omega_levels<I: ExactInt>(theta: &Angle<I>, n: usize, cap: usize) -> Result<Vec<OmegaLevel<I>>> {
    if n > cap {
        return Err(Error::ResourceLimit { cap, requested: n });
    }
    let base = omega_zero(theta)?;
    let mut levels = vec![OmegaLevel { theta: theta.clone(), level: 0, cells: base.clone() }];
    for level in 1..=n {
        let cells = levels[level - 1].cells.preimage(2).intersect(&base).sorted();
        levels.push(OmegaLevel { theta: theta.clone(), level, cells });
    }
    Ok(levels)
}

pub fn omega_level<I: ExactInt>(theta: &Angle<I>, n: usize) -> Result<OmegaLevel<I>> {
    Ok(omega_levels(theta, n, DEFAULT_OMEGA_CAP)?.pop().unwrap())
}

/// Cells of Ω_n are squares of side 2^-(n+1); about 2^n of them cover the
/// diagonal whatever θ is. Only cells this far from it are counted.
pub fn growth_gap<I: ExactInt>() -> Ratio<I> {
    ratio(1, 8)
}

/// Least-squares slope of log(count of Ω_n cells away from the diagonal)
/// over 2 ≤ n ≤ n_max. It estimates the entropy carried by NE \ Δ.
pub fn growth_rate_estimate<I: ExactInt, R: Real>(theta: &Angle<I>, n_max: usize) -> Result<R> {
    if n_max < 4 {
        return Err(Error::Domain(format!("n_max {n_max} < 4")));
    }
    let levels = omega_levels(theta, n_max, n_max.max(DEFAULT_OMEGA_CAP))?;
    let gap = growth_gap::<I>();
    let pts: Vec<(R, R)> = levels[2..]
        .iter()
        .map(|l| (R::from_usize(l.level).unwrap(), R::from_usize(l.separated_count(&gap).max(1)).unwrap().ln()))
        .collect();
    Ok(slope(&pts))
}

fn slope<R: Real>(pts: &[(R, R)]) -> R {
    let n = R::from_usize(pts.len()).unwrap();
    let mx = pts.iter().fold(R::zero(), |s, p| s + p.0) / n;
    let my = pts.iter().fold(R::zero(), |s, p| s + p.1) / n;
    let sxy = pts.iter().fold(R::zero(), |s, p| s + (p.0 - mx) * (p.1 - my));
    let sxx = pts.iter().fold(R::zero(), |s, p| s + (p.0 - mx) * (p.0 - mx));
    sxy / sxx
}

/// Whether both components of the circle minus {x, y} contain points of P,
/// or x or y is itself in P.
pub fn separates_or_intersects<I: ExactInt>(leaf: &Leaf<I>, post: &[Angle<I>]) -> bool {
    if post.iter().any(|p| leaf.has_endpoint(p)) {
        return true;
    }
    let inside = post.iter().filter(|p| cyclic_between(leaf.a(), p, leaf.b())).count();
    inside > 0 && inside < post.len()
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "")]
pub struct SeparatingSet<I: ExactInt> {
    pub theta: Angle<I>,
    pub depth: usize,
    pub post_major: Vec<Angle<I>>,
    pub leaves: BTreeSet<Leaf<I>>,
}

pub fn separating_leaves_with<I: ExactInt>(
    theta: &Angle<I>,
    depth: usize,
    variant: LiftVariant,
    cap: usize,
) -> Result<SeparatingSet<I>> {
    let post = post_major(theta)?;
    let lift = backward_lift_with(&theta_major(theta)?, depth, variant, cap)?;
    let leaves = lift.lamination().leaves.into_iter().filter(|l| separates_or_intersects(l, &post)).collect();
    Ok(SeparatingSet { theta: theta.clone(), depth, post_major: post, leaves })
}

pub fn separating_leaves<I: ExactInt>(theta: &Angle<I>, depth: usize) -> Result<SeparatingSet<I>> {
    separating_leaves_with(theta, depth, LiftVariant::Literal, DEFAULT_DEPTH_CAP)
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "")]
pub struct SInvarianceReport<I: ExactInt> {
    pub theta: Angle<I>,
    pub depth: usize,
    pub checked: usize,
    /// (leaf, image) pairs whose image is neither in S at depth − 1 nor spanned by P.
    pub violations: Vec<(Leaf<I>, Leaf<I>)>,
}

impl<I: ExactInt> SInvarianceReport<I> {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_forward_invariance_s<I: ExactInt>(theta: &Angle<I>, depth: usize) -> Result<SInvarianceReport<I>> {
    if depth == 0 {
        return Err(Error::Precondition("forward invariance needs depth ≥ 1".into()));
    }
    let s = separating_leaves(theta, depth)?;
    let prev = separating_leaves(theta, depth - 1)?;
    let mut checked = 0;
    let mut violations = Vec::new();
    for l in &s.leaves {
        let Some(img) = l.image(2) else { continue };
        checked += 1;
        let in_post = s.post_major.contains(img.a()) && s.post_major.contains(img.b());
        if !in_post && !prev.leaves.contains(&img) {
            violations.push((l.clone(), img));
        }
    }
    Ok(SInvarianceReport { theta: theta.clone(), depth, checked, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn a(s: &str) -> Angle<BigInt> {
        s.parse().unwrap()
    }

    fn leaf(x: &str, y: &str) -> Leaf<BigInt> {
        Leaf::new(a(x), a(y)).unwrap()
    }

    #[test]
    fn post_major_examples() {
        assert_eq!(post_major(&a("1/5")).unwrap(), [a("3/5"), a("1/5"), a("2/5"), a("4/5")]);
        assert_eq!(post_major(&a("1/2")).unwrap(), [a("1/4"), a("1/2"), a("0")]);
        assert_eq!(post_major(&a("1/7")).unwrap(), [a("4/7"), a("1/7"), a("2/7")]);
        assert!(post_major(&a("0")).is_err());
    }

    #[test]
    fn omega_zero_area_and_monotone() {
        for t in ["1/5", "1/2", "3/7"] {
            let levels = omega_levels(&a(t), 5, DEFAULT_OMEGA_CAP).unwrap();
            assert_eq!(levels[0].cells.len(), 2);
            assert_eq!(levels[0].cells.area(), crate::angle::ratio(1, 2));
            for w in levels.windows(2) {
                let (big, small) = (&w[0].cells, &w[1].cells);
                assert_eq!(small.overlap_area(big), small.area(), "{t} level {}", w[1].level);
            }
        }
        assert!(matches!(omega_levels(&a("1/5"), 40, 16), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn growth_tracks_entropy() {
        for (t, tol) in [("1/2", 0.02), ("1/5", 0.02), ("1/6", 0.02)] {
            let th: Angle<i64> = t.parse().unwrap();
            let g: f64 = growth_rate_estimate(&th, 10).unwrap();
            let h: f64 = crate::entropy::core_entropy(&th).unwrap();
            assert!((g - h).abs() < tol * h, "{t}: {g} vs {h}");
        }
        let g: f64 = growth_rate_estimate(&"1/7".parse::<Angle<i64>>().unwrap(), 10).unwrap();
        assert!(g.abs() < 0.1);
    }

    #[test]
    fn separating_examples() {
        let s = separating_leaves(&a("1/5"), 0).unwrap();
        assert!(s.leaves.contains(&leaf("1/10", "3/5")));
        let s = separating_leaves(&a("1/2"), 1).unwrap();
        let lift = backward_lift_with(&theta_major(&a("1/2")).unwrap(), 1, LiftVariant::Literal, 12).unwrap();
        for l in &s.leaves {
            assert!(lift.lamination().leaves.contains(l));
        }
        // the major is {1/4, 3/4}; with P = {1/4, 1/2, 0} both depth-1 leaves separate
        let want: BTreeSet<_> = [leaf("1/4", "3/4"), leaf("1/8", "7/8"), leaf("3/8", "5/8")].into();
        assert_eq!(s.leaves, want);
        // monotone in depth
        let deeper = separating_leaves(&a("1/2"), 3).unwrap();
        assert!(s.leaves.is_subset(&deeper.leaves));
    }

    #[test]
    fn separation_predicate() {
        let p = [a("1/5"), a("2/5"), a("4/5")];
        assert!(separates_or_intersects(&leaf("3/10", "1/2"), &p));
        assert!(!separates_or_intersects(&leaf("1/2", "3/5"), &p));
        assert!(separates_or_intersects(&leaf("1/2", "4/5"), &p));
    }

    #[test]
    fn forward_invariance_examples() {
        for t in ["1/5", "1/2", "3/7"] {
            let r = check_forward_invariance_s(&a(t), 6).unwrap();
            assert!(r.is_ok(), "{t}: {:?}", r.violations);
            assert!(r.checked > 0);
        }
    }
}
