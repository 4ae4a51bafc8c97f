//! The quotient graph γ(m), its path metric met(m) and the distance md.

use num_bigint::BigInt;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::{validate, EquivalenceClass, PrimitiveMajor};
use crate::angle::{format_ratio, Angle};
use crate::error::{Error, Result};
use crate::scalar::ExactInt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct QuotientEdge<I: ExactInt> {
    pub from: usize,
    pub to: usize,
    /// Circle arc this edge comes from.
    pub start: Angle<I>,
    #[serde(serialize_with = "ser_ratio")]
    pub length: Ratio<I>,
}

fn ser_ratio<I: ExactInt, S: serde::Serializer>(r: &Ratio<I>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_ratio(r))
}

/// Classes collapsed to vertices; the arcs between consecutive class points
/// become edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct QuotientGraph<I: ExactInt> {
    pub vertices: Vec<EquivalenceClass<I>>,
    pub edges: Vec<QuotientEdge<I>>,
}

impl<I: ExactInt> QuotientGraph<I> {
    pub fn betti_number(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn total_length(&self) -> Ratio<I> {
        self.edges.iter().fold(Ratio::from_integer(I::zero()), |acc, e| acc + &e.length)
    }
}

fn require_valid<I: ExactInt>(m: &PrimitiveMajor<I>) -> Result<()> {
    let v = validate(m);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("invalid major: {}", v[0])))
    }
}

/// Sorted marked points with the vertex (class index) of each.
fn marked_points<I: ExactInt>(m: &PrimitiveMajor<I>) -> Vec<(Angle<I>, usize)> {
    let mut pts: Vec<(Angle<I>, usize)> = m
        .classes
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.angles.iter().map(move |a| (a.clone(), i)))
        .collect();
    pts.sort();
    pts
}

pub fn quotient_graph<I: ExactInt>(m: &PrimitiveMajor<I>) -> Result<QuotientGraph<I>> {
    require_valid(m)?;
    let pts = marked_points(m);
    let n = pts.len();
    let one = Ratio::from_integer(I::one());
    let edges = (0..n)
        .map(|k| {
            let (a, u) = &pts[k];
            let (b, v) = &pts[(k + 1) % n];
            let mut length = b.value() - a.value();
            if k + 1 == n {
                length = length + &one;
            }
            QuotientEdge { from: *u, to: *v, start: a.clone(), length }
        })
        .collect();
    Ok(QuotientGraph { vertices: m.classes.clone(), edges })
}

fn convert<I: ExactInt, J: ExactInt>(x: &I) -> J {
    J::from_str(&x.to_string()).ok().expect("integer conversion overflow")
}

/// Position on the quotient graph: edge index, distance from its start
/// vertex, distance to its end vertex.
#[derive(Clone, Debug)]
struct Loc<J> {
    edge: usize,
    off: J,
    rem: J,
}

/// γ(m) with all lengths scaled to integers over a common denominator.
struct IntGraph<J> {
    pts: Vec<J>,
    vid: Vec<usize>,
    total: J,
    apsp: Vec<Vec<J>>,
}

impl<J: ExactInt> IntGraph<J> {
    fn build<I: ExactInt>(m: &PrimitiveMajor<I>, denom: &I) -> Self {
        let total: J = convert(denom);
        let marked = marked_points(m);
        let scale = Ratio::from_integer(denom.clone());
        let pts: Vec<J> = marked.iter().map(|(a, _)| convert(&(a.value() * &scale).to_integer())).collect();
        let vid: Vec<usize> = marked.iter().map(|(_, v)| *v).collect();
        let nv = m.classes.len();
        let inf = total.clone() + total.clone();
        let mut apsp = vec![vec![inf; nv]; nv];
        for (i, row) in apsp.iter_mut().enumerate() {
            row[i] = J::zero();
        }
        let n = pts.len();
        for k in 0..n {
            let len = Self::edge_len(&pts, &total, k);
            let (u, v) = (vid[k], vid[(k + 1) % n]);
            if len < apsp[u][v] {
                apsp[u][v] = len.clone();
                apsp[v][u] = len;
            }
        }
        for w in 0..nv {
            for i in 0..nv {
                for j in 0..nv {
                    let via = apsp[i][w].clone() + apsp[w][j].clone();
                    if via < apsp[i][j] {
                        apsp[i][j] = via;
                    }
                }
            }
        }
        IntGraph { pts, vid, total, apsp }
    }

    fn edge_len(pts: &[J], total: &J, k: usize) -> J {
        if k + 1 < pts.len() {
            pts[k + 1].clone() - pts[k].clone()
        } else {
            total.clone() - pts[k].clone() + pts[0].clone()
        }
    }

    fn locate(&self, x: &J) -> Loc<J> {
        let n = self.pts.len();
        let edge = match self.pts.binary_search(x) {
            Ok(k) => k,
            Err(0) => n - 1,
            Err(k) => k - 1,
        };
        let mut off = x.clone() - self.pts[edge].clone();
        if off < J::zero() {
            off = off + self.total.clone();
        }
        let rem = Self::edge_len(&self.pts, &self.total, edge) - off.clone();
        Loc { edge, off, rem }
    }

    fn dist(&self, a: &Loc<J>, b: &Loc<J>) -> J {
        let n = self.pts.len();
        let ends = |l: &Loc<J>| [(self.vid[l.edge], l.off.clone()), (self.vid[(l.edge + 1) % n], l.rem.clone())];
        let mut best = if a.edge == b.edge { (a.off.clone() - b.off.clone()).abs() } else { self.total.clone() };
        for (u, du) in ends(a) {
            for (v, dv) in ends(b) {
                let c = du.clone() + self.apsp[u][v].clone() + dv;
                if c < best {
                    best = c;
                }
            }
        }
        best
    }
}

fn lcm_of<I: ExactInt>(vals: impl IntoIterator<Item = I>) -> I {
    vals.into_iter().fold(I::one(), |acc, x| acc.lcm(&x))
}

/// Path-metric distance in γ(m) between the images of x and y.
pub fn met_eval<I: ExactInt>(m: &PrimitiveMajor<I>, x: &Angle<I>, y: &Angle<I>) -> Result<Ratio<I>> {
    require_valid(m)?;
    let denom = lcm_of(
        m.angles().iter().map(|a| a.denominator().clone()).chain([x.denominator().clone(), y.denominator().clone()]),
    );
    let g: IntGraph<I> = IntGraph::build(m, &denom);
    let scale = Ratio::from_integer(denom.clone());
    let lx = g.locate(&(x.value() * &scale).to_integer());
    let ly = g.locate(&(y.value() * &scale).to_integer());
    Ok(Ratio::new(g.dist(&lx, &ly), denom))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricDistance<I: ExactInt> {
    /// Maximum of |met(m) − met(m′)| over the evaluation grid.
    pub value: Ratio<I>,
    /// value ≤ md(m, m′) ≤ value + error_bound.
    pub error_bound: Ratio<I>,
}

fn grid_max<I: ExactInt, J: ExactInt>(m1: &PrimitiveMajor<I>, m2: &PrimitiveMajor<I>, grid: &[I], denom: &I) -> I {
    let g1: IntGraph<J> = IntGraph::build(m1, denom);
    let g2: IntGraph<J> = IntGraph::build(m2, denom);
    let pts: Vec<J> = grid.iter().map(convert).collect();
    let l1: Vec<Loc<J>> = pts.iter().map(|p| g1.locate(p)).collect();
    let l2: Vec<Loc<J>> = pts.iter().map(|p| g2.locate(p)).collect();
    let best = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut best = J::zero();
            for j in i + 1..pts.len() {
                let diff = (g1.dist(&l1[i], &l1[j]) - g2.dist(&l2[i], &l2[j])).abs();
                if diff > best {
                    best = diff;
                }
            }
            best
        })
        .reduce(J::zero, |a, b| if a > b { a } else { b });
    convert(&best)
}

/// md(m, m′) on the grid of all class points plus `resolution` equally
/// spaced points, with the Lipschitz error bound 2/resolution.
pub fn distance<I: ExactInt>(
    m1: &PrimitiveMajor<I>,
    m2: &PrimitiveMajor<I>,
    resolution: u32,
) -> Result<MetricDistance<I>> {
    if m1.degree != m2.degree {
        return Err(Error::IncompatibleMajors(format!("degrees {} and {} differ", m1.degree, m2.degree)));
    }
    if resolution == 0 {
        return Err(Error::Domain("resolution must be positive".into()));
    }
    require_valid(m1)?;
    require_valid(m2)?;
    let res = I::from_i64_exact(resolution as i64);
    let mut all = m1.angles();
    all.extend(m2.angles());
    let denom = lcm_of(all.iter().map(|a| a.denominator().clone()).chain([res.clone()]));
    let scale = Ratio::from_integer(denom.clone());
    let step = denom.clone() / res.clone();
    let mut grid: Vec<I> = all.iter().map(|a| (a.value() * &scale).to_integer()).collect();
    let mut k = I::zero();
    while k < res {
        grid.push(k.clone() * step.clone());
        k = k + I::one();
    }
    grid.sort();
    grid.dedup();
    let small = denom.to_i64().is_some_and(|v| v < (1i64 << 60));
    let best = if small {
        grid_max::<I, i128>(m1, m2, &grid, &denom)
    } else {
        grid_max::<I, BigInt>(m1, m2, &grid, &denom)
    };
    Ok(MetricDistance {
        value: Ratio::new(best, denom),
        error_bound: Ratio::new(I::from_i64_exact(2), res),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::{arc_distance, ratio};
    use crate::major::random_generic_major;
    use proptest::prelude::*;

    type M = PrimitiveMajor<BigInt>;

    fn a(s: &str) -> Angle<BigInt> {
        s.parse().unwrap()
    }

    fn major(d: u32, classes: &[&[&str]]) -> M {
        M::parse(d, classes).unwrap()
    }

    /// Dijkstra on γ(m) with x and y spliced in as extra vertices.
    fn dijkstra_oracle(m: &M, x: &Angle<BigInt>, y: &Angle<BigInt>) -> Ratio<BigInt> {
        let mut pts: Vec<(Angle<BigInt>, Option<usize>)> = Vec::new();
        for (i, c) in m.classes.iter().enumerate() {
            for p in &c.angles {
                pts.push((p.clone(), Some(i)));
            }
        }
        for p in [x, y] {
            if !pts.iter().any(|(q, _)| q == p) {
                pts.push((p.clone(), None));
            }
        }
        pts.sort();
        // node ids: classes first, then free points
        let nc = m.classes.len();
        let mut node = Vec::new();
        let mut extra = nc;
        for (_, c) in &pts {
            node.push(match c {
                Some(i) => *i,
                None => {
                    extra += 1;
                    extra - 1
                }
            });
        }
        let n = pts.len();
        let mut adj: Vec<Vec<(usize, Ratio<BigInt>)>> = vec![Vec::new(); extra];
        for k in 0..n {
            let j = (k + 1) % n;
            let mut len = pts[j].0.value() - pts[k].0.value();
            if j == 0 {
                len += ratio::<BigInt>(1, 1);
            }
            adj[node[k]].push((node[j], len.clone()));
            adj[node[j]].push((node[k], len));
        }
        let id = |p: &Angle<BigInt>| node[pts.iter().position(|(q, _)| q == p).unwrap()];
        let (src, dst) = (id(x), id(y));
        let mut dist: Vec<Option<Ratio<BigInt>>> = vec![None; extra];
        let mut done = vec![false; extra];
        dist[src] = Some(ratio(0, 1));
        loop {
            let u = (0..extra)
                .filter(|&i| !done[i] && dist[i].is_some())
                .min_by(|&i, &j| dist[i].cmp(&dist[j]));
            let Some(u) = u else { break };
            done[u] = true;
            for (v, w) in &adj[u] {
                let c = dist[u].clone().unwrap() + w;
                if dist[*v].as_ref().is_none_or(|d| &c < d) {
                    dist[*v] = Some(c);
                }
            }
        }
        dist[dst].clone().unwrap()
    }

    #[test]
    fn graph_examples() {
        let g = quotient_graph(&major(2, &[&["0", "1/2"]])).unwrap();
        assert_eq!((g.vertices.len(), g.edges.len(), g.betti_number()), (1, 2, 2));
        assert!(g.edges.iter().all(|e| e.length == ratio(1, 2)));
        let g = quotient_graph(&major(3, &[&["10/91", "121/273"], &["7/78", "59/78"]])).unwrap();
        assert_eq!(g.betti_number(), 3);
        assert_eq!(g.total_length(), ratio(1, 1));
        let g = quotient_graph(&major(3, &[&["0", "1/3", "2/3"]])).unwrap();
        assert_eq!((g.vertices.len(), g.betti_number()), (1, 3));
        assert!(g.edges.iter().all(|e| e.length == ratio(1, 3)));
        assert!(quotient_graph(&major(2, &[&["0", "1/3"]])).is_err());
    }

    #[test]
    fn met_examples() {
        let m = major(2, &[&["0", "1/2"]]);
        assert_eq!(met_eval(&m, &a("0"), &a("1/2")).unwrap(), ratio(0, 1));
        assert_eq!(met_eval(&m, &a("1/8"), &a("5/8")).unwrap(), ratio(1, 4));
        assert_eq!(met_eval(&m, &a("1/4"), &a("3/4")).unwrap(), ratio(1, 2));
    }

    #[test]
    fn md_examples() {
        let m = major(2, &[&["0", "1/2"]]);
        let r = major(2, &[&["1/4", "3/4"]]);
        assert_eq!(distance(&m, &m, 64).unwrap().value, ratio(0, 1));
        let d = distance(&m, &r, 8).unwrap();
        assert_eq!(d.value, ratio(1, 2));
        assert_eq!(d.error_bound, ratio(1, 4));
        let p = random_generic_major::<BigInt>(3, 5);
        let q = p.rotate(&ratio(1, 1000));
        let d = distance(&p, &q, 256).unwrap();
        assert!(d.value <= ratio::<BigInt>(2, 1000) + d.error_bound);
        assert!(matches!(distance(&m, &p, 8), Err(Error::IncompatibleMajors(_))));
    }

    fn arb_angle() -> impl Strategy<Value = Angle<BigInt>> {
        (1i64..200).prop_flat_map(|q| (0..q, Just(q))).prop_map(|(p, q)| Angle::from_ratio(ratio(p, q)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn met_matches_dijkstra(d in 2u32..5, seed in 0u64..1000, x in arb_angle(), y in arb_angle(), z in arb_angle()) {
            let m: M = random_generic_major(d, seed);
            let mxy = met_eval(&m, &x, &y).unwrap();
            prop_assert_eq!(&mxy, &dijkstra_oracle(&m, &x, &y));
            prop_assert_eq!(&mxy, &met_eval(&m, &y, &x).unwrap());
            prop_assert!(mxy <= arc_distance(&x, &y));
            let mxz = met_eval(&m, &x, &z).unwrap();
            let myz = met_eval(&m, &y, &z).unwrap();
            prop_assert!(mxz <= &mxy + &myz);
            for c in &m.classes {
                prop_assert_eq!(met_eval(&m, &c.angles[0], &c.angles[1]).unwrap(), ratio(0, 1));
            }
        }

        #[test]
        fn betti_equals_degree(d in 2u32..7, seed in any::<u64>()) {
            let m: M = random_generic_major(d, seed);
            prop_assert_eq!(quotient_graph(&m).unwrap().betti_number(), d as usize);
        }
    }
}
