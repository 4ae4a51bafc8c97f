//! Thurston's core-entropy algorithm for quadratic angles.
//!
//! For θ ∈ Q/Z the finite set {2^n θ : n ≥ −1} spans a space whose basis is
//! all unordered pairs of its points. A pair in a common closed half circle
//! (cut at θ/2 and (θ+1)/2) maps to its doubled pair; a split pair {a, b}
//! maps to {2a, θ} + {θ, 2b}. Core entropy is log ρ of that linear map.

pub mod charpoly;
pub mod spectral;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::angle::{preferred_half_preimage, ratio, tuple_map, Angle};
use crate::error::{Error, Result};
use crate::scalar::{ExactInt, Real};

pub use charpoly::{characteristic_polynomial, largest_real_root_exact, perron_root_exact};
pub use spectral::{nontrivial_components, spectral_radius, spectral_radius_report, SpectralEstimate};

#[derive(Clone, Debug)]
pub struct PairBasis<I: ExactInt> {
    pub theta: Angle<I>,
    /// The finite set {2^n θ : n ≥ −1}, sorted.
    pub points: Vec<Angle<I>>,
    /// Unordered pairs (lo, hi), sorted by (lo, hi).
    pub pairs: Vec<(Angle<I>, Angle<I>)>,
    pub division_points: [Angle<I>; 2],
}

impl<I: ExactInt> PairBasis<I> {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index_of(&self, a: &Angle<I>, b: &Angle<I>) -> Option<usize> {
        let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        self.pairs.binary_search(&key).ok()
    }

    /// Whether a and b lie in a common closed half circle.
    pub fn same_half(&self, a: &Angle<I>, b: &Angle<I>) -> bool {
        let [c1, c2] = &self.division_points;
        let upper = |x: &Angle<I>| c1 <= x && x <= c2;
        let lower = |x: &Angle<I>| x <= c1 || x >= c2;
        (upper(a) && upper(b)) || (lower(a) && lower(b))
    }
}

pub fn pair_basis<I: ExactInt>(theta: &Angle<I>) -> Result<PairBasis<I>> {
    if theta.is_zero() {
        return Err(Error::Domain("core entropy is undefined at θ = 0".into()));
    }
    let mut set = BTreeSet::new();
    set.insert(preferred_half_preimage(theta)?);
    let mut x = theta.clone();
    while set.insert(x.clone()) {
        x = tuple_map(&x, 2);
    }
    let points: Vec<Angle<I>> = set.into_iter().collect();
    let mut pairs = Vec::with_capacity(points.len() * points.len().saturating_sub(1) / 2);
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            pairs.push((a.clone(), b.clone()));
        }
    }
    let c1 = Angle::from_ratio(theta.value() / Ratio::from_integer(I::from_i64_exact(2)));
    let c2 = c1.add(&ratio(1, 2));
    Ok(PairBasis { theta: theta.clone(), points, pairs, division_points: [c1, c2] })
}

/// Sparse nonnegative integer matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionMatrix {
    pub dimension: usize,
    /// columns[i] lists (j, entry[j][i]) with nonzero entries, sorted by j.
    pub columns: Vec<Vec<(usize, u32)>>,
}

impl TransitionMatrix {
    pub fn from_dense(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Shape(format!("row of length {} in a {n}-row matrix", r.len())));
        }
        let columns = (0..n)
            .map(|i| (0..n).filter(|&j| rows[j][i] > 0).map(|j| (j, rows[j][i])).collect())
            .collect();
        Ok(TransitionMatrix { dimension: n, columns })
    }

    pub fn entry(&self, j: usize, i: usize) -> u32 {
        self.columns[i].iter().find(|e| e.0 == j).map_or(0, |e| e.1)
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0; self.dimension]; self.dimension];
        for (i, col) in self.columns.iter().enumerate() {
            for &(j, w) in col {
                out[j][i] = w;
            }
        }
        out
    }

    pub fn column_sum(&self, i: usize) -> u32 {
        self.columns[i].iter().map(|e| e.1).sum()
    }

    pub fn nonzeros(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }
}

/// Image of one basis pair as (basis index, multiplicity) terms.
fn pair_image<I: ExactInt>(basis: &PairBasis<I>, a: &Angle<I>, b: &Angle<I>) -> Vec<usize> {
    let (da, db) = (tuple_map(a, 2), tuple_map(b, 2));
    let idx = |x: &Angle<I>, y: &Angle<I>| basis.index_of(x, y).expect("orbit closed under doubling");
    if basis.same_half(a, b) {
        // only the two division points share an image; that pair maps to 0
        if da == db {
            vec![]
        } else {
            vec![idx(&da, &db)]
        }
    } else {
        let t = &basis.theta;
        vec![idx(&da, t), idx(t, &db)]
    }
}

pub fn matrix_in_basis<I: ExactInt>(basis: &PairBasis<I>) -> TransitionMatrix {
    let columns = basis
        .pairs
        .iter()
        .map(|(a, b)| {
            let mut col: Vec<(usize, u32)> = Vec::new();
            let mut img = pair_image(basis, a, b);
            img.sort_unstable();
            for j in img {
                match col.last_mut() {
                    Some(e) if e.0 == j => e.1 += 1,
                    _ => col.push((j, 1)),
                }
            }
            col
        })
        .collect();
    TransitionMatrix { dimension: basis.len(), columns }
}

pub fn build_matrix<I: ExactInt>(theta: &Angle<I>) -> Result<TransitionMatrix> {
    Ok(matrix_in_basis(&pair_basis(theta)?))
}

pub fn core_entropy<I: ExactInt, R: Real>(theta: &Angle<I>) -> Result<R> {
    let rho: R = spectral_radius(&build_matrix(theta)?)?;
    Ok(rho.ln())
}

pub fn hausdorff_dimension<I: ExactInt, R: Real>(theta: &Angle<I>) -> Result<R> {
    Ok(core_entropy::<I, R>(theta)? / R::LN_2())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta_num: u64,
    pub theta_den: u64,
    pub rho: f64,
    pub entropy: f64,
    pub dimension: f64,
}

impl SweepRow {
    pub fn theta(&self) -> f64 {
        self.theta_num as f64 / self.theta_den as f64
    }
}

/// Reduced p/q in (0, 1) with 2 ≤ q ≤ max_den, ordered by (q, p).
pub fn reduced_angles(max_den: u64) -> Vec<(u64, u64)> {
    (2..=max_den).flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q))).collect()
}

/// One row per reduced angle; computed in parallel, returned in (q, p) order.
pub fn sweep(max_den: u64) -> Result<Vec<SweepRow>> {
    if max_den < 2 {
        return Err(Error::Domain(format!("max denominator {max_den} < 2")));
    }
    reduced_angles(max_den)
        .into_par_iter()
        .map(|(p, q)| {
            let theta = Angle::<i64>::new(p as i64, q as i64)?;
            let rho: f64 = spectral_radius(&build_matrix(&theta)?)?;
            let entropy = rho.ln();
            Ok(SweepRow { theta_num: p, theta_den: q, rho, entropy, dimension: entropy / std::f64::consts::LN_2 })
        })
        .collect()
}

pub const CSV_HEADER: &str = "theta_num,theta_den,rho,entropy,dimension";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{:.9},{:.9},{:.9}", r.theta_num, r.theta_den, r.rho, r.entropy, r.dimension);
    }
    out
}

/// Basis pairs as strings with each column's image, for display.
pub fn describe_images<I: ExactInt>(basis: &PairBasis<I>) -> Vec<(String, Vec<(String, u32)>)> {
    let m = matrix_in_basis(basis);
    let name = |k: usize| format!("{{{}, {}}}", basis.pairs[k].0, basis.pairs[k].1);
    let names: HashMap<usize, String> = (0..basis.len()).map(|k| (k, name(k))).collect();
    m.columns
        .iter()
        .enumerate()
        .map(|(i, col)| (names[&i].clone(), col.iter().map(|&(j, w)| (names[&j].clone(), w)).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn a(s: &str) -> Angle<BigInt> {
        s.parse().unwrap()
    }

    fn names(b: &PairBasis<BigInt>) -> Vec<String> {
        b.pairs.iter().map(|(x, y)| format!("{x},{y}")).collect()
    }

    #[test]
    fn bases() {
        assert_eq!(
            names(&pair_basis(&a("1/5")).unwrap()),
            ["1/5,2/5", "1/5,3/5", "1/5,4/5", "2/5,3/5", "2/5,4/5", "3/5,4/5"]
        );
        assert_eq!(names(&pair_basis(&a("1/2")).unwrap()), ["0/1,1/4", "0/1,1/2", "1/4,1/2"]);
        assert_eq!(names(&pair_basis(&a("1/7")).unwrap()), ["1/7,2/7", "1/7,4/7", "2/7,4/7"]);
        assert!(matches!(pair_basis(&a("0")), Err(Error::Domain(_))));
    }

    #[test]
    fn one_fifth_images() {
        let b = pair_basis(&a("1/5")).unwrap();
        let img = describe_images(&b);
        let want: [(&str, &[&str]); 6] = [
            ("{1/5, 2/5}", &["{2/5, 4/5}"]),
            ("{1/5, 3/5}", &["{1/5, 2/5}"]),
            ("{1/5, 4/5}", &["{1/5, 2/5}", "{1/5, 3/5}"]),
            ("{2/5, 3/5}", &["{1/5, 4/5}"]),
            ("{2/5, 4/5}", &["{1/5, 3/5}", "{1/5, 4/5}"]),
            ("{3/5, 4/5}", &["{1/5, 3/5}"]),
        ];
        for ((src, terms), (ws, wt)) in img.iter().zip(want) {
            assert_eq!(src, ws);
            let got: Vec<&str> = terms.iter().map(|t| t.0.as_str()).collect();
            assert_eq!(got, wt, "{src}");
            assert!(terms.iter().all(|t| t.1 == 1));
        }
    }

    #[test]
    fn small_matrices() {
        let m = build_matrix(&a("1/2")).unwrap();
        assert_eq!(m.to_dense(), vec![vec![0, 0, 0], vec![1, 2, 1], vec![0, 0, 0]]);
        let m = build_matrix(&a("1/7")).unwrap();
        for i in 0..3 {
            assert_eq!(m.column_sum(i), 1);
            assert_eq!((0..3).map(|k| m.entry(i, k)).sum::<u32>(), 1);
        }
    }

    #[test]
    fn entropy_examples() {
        let h: f64 = core_entropy(&a("1/5")).unwrap();
        assert!((h - 0.3331).abs() < 5e-4, "{h}");
        let h: f64 = core_entropy(&a("1/2")).unwrap();
        assert!((h - std::f64::consts::LN_2).abs() < 1e-9);
        let h: f64 = core_entropy(&a("1/7")).unwrap();
        assert!(h.abs() < 1e-9);
        let d: f64 = hausdorff_dimension(&a("1/5")).unwrap();
        assert!((d - 0.4806).abs() < 1e-3);
        let d: f64 = hausdorff_dimension(&a("1/2")).unwrap();
        assert!((d - 1.0).abs() < 1e-8);
    }

    #[test]
    fn machine_and_big_integers_agree() {
        for (p, q) in reduced_angles(24) {
            let x: f64 = core_entropy(&Angle::<i64>::new(p as i64, q as i64).unwrap()).unwrap();
            let y: f64 = core_entropy(&Angle::<BigInt>::new(p.into(), q.into()).unwrap()).unwrap();
            assert_eq!(x, y);
        }
    }

    #[test]
    fn sweep_rows() {
        let rows = sweep(3).unwrap();
        let th: Vec<_> = rows.iter().map(|r| (r.theta_num, r.theta_den)).collect();
        assert_eq!(th, [(1, 2), (1, 3), (2, 3)]);
        let csv = sweep_csv(&rows);
        assert!(csv.starts_with("theta_num,theta_den,rho,entropy,dimension\n1,2,2.000000000,0.693147181,1.000000000\n"));
        let rows = sweep(15).unwrap();
        let r = rows.iter().find(|r| (r.theta_num, r.theta_den) == (1, 5)).unwrap();
        assert!((r.entropy - 0.3331).abs() < 5e-4);
        assert!(sweep(1).is_err());
    }
}
