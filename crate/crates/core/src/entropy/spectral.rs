//! Perron roots of nonnegative integer matrices.

use num_bigint::BigInt;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::charpoly::perron_root_exact;
use super::TransitionMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_ITERATIONS: usize = 1_000_000;

/// Blocks at most this large are also solved exactly and compared.
pub const EXACT_CHECK_DIM: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralEstimate<R> {
    pub rho: R,
    /// Width of the final Collatz–Wielandt bracket around rho.
    pub achieved_tolerance: R,
    pub iterations: usize,
}

/// Strongly connected components with at least one internal edge.
pub fn nontrivial_components(m: &TransitionMatrix) -> Vec<Vec<usize>> {
    let n = m.dimension;
    let mut g = DiGraph::<(), ()>::with_capacity(n, m.nonzeros());
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for (i, col) in m.columns.iter().enumerate() {
        for &(j, _) in col {
            g.add_edge(nodes[i], nodes[j], ());
        }
    }
    tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
            v.sort_unstable();
            v
        })
        .filter(|c| c.len() > 1 || m.entry(c[0], c[0]) > 0)
        .collect()
}

/// ρ of an irreducible block by power iteration on (block + I).
///
/// The positive diagonal makes the shifted block primitive, so the iteration
/// converges even on cyclic blocks. For positive x the Collatz–Wielandt
/// quotients (Bx)_i / x_i bracket the Perron root; we stop once the bracket is
/// narrower than `tol` (relative to the shifted root).
fn block_radius<R: Real>(cols: &[Vec<(usize, u32)>], tol: R) -> SpectralEstimate<R> {
    let n = cols.len();
    let one = R::one();
    let mut x = vec![one; n];
    let mut y = vec![R::zero(); n];
    let mut lo = R::zero();
    let mut hi = R::infinity();
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        y.copy_from_slice(&x);
        for (i, col) in cols.iter().enumerate() {
            for &(j, w) in col {
                y[j] = y[j] + R::from_u32(w).unwrap() * x[i];
            }
        }
        lo = R::infinity();
        hi = R::zero();
        let mut norm = R::zero();
        for (yi, xi) in y.iter().zip(&x) {
            let q = *yi / *xi;
            lo = lo.min(q);
            hi = hi.max(q);
            norm = norm.max(*yi);
        }
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = *yi / norm;
        }
        if hi - lo <= tol * hi {
            break;
        }
    }
    let two = one + one;
    SpectralEstimate { rho: (lo + hi) / two - one, achieved_tolerance: hi - lo, iterations }
}

fn restrict(m: &TransitionMatrix, comp: &[usize]) -> Vec<Vec<(usize, u32)>> {
    let pos = |k: usize| comp.binary_search(&k).ok();
    comp.iter()
        .map(|&i| m.columns[i].iter().filter_map(|&(j, w)| pos(j).map(|p| (p, w))).collect())
        .collect()
}

/// Spectral radius with convergence details; the worst block's bracket is reported.
pub fn spectral_radius_report<R: Real>(m: &TransitionMatrix) -> Result<SpectralEstimate<R>> {
    let tol = R::spectral_tolerance();
    let mut best = SpectralEstimate { rho: R::zero(), achieved_tolerance: R::zero(), iterations: 0 };
    let mut worst_tol = R::zero();
    for comp in nontrivial_components(m) {
        let cols = restrict(m, &comp);
        let est = block_radius::<R>(&cols, tol);
        if comp.len() <= EXACT_CHECK_DIM {
            let dense: Vec<Vec<BigInt>> = (0..cols.len())
                .map(|j| {
                    (0..cols.len())
                        .map(|i| BigInt::from(cols[i].iter().find(|e| e.0 == j).map_or(0, |e| e.1)))
                        .collect()
                })
                .collect();
            let exact = perron_root_exact(&dense);
            let gap = (est.rho.to_f64().unwrap() - exact).abs();
            let allowed = (tol.to_f64().unwrap() * 1e3).max(1e-9);
            if gap > allowed {
                return Err(Error::Internal(format!(
                    "power iteration {} disagrees with exact root {exact} on a {}-block",
                    est.rho,
                    comp.len()
                )));
            }
        }
        worst_tol = worst_tol.max(est.achieved_tolerance);
        if est.rho > best.rho {
            best = est;
        }
    }
    best.achieved_tolerance = worst_tol;
    Ok(best)
}

/// ρ(M), max over strongly connected blocks; 0 for nilpotent M.
pub fn spectral_radius<R: Real>(m: &TransitionMatrix) -> Result<R> {
    spectral_radius_report(m).map(|e| e.rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(rows: &[&[u32]]) -> TransitionMatrix {
        TransitionMatrix::from_dense(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn trivial_radii() {
        assert_eq!(spectral_radius::<f64>(&dense(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap(), 1.0);
        assert_eq!(spectral_radius::<f64>(&dense(&[&[2]])).unwrap(), 2.0);
        assert_eq!(spectral_radius::<f64>(&dense(&[&[0, 1], &[0, 0]])).unwrap(), 0.0);
    }

    #[test]
    fn cyclic_block_converges() {
        // a 40-cycle has eigenvalues on the unit circle; unshifted iteration would oscillate
        let n = 40;
        let rows: Vec<Vec<u32>> = (0..n).map(|j| (0..n).map(|i| u32::from((i + 1) % n == j)).collect()).collect();
        let m = TransitionMatrix::from_dense(&rows).unwrap();
        let est = spectral_radius_report::<f64>(&m).unwrap();
        assert!((est.rho - 1.0).abs() < 1e-10, "{est:?}");
    }

    #[test]
    fn golden_ratio_and_reducible() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((spectral_radius::<f64>(&dense(&[&[1, 1], &[1, 0]])).unwrap() - phi).abs() < 1e-11);
        // block triangular: the larger diagonal block wins
        let m = dense(&[&[1, 1, 0], &[1, 0, 0], &[5, 5, 2]]);
        assert!((spectral_radius::<f64>(&m).unwrap() - 2.0).abs() < 1e-11);
    }

    #[test]
    fn f32_is_supported() {
        let r = spectral_radius::<f32>(&dense(&[&[1, 1], &[1, 0]])).unwrap();
        assert!((r - 1.618034).abs() < 1e-4);
    }
}
