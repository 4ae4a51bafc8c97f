//! Exact characteristic polynomials (Berkowitz, division free) and
//! largest-real-root isolation by Sturm sequences on integer polynomials.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients of det(xI − A), highest degree first.
pub fn characteristic_polynomial(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    if n == 0 {
        return vec![BigInt::one()];
    }
    let mut v = vec![BigInt::one(), -a[0][0].clone()];
    for r in 1..n {
        // leading (r+1)×(r+1) block: [[A_r, C], [R, a_rr]]
        let arr = &a[r][r];
        let row: Vec<&BigInt> = (0..r).map(|j| &a[r][j]).collect();
        let mut col: Vec<BigInt> = (0..r).map(|i| a[i][r].clone()).collect();
        let mut t = Vec::with_capacity(r + 2);
        t.push(BigInt::one());
        t.push(-arr.clone());
        for _ in 0..r {
            let dot: BigInt = row.iter().zip(&col).map(|(x, y)| *x * y).sum();
            t.push(-dot);
            col = (0..r).map(|i| (0..r).map(|j| &a[i][j] * &col[j]).sum()).collect();
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate().take(i + 1) {
                *slot += &t[i - j] * vj;
            }
        }
        v = next;
    }
    v
}

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly(Vec<BigInt>);

impl Poly {
    fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &BigInt {
        self.0.last().unwrap()
    }

    fn derivative(&self) -> Self {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// Divide out the positive gcd of the coefficients.
    fn primitive(self) -> Self {
        let g = self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() || g.is_one() {
            return self;
        }
        Poly(self.0.into_iter().map(|c| c / &g).collect())
    }

    /// Remainder r with c·a = q·b + r for some positive constant c.
    fn positive_pseudo_rem(&self, b: &Poly) -> Poly {
        let mut r = self.0.clone();
        let db = b.degree();
        let lb = b.lead().clone();
        let mut sign_flip = false;
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            // r ← lb·r − lr·x^{dr−db}·b
            for c in r.iter_mut() {
                *c *= &lb;
            }
            if lb.is_negative() {
                sign_flip = !sign_flip;
            }
            for (i, bc) in b.0.iter().enumerate() {
                r[i + dr - db] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
            let p = Poly(r).primitive();
            r = p.0;
        }
        let mut out = Poly::new(r);
        if sign_flip {
            out = Poly(out.0.into_iter().map(|c| -c).collect());
        }
        out
    }

    /// Exact quotient a / b, scaled to a primitive polynomial; b must divide a.
    fn primitive_quotient(&self, b: &Poly) -> Poly {
        let db = b.degree();
        let lb = b.lead().clone();
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); self.degree() + 1 - db];
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut().chain(q.iter_mut()) {
                *c *= &lb;
            }
            q[dr - db] += &lr;
            for (i, bc) in b.0.iter().enumerate() {
                r[i + dr - db] -= &lr * bc;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        debug_assert!(r.is_empty(), "inexact division");
        let mut out = Poly::new(q).primitive();
        if out.lead().is_negative() {
            out = Poly(out.0.into_iter().map(|c| -c).collect());
        }
        out
    }

    /// Sign of p(m / 2^k), via 2^{kn}·p(m/2^k) = Σ c_i m^i 2^{k(n−i)} by Horner.
    fn sign_at_dyadic(&self, m: &BigInt, k: u64) -> Sign {
        let n = self.degree();
        if self.is_zero() {
            return Sign::NoSign;
        }
        let s = BigInt::one() << k;
        let mut acc = self.0[n].clone();
        let mut spow = BigInt::one();
        for i in (0..n).rev() {
            spow *= &s;
            acc = acc * m + &self.0[i] * &spow;
        }
        acc.sign()
    }
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone().primitive(), p.derivative().primitive()];
    loop {
        let k = chain.len();
        if chain[k - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[k - 2].positive_pseudo_rem(&chain[k - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(Poly(r.0.into_iter().map(|c| -c).collect()).primitive());
    }
    chain
}

fn sign_changes(chain: &[Poly], m: &BigInt, k: u64) -> usize {
    let mut last = Sign::NoSign;
    let mut count = 0;
    for p in chain {
        let s = p.sign_at_dyadic(m, k);
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Largest real root of a polynomial (highest degree first), isolated to
/// within 2^-bits; None when there is no real root.
pub fn largest_real_root_exact(coeffs_high_first: &[BigInt], bits: u64) -> Option<BigRational> {
    let p = Poly::new(coeffs_high_first.iter().rev().cloned().collect());
    if p.degree() == 0 {
        return None;
    }
    // strip roots at 0 only when nothing larger exists: handled by the search itself
    let lead = p.lead().abs();
    let bound_num = p.0.iter().map(|c| c.abs()).max().unwrap();
    // Cauchy bound 1 + max|c_i|/|c_n|, rounded up to a power of two
    let bound = BigInt::one() + bound_num.div_ceil(&lead);
    let e = bound.bits();
    // Sturm counts need a squarefree input: repeated eigenvalues are common here
    let g = sturm_chain(&p).pop().unwrap();
    let p = if g.degree() > 0 { p.primitive_quotient(&g) } else { p.primitive() };
    let chain = sturm_chain(&p);
    // work on the grid m / 2^k with k = bits, interval (lo, hi]
    let k = bits;
    let mut hi = BigInt::one() << (e + k);
    let mut lo = -hi.clone();
    if sign_changes(&chain, &lo, k) == sign_changes(&chain, &hi, k) {
        return None;
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if p.sign_at_dyadic(&mid, k) == Sign::NoSign
            && sign_changes(&chain, &mid, k) == sign_changes(&chain, &hi, k)
        {
            return Some(BigRational::new(mid, BigInt::one() << k));
        }
        if sign_changes(&chain, &mid, k) > sign_changes(&chain, &hi, k) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(BigRational::new(hi, BigInt::one() << k))
}

/// Largest real root of det(xI − A) as f64 (isolated to 2^-60).
pub fn perron_root_exact(a: &[Vec<BigInt>]) -> f64 {
    let cp = characteristic_polynomial(a);
    largest_real_root_exact(&cp, 60).map_or(0.0, |r| r.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// det(x0·I − A) by fraction-based Gaussian elimination.
    fn det_oracle(a: &[Vec<BigInt>], x0: i64) -> BigRational {
        let n = a.len();
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = if i == j { BigInt::from(x0) } else { BigInt::zero() };
                        BigRational::from_integer(d - &a[i][j])
                    })
                    .collect()
            })
            .collect();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= m[c][c].clone();
            for r in c + 1..n {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let v = &f * &m[c][k];
                    m[r][k] -= v;
                }
            }
        }
        det
    }

    fn eval(cp: &[BigInt], x0: i64) -> BigInt {
        cp.iter().fold(BigInt::zero(), |acc, c| acc * x0 + c)
    }

    #[test]
    fn small_cases() {
        assert_eq!(characteristic_polynomial(&big(&[&[2]])), vec![BigInt::from(1), BigInt::from(-2)]);
        let cp = characteristic_polynomial(&big(&[&[1, 2], &[3, 4]]));
        assert_eq!(cp, vec![BigInt::from(1), BigInt::from(-5), BigInt::from(-2)]);
    }

    #[test]
    fn roots() {
        // (x − 3)(x + 5)(x − 1/2)·2 = 2x³ + 3x² − 32x + 15
        let p: Vec<BigInt> = [2, 3, -32, 15].iter().map(|&x| BigInt::from(x)).collect();
        let r = largest_real_root_exact(&p, 40).unwrap();
        assert_eq!(r, BigRational::from_integer(BigInt::from(3)));
        // x² − 2
        let p: Vec<BigInt> = [1, 0, -2].iter().map(|&x| BigInt::from(x)).collect();
        let r = largest_real_root_exact(&p, 50).unwrap().to_f64().unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        // x² + 1 has no real root
        let p: Vec<BigInt> = [1, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert!(largest_real_root_exact(&p, 20).is_none());
        // repeated roots: (x − 1)³ (x + 2)
        let p: Vec<BigInt> = [1, -1, -3, 5, -2].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(largest_real_root_exact(&p, 30).unwrap(), BigRational::one());
    }

    #[test]
    fn perron_roots() {
        assert!((perron_root_exact(&big(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])) - 1.0).abs() < 1e-15);
        let golden = perron_root_exact(&big(&[&[1, 1], &[1, 0]]));
        assert!((golden - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert_eq!(perron_root_exact(&big(&[&[0, 1], &[0, 0]])), 0.0);
    }

    proptest! {
        #[test]
        fn berkowitz_matches_determinant(entries in prop::collection::vec(-4i64..5, 25), n in 1usize..6, x0 in -3i64..4) {
            let a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(entries[i * 5 + j])).collect()).collect();
            let cp = characteristic_polynomial(&a);
            prop_assert_eq!(BigRational::from_integer(eval(&cp, x0)), det_oracle(&a, x0));
        }
    }
}
