//! Exact characteristic polynomial and positive-root isolation.
//!
//! Polynomials are dense `Vec<BigInt>` with the constant term first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::TransferMatrix;

/// Coefficients of `det(I - zT)`, constant term first.
///
/// Faddeev-LeVerrier over the integers: every division by `k` is exact
/// because the characteristic coefficients of an integer matrix are integers.
pub fn det_one_minus_zt(t: &TransferMatrix) -> Vec<BigInt> {
    let n = t.dim();
    let a: Vec<BigInt> = (0..n * n).map(|idx| BigInt::from(t.get(idx / n, idx % n))).collect();
    // c[i] is the coefficient of x^i in det(xI - T).
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m = vec![BigInt::zero(); n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = matmul(&a, &m, n);
        for i in 0..n {
            next[i * n + i] += &c[n - k + 1];
        }
        m = next;
        // c_{n-k} = -tr(A M_k) / k
        let mut trace = BigInt::zero();
        for i in 0..n {
            for j in 0..n {
                trace += &a[i * n + j] * &m[j * n + i];
            }
        }
        let (q, r) = trace.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        c[n - k] = -q;
    }
    // det(I - zT) = z^n det(z^{-1} I - T) = sum_i c_i z^{n-i}
    c.reverse();
    trim(c)
}

fn matmul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for l in 0..n {
            let ail = &a[i * n + l];
            if ail.is_zero() {
                continue;
            }
            for j in 0..n {
                let blj = &b[l * n + j];
                if !blj.is_zero() {
                    out[i * n + j] += ail * blj;
                }
            }
        }
    }
    out
}

fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn degree(p: &[BigInt]) -> usize {
    p.len() - 1
}

fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    if p.len() <= 1 {
        return vec![BigInt::zero()];
    }
    p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

fn is_zero_poly(p: &[BigInt]) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Divides out the positive content.
fn primitive(p: Vec<BigInt>) -> Vec<BigInt> {
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() || g.is_one() {
        return p;
    }
    p.into_iter().map(|c| c / &g).collect()
}

/// Pseudo-remainder scaled by a positive factor, so its sign matches the true
/// remainder of `a` by `b`.
fn signed_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = degree(b);
    let lb = b[db].clone();
    let mut r: Vec<BigInt> = a.to_vec();
    let mut steps = 0u32;
    while !is_zero_poly(&r) && degree(&r) >= db {
        let dr = degree(&r);
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] -= &lr * bc;
        }
        r = trim(r);
        steps += 1;
    }
    // r = lb^steps * (a mod b); undo the sign of lb^steps
    if lb.is_negative() && steps % 2 == 1 {
        r = r.into_iter().map(|c| -c).collect();
    }
    r
}

/// Sturm chain `p, p', -rem(p, p'), ...`, each scaled to primitive form.
pub struct SturmChain(Vec<Vec<BigInt>>);

impl SturmChain {
    pub fn new(p: &[BigInt]) -> Self {
        let p = trim(p.to_vec());
        let mut chain = vec![p.clone()];
        let d = derivative(&p);
        if is_zero_poly(&d) {
            return SturmChain(chain);
        }
        chain.push(primitive(d));
        loop {
            let n = chain.len();
            let r = signed_prem(&chain[n - 2], &chain[n - 1]);
            if is_zero_poly(&r) {
                break;
            }
            chain.push(primitive(r.into_iter().map(|c| -c).collect()));
        }
        SturmChain(chain)
    }

    /// Sign changes along the chain at `num / 2^shift`.
    fn variations(&self, num: &BigInt, shift: u32) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.0 {
            let s = sign_at_dyadic(p, num, shift);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct roots in `(a, b]` for dyadic `a = a_num / 2^shift` etc.
    fn roots_between(&self, a_num: &BigInt, b_num: &BigInt, shift: u32) -> usize {
        self.variations(a_num, shift).saturating_sub(self.variations(b_num, shift))
    }
}

/// Sign of `p(num / 2^shift)`, exactly.
fn sign_at_dyadic(p: &[BigInt], num: &BigInt, shift: u32) -> i8 {
    // p(x/D) D^d = sum_i c_i x^i D^{d-i}, by Horner with D = 2^shift
    let mut acc = BigInt::zero();
    for (power, c) in p.iter().rev().enumerate() {
        acc = acc * num + (c << (shift as usize * power));
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

/// Smallest root of `p` in `(0, 1]`, located to within `2^-bits`, or `None`
/// when there is no root there. Uses Sturm counts, so roots of even
/// multiplicity and closely spaced roots are both found.
pub fn smallest_root_in_unit_interval(p: &[BigInt], bits: u32) -> Option<f64> {
    let chain = SturmChain::new(p);
    let zero = BigInt::zero();
    // interval (lo, hi] at scale 2^shift
    let mut shift = 0u32;
    let mut lo = BigInt::zero();
    let mut hi = BigInt::one();
    if chain.roots_between(&zero, &hi, shift) == 0 {
        return None;
    }
    for _ in 0..bits {
        shift += 1;
        lo <<= 1;
        hi <<= 1;
        let mid = (&lo + &hi) >> 1;
        if chain.roots_between(&zero, &mid, shift) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let hi_f = num_traits::ToPrimitive::to_f64(&hi).unwrap();
    Some(hi_f / 2f64.powi(shift as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn m(rows: &[&[u32]]) -> TransferMatrix {
        TransferMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    /// det(I - zT) evaluated in f64 by Gaussian elimination with pivoting.
    fn det_numeric(t: &TransferMatrix, z: f64) -> f64 {
        let n = t.dim();
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as u8 as f64 - z * t.get(i, j) as f64).collect())
            .collect();
        let mut det = 1.0;
        for col in 0..n {
            let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
            if a[piv][col] == 0.0 {
                return 0.0;
            }
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            det *= a[col][col];
            for r in col + 1..n {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
        det
    }

    fn eval(p: &[BigInt], z: f64) -> f64 {
        p.iter().rev().fold(0.0, |acc, c| acc * z + num_traits::ToPrimitive::to_f64(c).unwrap())
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det_one_minus_zt(&m(&[&[1]])), ints(&[1, -1]));
        assert_eq!(det_one_minus_zt(&m(&[&[2]])), ints(&[1, -2]));
        // golden mean shift: 1 - z - z^2
        assert_eq!(det_one_minus_zt(&m(&[&[1, 1], &[1, 0]])), ints(&[1, -1, -1]));
    }

    #[test]
    fn matches_numeric_determinant() {
        let t = m(&[&[1, 2, 0, 1], &[0, 0, 3, 1], &[2, 1, 0, 0], &[1, 0, 1, 2]]);
        let p = det_one_minus_zt(&t);
        for &z in &[0.1, 0.37, 0.5, 0.9, -0.4] {
            assert!((eval(&p, z) - det_numeric(&t, z)).abs() < 1e-9, "z = {z}");
        }
    }

    #[test]
    fn root_isolation() {
        let p = ints(&[1, -1, -1]);
        let r = smallest_root_in_unit_interval(&p, 50).unwrap();
        assert!((r - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-14);
        assert_eq!(smallest_root_in_unit_interval(&ints(&[1, -1]), 50), Some(1.0));
        assert_eq!(smallest_root_in_unit_interval(&ints(&[1]), 50), None);
        assert_eq!(smallest_root_in_unit_interval(&ints(&[2, -1]), 50), None);
    }

    #[test]
    fn double_root_is_found() {
        // (1 - 2z)^2 (1 - 3z): the smallest positive root 1/3 is simple,
        // while the double root 1/2 never changes sign.
        let p = ints(&[1, -7, 16, -12]);
        let r = smallest_root_in_unit_interval(&p, 50).unwrap();
        assert!((r - 1.0 / 3.0).abs() < 1e-14);
        let sq = ints(&[1, -4, 4]);
        assert!((smallest_root_in_unit_interval(&sq, 50).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn close_roots() {
        // (1000z - 500)(1000z - 501) has two roots 1e-3 apart inside one scan cell.
        let p = ints(&[250500, -1001000, 1000000]);
        let r = smallest_root_in_unit_interval(&p, 50).unwrap();
        assert!((r - 0.5).abs() < 1e-14);
    }
}
