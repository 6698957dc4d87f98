//! Small dense integer matrices: the family companion matrix, exact
//! characteristic polynomials, permutation similarity and power iteration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::ClassifyError;
use crate::poly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix {
            n,
            entries: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.n + j] = v;
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|v| v.sign() != num_bigint::Sign::Minus)
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.n.max(1)).map(<[BigInt]>::to_vec).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    /// `P M P^T` where `P` sends basis vector `i` to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> IntMatrix {
        assert_eq!(perm.len(), self.n);
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(perm[i], perm[j], self.get(i, j).clone());
            }
        }
        out
    }
}

/// Companion matrix of `x^n - a x^(n-1) - p`: `p` in the top-right corner,
/// ones on the subdiagonal and `a` in the bottom-right corner.
pub fn companion_matrix(n: usize, a: u64, p: u64) -> IntMatrix {
    assert!(n >= 2, "companion matrix needs n >= 2");
    let mut m = IntMatrix::zeros(n);
    m.set(0, n - 1, BigInt::from(p));
    for i in 1..n {
        m.set(i, i - 1, BigInt::from(1));
    }
    let corner = m.get(n - 1, n - 1) + BigInt::from(a);
    m.set(n - 1, n - 1, corner);
    m
}

/// `det(xI - M)` by the Faddeev-LeVerrier recurrence; every division is
/// exact over the integers.
pub fn characteristic_polynomial(m: &IntMatrix) -> IntPoly {
    let n = m.size();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::from(1);
    let mut acc = IntMatrix::zeros(n); // M_0 = 0
    let identity = IntMatrix::identity(n);
    let mut c_prev = BigInt::from(1);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = m.mul(&acc);
        for i in 0..n {
            let v = next.get(i, i) + &c_prev * identity.get(i, i);
            next.set(i, i, v);
        }
        let t = m.mul(&next).trace();
        let (c, r) = (-t).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        coeffs[n - k] = c.clone();
        c_prev = c;
        acc = next;
    }
    IntPoly::new(coeffs)
}

/// Perron root of a nonnegative irreducible matrix by power iteration from
/// the all-ones vector. Stops when the max-norm growth factor changes by
/// less than `1e-12` relative for several consecutive steps.
pub fn dominant_eigenvalue(m: &IntMatrix) -> Result<f64, ClassifyError> {
    const MAX_ITER: usize = 2_000_000;
    const REL_TOL: f64 = 1e-12;
    const STABLE_STEPS: usize = 5;
    let n = m.size();
    let a: Vec<f64> = (0..n * n)
        .map(|k| m.get(k / n, k % n).to_f64().unwrap_or(f64::INFINITY))
        .collect();
    let mut v = vec![1.0; n];
    let mut w = vec![0.0; n];
    let mut prev = f64::NAN;
    let mut stable = 0;
    for _ in 0..MAX_ITER {
        for i in 0..n {
            w[i] = (0..n).map(|j| a[i * n + j] * v[j]).sum();
        }
        let norm = w.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        if norm == 0.0 || !norm.is_finite() {
            return Err(ClassifyError::NonConvergence);
        }
        for i in 0..n {
            v[i] = w[i] / norm;
        }
        if (norm - prev).abs() <= REL_TOL * norm {
            stable += 1;
            if stable >= STABLE_STEPS {
                return Ok(norm);
            }
        } else {
            stable = 0;
        }
        prev = norm;
    }
    Err(ClassifyError::NonConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_layout() {
        assert_eq!(companion_matrix(2, 1, 3), IntMatrix::from_rows(&[vec![0, 3], vec![1, 1]]));
        assert_eq!(
            companion_matrix(3, 2, 5),
            IntMatrix::from_rows(&[vec![0, 0, 5], vec![1, 0, 0], vec![0, 1, 2]])
        );
    }

    #[test]
    fn characteristic_polynomials() {
        let m = IntMatrix::from_rows(&[vec![0, 3], vec![1, 1]]);
        assert_eq!(characteristic_polynomial(&m), IntPoly::from_i64(&[-3, -1, 1]));
        for (n, a, p) in [(4usize, 3u64, 5u64), (7, 2, 11), (9, 6, 47)] {
            let mut coeffs = vec![0i64; n + 1];
            coeffs[0] = -(p as i64);
            coeffs[n - 1] = -(a as i64);
            coeffs[n] = 1;
            assert_eq!(
                characteristic_polynomial(&companion_matrix(n, a, p)),
                IntPoly::from_i64(&coeffs)
            );
        }
        let dense = IntMatrix::from_rows(&[vec![2, -1, 0], vec![3, 4, 1], vec![0, 5, -2]]);
        // trace 4, principal minors sum -6, det -32
        assert_eq!(characteristic_polynomial(&dense), IntPoly::from_i64(&[32, -6, -4, 1]));
    }

    #[test]
    fn power_iteration() {
        let m = IntMatrix::from_rows(&[vec![0, 3], vec![1, 1]]);
        let lam = dominant_eigenvalue(&m).unwrap();
        assert!((lam - (1.0 + 13f64.sqrt()) / 2.0).abs() < 1e-10);
        let m = IntMatrix::from_rows(&[vec![0, 0, 5], vec![1, 0, 0], vec![0, 1, 1]]);
        let lam = dominant_eigenvalue(&m).unwrap();
        assert!((lam.powi(3) - lam.powi(2) - 5.0).abs() < 1e-9);
        assert!((lam - 2.1163).abs() < 1e-4);
        assert_eq!(dominant_eigenvalue(&IntMatrix::from_rows(&[vec![2]])).unwrap(), 2.0);
        assert!(matches!(
            dominant_eigenvalue(&IntMatrix::zeros(2)),
            Err(ClassifyError::NonConvergence)
        ));
    }

    #[test]
    fn permutation_similarity_preserves_char_poly() {
        let m = companion_matrix(5, 2, 7);
        let pm = m.permute(&[3, 0, 4, 1, 2]);
        assert_eq!(characteristic_polynomial(&pm), characteristic_polynomial(&m));
    }
}
