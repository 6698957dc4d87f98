use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{IntPoly, PolyError};

fn pow(b: &BigInt, e: usize) -> BigInt {
    num_traits::pow(b.clone(), e)
}

fn exact_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    debug_assert!(r.is_zero(), "subresultant division must be exact");
    q
}

fn exact_div_poly(f: &IntPoly, d: &BigInt) -> IntPoly {
    IntPoly::new(f.coeffs().iter().map(|c| exact_div(c, d)).collect())
}

/// Resultant by the subresultant pseudo-remainder sequence.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt, PolyError> {
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut a = f.clone();
    let mut b = g.clone();
    let ca = a.content();
    let cb = b.content();
    a = exact_div_poly(&a, &ca);
    b = exact_div_poly(&b, &cb);
    let mut sign = BigInt::one();
    let t = pow(&ca, g.deg()) * pow(&cb, f.deg());
    if a.deg() < b.deg() {
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.deg() == 0 {
        return Ok(sign * t * pow(b.leading().unwrap(), a.deg()));
    }
    let mut g_acc = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.deg(), b.deg());
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let delta = da - db;
        let r = a.pseudo_rem(&b)?;
        a = b;
        let divisor = &g_acc * pow(&h, delta);
        b = exact_div_poly(&r, &divisor);
        g_acc = a.leading().unwrap().clone();
        // h <- g^delta / h^(delta - 1)
        if delta > 0 {
            h = exact_div(&pow(&g_acc, delta), &pow(&h, delta - 1));
        }
        if b.is_zero() {
            return Ok(BigInt::zero());
        }
        if b.deg() == 0 {
            let da = a.deg();
            let lb = b.leading().unwrap();
            let hh = if da == 0 {
                h.clone()
            } else {
                exact_div(&pow(lb, da), &pow(&h, da - 1))
            };
            return Ok(sign * t * hh);
        }
    }
}

/// Resultant as the determinant of the Sylvester matrix, by fraction-free
/// Bareiss elimination. Independent of [`resultant`].
pub fn sylvester_resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt, PolyError> {
    if f.is_zero() || g.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let (m, n) = (f.deg(), g.deg());
    let size = m + n;
    if size == 0 {
        return Ok(BigInt::one());
    }
    // rows hold descending coefficients
    let fd: Vec<BigInt> = f.coeffs().iter().rev().cloned().collect();
    let gd: Vec<BigInt> = g.coeffs().iter().rev().cloned().collect();
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in fd.iter().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in gd.iter().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    Ok(bareiss_determinant(mat))
}

pub(crate) fn bareiss_determinant(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let size = mat.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        if mat[k][k].is_zero() {
            let Some(swap) = (k + 1..size).find(|&r| !mat[r][k].is_zero()) else {
                return BigInt::zero();
            };
            mat.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = exact_div(&v, &prev);
            }
            mat[i][k] = BigInt::zero();
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[size - 1][size - 1]
}

/// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)` for `deg f = n >= 2`.
pub fn discriminant_resultant(f: &IntPoly) -> Result<BigInt, PolyError> {
    let n = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    if n < 2 {
        return Err(PolyError::DegreeTooSmall {
            found: n,
            required: 2,
        });
    }
    let res = resultant(f, &f.derivative())?;
    let disc = exact_div(&res, f.leading().unwrap());
    Ok(if (n * (n - 1) / 2) % 2 == 1 {
        -disc
    } else {
        disc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p(&[-3, -1, 1]), &p(&[-1, 2])).unwrap(), BigInt::from(-13));
        assert_eq!(resultant(&p(&[-3, -1, 1]), &p(&[1])).unwrap(), BigInt::from(1));
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-3, 1])).unwrap(), BigInt::from(-1));
        assert_eq!(resultant(&p(&[]), &p(&[1])), Err(PolyError::ZeroPolynomial));
        // common root
        assert_eq!(resultant(&p(&[-1, 0, 1]), &p(&[1, 1])).unwrap(), BigInt::zero());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant_resultant(&p(&[-3, -1, 1])).unwrap(), BigInt::from(13));
        assert_eq!(discriminant_resultant(&p(&[-2, 0, -1, 1])).unwrap(), BigInt::from(-116));
        assert_eq!(discriminant_resultant(&p(&[-11, -1, 1])).unwrap(), BigInt::from(45));
        assert!(matches!(
            discriminant_resultant(&p(&[1, 1])),
            Err(PolyError::DegreeTooSmall { .. })
        ));
    }

    #[test]
    fn cubic_discriminant_formula() {
        // b^2 c^2 - 4 c^3 - 4 b^3 d - 27 d^2 + 18 bcd for x^3 + b x^2 + c x + d
        for (b, c, d) in [(-1i64, 0i64, -2i64), (3, -5, 7), (0, -7, 6), (2, 2, 2)] {
            let expect = b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d
                + 18 * b * c * d;
            assert_eq!(
                discriminant_resultant(&p(&[d, c, b, 1])).unwrap(),
                BigInt::from(expect)
            );
        }
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-9i64..=9, 1..7)
            .prop_filter_map("nonzero", |c| {
                let f = IntPoly::from_i64(&c);
                (!f.is_zero()).then_some(f)
            })
    }

    proptest! {
        #[test]
        fn subresultant_matches_sylvester(f in small_poly(), g in small_poly()) {
            prop_assert_eq!(resultant(&f, &g).unwrap(), sylvester_resultant(&f, &g).unwrap());
        }

        #[test]
        fn resultant_swap_sign(f in small_poly(), g in small_poly()) {
            let sign = if (f.deg() * g.deg()) % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(
                resultant(&f, &g).unwrap(),
                resultant(&g, &f).unwrap() * BigInt::from(sign)
            );
        }
    }

    #[test]
    fn negative_leading_coefficients() {
        let f = p(&[3, 0, -2]);
        let g = p(&[1, -5, 0, 4]);
        assert_eq!(resultant(&f, &g).unwrap(), sylvester_resultant(&f, &g).unwrap());
        assert!(resultant(&f, &g).unwrap().abs() > BigInt::zero());
    }
}
