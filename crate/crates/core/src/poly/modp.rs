use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{IntPoly, PolyError};

/// Polynomial over the field with `q` elements, `q` prime, constant term first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    q: u64,
    coeffs: Vec<u64>,
}

fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, q);
        }
        b = mul_mod(b, b, q);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, q: u64) -> u64 {
    debug_assert!(a % q != 0);
    pow_mod(a, q - 2, q)
}

impl ModPoly {
    /// Coefficients are reduced modulo `q`.
    pub fn new(q: u64, coeffs: Vec<u64>) -> Self {
        let mut out = ModPoly {
            q,
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
        };
        out.trim();
        out
    }

    pub fn from_int_poly(f: &IntPoly, q: u64) -> Self {
        let qb = BigInt::from(q);
        let coeffs = f
            .coeffs()
            .iter()
            .map(|c| c.mod_floor(&qb).to_u64().expect("reduced below q"))
            .collect();
        Self::new(q, coeffs)
    }

    pub fn zero(q: u64) -> Self {
        ModPoly { q, coeffs: vec![] }
    }

    pub fn one(q: u64) -> Self {
        Self::new(q, vec![1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Lift to integers with coefficients in `[0, q)`.
    pub fn lift(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn check(&self, other: &ModPoly) -> Result<(), PolyError> {
        if self.q == other.q {
            Ok(())
        } else {
            Err(PolyError::ModulusMismatch(self.q, other.q))
        }
    }

    pub fn add(&self, other: &ModPoly) -> Result<ModPoly, PolyError> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = *self.coeffs.get(i).unwrap_or(&0) as u128;
                let b = *other.coeffs.get(i).unwrap_or(&0) as u128;
                ((a + b) % self.q as u128) as u64
            })
            .collect();
        Ok(ModPoly::new(self.q, coeffs))
    }

    pub fn sub(&self, other: &ModPoly) -> Result<ModPoly, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ModPoly {
        let q = self.q;
        ModPoly::new(q, self.coeffs.iter().map(|&c| (q - c) % q).collect())
    }

    pub fn mul(&self, other: &ModPoly) -> Result<ModPoly, PolyError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(ModPoly::zero(self.q));
        }
        let q = self.q;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let t = (out[i + j] as u128 + a as u128 * b as u128) % q as u128;
                out[i + j] = t as u64;
            }
        }
        Ok(ModPoly::new(q, out))
    }

    pub fn div_rem(&self, divisor: &ModPoly) -> Result<(ModPoly, ModPoly), PolyError> {
        self.check(divisor)?;
        let dd = divisor.degree().ok_or(PolyError::ZeroPolynomial)?;
        let q = self.q;
        let inv = inv_mod(*divisor.coeffs.last().expect("nonzero"), q);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((ModPoly::zero(q), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mul_mod(rem[i + dd], inv, q);
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let sub = mul_mod(c, d, q);
                rem[i + j] = (rem[i + j] + q - sub) % q;
            }
            quot[i] = c;
        }
        Ok((ModPoly::new(q, quot), ModPoly::new(q, rem)))
    }

    /// Scale to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> ModPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = inv_mod(lead, self.q);
                ModPoly::new(
                    self.q,
                    self.coeffs.iter().map(|&c| mul_mod(c, inv, self.q)).collect(),
                )
            }
        }
    }

    pub fn derivative(&self) -> ModPoly {
        let q = self.q;
        ModPoly::new(
            q,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % q, q))
                .collect(),
        )
    }

    /// Monic gcd in `F_q[x]`. Errors on modulus mismatch or when both inputs
    /// are zero.
    pub fn gcd(&self, other: &ModPoly) -> Result<ModPoly, PolyError> {
        self.check(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Product of the distinct monic irreducible factors.
    ///
    /// Uses `gcd(f, f')`; when a part has zero derivative it is a `q`-th power
    /// and its `q`-th root is taken coefficient-wise (Frobenius is the identity
    /// on `F_q`).
    pub fn radical(&self) -> Result<ModPoly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let f = self.monic();
        if f.is_constant() {
            return Ok(ModPoly::one(self.q));
        }
        let d = f.derivative();
        if d.is_zero() {
            return f.qth_root().radical();
        }
        let c = f.gcd(&d)?;
        let w = f.div_rem(&c)?.0;
        // strip from c every factor already present in w
        let mut rest = c;
        loop {
            let y = rest.gcd(&w)?;
            if y.is_constant() {
                break;
            }
            rest = rest.div_rem(&y)?.0;
        }
        if rest.is_constant() {
            Ok(w)
        } else {
            w.mul(&rest.qth_root().radical()?)
        }
    }

    /// For `f = g(x^q)`, returns `g`; over `F_q` this is the `q`-th root.
    fn qth_root(&self) -> ModPoly {
        let step = self.q as usize;
        ModPoly::new(self.q, self.coeffs.iter().step_by(step).copied().collect())
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) mod {}", self.lift(), self.q)
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(q: u64, c: &[u64]) -> ModPoly {
        ModPoly::new(q, c.to_vec())
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(m(3, &[1, 2, 1]).gcd(&m(3, &[1, 1])).unwrap(), m(3, &[1, 1]));
        assert_eq!(m(3, &[1, 0, 1]).gcd(&m(3, &[1, 1])).unwrap(), m(3, &[1]));
        let f = m(7, &[3, 2, 5]);
        assert_eq!(f.gcd(&f).unwrap(), f.monic());
        assert_eq!(
            m(3, &[1]).gcd(&m(5, &[1])),
            Err(PolyError::ModulusMismatch(3, 5))
        );
    }

    #[test]
    fn gcd_divides_inputs() {
        let a = m(11, &[1, 1]).mul(&m(11, &[3, 0, 1])).unwrap();
        let b = m(11, &[1, 1]).mul(&m(11, &[5, 7])).unwrap();
        let g = a.gcd(&b).unwrap();
        assert_eq!(g, m(11, &[1, 1]));
        assert!(a.div_rem(&g).unwrap().1.is_zero());
        assert!(b.div_rem(&g).unwrap().1.is_zero());
    }

    #[test]
    fn radical_simple_and_inseparable() {
        // (x+1)^2 (x+2) over F_3
        let f = m(3, &[1, 1]).mul(&m(3, &[1, 1])).unwrap().mul(&m(3, &[2, 1])).unwrap();
        assert_eq!(f.radical().unwrap(), m(3, &[1, 1]).mul(&m(3, &[2, 1])).unwrap());
        // (x+1)^3 (x) over F_3: the cube is x^3 + 1
        let g = m(3, &[1, 0, 0, 1]).mul(&m(3, &[0, 1])).unwrap();
        assert_eq!(g.radical().unwrap(), m(3, &[0, 1, 1]));
        // (x^2+1)^6 over F_3 mixes an inseparable and a separable layer
        let base = m(3, &[1, 0, 1]);
        let mut h = ModPoly::one(3);
        for _ in 0..6 {
            h = h.mul(&base).unwrap();
        }
        assert_eq!(h.radical().unwrap(), base);
    }

    #[test]
    fn reduction_from_integers() {
        let f = IntPoly::from_i64(&[-11, -1, 1]);
        assert_eq!(ModPoly::from_int_poly(&f, 3), m(3, &[1, 2, 1]));
    }
}
