//! Multiprecision real and complex helpers over `dashu-float`.

use std::cmp::Ordering;

use dashu_float::{round::mode::HalfEven, FBig};
use dashu_int::IBig;
use num_bigint::BigInt;

pub type Real = FBig<HalfEven, 2>;

pub fn bigint_to_ibig(x: &BigInt) -> IBig {
    IBig::from_le_bytes(&x.to_signed_bytes_le())
}

pub fn ibig_to_bigint(x: &IBig) -> BigInt {
    BigInt::from_signed_bytes_le(&x.to_le_bytes())
}

pub fn from_bigint(x: &BigInt, prec: usize) -> Real {
    Real::from(bigint_to_ibig(x)).with_precision(prec).value()
}

pub fn from_f64(x: f64, prec: usize) -> Real {
    Real::try_from(x)
        .expect("finite f64")
        .with_precision(prec)
        .value()
}

pub fn from_i64(x: i64, prec: usize) -> Real {
    Real::from(IBig::from(x)).with_precision(prec).value()
}

pub fn to_f64(x: &Real) -> f64 {
    x.to_f64().value()
}

/// Nearest integer.
pub fn round_to_bigint(x: &Real) -> BigInt {
    ibig_to_bigint(&x.round().to_int().value())
}

pub fn is_zero(x: &Real) -> bool {
    x.repr().significand().is_zero()
}

pub fn abs(x: &Real) -> Real {
    if x.repr().sign() == dashu_int::Sign::Negative {
        -x
    } else {
        x.clone()
    }
}

/// `2^-k` at precision `prec`.
pub fn pow2_neg(k: usize, prec: usize) -> Real {
    Real::from_parts(IBig::from(1u8), -(k as isize))
        .with_precision(prec)
        .value()
}

/// Decimal rendering with `digits` significant digits.
pub fn to_decimal_string(x: &Real, digits: usize) -> String {
    let dec = x.clone().with_base_and_precision::<10>(digits).value();
    let f = to_f64(x);
    if f.abs() >= 1e-3 && f.abs() < 1e15 {
        // plain positional notation
        let s = dec.to_string();
        if s.contains('e') || s.contains('E') {
            format!("{}", f)
        } else {
            s
        }
    } else {
        dec.to_string()
    }
}

#[derive(Clone, Debug)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        Complex::new(from_f64(re, prec), from_f64(im, prec))
    }

    pub fn zero(prec: usize) -> Self {
        Complex::new(from_i64(0, prec), from_i64(0, prec))
    }

    pub fn real(x: Real, prec: usize) -> Self {
        Complex::new(x, from_i64(0, prec))
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        Complex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn scale(&self, k: &Real) -> Complex {
        Complex::new(&self.re * k, &self.im * k)
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn div(&self, o: &Complex) -> Complex {
        let d = o.norm_sqr();
        let n = self.mul(&o.conj());
        Complex::new(&n.re / &d, &n.im / &d)
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.re) && is_zero(&self.im)
    }

    pub fn with_precision(&self, prec: usize) -> Complex {
        Complex::new(
            self.re.clone().with_precision(prec).value(),
            self.im.clone().with_precision(prec).value(),
        )
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

pub fn cmp(a: &Real, b: &Real) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}
