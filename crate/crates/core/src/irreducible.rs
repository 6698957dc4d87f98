//! Irreducibility over the rationals: three cheap sufficient criteria and an
//! exact factorization oracle for small degree.
//!
//! The oracle isolates all complex roots with certified disks, multiplies out
//! every subset of at most half the roots and keeps the products whose
//! coefficients round to integers. Exact division then confirms or rejects
//! each candidate, so the answer never depends on floating point.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, DEFAULT_BUDGET};
use crate::classify::mp::{self, Complex, Real};
use crate::classify::{refine, ClassifyError, SolverConfig};
use crate::poly::IntPoly;

/// Largest degree accepted by [`factor_oracle`].
pub const MAX_ORACLE_DEGREE: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    /// Dominant second coefficient.
    Perron,
    /// Prime constant term dominating the other coefficients.
    PrimeConstant,
    /// Eisenstein at the given prime.
    Eisenstein(u64),
    /// The factorization oracle found a single factor.
    Oracle,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Perron => f.write_str("perron"),
            Criterion::PrimeConstant => f.write_str("prime-constant"),
            Criterion::Eisenstein(q) => write!(f, "eisenstein({q})"),
            Criterion::Oracle => f.write_str("oracle"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrreducibilityVerdict {
    Irreducible(Criterion),
    /// Irreducible factors, repeated by multiplicity; their product is the input.
    Reducible(Vec<IntPoly>),
    Inconclusive,
}

impl IrreducibilityVerdict {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, IrreducibilityVerdict::Irreducible(_))
    }
}

fn criterion_applies(f: &IntPoly) -> bool {
    f.is_monic() && f.deg() >= 2
}

/// `|a_(n-1)| > 1 + sum |a_i|` over `i < n-1`, or equality with `f(+-1) != 0`.
pub fn perron_criterion(f: &IntPoly) -> IrreducibilityVerdict {
    if !criterion_applies(f) || f.constant_term().is_zero() {
        return IrreducibilityVerdict::Inconclusive;
    }
    let n = f.deg();
    let lhs = f.coeff(n - 1).abs();
    let rhs = BigInt::one() + f.abs_sum(0..n - 1);
    let holds = match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Equal => {
            !f.eval(&BigInt::one()).is_zero() && !f.eval(&-BigInt::one()).is_zero()
        }
        std::cmp::Ordering::Less => false,
    };
    if holds {
        IrreducibilityVerdict::Irreducible(Criterion::Perron)
    } else {
        IrreducibilityVerdict::Inconclusive
    }
}

/// `|a_0|` prime and larger than `1 + sum |a_i|` over `0 < i < n`.
pub fn prime_constant_criterion(f: &IntPoly) -> IrreducibilityVerdict {
    if !criterion_applies(f) {
        return IrreducibilityVerdict::Inconclusive;
    }
    let a0 = f.constant_term().abs();
    let bound = BigInt::one() + f.abs_sum(1..f.deg());
    let prime = a0
        .to_biguint()
        .is_some_and(|v| v > BigUint::one() && is_prime(&v));
    if prime && a0 > bound {
        IrreducibilityVerdict::Irreducible(Criterion::PrimeConstant)
    } else {
        IrreducibilityVerdict::Inconclusive
    }
}

/// Eisenstein's criterion at some prime dividing every non-leading
/// coefficient, tried among the primes of their common divisor.
pub fn eisenstein(f: &IntPoly) -> IrreducibilityVerdict {
    if !f.is_monic() || f.deg() < 1 {
        return IrreducibilityVerdict::Inconclusive;
    }
    let n = f.deg();
    let g = f.coeffs()[..n]
        .iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let Some(g) = g.to_biguint().filter(|g| *g > BigUint::one()) else {
        return IrreducibilityVerdict::Inconclusive;
    };
    let a0 = f.constant_term();
    for (q, _) in factorize(&g, DEFAULT_BUDGET).factors {
        let qq = BigInt::from(q.clone()).pow(2);
        if !a0.is_multiple_of(&qq) {
            if let Ok(q) = u64::try_from(q) {
                return IrreducibilityVerdict::Irreducible(Criterion::Eisenstein(q));
            }
        }
    }
    IrreducibilityVerdict::Inconclusive
}

/// Coefficients (ascending) of `prod (x + m_i)` for nonnegative `m_i`.
fn majorant(ms: &[Real], prec: usize) -> Vec<Real> {
    let mut out = vec![mp::from_i64(1, prec)];
    for m in ms {
        let mut next = vec![mp::from_i64(0, prec); out.len() + 1];
        for (k, c) in out.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] + &(c * m);
        }
        out = next;
    }
    out
}

/// Nearest integer when `x` is within a quarter of one.
fn near_integer(x: &Real, prec: usize) -> Option<BigInt> {
    let r = mp::round_to_bigint(x);
    let dev = mp::abs(&(x - &mp::from_bigint(&r, prec)));
    (dev <= mp::from_f64(0.25, prec)).then_some(r)
}

struct Roots {
    centers: Vec<Complex>,
    prec: usize,
}

/// Certified roots, tight enough that the coefficients of every sub-product
/// are known to within a quarter.
fn oracle_roots(f: &IntPoly, cfg: &SolverConfig) -> Result<Roots, ClassifyError> {
    refine(f, cfg, |set| {
        let prec = set.precision_bits;
        let abs: Vec<Real> = set.roots.iter().map(|d| d.center.abs()).collect();
        let grown: Vec<Real> = set
            .roots
            .iter()
            .zip(&abs)
            .map(|(d, a)| a + &d.radius)
            .collect();
        let hi = majorant(&grown, prec);
        let lo = majorant(&abs, prec);
        let limit = mp::from_f64(0.125, prec);
        let tight = hi.iter().zip(&lo).all(|(h, l)| h - l < limit);
        tight.then(|| Roots {
            centers: set.roots.iter().map(|d| d.center.clone()).collect(),
            prec,
        })
    })
}

/// Search for a monic factor of degree `1..=deg/2` among products of roots.
fn find_factor(f: &IntPoly, roots: &Roots) -> Option<IntPoly> {
    let n = roots.centers.len();
    let prec = roots.prec;
    let quarter = mp::from_f64(0.25, prec);
    // depth-first over increasing index subsets, carrying the partial product
    fn walk(
        f: &IntPoly,
        roots: &Roots,
        quarter: &Real,
        start: usize,
        prod: &[Complex],
        max_size: usize,
    ) -> Option<IntPoly> {
        let prec = roots.prec;
        let size = prod.len() - 1;
        if size > 0 {
            let mut coeffs = Vec::with_capacity(prod.len());
            let mut ok = true;
            for c in prod {
                if mp::abs(&c.im) > *quarter {
                    ok = false;
                    break;
                }
                match near_integer(&c.re, prec) {
                    Some(v) => coeffs.push(v),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                let g = IntPoly::new(coeffs);
                if f.constant_term().is_multiple_of(&g.constant_term()) && f.div_exact(&g).is_ok() {
                    return Some(g);
                }
            }
        }
        if size == max_size {
            return None;
        }
        for i in start..roots.centers.len() {
            // multiply by (x - z_i)
            let z = &roots.centers[i];
            let mut next = vec![Complex::zero(prec); prod.len() + 1];
            for (k, c) in prod.iter().enumerate() {
                next[k + 1] = next[k + 1].add(c);
                next[k] = next[k].sub(&c.mul(z));
            }
            if let Some(g) = walk(f, roots, quarter, i + 1, &next, max_size) {
                return Some(g);
            }
        }
        None
    }
    let one = Complex::real(mp::from_i64(1, prec), prec);
    walk(f, roots, &quarter, 0, &[one], n / 2)
}

fn check_oracle_input(f: &IntPoly) -> Result<usize, ClassifyError> {
    let n = match f.degree() {
        None => return Err(ClassifyError::ZeroPolynomial),
        Some(0) => return Err(ClassifyError::ConstantPolynomial),
        Some(n) => n,
    };
    if !f.is_monic() {
        return Err(ClassifyError::NotMonic);
    }
    if n > MAX_ORACLE_DEGREE {
        return Err(ClassifyError::DegreeTooLarge {
            degree: n,
            max: MAX_ORACLE_DEGREE,
        });
    }
    Ok(n)
}

/// Irreducible monic factors of a squarefree monic polynomial.
fn factor_squarefree(f: &IntPoly, cfg: &SolverConfig) -> Result<Vec<IntPoly>, ClassifyError> {
    if f.deg() <= 1 {
        return Ok(vec![f.clone()]);
    }
    let x = IntPoly::monomial(1);
    if f.constant_term().is_zero() {
        let rest = f.div_exact(&x)?;
        let mut out = vec![x];
        out.extend(factor_squarefree(&rest, cfg)?);
        return Ok(out);
    }
    let roots = oracle_roots(f, cfg)?;
    match find_factor(f, &roots) {
        None => Ok(vec![f.clone()]),
        Some(g) => {
            let h = f.div_exact(&g)?;
            let mut out = factor_squarefree(&g, cfg)?;
            out.extend(factor_squarefree(&h, cfg)?);
            Ok(out)
        }
    }
}

fn sort_key(p: &IntPoly) -> (usize, Vec<BigInt>) {
    (p.deg(), p.coeffs().iter().rev().cloned().collect())
}

/// Complete factorization of a monic integer polynomial of degree at most
/// [`MAX_ORACLE_DEGREE`] into monic irreducibles, repeated by multiplicity and
/// sorted by degree.
pub fn factor_oracle(f: &IntPoly, cfg: &SolverConfig) -> Result<Vec<IntPoly>, ClassifyError> {
    check_oracle_input(f)?;
    let g = f.gcd(&f.derivative());
    let mut squarefree = f.div_exact(&g)?;
    if squarefree.leading().is_some_and(|c| c.is_negative()) {
        squarefree = -&squarefree;
    }
    let mut out = Vec::new();
    for p in factor_squarefree(&squarefree, cfg)? {
        let mut rest = f.clone();
        while let Ok(q) = rest.div_exact(&p) {
            out.push(p.clone());
            rest = q;
        }
    }
    out.sort_by_key(sort_key);
    Ok(out)
}

/// Criteria first (Perron, prime-constant, Eisenstein), then the oracle.
pub fn irreducibility(f: &IntPoly, cfg: &SolverConfig) -> Result<IrreducibilityVerdict, ClassifyError> {
    let n = check_oracle_input(f)?;
    if n == 1 {
        return Ok(IrreducibilityVerdict::Irreducible(Criterion::Oracle));
    }
    for verdict in [perron_criterion(f), prime_constant_criterion(f), eisenstein(f)] {
        if verdict.is_irreducible() {
            return Ok(verdict);
        }
    }
    let factors = factor_oracle(f, cfg)?;
    Ok(if factors.len() == 1 {
        IrreducibilityVerdict::Irreducible(Criterion::Oracle)
    } else {
        IrreducibilityVerdict::Reducible(factors)
    })
}

pub fn is_irreducible(f: &IntPoly, cfg: &SolverConfig) -> Result<bool, ClassifyError> {
    Ok(irreducibility(f, cfg)?.is_irreducible())
}
