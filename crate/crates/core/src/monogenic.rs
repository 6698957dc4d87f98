//! Monogenicity of trinomials `x^n + A x^m + B`.
//!
//! `Z[theta]` has index `i` in the ring of integers with `disc(f) = i^2 disc(K)`,
//! so only primes whose square divides the discriminant can divide the index.
//! Each such prime is settled by the Jakhar-Khanduja-Sangwan conditions
//! (five cases on `q | A`, `q | B`, `q | m`) or by Dedekind's criterion; the
//! two are independent and can be run against each other.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{factorize, is_prime, squarefree_status, valuation, SquarefreeStatus};
use crate::poly::{discriminant_resultant, IntPoly, ModPoly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonogenicError {
    #[error("not a trinomial x^n + A x^m + B with 0 < m < n and B != 0")]
    NotTrinomial,
    #[error("polynomial is not monic of degree at least 2")]
    NotMonic,
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("{0} does not divide the discriminant")]
    NotDiscriminantDivisor(BigUint),
    #[error("prime {0} is too large for modular arithmetic")]
    ModulusTooLarge(BigUint),
    #[error("discriminant is zero")]
    ZeroDiscriminant,
    #[error("local tests disagree at q = {q}: trinomial test says {jks}, Dedekind says {dedekind}")]
    MethodDisagreement {
        q: BigUint,
        jks: LocalResult,
        dedekind: LocalResult,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `x^n + A x^m + B` with `0 < m < n` and `B != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrinomialParams {
    pub n: u32,
    pub m: u32,
    pub a: BigInt,
    pub b: BigInt,
}

impl TrinomialParams {
    pub fn new(n: u32, m: u32, a: BigInt, b: BigInt) -> Result<Self, MonogenicError> {
        if n < 2 || m == 0 || m >= n || b.is_zero() {
            return Err(MonogenicError::NotTrinomial);
        }
        Ok(TrinomialParams { n, m, a, b })
    }

    /// `x^n - a x^(n-1) - p`.
    pub fn family(n: u32, a: u64, p: u64) -> Self {
        Self::new(n, n - 1, -BigInt::from(a), -BigInt::from(p)).expect("n >= 2 and p != 0")
    }

    /// Recognise a monic polynomial with exactly the terms `x^n`, `x^m`, `1`.
    /// A zero middle coefficient is rejected.
    pub fn from_poly(f: &IntPoly) -> Result<Self, MonogenicError> {
        if !f.is_monic() || f.deg() < 2 {
            return Err(MonogenicError::NotTrinomial);
        }
        let n = f.deg();
        let middle: Vec<usize> = (1..n).filter(|&i| !f.coeff(i).is_zero()).collect();
        match middle.as_slice() {
            [m] => Self::new(n as u32, *m as u32, f.coeff(*m), f.constant_term()),
            _ => Err(MonogenicError::NotTrinomial),
        }
    }

    pub fn to_poly(&self) -> IntPoly {
        let mut c = vec![BigInt::zero(); self.n as usize + 1];
        c[0] = self.b.clone();
        c[self.m as usize] = self.a.clone();
        c[self.n as usize] = BigInt::one();
        IntPoly::new(c)
    }

    pub fn d0(&self) -> u32 {
        self.n.gcd(&self.m)
    }

    pub fn n1(&self) -> u32 {
        self.n / self.d0()
    }

    pub fn m1(&self) -> u32 {
        self.m / self.d0()
    }

    /// `B^(n1-m1) n1^n1 - (-1)^m1 A^n1 m1^m1 (m1-n1)^(n1-m1)`.
    pub fn condition_v_quantity(&self) -> BigInt {
        let (n1, m1) = (self.n1(), self.m1());
        let k = n1 - m1;
        let first = self.b.pow(k) * BigInt::from(n1).pow(n1);
        let second = self.a.pow(n1)
            * BigInt::from(m1).pow(m1)
            * (BigInt::from(m1) - BigInt::from(n1)).pow(k);
        if m1 % 2 == 0 {
            first - second
        } else {
            first + second
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalResult {
    NotDividesIndex,
    DividesIndex,
    NotApplicable(String),
}

impl fmt::Display for LocalResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalResult::NotDividesIndex => f.write_str("NotDividesIndex"),
            LocalResult::DividesIndex => f.write_str("DividesIndex"),
            LocalResult::NotApplicable(why) => write!(f, "NotApplicable({why})"),
        }
    }
}

/// Which rule produced a local verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "v")]
    V,
    /// The trinomial case split has no rule; Dedekind's criterion was used.
    #[serde(rename = "dedekind-fallback")]
    DedekindFallback,
    #[serde(rename = "dedekind")]
    Dedekind,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::I => "i",
            Condition::II => "ii",
            Condition::III => "iii",
            Condition::IV => "iv",
            Condition::V => "v",
            Condition::DedekindFallback => "dedekind-fallback",
            Condition::Dedekind => "dedekind",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalIndexVerdict {
    #[serde(with = "decimal")]
    pub q: BigUint,
    pub result: LocalResult,
    pub condition: Condition,
}

impl LocalIndexVerdict {
    fn new(q: &BigUint, holds: bool, condition: Condition) -> Self {
        LocalIndexVerdict {
            q: q.clone(),
            result: if holds {
                LocalResult::NotDividesIndex
            } else {
                LocalResult::DividesIndex
            },
            condition,
        }
    }

    pub fn divides_index(&self) -> bool {
        self.result == LocalResult::DividesIndex
    }
}

fn divides(q: &BigInt, x: &BigInt) -> bool {
    x.is_multiple_of(q)
}

/// `(x + (-x)^(q^e)) / q` modulo `q`. The numerator is divisible by `q`
/// because `y^(q^e) = y` modulo `q`.
fn frobenius_quotient(x: &BigInt, q: &BigInt, e: u32) -> BigInt {
    let q2 = q * q;
    let base = (-x).mod_floor(&q2);
    let exp = q.pow(e);
    let pw = base.modpow(&exp, &q2);
    let num = (x + pw).mod_floor(&q2);
    debug_assert!(divides(q, &num));
    (num / q).mod_floor(q)
}

fn to_u64(q: &BigUint) -> Result<u64, MonogenicError> {
    q.to_u64().ok_or_else(|| MonogenicError::ModulusTooLarge(q.clone()))
}

fn check_prime_divisor(q: &BigUint, disc: &BigInt) -> Result<(), MonogenicError> {
    if !is_prime(q) {
        return Err(MonogenicError::NotPrime(q.clone()));
    }
    if !divides(&BigInt::from(q.clone()), disc) {
        return Err(MonogenicError::NotDiscriminantDivisor(q.clone()));
    }
    Ok(())
}

/// Polynomial coprimality test of condition (iv).
fn condition_iv(t: &TrinomialParams, q: &BigInt, qu: u64) -> Result<bool, MonogenicError> {
    let qb = q.to_biguint().expect("positive");
    let k = valuation(&qb, &BigInt::from(t.n))
        .expect("n > 0")
        .min(valuation(&qb, &BigInt::from(t.m)).expect("m > 0"));
    let qk = qu.pow(k);
    let s_prime = t.n as usize / qk as usize;
    let s = t.m as usize / qk as usize;
    let q2 = q * q;
    let reduce = |p: &IntPoly| IntPoly::new(p.coeffs().iter().map(|c| c.mod_floor(&q2)).collect());
    // (-A x^s - B)^(q^k) with coefficients mod q^2
    let mut base = IntPoly::constant(-&t.b);
    base = &base - &IntPoly::monomial(s).scale(&t.a);
    let mut pw = IntPoly::one();
    let mut b = reduce(&base);
    let mut e = qk;
    while e > 0 {
        if e & 1 == 1 {
            pw = reduce(&(&pw * &b));
        }
        b = reduce(&(&b * &b));
        e >>= 1;
    }
    let num = &(&IntPoly::monomial(t.m as usize).scale(&t.a) + &IntPoly::constant(t.b.clone())) + &pw;
    let num = reduce(&num);
    let quotient = IntPoly::new(
        num.coeffs()
            .iter()
            .map(|c| {
                debug_assert!(divides(q, c));
                c / q
            })
            .collect(),
    );
    let mut first = vec![BigInt::zero(); s_prime + 1];
    first[s_prime] = BigInt::one();
    first[s] += &t.a;
    first[0] += &t.b;
    let f1 = ModPoly::from_int_poly(&IntPoly::new(first), qu);
    let f2 = ModPoly::from_int_poly(&quotient, qu);
    Ok(f1.gcd(&f2)?.is_constant())
}

/// Trinomial local index test at a prime `q | disc`. When the case split has
/// no applicable rule the Dedekind test answers instead, unless `fallback` is
/// off, in which case the result is `NotApplicable`.
pub fn jks_local_test_with(
    t: &TrinomialParams,
    q: &BigUint,
    fallback: bool,
) -> Result<LocalIndexVerdict, MonogenicError> {
    let f = t.to_poly();
    let disc = discriminant_resultant(&f)?;
    check_prime_divisor(q, &disc)?;
    let qi = BigInt::from(q.clone());
    let (a, b) = (&t.a, &t.b);
    let (n1, m1) = (t.n1(), t.m1());
    let qa = divides(&qi, a);
    let qb = divides(&qi, b);
    let verdict = match (qa, qb) {
        (true, true) => LocalIndexVerdict::new(q, !divides(&(&qi * &qi), b), Condition::I),
        (true, false) => {
            let j = valuation(q, &BigInt::from(t.n)).expect("n > 0");
            if j == 0 {
                if !fallback {
                    return Ok(LocalIndexVerdict {
                        q: q.clone(),
                        result: LocalResult::NotApplicable("q | A, q does not divide B or n".into()),
                        condition: Condition::II,
                    });
                }
                let mut v = dedekind_local_test(&f, q)?;
                v.condition = Condition::DedekindFallback;
                return Ok(v);
            }
            let a2 = a / &qi;
            let b1 = frobenius_quotient(b, &qi, j);
            let first = divides(&qi, &a2) && !divides(&qi, &b1);
            // the difference, not the sum: the sum disagrees with Dedekind
            let expr = &a2 * ((-b).pow(m1) * a2.pow(n1) - (-&b1).pow(n1));
            LocalIndexVerdict::new(q, first || !divides(&qi, &expr), Condition::II)
        }
        (false, true) => {
            let l = valuation(q, &BigInt::from(t.n - t.m)).expect("n > m");
            let a1 = frobenius_quotient(a, &qi, l);
            let b2 = b / &qi;
            let first = divides(&qi, &a1) && !divides(&qi, &b2);
            let k = n1 - m1;
            let expr = &a1 * b2.pow(t.m - 1) * ((-a).pow(m1) * a1.pow(k) - (-&b2).pow(k));
            LocalIndexVerdict::new(q, first || !divides(&qi, &expr), Condition::III)
        }
        (false, false) if t.m as u64 % to_u64(q).unwrap_or(u64::MAX) == 0 => {
            let holds = condition_iv(t, &qi, to_u64(q)?)?;
            LocalIndexVerdict::new(q, holds, Condition::IV)
        }
        (false, false) => {
            let quantity = t.condition_v_quantity();
            LocalIndexVerdict::new(q, !divides(&(&qi * &qi), &quantity), Condition::V)
        }
    };
    Ok(verdict)
}

pub fn jks_local_test(t: &TrinomialParams, q: &BigUint) -> Result<LocalIndexVerdict, MonogenicError> {
    jks_local_test_with(t, q, true)
}

/// Dedekind's criterion: with `g = rad(f mod q)`, `h = (f mod q)/g` and
/// `F = (g h - f)/q` for lifts `g`, `h`, the prime divides the index iff
/// `F`, `g` and `h` share a factor modulo `q`.
pub fn dedekind_local_test(f: &IntPoly, q: &BigUint) -> Result<LocalIndexVerdict, MonogenicError> {
    if !f.is_monic() || f.deg() < 1 {
        return Err(MonogenicError::NotMonic);
    }
    if !is_prime(q) {
        return Err(MonogenicError::NotPrime(q.clone()));
    }
    let qu = to_u64(q)?;
    let fbar = ModPoly::from_int_poly(f, qu);
    let g = fbar.radical()?;
    let (h, rem) = fbar.div_rem(&g)?;
    debug_assert!(rem.is_zero());
    let diff = &(&g.lift() * &h.lift()) - f;
    let qi = BigInt::from(qu);
    let big_f = IntPoly::new(
        diff.coeffs()
            .iter()
            .map(|c| {
                debug_assert!(divides(&qi, c));
                c / &qi
            })
            .collect(),
    );
    let fq = ModPoly::from_int_poly(&big_f, qu);
    let common = fq.gcd(&g)?.gcd(&h)?;
    Ok(LocalIndexVerdict::new(q, common.is_constant(), Condition::Dedekind))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Jks,
    Dedekind,
    Both,
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "jks" => Ok(Method::Jks),
            "dedekind" => Ok(Method::Dedekind),
            "both" => Ok(Method::Both),
            other => Err(format!("unknown method `{other}` (expected jks, dedekind or both)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Monogenic,
    /// Carries a prime dividing the index.
    NotMonogenic(BigUint),
    /// The discriminant could not be factored far enough.
    Unknown(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Monogenic => f.write_str("Monogenic"),
            Verdict::NotMonogenic(q) => write!(f, "NotMonogenic({q})"),
            Verdict::Unknown(why) => write!(f, "Unknown({why})"),
        }
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "Monogenic" {
            return Ok(Verdict::Monogenic);
        }
        if let Some(q) = s.strip_prefix("NotMonogenic(").and_then(|r| r.strip_suffix(')')) {
            return q.parse().map(Verdict::NotMonogenic).map_err(|e| format!("{e}"));
        }
        if let Some(why) = s.strip_prefix("Unknown(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Verdict::Unknown(why.to_string()));
        }
        Err(format!("unrecognised verdict `{s}`"))
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

mod decimal_int {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonogenicityReport {
    pub poly: IntPoly,
    #[serde(with = "decimal_int")]
    pub disc: BigInt,
    /// Factorization of `|disc|`, e.g. `"5^2 * 3467"`.
    pub disc_factors: String,
    pub locals: Vec<LocalIndexVerdict>,
    pub verdict: Verdict,
}

/// Primes whose square divides `|disc|`, and whether that list is complete.
pub fn square_divisor_primes(disc: &BigInt, budget: u64) -> (Vec<BigUint>, String, Option<BigUint>) {
    let fac = factorize(&disc.magnitude().clone(), budget);
    let mut primes: Vec<BigUint> = fac
        .factors
        .iter()
        .filter(|(_, e)| *e >= 2)
        .map(|(q, _)| q.clone())
        .collect();
    let mut unresolved = None;
    if !fac.complete {
        match squarefree_status(&fac.cofactor, budget) {
            SquarefreeStatus::Squarefree => {}
            SquarefreeStatus::NotSquarefree(q) => {
                primes.push(q);
                // other primes of the cofactor stay unknown
                unresolved = Some(fac.cofactor.clone());
            }
            SquarefreeStatus::Unknown(c) => unresolved = Some(c),
        }
    }
    primes.sort();
    primes.dedup();
    (primes, fac.to_string(), unresolved)
}

fn local(
    f: &IntPoly,
    t: Option<&TrinomialParams>,
    method: Method,
    q: &BigUint,
) -> Result<Vec<LocalIndexVerdict>, MonogenicError> {
    let jks = || jks_local_test(t.expect("checked trinomial"), q);
    Ok(match method {
        Method::Jks => vec![jks()?],
        Method::Dedekind => vec![dedekind_local_test(f, q)?],
        Method::Both => {
            let (j, d) = (jks()?, dedekind_local_test(f, q)?);
            if j.divides_index() != d.divides_index() {
                return Err(MonogenicError::MethodDisagreement {
                    q: q.clone(),
                    jks: j.result,
                    dedekind: d.result,
                });
            }
            vec![j, d]
        }
    })
}

/// Decide whether the monic irreducible `f` is monogenic. The trinomial test
/// needs `f` to be a trinomial; Dedekind accepts any monic `f`.
pub fn monogenic(f: &IntPoly, method: Method, budget: u64) -> Result<MonogenicityReport, MonogenicError> {
    if !f.is_monic() || f.deg() < 2 {
        return Err(MonogenicError::NotMonic);
    }
    let t = match method {
        Method::Dedekind => None,
        _ => Some(TrinomialParams::from_poly(f)?),
    };
    let disc = discriminant_resultant(f)?;
    if disc.is_zero() {
        return Err(MonogenicError::ZeroDiscriminant);
    }
    let (primes, disc_factors, unresolved) = square_divisor_primes(&disc, budget);
    let mut locals = Vec::new();
    for q in &primes {
        locals.extend(local(f, t.as_ref(), method, q)?);
    }
    let witness = locals.iter().find(|l| l.divides_index()).map(|l| l.q.clone());
    let verdict = match (witness, unresolved) {
        (Some(q), _) => Verdict::NotMonogenic(q),
        (None, Some(c)) => Verdict::Unknown(format!("unfactored cofactor {c}")),
        (None, None) => Verdict::Monogenic,
    };
    Ok(MonogenicityReport {
        poly: f.clone(),
        disc,
        disc_factors,
        locals,
        verdict,
    })
}
