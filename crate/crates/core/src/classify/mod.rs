//! Root-modulus taxonomy of algebraic integers.
//!
//! A monic irreducible `f` is *Perron* when it has a real root `lambda > 1`
//! strictly exceeding every other root in modulus. Perron polynomials split
//! further into Pisot, Salem, anti-Pisot and strictly-Perron according to how
//! the remaining roots sit relative to the unit circle. Every decision here is
//! made from certified root disks; an undecidable disk raises the working
//! precision instead of guessing.

mod digraph;
pub mod matrix;
pub mod mp;
pub mod roots;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::poly::{IntPoly, PolyError};
pub use digraph::{digraph_strongly_connected, matrix_irreducible, DiGraph};
pub use matrix::{characteristic_polynomial, companion_matrix, dominant_eigenvalue, IntMatrix};
use mp::{Complex, Real};
pub use roots::{complex_roots, complex_roots_within, refine, CertifiedRootSet, RootDisk, SolverConfig};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant polynomial has no roots")]
    ConstantPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has a repeated root")]
    NotSquarefree,
    #[error("root disks not separated at {bits} bits")]
    PrecisionExhausted { bits: usize },
    #[error("power iteration did not converge")]
    NonConvergence,
    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Where a root lies relative to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitPosition {
    Inside,
    OnCircle,
    Outside,
}

/// Root counts by modulus, with the root of largest modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulusProfile {
    pub inside: usize,
    #[serde(rename = "on")]
    pub on_circle: usize,
    pub outside: usize,
    #[serde(skip)]
    dominant: (f64, f64),
}

impl ModulusProfile {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.inside, self.on_circle, self.outside)
    }

    /// Approximation of a root of largest certified modulus.
    pub fn dominant(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.dominant.0, self.dominant.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Subclass {
    Pisot,
    Salem,
    AntiPisot,
    StrictlyPerron,
}

impl fmt::Display for Subclass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Subclass::Pisot => "Pisot",
            Subclass::Salem => "Salem",
            Subclass::AntiPisot => "AntiPisot",
            Subclass::StrictlyPerron => "StrictlyPerron",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    NotIrreducible,
    NoPerronRoot,
    Perron(Subclass),
}

impl ClassKind {
    pub fn class_name(&self) -> &'static str {
        match self {
            ClassKind::NotIrreducible => "NotIrreducible",
            ClassKind::NoPerronRoot => "NoPerronRoot",
            ClassKind::Perron(_) => "Perron",
        }
    }

    pub fn subclass(&self) -> Option<Subclass> {
        match self {
            ClassKind::Perron(s) => Some(*s),
            _ => None,
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKind::Perron(s) => write!(f, "Perron({s})"),
            other => f.write_str(other.class_name()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub poly: IntPoly,
    pub kind: ClassKind,
    /// The Perron root, when there is one.
    pub lambda: Option<Real>,
    /// Absent for reducible input.
    pub profile: Option<ModulusProfile>,
    /// Zero when no root isolation was needed.
    pub precision_bits: usize,
}

/// Significant digits used when rendering the Perron root.
pub const LAMBDA_DIGITS: usize = 30;

impl Classification {
    pub fn lambda_f64(&self) -> Option<f64> {
        self.lambda.as_ref().map(mp::to_f64)
    }

    pub fn lambda_decimal(&self, digits: usize) -> Option<String> {
        self.lambda.as_ref().map(|l| mp::to_decimal_string(l, digits))
    }
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            poly: &'a IntPoly,
            class: &'static str,
            subclass: Option<Subclass>,
            lambda: Option<String>,
            profile: Option<ModulusProfile>,
            precision_bits: usize,
        }
        Json {
            poly: &self.poly,
            class: self.kind.class_name(),
            subclass: self.kind.subclass(),
            lambda: self.lambda_decimal(LAMBDA_DIGITS),
            profile: self.profile,
            precision_bits: self.precision_bits,
        }
        .serialize(s)
    }
}

// Relative slack absorbing rounding in the comparisons below.
fn slack(prec: usize) -> Real {
    mp::pow2_neg(prec.saturating_sub(8), prec)
}

/// `a < b` with a margin covering rounding of both sides.
pub fn certainly_less(a: &Real, b: &Real, prec: usize) -> bool {
    let margin = slack(prec) * (mp::abs(a) + mp::abs(b) + mp::from_i64(1, prec));
    a + &margin < *b
}

fn disk_modulus_bounds(d: &RootDisk) -> (Real, Real) {
    let m = d.center.abs();
    (&m - &d.radius, &m + &d.radius)
}

/// Is root `i` real? `None` when its disk straddles the real axis and the
/// mirror image still meets another disk.
pub fn root_is_real(set: &CertifiedRootSet, i: usize) -> Option<bool> {
    let prec = set.precision_bits;
    let d = &set.roots[i];
    if certainly_less(&d.radius, &mp::abs(&d.center.im), prec) {
        return Some(false);
    }
    // the conjugate root lies in the mirrored disk; if that meets no other
    // disk it must be this root itself
    let mirror = RootDisk {
        center: d.center.conj(),
        radius: d.radius.clone(),
    };
    let alone = set
        .roots
        .iter()
        .enumerate()
        .all(|(j, other)| j == i || !mirror.meets(other));
    alone.then_some(true)
}

/// Position of root `i` against the unit circle. On-circle answers are only
/// given for self-reciprocal input, where `1/conj(z)` is again a root.
pub fn unit_position(set: &CertifiedRootSet, i: usize, self_reciprocal: bool) -> Option<UnitPosition> {
    let prec = set.precision_bits;
    let one = mp::from_i64(1, prec);
    let d = &set.roots[i];
    let (lo, hi) = disk_modulus_bounds(d);
    if certainly_less(&one, &lo, prec) {
        return Some(UnitPosition::Outside);
    }
    if certainly_less(&hi, &one, prec) {
        return Some(UnitPosition::Inside);
    }
    if !self_reciprocal || !certainly_less(&mp::from_i64(0, prec), &lo, prec) {
        return None;
    }
    // image of the disk under z -> 1/conj(z)
    let denom = d.center.norm_sqr() - &d.radius * &d.radius;
    let slackened = &d.radius * &(&one + &slack(prec));
    let image = RootDisk {
        center: Complex::new(&d.center.re / &denom, &d.center.im / &denom),
        radius: &slackened / &denom,
    };
    let alone = set
        .roots
        .iter()
        .enumerate()
        .all(|(j, other)| j == i || !image.meets(other));
    alone.then_some(UnitPosition::OnCircle)
}

/// Sign of a certified real root.
fn real_sign(set: &CertifiedRootSet, i: usize) -> Option<std::cmp::Ordering> {
    let d = &set.roots[i];
    let prec = set.precision_bits;
    if certainly_less(&d.radius, &mp::abs(&d.center.re), prec) {
        Some(mp::cmp(&d.center.re, &mp::from_i64(0, prec)))
    } else {
        None
    }
}

/// Unit-circle counts for a certified set; `None` if any disk is undecided.
pub fn profile_of(set: &CertifiedRootSet, self_reciprocal: bool) -> Option<ModulusProfile> {
    let mut profile = ModulusProfile {
        inside: 0,
        on_circle: 0,
        outside: 0,
        dominant: (0.0, 0.0),
    };
    let mut best: Option<(Real, usize)> = None;
    for i in 0..set.len() {
        match unit_position(set, i, self_reciprocal)? {
            UnitPosition::Inside => profile.inside += 1,
            UnitPosition::OnCircle => profile.on_circle += 1,
            UnitPosition::Outside => profile.outside += 1,
        }
        let m = set.roots[i].center.abs();
        if best.as_ref().map_or(true, |(b, _)| m > *b) {
            best = Some((m, i));
        }
    }
    if let Some((_, i)) = best {
        profile.dominant = set.roots[i].center.to_f64();
    }
    Some(profile)
}

/// Certified unit-circle profile of a squarefree polynomial. On-circle roots
/// can only be certified for self-reciprocal input; other polynomials with a
/// root of modulus one exhaust the precision budget.
pub fn modulus_profile(f: &IntPoly, cfg: &SolverConfig) -> Result<ModulusProfile, ClassifyError> {
    let recip = f.is_self_reciprocal();
    refine(f, cfg, |set| profile_of(set, recip))
}

/// Certified numbers of positive and negative real roots.
pub fn real_root_counts(f: &IntPoly, cfg: &SolverConfig) -> Result<(usize, usize), ClassifyError> {
    refine(f, cfg, |set| {
        let (mut pos, mut neg) = (0, 0);
        for i in 0..set.len() {
            if root_is_real(set, i)? {
                match real_sign(set, i)? {
                    std::cmp::Ordering::Greater => pos += 1,
                    std::cmp::Ordering::Less => neg += 1,
                    std::cmp::Ordering::Equal => return None,
                }
            }
        }
        Some((pos, neg))
    })
}

/// Certified disks of the real roots, sorted by center.
pub fn real_roots(f: &IntPoly, cfg: &SolverConfig) -> Result<Vec<RootDisk>, ClassifyError> {
    refine(f, cfg, |set| {
        let mut out = Vec::new();
        for i in 0..set.len() {
            if root_is_real(set, i)? {
                out.push(set.roots[i].clone());
            }
        }
        out.sort_by(|a, b| mp::cmp(&a.center.re, &b.center.re));
        Some(out)
    })
}

/// Decide whether a positive real root exceeds every other root in modulus
/// and 1. `Some(Some(i))` names it, `Some(None)` means there is none.
fn perron_root(set: &CertifiedRootSet) -> Option<Option<usize>> {
    let prec = set.precision_bits;
    let mut reals = Vec::new();
    for i in 0..set.len() {
        if root_is_real(set, i)? {
            reals.push(i);
        }
    }
    let zero = mp::from_i64(0, prec);
    let Some(&lam) = reals
        .iter()
        .filter(|&&i| set.roots[i].center.re > zero)
        .max_by(|&&i, &&j| mp::cmp(&set.roots[i].center.re, &set.roots[j].center.re))
    else {
        return Some(None);
    };
    let d = &set.roots[lam];
    let lam_lo = &d.center.re - &d.radius;
    let lam_hi = &d.center.re + &d.radius;
    let one = mp::from_i64(1, prec);
    if certainly_less(&lam_hi, &one, prec) {
        return Some(None);
    }
    if !certainly_less(&one, &lam_lo, prec) {
        return None;
    }
    for (j, other) in set.roots.iter().enumerate() {
        if j == lam {
            continue;
        }
        let (lo, hi) = disk_modulus_bounds(other);
        if certainly_less(&hi, &lam_lo, prec) {
            continue;
        }
        if certainly_less(&lam_hi, &lo, prec) {
            return Some(None);
        }
        return None;
    }
    Some(Some(lam))
}

/// Largest `k` with `f(x) = g(x^k)`.
fn exponent_stride(f: &IntPoly) -> usize {
    f.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .fold(0usize, |acc, (i, _)| acc.gcd(&i))
}

struct Analysis {
    lambda: Option<usize>,
    profile: ModulusProfile,
    set: CertifiedRootSet,
}

fn subclass(f: &IntPoly, a: &Analysis, lam: usize) -> Option<Subclass> {
    let n = f.deg();
    let ModulusProfile {
        inside,
        on_circle,
        outside,
        ..
    } = a.profile;
    if inside + 1 == n {
        return Some(Subclass::Pisot);
    }
    if n >= 4 && n % 2 == 0 && f.is_self_reciprocal() && (inside, on_circle, outside) == (1, n - 2, 1) {
        // the root inside must be 1/lambda
        let set = &a.set;
        let prec = set.precision_bits;
        let inner = (0..set.len()).find(|&i| {
            i != lam && unit_position(set, i, true) == Some(UnitPosition::Inside)
        })?;
        let (l, li) = (&set.roots[lam], &set.roots[inner]);
        let prod = l.center.mul(&li.center);
        let dev = prod.sub(&Complex::real(mp::from_i64(1, prec), prec)).abs();
        let bound = l.center.abs() * &li.radius
            + li.center.abs() * &l.radius
            + &l.radius * &li.radius
            + slack(prec) * mp::from_i64(4, prec);
        return (dev <= bound).then_some(Subclass::Salem);
    }
    if inside == 1 && outside >= 2 {
        return Some(Subclass::AntiPisot);
    }
    Some(Subclass::StrictlyPerron)
}

fn classify_degree_one(f: &IntPoly) -> Classification {
    let root = -f.constant_term();
    let profile = ModulusProfile {
        inside: usize::from(root.abs() < BigInt::one()),
        on_circle: usize::from(root.abs() == BigInt::one()),
        outside: usize::from(root.abs() > BigInt::one()),
        dominant: (mp::to_f64(&mp::from_bigint(&root, 64)), 0.0),
    };
    let perron = root > BigInt::one();
    Classification {
        poly: f.clone(),
        kind: if perron {
            ClassKind::Perron(Subclass::Pisot)
        } else {
            ClassKind::NoPerronRoot
        },
        lambda: perron.then(|| mp::from_bigint(&root, 64)),
        profile: Some(profile),
        precision_bits: 0,
    }
}

/// Classify a monic integer polynomial by the moduli of its roots.
pub fn classify(f: &IntPoly, cfg: &SolverConfig) -> Result<Classification, ClassifyError> {
    let n = match f.degree() {
        None => return Err(ClassifyError::ZeroPolynomial),
        Some(0) => return Err(ClassifyError::ConstantPolynomial),
        Some(n) => n,
    };
    if !f.is_monic() {
        return Err(ClassifyError::NotMonic);
    }
    if !crate::irreducible::is_irreducible(f, cfg)? {
        return Ok(Classification {
            poly: f.clone(),
            kind: ClassKind::NotIrreducible,
            lambda: None,
            profile: None,
            precision_bits: 0,
        });
    }
    if n == 1 {
        return Ok(classify_degree_one(f));
    }
    let recip = f.is_self_reciprocal();
    // roots of g(x^k) come in orbits of equal modulus
    let stride = exponent_stride(f);
    let analysis = refine(f, cfg, |set| {
        let profile = profile_of(set, recip)?;
        let lambda = if stride >= 2 { None } else { perron_root(set)? };
        Some(Analysis {
            lambda,
            profile,
            set: set.clone(),
        })
    })?;
    let kind = match analysis.lambda {
        None => ClassKind::NoPerronRoot,
        Some(lam) => match subclass(f, &analysis, lam) {
            Some(s) => ClassKind::Perron(s),
            None => {
                return Err(ClassifyError::PrecisionExhausted {
                    bits: analysis.set.precision_bits,
                })
            }
        },
    };
    Ok(Classification {
        poly: f.clone(),
        kind,
        lambda: analysis.lambda.map(|i| analysis.set.roots[i].center.re.clone()),
        profile: Some(analysis.profile),
        precision_bits: analysis.set.precision_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn lehmer() -> IntPoly {
        p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    }

    fn run(c: &[i64]) -> Classification {
        classify(&p(c), &SolverConfig::default()).unwrap()
    }

    #[test]
    fn corpus() {
        assert_eq!(run(&[-1, -1, 1]).kind, ClassKind::Perron(Subclass::Pisot));
        assert_eq!(run(&[-3, -1, 1]).kind, ClassKind::Perron(Subclass::StrictlyPerron));
        assert_eq!(run(&[-11, -1, 1]).kind, ClassKind::Perron(Subclass::StrictlyPerron));
        let l = classify(&lehmer(), &SolverConfig::default()).unwrap();
        assert_eq!(l.kind, ClassKind::Perron(Subclass::Salem));
        let lam = l.lambda_f64().unwrap();
        assert!(lam > 1.17627 && lam < 1.17629, "{lam}");
        // smallest Pisot number: x^3 - x - 1
        assert_eq!(run(&[-1, -1, 0, 1]).kind, ClassKind::Perron(Subclass::Pisot));
        // x^3 - x^2 - 5: complex pair of modulus ~1.537
        assert_eq!(run(&[-5, 0, -1, 1]).kind, ClassKind::Perron(Subclass::StrictlyPerron));
    }

    #[test]
    fn cubic_witnesses() {
        // roots near 3.94, 0.54, -0.47
        let c = run(&[1, 0, -4, 1]);
        assert_eq!(c.profile.unwrap().counts(), (2, 0, 1));
        assert_eq!(c.kind, ClassKind::Perron(Subclass::Pisot));
        // roots near 5.05, 1.84, 0.108
        let c = run(&[-1, 10, -7, 1]);
        assert_eq!(c.profile.unwrap().counts(), (1, 0, 2));
        assert_eq!(c.kind, ClassKind::Perron(Subclass::AntiPisot));
        // roots near 2.35, 0.167, -2.53: the negative root is larger
        let c = run(&[1, -6, 0, 1]);
        assert_eq!(c.kind, ClassKind::NoPerronRoot);
        assert_eq!(c.profile.unwrap().counts(), (1, 0, 2));
    }

    #[test]
    fn no_perron_root_cases() {
        // x^2 - 2: roots +-sqrt 2 tie in modulus
        assert_eq!(run(&[-2, 0, 1]).kind, ClassKind::NoPerronRoot);
        // x^2 + x + 1: roots on the unit circle, no real root
        assert_eq!(run(&[1, 1, 1]).kind, ClassKind::NoPerronRoot);
        // x^2 - x + 3: complex pair
        assert_eq!(run(&[3, -1, 1]).kind, ClassKind::NoPerronRoot);
        // x + 5: root -5
        assert_eq!(run(&[5, 1]).kind, ClassKind::NoPerronRoot);
        assert_eq!(run(&[-5, 1]).kind, ClassKind::Perron(Subclass::Pisot));
    }

    #[test]
    fn reducible_and_invalid_input() {
        assert_eq!(run(&[-3, -2, 1]).kind, ClassKind::NotIrreducible);
        let cfg = SolverConfig::default();
        assert_eq!(classify(&p(&[1, 2]), &cfg).unwrap_err(), ClassifyError::NotMonic);
        assert_eq!(classify(&p(&[4]), &cfg).unwrap_err(), ClassifyError::ConstantPolynomial);
    }

    #[test]
    fn profiles() {
        let cfg = SolverConfig::default();
        let golden = modulus_profile(&p(&[-1, -1, 1]), &cfg).unwrap();
        assert_eq!(golden.counts(), (1, 0, 1));
        assert!((golden.dominant().re - 1.618_033_988_75).abs() < 1e-10);
        let l = modulus_profile(&lehmer(), &cfg).unwrap();
        assert_eq!(l.counts(), (1, 8, 1));
        assert!((l.dominant().re - 1.176_280_818).abs() < 1e-8);
        let c = modulus_profile(&p(&[-5, 0, -1, 1]), &cfg).unwrap();
        assert_eq!(c.counts(), (0, 0, 3));
        assert!((c.dominant().re - 2.1163).abs() < 1e-4);
    }

    #[test]
    fn real_counts() {
        let cfg = SolverConfig::default();
        assert_eq!(real_root_counts(&p(&[-3, -1, 1]), &cfg).unwrap(), (1, 1));
        assert_eq!(real_root_counts(&p(&[-5, 0, -1, 1]), &cfg).unwrap(), (1, 0));
        assert_eq!(real_root_counts(&p(&[1, 0, 1]), &cfg).unwrap(), (0, 0));
        assert_eq!(real_root_counts(&p(&[1, -6, 0, 1]), &cfg).unwrap(), (2, 1));
    }

    #[test]
    fn json_shape() {
        let c = run(&[-1, -1, 1]);
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["class"], "Perron");
        assert_eq!(v["subclass"], "Pisot");
        assert_eq!(v["profile"]["inside"], 1);
        assert_eq!(v["profile"]["on"], 0);
        assert_eq!(v["profile"]["outside"], 1);
        assert!(v["lambda"].as_str().unwrap().starts_with("1.6180339887498948482"));
        assert_eq!(v["poly"], "-1,-1,1");
    }
}
