//! The trinomials `f(x) = x^n - a x^(n-1) - p` with `p` prime.
//!
//! Closed forms: `G(p) = n^n p + a^n (n-1)^(n-1)` and
//! `disc(f) = (-1)^((n-1)(n+2)/2) p^(n-2) G(p)`. The polynomial is reducible
//! exactly when `n` is even and `p = a + 1` (then `x = -1` is a root), and for
//! `gcd(a, n) = 1` it is monogenic exactly when `G(p)` is squarefree.
//!
//! [`strictly_perron_certificate`] runs every closed form against its
//! independent oracle and refuses to return a verdict if any pair disagrees.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime_u64, squarefree_status, SquarefreeStatus, DEFAULT_BUDGET};
use crate::classify::{
    self, characteristic_polynomial, classify, companion_matrix, dominant_eigenvalue,
    matrix_irreducible, mp, ClassKind, Classification, ClassifyError, SolverConfig, Subclass,
};
use crate::monogenic::{monogenic, Method, MonogenicError, MonogenicityReport, Verdict};
use crate::poly::{discriminant_resultant, IntPoly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("degree n = {0} must be at least 2")]
    DegreeTooSmall(u32),
    #[error("a must be at least 1")]
    ZeroA,
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("f_(n={n}, a={a}, p={p}) is reducible")]
    Reducible { n: u32, a: u64, p: u64 },
    #[error("gcd(a, n) != 1 for (n={n}, a={a})")]
    NotCoprime { n: u32, a: u64 },
    #[error("violation at (n={n}, a={a}, p={p}): {property}")]
    Violation { n: u32, a: u64, p: u64, property: String },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Monogenic(#[from] MonogenicError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `(n, a, p)` with `n >= 2`, `a >= 1` and `p` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyParams {
    pub n: u32,
    pub a: u64,
    pub p: u64,
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, a={}, p={})", self.n, self.a, self.p)
    }
}

impl FamilyParams {
    pub fn new(n: u32, a: u64, p: u64) -> Result<Self, FamilyError> {
        if n < 2 {
            return Err(FamilyError::DegreeTooSmall(n));
        }
        if a == 0 {
            return Err(FamilyError::ZeroA);
        }
        if !is_prime_u64(p) {
            return Err(FamilyError::NotPrime(p));
        }
        Ok(FamilyParams { n, a, p })
    }

    pub fn coprime(&self) -> bool {
        self.a.gcd(&(self.n as u64)) == 1
    }

    /// `gcd(a, n) = 1` and `p > a + 1`.
    pub fn theorem_applicable(&self) -> bool {
        self.coprime() && self.p > self.a + 1
    }

    fn violation(&self, property: impl Into<String>) -> FamilyError {
        FamilyError::Violation {
            n: self.n,
            a: self.a,
            p: self.p,
            property: property.into(),
        }
    }
}

/// `x^n - a x^(n-1) - p`.
pub fn build(params: &FamilyParams) -> IntPoly {
    let n = params.n as usize;
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = -BigInt::from(params.p);
    c[n - 1] = -BigInt::from(params.a);
    c[n] = BigInt::one();
    IntPoly::new(c)
}

/// `n^n p + a^n (n-1)^(n-1)`.
pub fn g_value(params: &FamilyParams) -> BigInt {
    let n = params.n;
    BigInt::from(n).pow(n) * BigInt::from(params.p)
        + BigInt::from(params.a).pow(n) * BigInt::from(n - 1).pow(n - 1)
}

/// `(-1)^((n-1)(n+2)/2) p^(n-2) G(p)`.
pub fn discriminant_closed(params: &FamilyParams) -> BigInt {
    let n = params.n as u64;
    let magnitude = BigInt::from(params.p).pow(params.n - 2) * g_value(params);
    if ((n - 1) * (n + 2) / 2) % 2 == 1 {
        -magnitude
    } else {
        magnitude
    }
}

/// False exactly when `n` is even and `p = a + 1`.
pub fn family_irreducible(params: &FamilyParams) -> bool {
    !(params.n % 2 == 0 && params.p == params.a + 1)
}

/// Monogenic iff `G(p)` is squarefree. Needs the irreducible, coprime case.
pub fn family_monogenic(params: &FamilyParams, budget: u64) -> Result<Verdict, FamilyError> {
    if !family_irreducible(params) {
        return Err(FamilyError::Reducible {
            n: params.n,
            a: params.a,
            p: params.p,
        });
    }
    if !params.coprime() {
        return Err(FamilyError::NotCoprime {
            n: params.n,
            a: params.a,
        });
    }
    let g = g_value(params).to_biguint().expect("G is positive");
    Ok(match squarefree_status(&g, budget) {
        SquarefreeStatus::Squarefree => Verdict::Monogenic,
        SquarefreeStatus::NotSquarefree(q) => Verdict::NotMonogenic(q),
        SquarefreeStatus::Unknown(c) => Verdict::Unknown(format!("G has unfactored part {c}")),
    })
}

/// Certified numbers of positive and negative real roots.
pub fn descartes_profile(params: &FamilyParams, cfg: &SolverConfig) -> Result<(usize, usize), FamilyError> {
    Ok(classify::real_root_counts(&build(params), cfg)?)
}

/// `(1, 1)` for even `n`, `(1, 0)` for odd `n`.
pub fn expected_descartes(n: u32) -> (usize, usize) {
    if n % 2 == 0 {
        (1, 1)
    } else {
        (1, 0)
    }
}

/// For even `n`, is the negative real root certified to have modulus above 1?
pub fn negative_root_beyond_one(params: &FamilyParams, cfg: &SolverConfig) -> Result<bool, FamilyError> {
    let roots = classify::real_roots(&build(params), cfg)?;
    let Some(neg) = roots.first() else {
        return Ok(false);
    };
    let prec = neg.center.re.precision();
    let upper = &neg.center.re + &neg.radius;
    Ok(classify::certainly_less(&upper, &mp::from_i64(-1, prec), prec))
}

/// Are all roots certified to lie outside the unit circle?
pub fn all_roots_outside_unit_circle(params: &FamilyParams, cfg: &SolverConfig) -> Result<bool, FamilyError> {
    let profile = classify::modulus_profile(&build(params), cfg)?;
    Ok(profile.counts() == (0, 0, params.n as usize))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineConfig {
    /// Pollard-rho iteration budget for each factorization.
    pub budget: u64,
    pub solver: SolverConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            budget: DEFAULT_BUDGET,
            solver: SolverConfig::default(),
        }
    }
}

/// Companion-matrix cross-checks.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixChecks {
    pub char_poly_matches: bool,
    pub strongly_connected: bool,
    pub dominant_eigenvalue: f64,
}

pub const CONCLUSION_HIT: &str = "monogenic strictly-Perron";
pub const CONCLUSION_NOT_MONOGENIC: &str = "strictly-Perron, NOT monogenic";
pub const CONCLUSION_UNKNOWN: &str = "strictly-Perron, monogenicity unknown";
pub const CONCLUSION_REDUCIBLE: &str = "reducible";

/// Agreement tolerance between power iteration and the certified root.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Certificate {
    pub params: FamilyParams,
    pub poly: IntPoly,
    pub disc: BigInt,
    pub disc_oracle: BigInt,
    pub g: BigInt,
    pub g_status: SquarefreeStatus,
    pub irreducible: bool,
    /// Absent for reducible input.
    pub monogenic: Option<MonogenicityReport>,
    /// Only in the coprime irreducible case.
    pub family_verdict: Option<Verdict>,
    pub classification: Classification,
    pub matrix: MatrixChecks,
    /// Absent for reducible input.
    pub descartes: Option<(usize, usize)>,
    pub theorem_applicable: bool,
    pub conclusion: String,
}

fn same_kind(a: &Verdict, b: &Verdict) -> Option<bool> {
    match (a, b) {
        (Verdict::Unknown(_), _) | (_, Verdict::Unknown(_)) => None,
        (Verdict::Monogenic, Verdict::Monogenic) => Some(true),
        (Verdict::NotMonogenic(_), Verdict::NotMonogenic(_)) => Some(true),
        _ => Some(false),
    }
}

/// Full pipeline for one `(n, a, p)`. Every stage runs even after a negative
/// answer; any disagreement between a closed form and its oracle is an error.
pub fn strictly_perron_certificate(
    params: &FamilyParams,
    cfg: &PipelineConfig,
) -> Result<Certificate, FamilyError> {
    let f = build(params);
    let disc = discriminant_closed(params);
    let disc_oracle = discriminant_resultant(&f)?;
    if disc != disc_oracle {
        return Err(params.violation(format!(
            "closed-form discriminant {disc} != resultant discriminant {disc_oracle}"
        )));
    }
    let g = g_value(params);
    let g_status = squarefree_status(&g.to_biguint().expect("G is positive"), cfg.budget);
    let irreducible = family_irreducible(params);

    let classification = classify(&f, &cfg.solver)?;
    if (classification.kind == ClassKind::NotIrreducible) == irreducible {
        return Err(params.violation(format!(
            "irreducibility dichotomy says {irreducible}, oracle classification is {}",
            classification.kind
        )));
    }

    let (monogenic_report, family_verdict, descartes) = if irreducible {
        let report = monogenic(&f, Method::Both, cfg.budget)?;
        let fam = if params.coprime() {
            let v = family_monogenic(params, cfg.budget)?;
            if same_kind(&v, &report.verdict) == Some(false) {
                return Err(params.violation(format!(
                    "squarefree criterion gives {v}, local index tests give {}",
                    report.verdict
                )));
            }
            Some(v)
        } else {
            None
        };
        let counts = classify::real_root_counts(&f, &cfg.solver)?;
        if counts != expected_descartes(params.n) {
            return Err(params.violation(format!("real-root counts {counts:?}")));
        }
        (Some(report), fam, Some(counts))
    } else {
        (None, None, None)
    };

    let m = companion_matrix(params.n as usize, params.a, params.p);
    let char_poly_matches = characteristic_polynomial(&m) == f;
    let strongly_connected = matrix_irreducible(&m);
    let eig = dominant_eigenvalue(&m)?;
    if !char_poly_matches {
        return Err(params.violation("companion characteristic polynomial differs from f"));
    }
    if !strongly_connected {
        return Err(params.violation("companion digraph not strongly connected"));
    }
    if let Some(lam) = classification.lambda_f64() {
        if (lam - eig).abs() > EIGENVALUE_TOLERANCE {
            return Err(params.violation(format!(
                "power iteration {eig} vs certified root {lam}"
            )));
        }
    }

    let theorem_applicable = params.theorem_applicable() && irreducible;
    let verdict = monogenic_report.as_ref().map(|r| &r.verdict);
    let conclusion = match (classification.kind, verdict) {
        (ClassKind::NotIrreducible, _) => CONCLUSION_REDUCIBLE.to_string(),
        (ClassKind::Perron(Subclass::StrictlyPerron), Some(Verdict::Monogenic)) => CONCLUSION_HIT.to_string(),
        (ClassKind::Perron(Subclass::StrictlyPerron), Some(Verdict::NotMonogenic(_))) => {
            CONCLUSION_NOT_MONOGENIC.to_string()
        }
        (ClassKind::Perron(Subclass::StrictlyPerron), _) => CONCLUSION_UNKNOWN.to_string(),
        (kind, _) => format!("not strictly-Perron: {kind}"),
    };
    if theorem_applicable && g_status == SquarefreeStatus::Squarefree && conclusion != CONCLUSION_HIT {
        return Err(params.violation(format!(
            "hypotheses hold with G squarefree but the conclusion is `{conclusion}`"
        )));
    }

    Ok(Certificate {
        params: *params,
        poly: f,
        disc,
        disc_oracle,
        g,
        g_status,
        irreducible,
        monogenic: monogenic_report,
        family_verdict,
        classification,
        matrix: MatrixChecks {
            char_poly_matches,
            strongly_connected,
            dominant_eigenvalue: eig,
        },
        descartes,
        theorem_applicable,
        conclusion,
    })
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

mod display_str {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Flat, serializable view of a [`Certificate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub n: u32,
    pub a: u64,
    pub p: u64,
    pub poly: IntPoly,
    #[serde(with = "decimal_int")]
    pub disc: BigInt,
    #[serde(rename = "G", with = "decimal_int")]
    pub g: BigInt,
    #[serde(rename = "G_status", with = "display_str")]
    pub g_status: SquarefreeStatus,
    pub irreducible: bool,
    pub monogenic: Option<Verdict>,
    pub class: String,
    pub lambda: Option<String>,
    pub theorem_applicable: bool,
    pub conclusion: String,
}

impl Certificate {
    pub fn record(&self) -> CertificateRecord {
        CertificateRecord {
            n: self.params.n,
            a: self.params.a,
            p: self.params.p,
            poly: self.poly.clone(),
            disc: self.disc.clone(),
            g: self.g.clone(),
            g_status: self.g_status.clone(),
            irreducible: self.irreducible,
            monogenic: self.monogenic.as_ref().map(|r| r.verdict.clone()),
            class: self.classification.kind.to_string(),
            lambda: self.classification.lambda_decimal(classify::LAMBDA_DIGITS),
            theorem_applicable: self.theorem_applicable,
            conclusion: self.conclusion.clone(),
        }
    }

    pub fn is_hit(&self) -> bool {
        self.conclusion == CONCLUSION_HIT
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn fp(n: u32, a: u64, p: u64) -> FamilyParams {
        FamilyParams::new(n, a, p).unwrap()
    }

    #[test]
    fn build_examples() {
        assert_eq!(build(&fp(2, 1, 3)), IntPoly::from_i64(&[-3, -1, 1]));
        assert_eq!(build(&fp(4, 3, 5)), IntPoly::from_i64(&[-5, 0, 0, -3, 1]));
        assert_eq!(build(&fp(3, 1, 2)), IntPoly::from_i64(&[-2, 0, -1, 1]));
        assert_eq!(FamilyParams::new(2, 1, 4), Err(FamilyError::NotPrime(4)));
        assert_eq!(FamilyParams::new(1, 1, 3), Err(FamilyError::DegreeTooSmall(1)));
        assert_eq!(FamilyParams::new(2, 0, 3), Err(FamilyError::ZeroA));
    }

    #[test]
    fn closed_forms() {
        assert_eq!(g_value(&fp(2, 1, 3)), BigInt::from(13));
        assert_eq!(g_value(&fp(3, 1, 2)), BigInt::from(58));
        assert_eq!(g_value(&fp(4, 3, 5)), BigInt::from(3467));
        assert_eq!(discriminant_closed(&fp(2, 1, 3)), BigInt::from(13));
        assert_eq!(discriminant_closed(&fp(3, 1, 2)), BigInt::from(-116));
        assert_eq!(discriminant_closed(&fp(4, 3, 5)), BigInt::from(-86675));
    }

    #[test]
    fn closed_discriminant_matches_resultant() {
        for n in 2..=9 {
            for a in 1..=6 {
                for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
                    let params = fp(n, a, p);
                    assert_eq!(
                        discriminant_closed(&params),
                        discriminant_resultant(&build(&params)).unwrap(),
                        "{params}"
                    );
                }
            }
        }
    }

    #[test]
    fn dichotomy_examples() {
        assert!(!family_irreducible(&fp(2, 2, 3)));
        assert!(family_irreducible(&fp(3, 2, 3)));
        assert!(family_irreducible(&fp(2, 1, 3)));
        // x = -1 is a root in the excluded case
        let f = build(&fp(4, 4, 5));
        assert!(f.eval(&BigInt::from(-1)).is_zero());
    }

    #[test]
    fn monogenic_examples() {
        assert_eq!(family_monogenic(&fp(2, 1, 3), 1000).unwrap(), Verdict::Monogenic);
        assert_eq!(
            family_monogenic(&fp(2, 1, 11), 1000).unwrap(),
            Verdict::NotMonogenic(BigUint::from(3u32))
        );
        assert_eq!(family_monogenic(&fp(4, 3, 5), 1000).unwrap(), Verdict::Monogenic);
        assert!(matches!(family_monogenic(&fp(2, 2, 3), 1000), Err(FamilyError::Reducible { .. })));
        assert!(matches!(family_monogenic(&fp(4, 2, 5), 1000), Err(FamilyError::NotCoprime { .. })));
    }

    #[test]
    fn descartes_examples() {
        let cfg = SolverConfig::default();
        assert_eq!(descartes_profile(&fp(2, 1, 3), &cfg).unwrap(), (1, 1));
        assert_eq!(descartes_profile(&fp(3, 1, 5), &cfg).unwrap(), (1, 0));
        assert_eq!(descartes_profile(&fp(4, 3, 5), &cfg).unwrap(), (1, 1));
        assert!(negative_root_beyond_one(&fp(2, 1, 3), &cfg).unwrap());
        assert!(all_roots_outside_unit_circle(&fp(3, 2, 3), &cfg).unwrap());
        assert!(all_roots_outside_unit_circle(&fp(5, 4, 5), &cfg).unwrap());
    }

    #[test]
    fn certificates() {
        let cfg = PipelineConfig::default();
        let c = strictly_perron_certificate(&fp(4, 3, 5), &cfg).unwrap();
        assert_eq!(c.conclusion, CONCLUSION_HIT);
        assert!(c.theorem_applicable);
        let c = strictly_perron_certificate(&fp(2, 1, 11), &cfg).unwrap();
        assert_eq!(c.conclusion, CONCLUSION_NOT_MONOGENIC);
        let c = strictly_perron_certificate(&fp(2, 2, 3), &cfg).unwrap();
        assert_eq!(c.conclusion, CONCLUSION_REDUCIBLE);
        assert!(!c.theorem_applicable);
        assert!(c.monogenic.is_none());
        // p = a + 1 with odd n: irreducible, but p > a + 1 fails
        let c = strictly_perron_certificate(&fp(3, 2, 3), &cfg).unwrap();
        assert!(c.irreducible);
        assert!(!c.theorem_applicable);
    }

    #[test]
    fn record_json() {
        let c = strictly_perron_certificate(&fp(2, 1, 11), &PipelineConfig::default()).unwrap();
        let r = c.record();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "n", "a", "p", "poly", "disc", "G", "G_status", "irreducible", "monogenic", "class",
            "lambda", "theorem_applicable", "conclusion",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["G"], "45");
        assert_eq!(v["G_status"], "NotSquarefree(3)");
        assert_eq!(v["monogenic"], "NotMonogenic(3)");
        assert_eq!(v["class"], "Perron(StrictlyPerron)");
        assert!(v["lambda"].as_str().unwrap().starts_with("3.854101966"));
        let back: CertificateRecord = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
