//! Certified isolation of all complex roots.
//!
//! Approximations come from Aberth-Ehrlich iteration (first in `f64`, then in
//! multiprecision). Each approximation `z_i` gets the inclusion radius
//! `n |f(z_i)| / (|lc| prod_{j != i} |z_i - z_j|)`, inflated to absorb the
//! rounding error of its own evaluation. When these disks are pairwise
//! disjoint, each one holds exactly one root.

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use super::mp::{self, Complex, Real};
use super::ClassifyError;
use crate::poly::IntPoly;

/// Precision policy for certified root finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Mantissa bits of the first multiprecision pass.
    pub start_bits: usize,
    /// Number of precision doublings before giving up.
    pub max_escalations: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            start_bits: 64,
            max_escalations: 4,
        }
    }
}

impl SolverConfig {
    pub fn with_start_bits(bits: usize) -> Self {
        SolverConfig {
            start_bits: bits.max(32),
            ..Self::default()
        }
    }

    fn levels(&self) -> impl Iterator<Item = usize> {
        let start = self.start_bits.max(32);
        (0..=self.max_escalations).map(move |k| start << k)
    }
}

/// A disk `|z - center| <= radius` known to contain exactly one root when the
/// owning set is certified.
#[derive(Debug, Clone)]
pub struct RootDisk {
    pub center: Complex,
    pub radius: Real,
}

impl RootDisk {
    pub fn approx(&self) -> Complex64 {
        let (re, im) = self.center.to_f64();
        Complex64::new(re, im)
    }

    pub fn radius_f64(&self) -> f64 {
        mp::to_f64(&self.radius)
    }

    /// Do the closed disks intersect?
    pub fn meets(&self, other: &RootDisk) -> bool {
        let d = self.center.sub(&other.center).norm_sqr();
        let s = &self.radius + &other.radius;
        d <= &s * &s
    }
}

#[derive(Debug, Clone)]
pub struct CertifiedRootSet {
    pub roots: Vec<RootDisk>,
    pub precision_bits: usize,
    /// All disks pairwise disjoint with finite radii.
    pub certified: bool,
}

impl CertifiedRootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn approximations(&self) -> Vec<Complex64> {
        self.roots.iter().map(RootDisk::approx).collect()
    }

    /// Largest inclusion radius.
    pub fn max_radius(&self) -> f64 {
        self.roots
            .iter()
            .map(RootDisk::radius_f64)
            .fold(0.0, f64::max)
    }
}

fn f64_coeffs(f: &IntPoly) -> Vec<f64> {
    let lead = f.leading().and_then(ToPrimitive::to_f64).unwrap_or(1.0);
    f.coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY) / lead)
        .collect()
}

fn horner_f64(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn initial_guesses(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    // Fujiwara-style bound on root moduli
    let bound = (0..n)
        .map(|i| c[i].abs().powf(1.0 / (n - i) as f64))
        .fold(0.0_f64, f64::max)
        .max(1e-3);
    let radius = if c[0] != 0.0 {
        c[0].abs().powf(1.0 / n as f64).min(bound)
    } else {
        bound * 0.5
    };
    (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect()
}

/// Aberth-Ehrlich in double precision; a starting point for refinement.
pub fn aberth_f64(f: &IntPoly) -> Vec<Complex64> {
    let c = f64_coeffs(f);
    let n = c.len() - 1;
    let mut z = initial_guesses(&c);
    for _ in 0..500 {
        let mut worst = 0.0_f64;
        for i in 0..n {
            let (p, dp) = horner_f64(&c, z[i]);
            if p == Complex64::zero() {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                worst = worst.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    for (k, zi) in z.iter_mut().enumerate() {
        if !zi.is_finite() {
            *zi = Complex64::from_polar(1.0, 0.3 + k as f64);
        }
    }
    z
}

struct MpPoly {
    coeffs: Vec<Real>,
    abs_coeffs: Vec<Real>,
    prec: usize,
}

impl MpPoly {
    fn new(f: &IntPoly, prec: usize) -> Self {
        let coeffs: Vec<Real> = f.coeffs().iter().map(|c| mp::from_bigint(c, prec)).collect();
        let abs_coeffs = f
            .coeffs()
            .iter()
            .map(|c| mp::from_bigint(&c.abs(), prec))
            .collect();
        MpPoly {
            coeffs,
            abs_coeffs,
            prec,
        }
    }

    fn eval_with_derivative(&self, z: &Complex) -> (Complex, Complex) {
        let mut p = Complex::zero(self.prec);
        let mut dp = Complex::zero(self.prec);
        for a in self.coeffs.iter().rev() {
            dp = dp.mul(z).add(&p);
            p = p.mul(z);
            p.re = &p.re + a;
        }
        (p, dp)
    }

    fn eval(&self, z: &Complex) -> Complex {
        let mut p = Complex::zero(self.prec);
        for a in self.coeffs.iter().rev() {
            p = p.mul(z);
            p.re = &p.re + a;
        }
        p
    }

    /// `sum |c_k| |z|^k`, the scale of the rounding error of `eval`.
    fn abs_eval(&self, modulus: &Real) -> Real {
        let mut acc = mp::from_i64(0, self.prec);
        for a in self.abs_coeffs.iter().rev() {
            acc = &acc * modulus + a;
        }
        acc
    }
}

fn aberth_mp(poly: &MpPoly, z: &mut [Complex]) {
    let n = z.len();
    let prec = poly.prec;
    let tol = mp::pow2_neg(prec.saturating_sub(8), prec);
    let one = mp::from_i64(1, prec);
    for _ in 0..(2 * prec.ilog2() as usize + 40) {
        let mut converged = true;
        for i in 0..n {
            let (p, dp) = poly.eval_with_derivative(&z[i]);
            if p.is_zero() || dp.is_zero() {
                continue;
            }
            let ratio = p.div(&dp);
            let mut sum = Complex::zero(prec);
            for j in 0..n {
                if j != i {
                    let diff = z[i].sub(&z[j]);
                    if diff.is_zero() {
                        continue;
                    }
                    sum = sum.add(&Complex::real(one.clone(), prec).div(&diff));
                }
            }
            let denom = Complex::real(one.clone(), prec).sub(&ratio.mul(&sum));
            if denom.is_zero() {
                continue;
            }
            let step = ratio.div(&denom);
            z[i] = z[i].sub(&step);
            let scale = {
                let m = z[i].norm_sqr();
                if m > one {
                    m
                } else {
                    one.clone()
                }
            };
            if step.norm_sqr() > &(&tol * &tol) * &scale {
                converged = false;
            }
        }
        if converged {
            break;
        }
    }
}

fn inclusion_radii(f: &IntPoly, poly: &MpPoly, z: &[Complex]) -> Vec<Real> {
    let n = z.len();
    let prec = poly.prec;
    let lead = mp::from_bigint(&f.leading().expect("nonzero").abs(), prec);
    let u = mp::pow2_neg(prec.saturating_sub(1), prec);
    let nn = mp::from_i64(n as i64, prec);
    let eval_slack = &mp::from_i64(8 * n as i64 + 8, prec) * &u;
    let denom_shrink = mp::from_i64(1, prec) - &mp::from_i64(8 * n as i64 + 8, prec) * &u;
    let inflate = mp::from_i64(1, prec) + mp::pow2_neg(prec / 2, prec);
    let infinity = mp::from_f64(f64::MAX, prec);
    (0..n)
        .map(|i| {
            let value = poly.eval(&z[i]).abs();
            let scale = poly.abs_eval(&z[i].abs());
            let numerator = &nn * &(value + &eval_slack * &scale);
            let mut denom = lead.clone();
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    denom = &denom * &z[i].sub(zj).abs();
                }
            }
            if mp::is_zero(&denom) {
                return infinity.clone();
            }
            &(&numerator / &(&denom * &denom_shrink)) * &inflate
        })
        .collect()
}

/// One multiprecision pass at `prec` bits from the given starting points.
pub fn solve_at(f: &IntPoly, prec: usize, start: &[Complex64]) -> CertifiedRootSet {
    let poly = MpPoly::new(f, prec);
    let mut z: Vec<Complex> = start
        .iter()
        .map(|s| Complex::from_f64(s.re, s.im, prec))
        .collect();
    aberth_mp(&poly, &mut z);
    let radii = inclusion_radii(f, &poly, &z);
    let roots: Vec<RootDisk> = z
        .into_iter()
        .zip(radii)
        .map(|(center, radius)| RootDisk { center, radius })
        .collect();
    let limit = mp::from_f64(1e300, prec);
    let finite = roots.iter().all(|r| r.radius < limit);
    let disjoint = (0..roots.len())
        .all(|i| (i + 1..roots.len()).all(|j| !roots[i].meets(&roots[j])));
    CertifiedRootSet {
        roots,
        precision_bits: prec,
        certified: finite && disjoint,
    }
}

fn check_squarefree(f: &IntPoly) -> Result<(), ClassifyError> {
    match f.degree() {
        None => Err(ClassifyError::ZeroPolynomial),
        Some(0) => Err(ClassifyError::ConstantPolynomial),
        Some(_) => {
            if f.gcd(&f.derivative()).deg() > 0 {
                Err(ClassifyError::NotSquarefree)
            } else {
                Ok(())
            }
        }
    }
}

/// Run certified passes of increasing precision until `decide` returns a
/// value. `decide` sees only certified sets and returns `None` when some
/// disk is still too wide to settle its question.
pub fn refine<T>(
    f: &IntPoly,
    cfg: &SolverConfig,
    mut decide: impl FnMut(&CertifiedRootSet) -> Option<T>,
) -> Result<T, ClassifyError> {
    check_squarefree(f)?;
    let mut start = aberth_f64(f);
    let mut last_bits = cfg.start_bits;
    for bits in cfg.levels() {
        last_bits = bits;
        let set = solve_at(f, bits, &start);
        if set.certified {
            if let Some(out) = decide(&set) {
                return Ok(out);
            }
        }
        start = set.approximations();
    }
    Err(ClassifyError::PrecisionExhausted { bits: last_bits })
}

/// All roots of a squarefree polynomial inside pairwise disjoint certified disks.
pub fn complex_roots(f: &IntPoly, cfg: &SolverConfig) -> Result<CertifiedRootSet, ClassifyError> {
    refine(f, cfg, |set| Some(set.clone()))
}

/// Certified roots with every radius below `tolerance`.
pub fn complex_roots_within(
    f: &IntPoly,
    cfg: &SolverConfig,
    tolerance: f64,
) -> Result<CertifiedRootSet, ClassifyError> {
    refine(f, cfg, |set| {
        (set.max_radius() < tolerance).then(|| set.clone())
    })
}
