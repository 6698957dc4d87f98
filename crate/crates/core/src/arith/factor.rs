use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::prime::{is_prime, small_primes};

/// Default number of Pollard-rho iterations allowed per factorization.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("{0} is not prime")]
    NotPrime(BigUint),
}

/// Prime factorization of a positive integer, possibly partial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    /// Prime factors with exponents, ascending by prime.
    pub factors: Vec<(BigUint, u32)>,
    /// Unfactored remainder; one when the factorization is complete.
    pub cofactor: BigUint,
    pub complete: bool,
}

impl Factorization {
    /// Product of all listed prime powers times the cofactor.
    pub fn product(&self) -> BigUint {
        self.factors
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub fn exponent_of(&self, q: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(p, _)| p == q)
            .map_or(0, |(_, e)| *e)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        if !self.cofactor.is_one() {
            parts.push(format!("[{}]", self.cofactor));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join(" * "))
    }
}

/// Outcome of a squarefree test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SquarefreeStatus {
    Squarefree,
    /// Carries a prime whose square divides the input.
    NotSquarefree(BigUint),
    /// Budget exhausted; carries the unresolved cofactor.
    Unknown(BigUint),
}

impl fmt::Display for SquarefreeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquarefreeStatus::Squarefree => write!(f, "Squarefree"),
            SquarefreeStatus::NotSquarefree(q) => write!(f, "NotSquarefree({q})"),
            SquarefreeStatus::Unknown(c) => write!(f, "Unknown({c})"),
        }
    }
}

impl std::str::FromStr for SquarefreeStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_suffix(')'))
                .map(|v| v.parse::<BigUint>().map_err(|e| e.to_string()))
        };
        if s == "Squarefree" {
            Ok(SquarefreeStatus::Squarefree)
        } else if let Some(q) = inner("NotSquarefree(") {
            Ok(SquarefreeStatus::NotSquarefree(q?))
        } else if let Some(c) = inner("Unknown(") {
            Ok(SquarefreeStatus::Unknown(c?))
        } else {
            Err(format!("unrecognised squarefree status `{s}`"))
        }
    }
}

/// Exponent of the prime `q` in `n`.
pub fn valuation(q: &BigUint, n: &BigInt) -> Result<u32, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    if !is_prime(q) {
        return Err(ArithError::NotPrime(q.clone()));
    }
    let mut m = n.magnitude().clone();
    let mut j = 0;
    loop {
        let (quo, rem) = m.div_rem(q);
        if !rem.is_zero() {
            return Ok(j);
        }
        m = quo;
        j += 1;
    }
}

/// Returns `(root, k)` with `root^k = n` and `k >= 2` maximal, if `n` is a
/// perfect power.
pub fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    if *n < BigUint::from(4u32) {
        return None;
    }
    let max_k = n.bits() as u32;
    for k in small_primes().iter().copied().take_while(|&k| k <= max_k) {
        let r = n.nth_root(k);
        if r.pow(k) == *n {
            return Some(match perfect_power(&r) {
                Some((base, e)) => (base, e * k),
                None => (r, k),
            });
        }
    }
    None
}

/// Strips prime factors up to the trial bound. Returns the prime powers found
/// and the remaining cofactor; `proven_prime` is set when the cofactor is known
/// to be prime because the trial primes passed its square root.
struct TrialResult {
    factors: Vec<(BigUint, u32)>,
    rest: BigUint,
    proven_prime: bool,
}

fn trial_divide(n: &BigUint, stop_on_square: bool) -> TrialResult {
    let mut rest = n.clone();
    let mut factors = Vec::new();
    let mut proven_prime = false;
    let mut exhausted_sqrt = false;
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            exhausted_sqrt = true;
            break;
        }
        if (&rest % p).is_zero() {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            factors.push((pb, e));
            if stop_on_square && e >= 2 {
                return TrialResult {
                    factors,
                    rest,
                    proven_prime: false,
                };
            }
        }
    }
    if exhausted_sqrt && !rest.is_one() {
        proven_prime = true;
    }
    TrialResult {
        factors,
        rest,
        proven_prime,
    }
}

/// Brent's variant of Pollard rho. Consumes iterations from `budget`.
fn pollard_brent(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    const BATCH: u64 = 128;
    let mut c = BigUint::one();
    while *budget > 0 {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                *budget = budget.saturating_sub(steps);
                g = q.gcd(n);
                k += steps;
                if *budget == 0 && g.is_one() {
                    return None;
                }
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return Some(g);
        }
        c += 1u32;
    }
    None
}

/// Splits composite parts until they are prime or the budget runs out.
/// Returns the unresolved composite parts with multiplicity.
fn split_all(
    parts: Vec<(BigUint, u32)>,
    budget: &mut u64,
    primes: &mut BTreeMap<BigUint, u32>,
) -> Vec<(BigUint, u32)> {
    let mut stack = parts;
    let mut unresolved = Vec::new();
    while let Some((m, mult)) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *primes.entry(m).or_insert(0) += mult;
            continue;
        }
        if let Some((root, k)) = perfect_power(&m) {
            stack.push((root, mult * k));
            continue;
        }
        match pollard_brent(&m, budget) {
            Some(d) => {
                let other = &m / &d;
                stack.push((d, mult));
                stack.push((other, mult));
            }
            None => unresolved.push((m, mult)),
        }
    }
    unresolved
}

/// Factor `n` by trial division to [`super::TRIAL_BOUND`], perfect-power
/// detection and Pollard rho limited to `budget` iterations.
pub fn factorize(n: &BigUint, budget: u64) -> Factorization {
    assert!(!n.is_zero(), "factorize requires a positive integer");
    let trial = trial_divide(n, false);
    let mut primes: BTreeMap<BigUint, u32> = trial.factors.into_iter().collect();
    let mut budget = budget;
    let unresolved = if trial.proven_prime {
        primes.insert(trial.rest, 1);
        Vec::new()
    } else {
        split_all(vec![(trial.rest, 1)], &mut budget, &mut primes)
    };
    let cofactor = unresolved
        .iter()
        .fold(BigUint::one(), |acc, (m, e)| acc * m.pow(*e));
    Factorization {
        factors: primes.into_iter().collect(),
        complete: cofactor.is_one(),
        cofactor,
    }
}

/// Decide whether `n` is squarefree, factoring only as far as needed.
pub fn squarefree_status(n: &BigUint, budget: u64) -> SquarefreeStatus {
    assert!(!n.is_zero(), "squarefree_status requires a positive integer");
    let trial = trial_divide(n, true);
    if let Some((p, _)) = trial.factors.iter().find(|(_, e)| *e >= 2) {
        return SquarefreeStatus::NotSquarefree(p.clone());
    }
    let rest = trial.rest;
    if rest.is_one() || trial.proven_prime || is_prime(&rest) {
        return SquarefreeStatus::Squarefree;
    }
    // every prime factor of `rest` exceeds the trial bound
    if let Some((root, _)) = perfect_power(&rest) {
        let mut primes = BTreeMap::new();
        let mut budget = budget;
        split_all(vec![(root, 1)], &mut budget, &mut primes);
        return match primes.into_keys().next() {
            Some(q) => SquarefreeStatus::NotSquarefree(q),
            None => SquarefreeStatus::Unknown(rest),
        };
    }
    let bound = BigUint::from(super::prime::TRIAL_BOUND as u64).pow(3);
    if rest < bound {
        // at most two prime factors, and not a square
        return SquarefreeStatus::Squarefree;
    }
    let mut primes = BTreeMap::new();
    let mut budget = budget;
    let unresolved = split_all(vec![(rest, 1)], &mut budget, &mut primes);
    if let Some((q, _)) = primes.iter().find(|(_, e)| **e >= 2) {
        return SquarefreeStatus::NotSquarefree(q.clone());
    }
    if let Some((m, _)) = unresolved.iter().find(|(_, e)| *e >= 2) {
        return SquarefreeStatus::Unknown(m.clone());
    }
    // a composite part might still share a prime with a found prime
    for (m, _) in &unresolved {
        for q in primes.keys() {
            if (m % q).is_zero() {
                return SquarefreeStatus::NotSquarefree(q.clone());
            }
        }
    }
    for (i, (m, _)) in unresolved.iter().enumerate() {
        let shares = unresolved[i + 1..].iter().any(|(o, _)| !m.gcd(o).is_one());
        if shares || *m >= bound {
            return SquarefreeStatus::Unknown(m.clone());
        }
    }
    SquarefreeStatus::Squarefree
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn naive_squarefree(n: u64) -> bool {
        let mut q = 2u64;
        while q * q <= n {
            if n % (q * q) == 0 {
                return false;
            }
            q += 1;
        }
        true
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&big(45), DEFAULT_BUDGET);
        assert_eq!(f.factors, vec![(big(3), 2), (big(5), 1)]);
        assert!(f.complete);
        let f = factorize(&big(3467), DEFAULT_BUDGET);
        assert_eq!(f.factors, vec![(big(3467), 1)]);
        let f = factorize(&big(58), DEFAULT_BUDGET);
        assert_eq!(f.factors, vec![(big(2), 1), (big(29), 1)]);
        let f = factorize(&big(1), DEFAULT_BUDGET);
        assert!(f.factors.is_empty() && f.complete);
    }

    #[test]
    fn factorize_beyond_trial_bound() {
        // two primes above 10^6, one squared
        let p = big(1_000_003);
        let q = big(999_999_000_001);
        let n = &p * &p * &q * big(12);
        let f = factorize(&n, DEFAULT_BUDGET);
        assert!(f.complete);
        assert_eq!(f.product(), n);
        assert_eq!(f.exponent_of(&p), 2);
        assert_eq!(f.exponent_of(&q), 1);
        assert_eq!(f.exponent_of(&big(2)), 2);
    }

    #[test]
    fn zero_budget_leaves_cofactor() {
        let n = big(1_000_003) * big(1_000_033) * big(1_000_037);
        let f = factorize(&n, 0);
        assert!(!f.complete);
        assert_eq!(f.cofactor, n);
        assert_eq!(f.product(), n);
        assert_eq!(squarefree_status(&n, 0), SquarefreeStatus::Unknown(n.clone()));
        assert_eq!(squarefree_status(&n, DEFAULT_BUDGET), SquarefreeStatus::Squarefree);
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_status(&big(13), DEFAULT_BUDGET), SquarefreeStatus::Squarefree);
        assert_eq!(
            squarefree_status(&big(45), DEFAULT_BUDGET),
            SquarefreeStatus::NotSquarefree(big(3))
        );
        assert_eq!(squarefree_status(&big(3467), DEFAULT_BUDGET), SquarefreeStatus::Squarefree);
        assert_eq!(squarefree_status(&big(1), DEFAULT_BUDGET), SquarefreeStatus::Squarefree);
    }

    #[test]
    fn squarefree_large_cofactors() {
        let p = big(1_000_003);
        let q = big(1_000_033);
        assert_eq!(
            squarefree_status(&(&p * &p * big(7)), DEFAULT_BUDGET),
            SquarefreeStatus::NotSquarefree(p.clone())
        );
        assert_eq!(
            squarefree_status(&(&p * &q), DEFAULT_BUDGET),
            SquarefreeStatus::Squarefree
        );
        let r = big(1_000_037);
        assert_eq!(
            squarefree_status(&(&p * &p * &q), DEFAULT_BUDGET),
            SquarefreeStatus::NotSquarefree(p.clone())
        );
        assert_eq!(
            squarefree_status(&(&p * &q * &r), DEFAULT_BUDGET),
            SquarefreeStatus::Squarefree
        );
    }

    #[test]
    fn squarefree_matches_naive_below_two_hundred_thousand() {
        for n in 1..200_000u64 {
            let expect = naive_squarefree(n);
            match squarefree_status(&big(n), DEFAULT_BUDGET) {
                SquarefreeStatus::Squarefree => assert!(expect, "{n}"),
                SquarefreeStatus::NotSquarefree(q) => {
                    assert!(!expect, "{n}");
                    let q = q.to_u64().unwrap();
                    assert_eq!(n % (q * q), 0);
                }
                SquarefreeStatus::Unknown(_) => panic!("unknown at {n}"),
            }
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&big(3), &BigInt::from(45)), Ok(2));
        assert_eq!(valuation(&big(2), &BigInt::from(58)), Ok(1));
        assert_eq!(valuation(&big(5), &BigInt::from(13)), Ok(0));
        assert_eq!(valuation(&big(5), &BigInt::from(-125)), Ok(3));
        assert_eq!(valuation(&big(5), &BigInt::zero()), Err(ArithError::ZeroValuation));
        assert!(matches!(valuation(&big(4), &BigInt::from(8)), Err(ArithError::NotPrime(_))));
    }

    #[test]
    fn perfect_powers() {
        assert_eq!(perfect_power(&big(64)), Some((big(2), 6)));
        assert_eq!(perfect_power(&big(1_000_003 * 1_000_003)), Some((big(1_000_003), 2)));
        assert_eq!(perfect_power(&big(72)), None);
        assert_eq!(perfect_power(&big(3)), None);
    }

    #[test]
    fn status_text_round_trip() {
        for s in [
            SquarefreeStatus::Squarefree,
            SquarefreeStatus::NotSquarefree(big(3)),
            SquarefreeStatus::Unknown(big(1_000_003 * 1_000_033)),
        ] {
            assert_eq!(s.to_string().parse::<SquarefreeStatus>(), Ok(s));
        }
    }
}
