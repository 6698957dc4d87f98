use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Upper bound of the trial-division sieve.
pub const TRIAL_BOUND: u32 = 1_000_000;

/// Miller-Rabin with the first thirteen primes as witnesses is deterministic
/// below this value (Sorenson and Webster, 2015). Above it the test adds a
/// strong Lucas round, which has no known counterexample.
pub const DETERMINISTIC_BOUND: &str = "3317044064679887385961981";

const WITNESSES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

fn sieve() -> &'static (Vec<u32>, Vec<bool>) {
    static SIEVE: OnceLock<(Vec<u32>, Vec<bool>)> = OnceLock::new();
    SIEVE.get_or_init(|| {
        let limit = TRIAL_BOUND as usize;
        let mut composite = vec![false; limit + 1];
        composite[0] = true;
        composite[1] = true;
        let mut i = 2;
        while i * i <= limit {
            if !composite[i] {
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
            i += 1;
        }
        let primes = (2..=limit)
            .filter(|&k| !composite[k])
            .map(|k| k as u32)
            .collect();
        (primes, composite)
    })
}

/// All primes up to [`TRIAL_BOUND`], ascending.
pub fn small_primes() -> &'static [u32] {
    &sieve().0
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n <= TRIAL_BOUND as u64 {
        return !sieve().1[n as usize];
    }
    for &w in &WITNESSES {
        if n % w as u64 == 0 {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    // first twelve primes suffice below 3.18e23 > 2^64
    'witness: for &w in &WITNESSES[..12] {
        let mut x = pow_mod(w as u64, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigUint, base: &BigUint) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = x.modpow(&BigUint::from(2u32), n);
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol (a/n) for odd positive n.
fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    if x.is_odd() {
        (x + n) >> 1
    } else {
        x >> 1
    }
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: &BigUint) -> bool {
    let sqrt = n.sqrt();
    if &sqrt * &sqrt == *n {
        return false;
    }
    let n_int = BigInt::from(n.clone());
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, &n_int) {
            -1 => break,
            0 => {
                if d.magnitude() != n {
                    return false;
                }
            }
            _ => {}
        }
        d = if d.sign() == num_bigint::Sign::Plus {
            -(d + BigInt::from(2))
        } else {
            -(d - BigInt::from(2))
        };
    }
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d) / 4;

    let n_plus_1 = &n_int + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(&n_int);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&n_int);
        v = (&v * &v - (&qk << 1u32)).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
        if k.bit(i) {
            let u_next = half_mod(&p * &u + &v, &n_int).mod_floor(&n_int);
            let v_next = half_mod(&d * &u + &p * &v, &n_int).mod_floor(&n_int);
            u = u_next;
            v = v_next;
            qk = (&qk * &q).mod_floor(&n_int);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - (&qk << 1u32)).mod_floor(&n_int);
        qk = (&qk * &qk).mod_floor(&n_int);
        if v.is_zero() {
            return true;
        }
    }
    false
}

/// Primality of an unbounded non-negative integer.
///
/// Proven correct below [`DETERMINISTIC_BOUND`] (about 2^81); above that the
/// answer is a Baillie-PSW style verdict (thirteen Miller-Rabin rounds plus a
/// strong Lucas test).
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &w in &WITNESSES {
        if (n % w).is_zero() {
            return false;
        }
    }
    let all_rounds = WITNESSES
        .iter()
        .all(|&w| strong_probable_prime(n, &BigUint::from(w)));
    if !all_rounds {
        return false;
    }
    let bound: BigUint = DETERMINISTIC_BOUND.parse().expect("valid constant");
    if *n < bound {
        return true;
    }
    strong_lucas(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_values() {
        assert!(is_prime(&BigUint::from(2u32)));
        assert!(is_prime(&BigUint::from(3467u32)));
        assert!(!is_prime(&BigUint::from(45u32)));
        assert!(!is_prime(&BigUint::from(0u32)));
        assert!(!is_prime(&BigUint::from(1u32)));
    }

    #[test]
    fn agrees_with_trial_division_above_sieve() {
        for n in 1_000_000u64..1_003_000 {
            assert_eq!(is_prime_u64(n), naive(n), "n = {n}");
        }
        for n in [
            4_294_967_291u64,
            4_294_967_297,
            999_999_999_989,
            1_000_000_000_039,
        ] {
            assert_eq!(is_prime_u64(n), naive(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprime to bases 2..37 (Jiang and Deng)
        let n: BigUint = "318665857834031151167461".parse().unwrap();
        assert!(!is_prime(&n));
        // Carmichael numbers
        for n in [561u64, 41041, 825_265, 321_197_185, 3_215_031_751, 2_152_302_898_747] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(!is_prime_u64(3_825_123_056_546_413_051));
    }

    #[test]
    fn large_primes_and_products() {
        let m89 = (BigUint::one() << 89) - 1u32;
        let m107 = (BigUint::one() << 107) - 1u32;
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_prime(&m89));
        assert!(is_prime(&m107));
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m89 * &m107)));
        assert!(!is_prime(&((BigUint::one() << 128) + 1u32)));
        let u64_prime = BigUint::from(18_446_744_073_709_551_557u64);
        assert!(is_prime(&u64_prime));
        assert!(!is_prime(&(&u64_prime * &u64_prime)));
    }

    #[test]
    fn lucas_accepts_primes_and_rejects_composites() {
        for p in [1_000_003u64, 1_000_033, 998_244_353] {
            assert!(strong_lucas(&BigUint::from(p)));
        }
        for c in [1_000_003u64 * 1_000_033, 561 * 1_000_003] {
            assert!(!strong_lucas(&BigUint::from(c)));
        }
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        let p = BigInt::from(1_000_003);
        for a in 1..200 {
            let e = BigInt::from(a).modpow(&((&p - 1) / 2), &p);
            let expect = if e.is_one() { 1 } else { -1 };
            assert_eq!(jacobi(&BigInt::from(a), &p), expect, "a = {a}");
        }
    }
}
