//! Base-field parameters and small modular arithmetic.

use crate::{Error, Result};

/// Trial-division primality test; adequate for the field sizes and primes
/// this crate works with.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q = p^k`, returning `(p, k)`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2 has a divisor");
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p, k))
}

/// Möbius function.
pub fn mobius(n: u64) -> i32 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let mut n = n;
    let mut sign = 1;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Order of `q` in `(Z/ell)^×`.
pub fn multiplicative_order(q: u64, ell: u64) -> Result<u32> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if q.is_multiple_of(ell) {
        return Err(Error::EllDividesQ { q, ell });
    }
    let base = q % ell;
    let mut acc = base;
    let mut order = 1u32;
    while acc != 1 {
        acc = acc * base % ell;
        order += 1;
    }
    Ok(order)
}

/// The data fixing one counting problem: the base field `F_q` and the prime
/// degree `ell` of the extensions being counted.
///
/// `alpha` is the order of `q` modulo `ell`; only primes whose degree is a
/// multiple of `alpha` can ramify, and `w = (ell - 1) / alpha` is the order of
/// the pole of the counting Dirichlet series at `s = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldParams {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    pub ell: u64,
    pub alpha: u32,
    pub w: u32,
}

impl FieldParams {
    pub fn new(q: u64, ell: u64) -> Result<Self> {
        let (p, k) = prime_power(q)?;
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        if ell == p {
            return Err(Error::EllDividesQ { q, ell });
        }
        let alpha = multiplicative_order(q, ell)?;
        let w = ((ell - 1) / alpha as u64) as u32;
        debug_assert_eq!(w as u64 * alpha as u64, ell - 1);
        Ok(Self { q, p, k, ell, alpha, w })
    }
}
