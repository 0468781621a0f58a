//! Census of monic irreducible polynomials over `F_q`.
//!
//! Counts come from the necklace formula for every prime power `q`; explicit
//! lists are produced only over prime fields, by sieving out products of
//! lower-degree irreducibles.

mod poly;

pub use poly::FpPoly;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{divisors, is_prime, mobius, prime_power};
use crate::{Error, Result};

/// Environment variable overriding [`EnumLimits::max_space`].
pub const ENUM_BUDGET_ENV: &str = "ELLEXT_ENUM_BUDGET";

/// Ceilings guarding every brute-force enumeration in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumLimits {
    pub max_p: u64,
    pub max_deg: u32,
    /// Upper bound on the number of monic polynomials `p^d` a single
    /// enumeration may walk.
    pub max_space: u64,
}

impl Default for EnumLimits {
    fn default() -> Self {
        Self {
            max_p: 13,
            max_deg: 10,
            max_space: 1 << 24,
        }
    }
}

impl EnumLimits {
    /// Defaults, with `max_space` taken from `ELLEXT_ENUM_BUDGET` when set.
    pub fn from_env() -> Self {
        let mut limits = Self::default();
        if let Some(v) = std::env::var(ENUM_BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
        {
            limits.max_space = v;
        }
        limits
    }

    pub(crate) fn check(&self, p: u64, d: u32) -> Result<()> {
        if p > self.max_p || d > self.max_deg {
            return Err(Error::BudgetExceeded(format!(
                "enumeration over F_{p} in degree {d} exceeds ceilings p <= {}, d <= {}",
                self.max_p, self.max_deg
            )));
        }
        match p.checked_pow(d) {
            Some(space) if space <= self.max_space => Ok(()),
            _ => Err(Error::BudgetExceeded(format!(
                "{p}^{d} monic polynomials exceeds the budget of {}",
                self.max_space
            ))),
        }
    }
}

/// Number of monic irreducible polynomials of degree `d` over `F_q`.
pub fn count_irreducibles(q: u64, d: u32) -> Result<BigUint> {
    prime_power(q)?;
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let q = BigInt::from(q);
    let mut sum = BigInt::zero();
    for e in divisors(d as u64) {
        let mu = mobius(e);
        if mu != 0 {
            sum += BigInt::from(mu) * q.pow((d as u64 / e) as u32);
        }
    }
    let (count, rem) = sum.div_rem(&BigInt::from(d));
    assert!(rem.is_zero() && !count.is_negative(), "necklace sum not divisible by d");
    Ok(count.to_biguint().expect("nonnegative"))
}

/// Little-endian coefficients of the `index`-th monic polynomial of degree `d`
/// over `F_p`, reading `index` in base `p`.
pub(crate) fn decode_monic(mut index: u64, d: u32, p: u64) -> Vec<u32> {
    let mut c = Vec::with_capacity(d as usize + 1);
    for _ in 0..d {
        c.push((index % p) as u32);
        index /= p;
    }
    c.push(1);
    c
}

/// Irreducible lists for every degree `1..=d`, index `k - 1` holding degree `k`.
fn irreducible_tower(p: u64, d: u32) -> Vec<Vec<FpPoly>> {
    let p32 = p as u32;
    let mut tower: Vec<Vec<FpPoly>> = Vec::with_capacity(d as usize);
    for k in 1..=d {
        let space = p.pow(k) as usize;
        let mut composite = vec![false; space];
        for j in 1..=k / 2 {
            let rest = k - j;
            let cofactors = p.pow(rest);
            for f in &tower[j as usize - 1] {
                let fc = f.coeffs();
                let mut gc = vec![0u64; rest as usize + 1];
                gc[rest as usize] = 1;
                let mut prod = vec![0u64; k as usize + 1];
                for g_index in 0..cofactors {
                    if g_index > 0 {
                        // odometer increment of the low coefficients
                        for c in gc[..rest as usize].iter_mut() {
                            *c += 1;
                            if *c < p {
                                break;
                            }
                            *c = 0;
                        }
                    }
                    prod.fill(0);
                    for (a, &x) in fc.iter().enumerate() {
                        if x == 0 {
                            continue;
                        }
                        for (b, &y) in gc.iter().enumerate() {
                            prod[a + b] += x as u64 * y;
                        }
                    }
                    let mut index = 0u64;
                    for &c in prod[..k as usize].iter().rev() {
                        index = index * p + c % p;
                    }
                    composite[index as usize] = true;
                }
            }
        }
        let mut list: Vec<FpPoly> = composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| FpPoly::new(decode_monic(i as u64, k, p), p32))
            .collect();
        list.sort();
        tower.push(list);
    }
    tower
}

/// All monic irreducible polynomials of degree `d` over the prime field
/// `F_p`, sorted lexicographically on their little-endian coefficient vectors.
pub fn enumerate_irreducibles(p: u64, d: u32, limits: &EnumLimits) -> Result<Vec<FpPoly>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    limits.check(p, d)?;
    Ok(irreducible_tower(p, d).pop().expect("d >= 1"))
}

/// Irreducibility by trial division against every listed monic irreducible
/// of degree at most `deg(f) / 2`. `lower[k - 1]` must list degree `k`.
pub fn is_irreducible_by_trial_division(f: &FpPoly, lower: &[Vec<FpPoly>], p: u64) -> bool {
    let Some(deg) = f.degree() else { return false };
    if deg == 0 {
        return false;
    }
    !lower
        .iter()
        .take(deg / 2)
        .flatten()
        .any(|g| f.is_divisible_by(g, p as u32))
}

/// Counts `N_q(d)` for `d = 1..=max_deg`, optionally with explicit lists.
#[derive(Debug, Clone)]
pub struct PrimeCensus {
    q: u64,
    max_deg: u32,
    counts: Vec<BigUint>,
    lists: Option<BTreeMap<u32, Vec<FpPoly>>>,
}

impl PrimeCensus {
    pub fn new(q: u64, max_deg: u32) -> Result<Self> {
        prime_power(q)?;
        let counts = (1..=max_deg)
            .map(|d| count_irreducibles(q, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            q,
            max_deg,
            counts,
            lists: None,
        })
    }

    /// Census with explicit polynomial lists; `q` must be prime and the
    /// enumeration must fit `limits`.
    pub fn with_lists(q: u64, max_deg: u32, limits: &EnumLimits) -> Result<Self> {
        let mut census = Self::new(q, max_deg)?;
        if !is_prime(q) {
            return Err(Error::InvalidParameter(format!(
                "explicit lists need a prime field, got q = {q}"
            )));
        }
        if max_deg > 0 {
            limits.check(q, max_deg)?;
        }
        let tower = irreducible_tower(q, max_deg);
        census.lists = Some((1..=max_deg).zip(tower).collect());
        Ok(census)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn max_deg(&self) -> u32 {
        self.max_deg
    }

    /// `N_q(d)`; panics outside `1..=max_deg`.
    pub fn count(&self, d: u32) -> &BigUint {
        assert!(d >= 1 && d <= self.max_deg, "degree {d} outside census");
        &self.counts[d as usize - 1]
    }

    /// `N_q(d)` as a machine integer, when it fits.
    pub fn count_u64(&self, d: u32) -> Option<u64> {
        self.count(d).to_u64()
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn lists(&self) -> Option<&BTreeMap<u32, Vec<FpPoly>>> {
        self.lists.as_ref()
    }

    pub fn require_depth(&self, need: u32) -> Result<()> {
        if need > self.max_deg {
            Err(Error::CensusTooShallow {
                have: self.max_deg,
                need,
            })
        } else {
            Ok(())
        }
    }

    /// Gauss identity `sum_{d | n} d N_q(d) = q^n` for every `n <= max_deg`.
    pub fn gauss_identity_holds(&self) -> bool {
        (1..=self.max_deg).all(|n| {
            let lhs: BigUint = divisors(n as u64)
                .into_iter()
                .map(|d| self.count(d as u32) * BigUint::from(d))
                .sum();
            lhs == BigUint::from(self.q).pow(n)
        })
    }

    /// Checks every list entry: monic, right degree, irreducible by trial
    /// division, and list lengths equal the counts. Vacuously true without
    /// lists.
    pub fn verify_lists(&self) -> bool {
        self.verify_lists_through(self.max_deg)
    }

    /// [`verify_lists`](Self::verify_lists) restricted to degrees up to `max`.
    /// Trial division is far slower than the sieve, so callers with deep
    /// lists can re-check only the low degrees.
    pub fn verify_lists_through(&self, max: u32) -> bool {
        let Some(lists) = &self.lists else { return true };
        let lower: Vec<Vec<FpPoly>> = lists.values().cloned().collect();
        lists.range(..=max).all(|(&d, list)| {
            BigUint::from(list.len()) == *self.count(d)
                && list.iter().all(|f| {
                    f.is_monic()
                        && f.degree() == Some(d as usize)
                        && is_irreducible_by_trial_division(f, &lower, self.q)
                })
        })
    }
}

/// Binomial coefficient `C(n, k)` for big `n`.
pub(crate) fn binomial(n: &BigUint, k: u64) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}
