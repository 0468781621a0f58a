//! Exact counts `a_ell(n)` of abelian `ell`-extensions with finite
//! discriminant of degree `(ell - 1) alpha n`.
//!
//! Such an extension has discriminant `D^{ell - 1}` for a squarefree `D`
//! whose prime factors all have degree divisible by `alpha`; a conductor with
//! `m` prime factors carries `2 (ell - 1)^{m - 1}` extensions. Three routes
//! compute the same numbers: the Euler product `f`, a knapsack over prime
//! degrees, and brute-force factorization of every monic polynomial.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::census::{binomial, decode_monic, EnumLimits, FpPoly, PrimeCensus};
use crate::field::{is_prime, FieldParams};
use crate::lfunc::build_f_series;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Series,
    Dp,
    Enumerative,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Series => "series",
            Route::Dp => "dp",
            Route::Enumerative => "enumerative",
        })
    }
}

/// `a_ell(1..=max_n)` from one route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub params: FieldParams,
    pub route: Route,
    values: Vec<BigInt>,
}

impl CountTable {
    pub fn max_n(&self) -> usize {
        self.values.len()
    }

    /// `a_ell(n)` for `1 <= n <= max_n`.
    pub fn get(&self, n: usize) -> &BigInt {
        assert!(n >= 1 && n <= self.values.len(), "n = {n} outside 1..={}", self.values.len());
        &self.values[n - 1]
    }

    /// Values for `n = 1..=max_n`, in order.
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }
}

/// The degree pattern of a squarefree conductor.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SquarefreeProfile {
    /// Degree `d` mapped to the number of prime factors of that degree.
    pub degree_multiset: BTreeMap<u32, u32>,
    pub m: u32,
}

impl SquarefreeProfile {
    /// Factors `f` by trial division against `lists[k - 1]` (the monic
    /// irreducibles of degree `k`). Returns `None` unless `f` is squarefree.
    pub fn of(f: &FpPoly, lists: &[Vec<FpPoly>], p: u32) -> Option<Self> {
        let mut rest = f.clone();
        let mut profile = Self::default();
        let mut k = 1usize;
        while 2 * k <= rest.degree()? && k <= lists.len() {
            for g in &lists[k - 1] {
                let (quot, rem) = rest.div_rem_monic(g, p);
                if rem.is_zero() {
                    if quot.is_divisible_by(g, p) {
                        return None;
                    }
                    rest = quot;
                    profile.add(k as u32);
                }
            }
            k += 1;
        }
        match rest.degree()? {
            0 => {}
            d => profile.add(d as u32),
        }
        Some(profile)
    }

    fn add(&mut self, d: u32) {
        *self.degree_multiset.entry(d).or_insert(0) += 1;
        self.m += 1;
    }

    pub fn all_degrees_divisible_by(&self, alpha: u32) -> bool {
        self.degree_multiset.keys().all(|d| d % alpha == 0)
    }
}

/// `2 (ell - 1)^{m - 1}`.
fn conductor_weight(ell: u64, m: u32) -> BigInt {
    BigInt::from(2) * BigInt::from(ell - 1).pow(m - 1)
}

/// `a_ell(n) = 2 b_{alpha n} / (ell - 1)` from the coefficients of `f`.
pub fn exact_counts_series(params: &FieldParams, census: &PrimeCensus, max_n: usize) -> Result<CountTable> {
    let f = build_f_series(params, census, max_n)?;
    let b = f.integer_coeffs().ok_or(Error::NonIntegral { n: 0 })?;
    let values = halve_weights(params, &b, max_n)?;
    Ok(CountTable {
        params: *params,
        route: Route::Series,
        values,
    })
}

fn halve_weights(params: &FieldParams, b: &[BigInt], max_n: usize) -> Result<Vec<BigInt>> {
    let ell1 = BigInt::from(params.ell - 1);
    (1..=max_n)
        .map(|n| {
            let (q, r) = (BigInt::from(2) * &b[n]).div_rem(&ell1);
            if r.is_zero() {
                Ok(q)
            } else {
                Err(Error::NonIntegral { n })
            }
        })
        .collect()
}

/// Knapsack over prime degrees `alpha, 2 alpha, ...`: choosing `k` distinct
/// primes of degree `d` contributes `C(N_q(d), k) (ell - 1)^k`.
pub fn exact_counts_dp(params: &FieldParams, census: &PrimeCensus, max_n: usize) -> Result<CountTable> {
    let alpha = params.alpha;
    census.require_depth(alpha * max_n as u32)?;
    let ell1 = BigInt::from(params.ell - 1);
    let mut table = vec![BigInt::zero(); max_n + 1];
    table[0] = BigInt::one();
    for step in 1..=max_n {
        let count: &BigUint = census.count(alpha * step as u32);
        let mut ways = Vec::new();
        let mut k = 0u64;
        while k as usize * step <= max_n {
            ways.push(BigInt::from(binomial(count, k)) * ell1.pow(k as u32));
            k += 1;
        }
        for total in (step..=max_n).rev() {
            let mut add = BigInt::zero();
            for (k, w) in ways.iter().enumerate().skip(1) {
                if k * step > total {
                    break;
                }
                add += w * &table[total - k * step];
            }
            table[total] += add;
        }
    }
    Ok(CountTable {
        params: *params,
        route: Route::Dp,
        values: halve_weights(params, &table, max_n)?,
    })
}

pub const ENUMERATIVE_MAX_P: u64 = 7;
pub const ENUMERATIVE_MAX_DEGREE: u32 = 8;

/// Enumerates every monic polynomial of degree `alpha n` over `F_p`, keeps
/// the squarefree ones whose prime factors all have degree divisible by
/// `alpha`, and adds `2 (ell - 1)^{m - 1}` for each.
pub fn exact_counts_enumerative(p: u64, ell: u64, max_n: usize, limits: &EnumLimits) -> Result<CountTable> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let params = FieldParams::new(p, ell)?;
    let top = params.alpha * max_n as u32;
    if max_n == 0 {
        return Err(Error::InvalidParameter("max_n must be at least 1".into()));
    }
    if p > ENUMERATIVE_MAX_P || top > ENUMERATIVE_MAX_DEGREE {
        return Err(Error::BudgetExceeded(format!(
            "conductor enumeration is limited to p <= {ENUMERATIVE_MAX_P} and degree <= {ENUMERATIVE_MAX_DEGREE}"
        )));
    }
    limits.check(p, top)?;
    let census = PrimeCensus::with_lists(p, top, limits)?;
    let lists: Vec<Vec<FpPoly>> = census.lists().expect("requested").values().cloned().collect();
    let p32 = p as u32;
    let mut values = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let deg = params.alpha * n as u32;
        let mut total = BigInt::zero();
        for index in 0..p.pow(deg) {
            let f = FpPoly::new(decode_monic(index, deg, p), p32);
            if let Some(profile) = SquarefreeProfile::of(&f, &lists, p32) {
                if profile.all_degrees_divisible_by(params.alpha) {
                    total += conductor_weight(ell, profile.m);
                }
            }
        }
        values.push(total);
    }
    Ok(CountTable {
        params,
        route: Route::Enumerative,
        values,
    })
}

/// Vectors in `(Z/ell)^m` with every coordinate nonzero, counted up to
/// multiplication by a unit, by explicit enumeration.
pub fn character_multiplicity(m: u32, ell: u64, limits: &EnumLimits) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    let base = ell - 1;
    let space = base
        .checked_pow(m)
        .filter(|&s| s <= limits.max_space)
        .ok_or_else(|| Error::BudgetExceeded(format!("{base}^{m} vectors exceeds the budget of {}", limits.max_space)))?;
    let mut orbits = 0u64;
    let mut v = vec![0u64; m as usize];
    for index in 0..space {
        let mut x = index;
        for c in v.iter_mut() {
            *c = x % base + 1;
            x /= base;
        }
        // count each orbit once, at its lexicographically smallest member
        let smallest = (2..ell).all(|unit| v.iter().map(|c| c * unit % ell).cmp(v.iter().copied()).is_ge());
        if smallest {
            orbits += 1;
        }
    }
    Ok(BigUint::from(orbits))
}
