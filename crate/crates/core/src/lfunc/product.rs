use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::h_coefficients;
use crate::census::PrimeCensus;
use crate::field::{gcd, FieldParams};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// Which primes an Euler product runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeFilter {
    All,
    /// `alpha | deg P`.
    AlphaDivides,
    /// `deg P` even.
    Even,
    /// `gcd(alpha, deg P) = d`.
    GcdEquals(u32),
}

/// The per-prime factor, written in `y = q^{-κ deg(P) s}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalFactor {
    /// `1 + (ell - 1) y`.
    OnePlusCu,
    /// `(1 - y)^{-d}`, with `d` taken from [`DegreeFilter::GcdEquals`]
    /// (`d = 1` under [`DegreeFilter::All`]).
    OneMinusUInv,
    /// `(1 + (ell - 1) y)(1 - y)^{ell - 1}` expanded as a polynomial.
    HFactor,
    /// `(1 + 2y)(1 - y) / (1 + y)`.
    CubicEvenRational,
}

/// A partial Euler product `(∏_P F(y_P))^power` over the primes selected by
/// `degree_filter`, expanded as a series of the given order.
///
/// The output variable is `u = q^{-σ s}` with `σ = alpha` for
/// [`DegreeFilter::AlphaDivides`] and [`DegreeFilter::GcdEquals`], `σ = 2` for
/// [`DegreeFilter::Even`] and `σ = 1` for [`DegreeFilter::All`]. A prime of
/// degree `e` then enters as `y = u^{e / m}`, where `m` is the step divisor
/// (`d` for `GcdEquals(d)`, otherwise `σ`).
#[derive(Debug, Clone)]
pub struct ProductSpec<'a> {
    pub params: FieldParams,
    pub census: &'a PrimeCensus,
    pub degree_filter: DegreeFilter,
    pub local_factor: LocalFactor,
    pub power: i64,
    pub order: usize,
}

impl ProductSpec<'_> {
    pub fn scale(&self) -> u32 {
        match self.degree_filter {
            DegreeFilter::All => 1,
            DegreeFilter::AlphaDivides | DegreeFilter::GcdEquals(_) => self.params.alpha,
            DegreeFilter::Even => 2,
        }
    }

    fn step_divisor(&self) -> u32 {
        match self.degree_filter {
            DegreeFilter::GcdEquals(d) => d,
            _ => self.scale(),
        }
    }

    fn admits(&self, e: u32) -> bool {
        match self.degree_filter {
            DegreeFilter::All => true,
            DegreeFilter::AlphaDivides => e.is_multiple_of(self.params.alpha),
            DegreeFilter::Even => e.is_multiple_of(2),
            DegreeFilter::GcdEquals(d) => gcd(self.params.alpha as u64, e as u64) == d as u64,
        }
    }

    fn validate(&self) -> Result<()> {
        use DegreeFilter::*;
        use LocalFactor::*;
        let ok = match (self.degree_filter, self.local_factor) {
            (AlphaDivides, OnePlusCu) | (AlphaDivides, HFactor) => true,
            (All, OneMinusUInv) => true,
            (GcdEquals(d), OneMinusUInv) => d >= 1 && self.params.alpha.is_multiple_of(d),
            (Even, CubicEvenRational) => self.params.ell == 3 && self.params.alpha == 2,
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "unsupported product template {:?} x {:?} for q = {}, ell = {}",
                self.degree_filter, self.local_factor, self.params.q, self.params.ell
            )));
        }
        if self.census.q() != self.params.q {
            return Err(Error::InvalidParameter(format!(
                "census is for q = {}, parameters for q = {}",
                self.census.q(),
                self.params.q
            )));
        }
        self.census.require_depth(self.step_divisor() * self.order as u32)
    }

    /// Expands the product through `order`.
    pub fn build(&self) -> Result<TruncatedSeries> {
        self.validate()?;
        let scale = self.scale();
        let n = self.order;
        let div = self.step_divisor();
        let mut acc = TruncatedSeries::one(n, scale);
        let power = BigInt::from(self.power);
        for e in (1..=div * n as u32).filter(|&e| self.admits(e)) {
            let step = (e / div) as usize;
            let exponent = BigInt::from(self.census.count(e).clone()) * &power;
            let factor = self.factor_power(step, &exponent)?;
            acc = acc.checked_mul(&factor)?;
        }
        Ok(acc)
    }

    fn factor_power(&self, step: usize, exponent: &BigInt) -> Result<TruncatedSeries> {
        let (n, scale) = (self.order, self.scale());
        let int = |v: i64| BigRational::from_integer(BigInt::from(v));
        Ok(match self.local_factor {
            LocalFactor::OnePlusCu => {
                binomial_power(step, &int(self.params.ell as i64 - 1), exponent, n, scale)
            }
            LocalFactor::OneMinusUInv => {
                let d = match self.degree_filter {
                    DegreeFilter::GcdEquals(d) => d,
                    _ => 1,
                };
                binomial_power(step, &int(-1), &(-exponent * BigInt::from(d)), n, scale)
            }
            LocalFactor::HFactor => {
                let h = h_coefficients(self.params.ell);
                let mut poly = vec![BigRational::zero(); n + 1];
                for (i, c) in h.iter().enumerate() {
                    if i * step <= n {
                        poly[i * step] = BigRational::from_integer(c.clone());
                    }
                }
                TruncatedSeries::new(poly, scale).pow_big(exponent)?
            }
            LocalFactor::CubicEvenRational => {
                let a = binomial_power(step, &int(2), exponent, n, scale);
                let b = binomial_power(step, &int(-1), exponent, n, scale);
                let c = binomial_power(step, &int(1), &-exponent, n, scale);
                a.checked_mul(&b)?.checked_mul(&c)?
            }
        })
    }
}

/// `(1 + c u^step)^m` for any integer `m`.
pub(crate) fn binomial_power(
    step: usize,
    c: &BigRational,
    m: &BigInt,
    order: usize,
    scale: u32,
) -> TruncatedSeries {
    let mag: BigUint = m.magnitude().clone();
    if m.is_negative() {
        TruncatedSeries::sparse_factor_inverse_power(step, c, &mag, order, scale)
    } else if mag.is_zero() {
        TruncatedSeries::one(order, scale)
    } else {
        TruncatedSeries::sparse_factor_power(step, c, &mag, order, scale)
    }
}
