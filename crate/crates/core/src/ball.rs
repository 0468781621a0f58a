//! Fixed-point midpoint-radius arithmetic.
//!
//! A [`Ball`] stores `mid / 2^bits` and a radius in units of `2^-bits`. Every
//! rounding is folded into the radius, so the true value always lies inside.
//! Used for Euler products whose exact rational value would be astronomically
//! large.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numeric::to_scientific;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigUint,
    bits: u32,
}

fn ceil_div(n: &BigUint, d: &BigUint) -> BigUint {
    let (q, r) = n.div_rem(d);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

impl Ball {
    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        let scaled = r.numer() << bits;
        let (q, rem) = scaled.div_mod_floor(r.denom());
        let rad = if rem.is_zero() { BigUint::zero() } else { BigUint::one() };
        Self { mid: q, rad, bits }
    }

    pub fn one(bits: u32) -> Self {
        Self {
            mid: BigInt::one() << bits,
            rad: BigUint::zero(),
            bits,
        }
    }

    pub fn zero(bits: u32) -> Self {
        Self {
            mid: BigInt::zero(),
            rad: BigUint::zero(),
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mid(&self) -> BigRational {
        BigRational::new(self.mid.clone(), BigInt::one() << self.bits)
    }

    pub fn radius(&self) -> BigRational {
        BigRational::new(BigInt::from(self.rad.clone()), BigInt::one() << self.bits)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        (x - self.mid()).abs() <= self.radius()
    }

    pub fn mid_f64(&self) -> f64 {
        crate::numeric::to_f64(&self.mid())
    }

    pub fn radius_f64(&self) -> f64 {
        crate::numeric::to_f64(&self.radius())
    }

    /// Smallest and largest values the ball admits.
    pub fn bounds(&self) -> (BigRational, BigRational) {
        let m = self.mid();
        let r = self.radius();
        (&m - &r, m + r)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.bits, other.bits);
        Self {
            mid: &self.mid + &other.mid,
            rad: &self.rad + &other.rad,
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.bits, other.bits);
        let unit = BigUint::one() << self.bits;
        let prod = &self.mid * &other.mid;
        let mid = prod.div_floor(&(BigInt::one() << self.bits));
        let spread = self.mid.magnitude() * &other.rad
            + other.mid.magnitude() * &self.rad
            + &self.rad * &other.rad;
        let rad = ceil_div(&spread, &unit) + 1u32;
        Self { mid, rad, bits: self.bits }
    }

    /// Multiplication by an exact integer; no rounding.
    pub fn mul_int(&self, n: &BigInt) -> Self {
        Self {
            mid: &self.mid * n,
            rad: &self.rad * n.magnitude(),
            bits: self.bits,
        }
    }

    pub fn pow(&self, e: &BigUint) -> Self {
        let mut acc = Self::one(self.bits);
        let mut sq = self.clone();
        let nbits = e.bits();
        for i in 0..nbits {
            if e.bit(i) {
                acc = acc.mul(&sq);
            }
            if i + 1 < nbits {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// Widens the radius by a nonnegative rational amount (rounded up).
    pub fn widen(&self, extra: &BigRational) -> Self {
        assert!(!extra.is_negative());
        let scaled = extra.numer().magnitude() << self.bits;
        let add = ceil_div(&scaled, extra.denom().magnitude());
        Self {
            mid: self.mid.clone(),
            rad: &self.rad + add,
            bits: self.bits,
        }
    }

    /// Midpoint in scientific notation with `digits` significant digits.
    pub fn to_scientific(&self, digits: usize) -> String {
        to_scientific(&self.mid(), digits)
    }
}
