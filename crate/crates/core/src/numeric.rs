//! Conversions from exact values to floats and decimal strings.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Natural log of a positive big integer, without overflowing `f64`.
pub fn ln_biguint(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "ln of zero");
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64 bits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln |r|` for nonzero `r`.
pub fn ln_abs(r: &BigRational) -> f64 {
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

/// Closest `f64` to `r` (saturating to infinity for huge magnitudes).
pub fn to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let l = ln_abs(r);
    if l.abs() < 700.0 {
        // Shift to ~64 significant bits before dividing.
        let nb = r.numer().bits() as i64;
        let db = r.denom().bits() as i64;
        let shift = 64 - (nb - db);
        let scaled = if shift >= 0 {
            (r.numer().magnitude() << shift as u64) / r.denom().magnitude()
        } else {
            r.numer().magnitude() / (r.denom().magnitude() << (-shift) as u64)
        };
        sign * scaled.to_f64().expect("~64 bits") * 2f64.powi(-shift as i32)
    } else {
        sign * l.exp()
    }
}

/// Rational upper bound for a nonnegative finite `f64`.
pub fn rational_upper_bound(x: f64) -> BigRational {
    assert!(x.is_finite() && x >= 0.0, "bound must be finite and nonnegative");
    let exact = BigRational::from_float(x).expect("finite");
    // one part in 2^40 of slack absorbs the float rounding of the input
    &exact + &exact / BigRational::from_integer(BigInt::one() << 40u32)
}

/// Scientific notation with `digits` significant digits, rounding half away
/// from zero: `-1.2345e-7`.
pub fn to_scientific(r: &BigRational, digits: usize) -> String {
    assert!(digits >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    let ten = BigInt::from(10);
    let lo = ten.pow(digits as u32 - 1);
    let hi = &lo * &ten;
    let estimate = (ln_abs(&a) / std::f64::consts::LN_10).floor() as i64;
    let mut exp10 = estimate;
    let mantissa = loop {
        let k = digits as i64 - 1 - exp10;
        let scaled = if k >= 0 {
            &a * BigRational::from_integer(ten.pow(k as u32))
        } else {
            &a / BigRational::from_integer(ten.pow((-k) as u32))
        };
        let (q, rem) = scaled.numer().div_mod_floor(scaled.denom());
        let rounded = if BigInt::from(2) * rem >= *scaled.denom() { q + 1 } else { q };
        if rounded >= hi {
            exp10 += 1;
        } else if rounded < lo {
            exp10 -= 1;
        } else {
            break rounded;
        }
    };
    let m = mantissa.to_string();
    let (head, tail) = m.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{exp10}")
    } else {
        format!("{sign}{head}.{tail}e{exp10}")
    }
}
