//! Exact truncated power series over the rationals.
//!
//! A [`TruncatedSeries`] of order `N` carries the exact coefficients
//! `c_0..=c_N` of a formal series in a variable `u` that stands for
//! `q^{-σ s}`; `σ` is recorded as the series' *scale* so that series in
//! different variables cannot be combined by accident. Nothing here ever
//! extends precision: every binary operation truncates to the smaller order.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// An exact value together with a certified error radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub value: BigRational,
    pub radius: BigRational,
}

impl Enclosure {
    pub fn exact(value: BigRational) -> Self {
        Self {
            value,
            radius: BigRational::zero(),
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        (x - &self.value).abs() <= self.radius
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
    scale: u32,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl TruncatedSeries {
    /// Series with the given coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<BigRational>, scale: u32) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        assert!(scale >= 1, "scale must be positive");
        Self { coeffs, scale }
    }

    pub fn from_integers<I, T>(coeffs: I, scale: u32) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::new(coeffs.into_iter().map(rat).collect(), scale)
    }

    /// A polynomial padded with zeros (or truncated) to `order`.
    pub fn from_poly(poly: &[BigRational], order: usize, scale: u32) -> Self {
        let mut coeffs: Vec<BigRational> = poly.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, BigRational::zero());
        Self::new(coeffs, scale)
    }

    pub fn zero(order: usize, scale: u32) -> Self {
        Self::new(vec![BigRational::zero(); order + 1], scale)
    }

    pub fn one(order: usize, scale: u32) -> Self {
        let mut s = Self::zero(order, scale);
        s.coeffs[0] = BigRational::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    /// Coefficients as integers, or `None` if any is fractional.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "truncation cannot extend precision");
        Self::new(self.coeffs[..=order].to_vec(), self.scale)
    }

    fn check_scale(&self, other: &Self) -> Result<()> {
        if self.scale != other.scale {
            return Err(Error::ScaleMismatch {
                left: self.scale,
                right: other.scale,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_scale(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Ok(Self::new(coeffs, self.scale))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect(), self.scale)
    }

    pub fn scale_by(&self, factor: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect(), self.scale)
    }

    /// Cauchy product truncated at the smaller order. Zero coefficients on
    /// either side are skipped, so sparse factors are cheap.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_scale(other)?;
        let n = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); n + 1];
        let right: Vec<(usize, &BigRational)> = other.coeffs[..=n]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &right {
                if i + j > n {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        Ok(Self::new(out, self.scale))
    }

    /// Multiplicative inverse through the same order.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for i in 1..=k {
                let a = &self.coeffs[i];
                if !a.is_zero() {
                    acc += a * &out[k - i];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Self::new(out, self.scale))
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow_int(&self, m: i64) -> Result<Self> {
        let base = if m < 0 { self.invert()? } else { self.clone() };
        let mut e = m.unsigned_abs();
        let mut acc = Self::one(self.order(), self.scale);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.checked_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// `self^m` for an arbitrary (possibly huge or negative) integer `m`,
    /// through the recurrence implied by `P Q' = m P' Q`. Requires `c_0 = 1`.
    ///
    /// Cost is `O(N · nnz)` where `nnz` counts nonzero coefficients of `self`.
    pub fn pow_big(&self, m: &BigInt) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::InvalidParameter(
                "pow_big needs a series with constant term 1".into(),
            ));
        }
        let n = self.order();
        let terms: Vec<(usize, &BigRational)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let m1 = m + BigInt::one();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        out.push(BigRational::one());
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for &(i, p_i) in &terms {
                if i > k {
                    break;
                }
                let weight = &m1 * BigInt::from(i) - BigInt::from(k);
                if weight.is_zero() || out[k - i].is_zero() {
                    continue;
                }
                acc += p_i * &out[k - i] * rat(weight);
            }
            out.push(acc / rat(k));
        }
        Ok(Self::new(out, self.scale))
    }

    /// `(1 + c u^step)^m` through `order`, by the binomial theorem; exact for
    /// any size of `m`.
    pub fn sparse_factor_power(
        step: usize,
        c: &BigRational,
        m: &BigUint,
        order: usize,
        scale: u32,
    ) -> Self {
        assert!(step >= 1, "step must be positive");
        let mut out = Self::zero(order, scale);
        let m = BigInt::from(m.clone());
        let mut binom = BigInt::one();
        let mut c_pow = BigRational::one();
        let mut j = 0usize;
        while j * step <= order && !binom.is_zero() {
            out.coeffs[j * step] = rat(binom.clone()) * &c_pow;
            binom = binom * (&m - BigInt::from(j)) / BigInt::from(j + 1);
            c_pow *= c;
            j += 1;
        }
        out
    }

    /// `(1 + c u^step)^{-m}` through `order`, via the negative binomial series.
    pub fn sparse_factor_inverse_power(
        step: usize,
        c: &BigRational,
        m: &BigUint,
        order: usize,
        scale: u32,
    ) -> Self {
        assert!(step >= 1, "step must be positive");
        let mut out = Self::zero(order, scale);
        if m.is_zero() {
            out.coeffs[0] = BigRational::one();
            return out;
        }
        let m = BigInt::from(m.clone());
        let neg_c = -c.clone();
        // C(m + j - 1, j) (-c)^j
        let mut binom = BigInt::one();
        let mut c_pow = BigRational::one();
        let mut j = 0usize;
        while j * step <= order {
            out.coeffs[j * step] = rat(binom.clone()) * &c_pow;
            binom = binom * (&m + BigInt::from(j)) / BigInt::from(j + 1);
            c_pow *= &neg_c;
            j += 1;
        }
        out
    }

    /// Values of the derivatives `0..=j_max` of the truncated series at `x`:
    /// `sum_n c_n n!/(n-j)! x^{n-j}`.
    ///
    /// `tail_bound` is the caller's bound on the discarded tail of every
    /// derivative at `x`; it becomes the radius of each returned enclosure.
    /// A zero bound asserts that the series is a polynomial.
    pub fn eval_derivatives(
        &self,
        x: &BigRational,
        j_max: usize,
        tail_bound: &BigRational,
    ) -> Result<Vec<Enclosure>> {
        if tail_bound.is_negative() {
            return Err(Error::InvalidParameter("tail bound must be nonnegative".into()));
        }
        let n = self.order();
        let mut powers = Vec::with_capacity(n + 1);
        let mut p = BigRational::one();
        for _ in 0..=n {
            powers.push(p.clone());
            p *= x;
        }
        let out = (0..=j_max)
            .map(|j| {
                let mut acc = BigRational::zero();
                for k in j..=n {
                    let c = &self.coeffs[k];
                    if c.is_zero() {
                        continue;
                    }
                    let falling: BigInt = (0..j).map(|i| BigInt::from(k - i)).product();
                    acc += c * &powers[k - j] * rat(falling);
                }
                Enclosure {
                    value: acc,
                    radius: tail_bound.clone(),
                }
            })
            .collect();
        Ok(out)
    }

    /// As [`eval_derivatives`](Self::eval_derivatives), refusing points that
    /// are not strictly inside the supplied convergence radius.
    pub fn eval_derivatives_within(
        &self,
        x: &BigRational,
        radius: &BigRational,
        j_max: usize,
        tail_bound: &BigRational,
    ) -> Result<Vec<Enclosure>> {
        if x.abs() >= *radius {
            return Err(Error::InvalidParameter(format!(
                "evaluation point {x} is not inside the radius {radius}"
            )));
        }
        self.eval_derivatives(x, j_max, tail_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(c: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_integers(c.iter().copied(), 1)
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn product_examples() {
        assert_eq!(s(&[1, 1, 0]).checked_mul(&s(&[1, -1, 0])).unwrap(), s(&[1, 0, -1]));
        let f = s(&[3, -2, 5, 7]);
        assert_eq!(f.checked_mul(&TruncatedSeries::one(3, 1)).unwrap(), f);
        assert_eq!(f.checked_add(&f.neg()).unwrap(), TruncatedSeries::zero(3, 1));
        // result order is the smaller one
        assert_eq!(f.checked_mul(&s(&[1, 1])).unwrap().order(), 1);
    }

    #[test]
    fn scale_mismatch_is_rejected() {
        let a = TruncatedSeries::one(2, 1);
        let b = TruncatedSeries::one(2, 2);
        assert_eq!(a.checked_mul(&b), Err(Error::ScaleMismatch { left: 1, right: 2 }));
        assert!(a.checked_add(&b).is_err());
    }

    #[test]
    fn inversion_examples() {
        let q = 3;
        let geo = s(&[1, -q, 0, 0, 0, 0]).invert().unwrap();
        assert_eq!(geo, s(&[1, 3, 9, 27, 81, 243]));
        assert_eq!(geo.invert().unwrap(), s(&[1, -3, 0, 0, 0, 0]));
        assert_eq!(s(&[1, 0, -1, 0, 0, 0, 0]).invert().unwrap(), s(&[1, 0, 1, 0, 1, 0, 1]));
        assert_eq!(s(&[0, 1]).invert(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn power_examples() {
        assert_eq!(s(&[1, 2, 0]).pow_int(2).unwrap(), s(&[1, 4, 4]));
        assert_eq!(s(&[5, 2, 1]).pow_int(0).unwrap(), s(&[1, 0, 0]));
        assert_eq!(s(&[1, -1, 0, 0, 0]).pow_int(-2).unwrap(), s(&[1, 2, 3, 4, 5]));
        assert_eq!(s(&[0, 1]).pow_int(-1), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn sparse_factor_examples() {
        let two = r(2, 1);
        let sp = |d, m: u32, n| {
            TruncatedSeries::sparse_factor_power(d, &two, &BigUint::from(m), n, 1)
        };
        assert_eq!(sp(1, 2, 3), s(&[1, 4, 4, 0]));
        assert_eq!(sp(2, 1, 5), s(&[1, 0, 2, 0, 0, 0]));
        assert_eq!(sp(1, 4, 2), s(&[1, 8, 24]));
    }

    #[test]
    fn sparse_factor_huge_exponent_against_pow_big() {
        let m = BigUint::from(1_000_000_007u64);
        let c = r(-3, 2);
        let sparse = TruncatedSeries::sparse_factor_power(2, &c, &m, 8, 1);
        let base = TruncatedSeries::new(
            vec![r(1, 1), r(0, 1), c.clone(), r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1), r(0, 1)],
            1,
        );
        assert_eq!(base.pow_big(&BigInt::from(m.clone())).unwrap(), sparse);
        let inv = TruncatedSeries::sparse_factor_inverse_power(2, &c, &m, 8, 1);
        assert_eq!(base.pow_big(&-BigInt::from(m)).unwrap(), inv);
    }

    #[test]
    fn derivative_examples() {
        let geo = TruncatedSeries::from_integers(std::iter::repeat_n(1, 51), 1);
        let tail = r(1, 1) / BigRational::from_integer(BigInt::from(2).pow(49));
        let v = geo.eval_derivatives(&r(1, 2), 0, &tail).unwrap();
        assert!(v[0].contains(&r(2, 1)));

        let poly = s(&[1, 4, 4]);
        let v = poly.eval_derivatives(&r(1, 2), 1, &BigRational::zero()).unwrap();
        assert_eq!(v[0].value, r(4, 1));
        assert_eq!(v[1].value, r(8, 1));

        // sum_{n<=N} q^n x^n at x = q^{-2}: closed form q/(q-1) (1 - q^{-N-1})
        let (q, n) = (3i64, 20usize);
        let f = TruncatedSeries::from_integers((0..=n as u32).map(|k| BigInt::from(q).pow(k)), 1);
        let x = r(1, q * q);
        let qr = r(q, 1);
        let closed = &qr / (&qr - r(1, 1))
            * (r(1, 1) - r(1, 1) / BigRational::from_integer(BigInt::from(q).pow(n as u32 + 1)));
        let tail = r(1, 1) / BigRational::from_integer(BigInt::from(q).pow(n as u32));
        let v = f.eval_derivatives(&x, 0, &tail).unwrap();
        assert_eq!(v[0].value, closed);
        assert!(v[0].contains(&(&qr / (&qr - r(1, 1)))));

        assert!(poly.eval_derivatives(&r(1, 2), 0, &r(-1, 1)).is_err());
        assert!(poly.eval_derivatives_within(&r(1, 2), &r(1, 2), 0, &r(0, 1)).is_err());
    }

    fn arb_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec((-20i64..20, 1i64..6), order + 1).prop_map(|v| {
            TruncatedSeries::new(v.into_iter().map(|(n, d)| r(n, d)).collect(), 1)
        })
    }

    fn arb_unit_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        (arb_series(order), (1i64..9), prop::bool::ANY).prop_map(|(f, c0, neg)| {
            let mut coeffs = f.into_coeffs();
            coeffs[0] = r(if neg { -c0 } else { c0 }, 1);
            TruncatedSeries::new(coeffs, 1)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn ring_axioms(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
            let ab_c = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
            let a_bc = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
            let rhs = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(a.checked_mul(&b).unwrap(), b.checked_mul(&a).unwrap());
        }

        #[test]
        fn inverse_is_exact(f in arb_unit_series(10)) {
            let prod = f.checked_mul(&f.invert().unwrap()).unwrap();
            prop_assert_eq!(prod, TruncatedSeries::one(10, 1));
            prop_assert_eq!(f.invert().unwrap().invert().unwrap(), f);
        }

        #[test]
        fn sparse_power_matches_repeated_multiplication(
            d in 1usize..4, cn in -5i64..6, cd in 1i64..4, m in 0u32..=64
        ) {
            let c = r(cn, cd);
            let n = 12;
            let mut base = vec![r(0, 1); n + 1];
            base[0] = r(1, 1);
            base[d] = c.clone();
            let dense = TruncatedSeries::new(base, 1).pow_int(m as i64).unwrap();
            let sparse = TruncatedSeries::sparse_factor_power(d, &c, &BigUint::from(m), n, 1);
            prop_assert_eq!(&dense, &sparse);
            let inv = TruncatedSeries::sparse_factor_inverse_power(d, &c, &BigUint::from(m), n, 1);
            prop_assert_eq!(sparse.checked_mul(&inv).unwrap(), TruncatedSeries::one(n, 1));
        }

        #[test]
        fn pow_big_matches_pow_int(f in arb_series(8), m in -6i64..=12) {
            let mut coeffs = f.into_coeffs();
            coeffs[0] = r(1, 1);
            let f = TruncatedSeries::new(coeffs, 1);
            prop_assert_eq!(f.pow_big(&BigInt::from(m)).unwrap(), f.pow_int(m).unwrap());
        }

        #[test]
        fn polynomial_evaluation_is_exact(f in arb_series(5), xn in -5i64..6, xd in 1i64..7) {
            let x = r(xn, xd);
            let v = f.eval_derivatives(&x, 2, &BigRational::zero()).unwrap();
            // Horner oracle for f and f'
            let c = f.coeffs();
            let mut val = r(0, 1);
            let mut der = r(0, 1);
            for k in (0..c.len()).rev() {
                der = der * &x + &val;
                val = val * &x + &c[k];
            }
            prop_assert_eq!(&v[0].value, &val);
            prop_assert_eq!(&v[1].value, &der);
            prop_assert!(v[0].radius.is_zero());
        }
    }
}
