//! Zeta functions, partial Euler products and their factorizations.
//!
//! The counting series is
//!
//! ```text
//! f(s) = ∏_{alpha | deg P} (1 + (ell - 1) q^{-deg(P) s}) = Σ_n b_{alpha n} u^n,  u = q^{-alpha s}
//! ```
//!
//! and factors as `f = ζ_{A_alpha}^w · g` with `g` analytic past `s = 1`:
//! `g` is the product of the local polynomials
//! `h(x) = (1 + (ell - 1) x)(1 - x)^{ell - 1}` over `alpha | deg P`, times
//! `L_d^{-w}` for the proper divisors `d` of `alpha`. Everything here is
//! expanded exactly; [`analytic`] evaluates the same products at `s = 1`.

pub mod analytic;
mod product;

pub use analytic::{cubic_even_product, g_at_one, zg_tail_bound, CertifiedConstant, GAtOne, ProductConfig};
pub use product::{DegreeFilter, LocalFactor, ProductSpec};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::census::PrimeCensus;
use crate::field::{divisors, FieldParams};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// `ζ` of `F_{q^σ}[t]` in `u = q^{-σ s}`: `1 / (1 - q^σ u) = Σ q^{σ n} u^n`.
pub fn zeta_series(q: u64, scale: u32, order: usize) -> TruncatedSeries {
    let base = BigInt::from(q).pow(scale);
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut acc = BigInt::one();
    for _ in 0..=order {
        coeffs.push(BigRational::from_integer(acc.clone()));
        acc *= &base;
    }
    TruncatedSeries::new(coeffs, scale)
}

/// `f(s)` in `u = q^{-alpha s}`; coefficient `n` is `b_{alpha n}`.
pub fn build_f_series(params: &FieldParams, census: &PrimeCensus, order: usize) -> Result<TruncatedSeries> {
    ProductSpec {
        params: *params,
        census,
        degree_filter: DegreeFilter::AlphaDivides,
        local_factor: LocalFactor::OnePlusCu,
        power: 1,
        order,
    }
    .build()
}

/// `L_d(s) = ∏_{gcd(alpha, deg P) = d} (1 - q^{-(alpha deg P / d) s})^{-d}`
/// in `u = q^{-alpha s}`.
pub fn build_l_d_series(params: &FieldParams, census: &PrimeCensus, d: u32, order: usize) -> Result<TruncatedSeries> {
    if d == 0 || !params.alpha.is_multiple_of(d) {
        return Err(Error::InvalidParameter(format!("d = {d} does not divide alpha = {}", params.alpha)));
    }
    ProductSpec {
        params: *params,
        census,
        degree_filter: DegreeFilter::GcdEquals(d),
        local_factor: LocalFactor::OneMinusUInv,
        power: 1,
        order,
    }
    .build()
}

/// Coefficients of `h(x) = (1 + (ell - 1) x)(1 - x)^{ell - 1}`, from `x^0`
/// to `x^ell`, by direct polynomial expansion.
pub fn h_coefficients(ell: u64) -> Vec<BigInt> {
    assert!(ell >= 2, "ell must be at least 2");
    let m = ell as usize - 1;
    let mut one_minus = vec![BigInt::one()];
    for _ in 0..m {
        let mut next = vec![BigInt::zero(); one_minus.len() + 1];
        for (i, c) in one_minus.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c;
        }
        one_minus = next;
    }
    let lead = BigInt::from(m);
    let mut out = vec![BigInt::zero(); m + 2];
    for (i, c) in one_minus.iter().enumerate() {
        out[i] += c;
        out[i + 1] += &lead * c;
    }
    out
}

/// `c_i = (-1)^i C(ell-1, i) + (-1)^{i-1} (ell-1) C(ell-1, i-1)` for `1 <= i <= ell`.
pub fn h_coefficient_closed_form(ell: u64, i: u64) -> BigInt {
    assert!(i >= 1 && i <= ell);
    let m = BigInt::from(ell - 1);
    let sign = |k: u64| if k.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let first = if i < ell { sign(i) * binomial(m.clone(), BigInt::from(i)) } else { BigInt::zero() };
    first + sign(i - 1) * &m * binomial(m.clone(), BigInt::from(i - 1))
}

/// The analytic factor `g` as an Euler product: the `h`-product over
/// `alpha | deg P` times `L_d^{-w}` for every proper divisor `d` of `alpha`.
pub fn g_series_product(params: &FieldParams, census: &PrimeCensus, order: usize) -> Result<TruncatedSeries> {
    let mut g = ProductSpec {
        params: *params,
        census,
        degree_filter: DegreeFilter::AlphaDivides,
        local_factor: LocalFactor::HFactor,
        power: 1,
        order,
    }
    .build()?;
    for d in divisors(params.alpha as u64).into_iter().filter(|&d| d < params.alpha as u64) {
        let l = ProductSpec {
            params: *params,
            census,
            degree_filter: DegreeFilter::GcdEquals(d as u32),
            local_factor: LocalFactor::OneMinusUInv,
            power: -(params.w as i64),
            order,
        }
        .build()?;
        g = g.checked_mul(&l)?;
    }
    Ok(g)
}

/// The analytic factor `g` obtained from `f` by clearing the pole:
/// `g = f · (1 - q^alpha u)^w`.
pub fn g_series_from_f(params: &FieldParams, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let qa = BigRational::from_integer(BigInt::from(params.q).pow(params.alpha));
    let mut lin = vec![BigRational::zero(); f.order() + 1];
    lin[0] = BigRational::one();
    if f.order() >= 1 {
        lin[1] = -qa;
    }
    let clear = TruncatedSeries::new(lin, params.alpha).pow_int(params.w as i64)?;
    f.checked_mul(&clear)
}

/// `(1 + 2y)(1 - y)/(1 + y)` product over even-degree primes, `u = q^{-2s}`.
pub fn cubic_even_series(params: &FieldParams, census: &PrimeCensus, order: usize) -> Result<TruncatedSeries> {
    ProductSpec {
        params: *params,
        census,
        degree_filter: DegreeFilter::Even,
        local_factor: LocalFactor::CubicEvenRational,
        power: 1,
        order,
    }
    .build()
}

/// Factorization identities checked coefficient by coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// `ζ_{A_alpha} = ∏_{d | alpha} L_d`.
    ZetaFactorization,
    /// `f = ζ_{A_alpha}^w · g` with `g` built as an Euler product.
    LemmaF,
    /// `f = ζ_{A_2}(s) ζ_A(2s)^{-1} ∏_{deg P even} (1 + 2y)(1 - y)/(1 + y)`
    /// for `ell = 3`, `q ≡ 2 (mod 3)`.
    CubicEven,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub first_mismatch: Option<usize>,
}

impl IdentityCheck {
    fn compare(lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Self {
        let first_mismatch = lhs.coeffs().iter().zip(rhs.coeffs()).position(|(a, b)| a != b);
        Self {
            holds: first_mismatch.is_none(),
            first_mismatch,
        }
    }
}

/// Expands both sides of `which` through `order` and compares them exactly.
pub fn verify_identity(which: Identity, params: &FieldParams, census: &PrimeCensus, order: usize) -> Result<IdentityCheck> {
    match which {
        Identity::ZetaFactorization => {
            let mut prod = TruncatedSeries::one(order, params.alpha);
            for d in divisors(params.alpha as u64) {
                prod = prod.checked_mul(&build_l_d_series(params, census, d as u32, order)?)?;
            }
            Ok(IdentityCheck::compare(&zeta_series(params.q, params.alpha, order), &prod))
        }
        Identity::LemmaF => {
            let f = build_f_series(params, census, order)?;
            let zeta_w = zeta_series(params.q, params.alpha, order).pow_int(params.w as i64)?;
            let rhs = zeta_w.checked_mul(&g_series_product(params, census, order)?)?;
            Ok(IdentityCheck::compare(&f, &rhs))
        }
        Identity::CubicEven => {
            if params.ell != 3 || params.q % 3 != 2 {
                return Err(Error::InvalidParameter("the even-degree identity needs ell = 3 and q ≡ 2 (mod 3)".into()));
            }
            let f = build_f_series(params, census, order)?;
            let mut inv_zeta_2s = vec![BigRational::zero(); order + 1];
            inv_zeta_2s[0] = BigRational::one();
            if order >= 1 {
                inv_zeta_2s[1] = -BigRational::from_integer(BigInt::from(params.q));
            }
            let rhs = zeta_series(params.q, 2, order)
                .checked_mul(&TruncatedSeries::new(inv_zeta_2s, 2))?
                .checked_mul(&cubic_even_series(params, census, order)?)?;
            Ok(IdentityCheck::compare(&f, &rhs))
        }
    }
}
