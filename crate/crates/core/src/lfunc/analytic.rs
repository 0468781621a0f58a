//! Evaluation of the analytic factor `g` at `s = 1` and of related constants.
//!
//! Partial Euler products are accumulated in [`Ball`] arithmetic; the part of
//! the product beyond the degree cutoff is bounded explicitly. For a prime of
//! degree `e` the local factor differs from 1 by at most `2 S q^{-2e}`, and
//! `N_q(e) <= q^e / e`, so the logarithm of the tail is at most a geometric
//! series in `q^{-e}`. All bounds are exact rationals.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::h_coefficients;
use crate::ball::Ball;
use crate::census::PrimeCensus;
use crate::field::{divisors, gcd, FieldParams};
use crate::{Error, Result};

/// Cutoff and working precision for partial Euler products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductConfig {
    /// Largest prime degree included in the partial product.
    pub cutoff: u32,
    /// Significant digits carried by the fixed-point accumulation.
    pub digits: usize,
    /// When set, fail unless the certified relative error is below `10^-k`.
    pub required_digits: Option<u32>,
}

impl Default for ProductConfig {
    fn default() -> Self {
        Self {
            cutoff: 20,
            digits: 30,
            required_digits: None,
        }
    }
}

impl ProductConfig {
    pub fn with_cutoff(cutoff: u32) -> Self {
        Self {
            cutoff,
            ..Self::default()
        }
    }

    fn bits(&self, q: u64) -> u32 {
        let digits_bits = (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32;
        let growth = (self.cutoff as f64 * (q as f64).log2()).ceil() as u32;
        digits_bits + growth + 80
    }
}

/// A partial product together with a bound on what the omitted factors can
/// change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedConstant {
    /// The partial product, with its own rounding radius.
    pub partial: Ball,
    /// Bound on `|true value - partial value|`.
    pub tail_bound: BigRational,
}

impl CertifiedConstant {
    pub fn enclosure(&self) -> Ball {
        self.partial.widen(&self.tail_bound)
    }

    pub fn value(&self) -> BigRational {
        self.partial.mid()
    }

    pub fn value_f64(&self) -> f64 {
        self.partial.mid_f64()
    }

    /// Total radius: rounding plus tail.
    pub fn radius(&self) -> BigRational {
        self.partial.radius() + &self.tail_bound
    }

    pub fn radius_f64(&self) -> f64 {
        crate::numeric::to_f64(&self.radius())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        (x - self.value()).abs() <= self.radius()
    }

    pub fn relative_radius_f64(&self) -> f64 {
        self.radius_f64() / self.value_f64().abs()
    }

    pub fn to_scientific(&self, digits: usize) -> String {
        self.partial.to_scientific(digits)
    }

    fn check_required(&self, config: &ProductConfig, what: &str) -> Result<()> {
        if let Some(k) = config.required_digits {
            let rel = self.relative_radius_f64();
            if rel.is_nan() || rel >= 10f64.powi(-(k as i32)) {
                return Err(Error::CutoffTooSmall {
                    cutoff: config.cutoff,
                    detail: format!("{what} is certified only to relative {rel:.3e}, {k} digits requested"),
                });
            }
        }
        Ok(())
    }
}

/// `g(1)` and the first-order data of `g` at `s = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GAtOne {
    pub value: CertifiedConstant,
    /// `g'(1) / (g(1) log q)`, a rational partial sum.
    pub log_derivative: CertifiedConstant,
    /// `g'(1) / log q`.
    pub derivative_over_log_q: CertifiedConstant,
    pub cutoff: u32,
}

impl GAtOne {
    /// `g'(1)` as a float.
    pub fn derivative_f64(&self, q: u64) -> f64 {
        self.derivative_over_log_q.value_f64() * (q as f64).ln()
    }
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn q_pow_neg(q: u64, e: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(q).pow(e as u32))
}

fn poly_eval(coeffs: &[BigInt], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + rat(c.clone()))
}

/// `Σ_{k>=0} q^{-k} = q / (q - 1)`.
fn geometric(q: u64) -> BigRational {
    BigRational::new(BigInt::from(q), BigInt::from(q - 1))
}

/// `|e^t - 1| <= t / (1 - t)` for `0 <= t < 1`.
fn exp_excess(t: &BigRational) -> BigRational {
    t / (BigRational::one() - t)
}

/// Partial product of `g(1)` over primes of degree at most the cutoff, plus
/// the logarithmic derivative, both with certified tails.
pub fn g_at_one(params: &FieldParams, census: &PrimeCensus, config: &ProductConfig) -> Result<GAtOne> {
    let d_max = config.cutoff;
    if d_max < 1 {
        return Err(Error::CutoffTooSmall {
            cutoff: d_max,
            detail: "at least one prime degree is needed".into(),
        });
    }
    if census.q() != params.q {
        return Err(Error::InvalidParameter(format!("census is for q = {}, not {}", census.q(), params.q)));
    }
    census.require_depth(d_max)?;

    let (q, alpha, w) = (params.q, params.alpha as u64, params.w as u64);
    let bits = config.bits(q);
    let h = h_coefficients(params.ell);
    let h_prime: Vec<BigInt> = h.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let proper: Vec<u64> = divisors(alpha).into_iter().filter(|&d| d < alpha).collect();

    let mut value = Ball::one(bits);
    let mut log_deriv = BigRational::zero();
    for e in 1..=d_max as u64 {
        let count: &BigUint = census.count(e as u32);
        if count.is_zero() {
            continue;
        }
        let count_q = rat(BigInt::from(count.clone()));
        let div = gcd(alpha, e);
        if div == alpha {
            let x = q_pow_neg(q, e);
            let hx = poly_eval(&h, &x);
            let dhx = poly_eval(&h_prime, &x);
            value = value.mul(&Ball::from_rational(&hx, bits).pow(count));
            log_deriv -= &count_q * rat(e) * &x * dhx / hx;
        } else {
            // (1 - y)^{d w N(e)} with y = q^{-alpha e / d}
            let y = q_pow_neg(q, alpha * e / div);
            let base = BigRational::one() - &y;
            let exponent = count * BigUint::from(div * w);
            value = value.mul(&Ball::from_rational(&base, bits).pow(&exponent));
            log_deriv += &count_q * rat(w * alpha * e) * &y / base;
        }
    }

    // Tail: primes of degree > D.
    let x_max = q_pow_neg(q, d_max as u64 + 1);
    let mut s = BigRational::zero();
    let mut s_prime = BigRational::zero();
    let mut x_pow = BigRational::one();
    for (i, c) in h.iter().enumerate().skip(2) {
        let mag = rat(c.abs());
        s += &mag * &x_pow;
        s_prime += mag * rat(i as u64) * &x_pow;
        x_pow *= &x_max;
    }
    if &x_max * &x_max * &s > BigRational::new(1.into(), 2.into()) {
        return Err(Error::CutoffTooSmall {
            cutoff: d_max,
            detail: "local factors beyond the cutoff are not yet close to 1".into(),
        });
    }
    let l_weight: BigRational = proper.iter().map(|&d| rat(2 * d * w)).sum();
    let geo = &x_max * geometric(q);
    let log_tail = (rat(2) * &s + l_weight) * &geo / rat(d_max as u64 + 1);
    if log_tail >= BigRational::one() {
        return Err(Error::CutoffTooSmall {
            cutoff: d_max,
            detail: "the tail of the product is not yet small".into(),
        });
    }
    let value_tail = value.mid().abs() * exp_excess(&log_tail) + value.radius() * exp_excess(&log_tail);
    let ld_tail = (rat(2) * s_prime + rat(2 * w * alpha * proper.len() as u64)) * geo;

    let value = CertifiedConstant {
        partial: value,
        tail_bound: value_tail,
    };
    let log_derivative = CertifiedConstant {
        partial: Ball::from_rational(&log_deriv, bits),
        tail_bound: ld_tail,
    };
    let product = value.enclosure().mul(&log_derivative.enclosure());
    let derivative_over_log_q = CertifiedConstant {
        partial: product,
        tail_bound: BigRational::zero(),
    };
    value.check_required(config, "g(1)")?;
    Ok(GAtOne {
        value,
        log_derivative,
        derivative_over_log_q,
        cutoff: d_max,
    })
}

/// `(1 - 1/q) ∏_{deg P even} (q^d + 2)(q^d - 1) / (q^d (q^d + 1))` over even
/// degrees up to the cutoff, for `q ≡ 2 (mod 3)`.
pub fn cubic_even_product(q: u64, census: &PrimeCensus, config: &ProductConfig) -> Result<CertifiedConstant> {
    if q % 3 != 2 {
        return Err(Error::InvalidParameter(format!("q = {q} is not 2 mod 3")));
    }
    if census.q() != q {
        return Err(Error::InvalidParameter(format!("census is for q = {}, not {q}", census.q())));
    }
    let d_max = config.cutoff;
    if d_max < 2 || !d_max.is_multiple_of(2) {
        return Err(Error::CutoffTooSmall {
            cutoff: d_max,
            detail: "the cutoff must be a positive even degree".into(),
        });
    }
    census.require_depth(d_max)?;
    let bits = config.bits(q);
    let mut acc = Ball::from_rational(&BigRational::new(BigInt::from(q - 1), BigInt::from(q)), bits);
    for e in (2..=d_max).step_by(2) {
        let x = BigInt::from(q).pow(e);
        let factor = BigRational::new((&x + 2) * (&x - 1), &x * (&x + 1));
        acc = acc.mul(&Ball::from_rational(&factor, bits).pow(census.count(e)));
    }
    // each factor is 1 - 2/(x^2 + x) with x = q^e, in (1 - 4 q^{-2e}, 1)
    let log_tail = rat(4) * q_pow_neg(q, d_max as u64 + 1) * geometric(q) / rat(d_max as u64 + 1);
    let tail = (acc.mid().abs() + acc.radius()) * exp_excess(&log_tail);
    let out = CertifiedConstant {
        partial: acc,
        tail_bound: tail,
    };
    out.check_required(config, "the leading constant")?;
    Ok(out)
}

/// Bound on the discarded tail `Σ_{n>N} |z_n| n^j u0^{n-j}` of the stripped
/// series `Z_g = (-q^{-alpha})^w g` at `u0 = q^{-alpha}`, uniform in
/// `j <= j_max`.
///
/// Coefficients of `g` are bounded by Cauchy's estimate on the circle
/// `|u| = ρ < q^{-alpha/2}`, where `g` is dominated by the majorant
/// `exp(S(ρ) Σ N(αk) ρ^{2k}) · ∏_d (1 - q^d ρ)^{-w}`. The bound is
/// minimized over a grid of radii and rounded up to a power of two.
pub fn zg_tail_bound(params: &FieldParams, order: usize, j_max: usize) -> Result<BigRational> {
    let (q, alpha, w) = (params.q as f64, params.alpha as f64, params.w as f64);
    let h = h_coefficients(params.ell);
    let habs: Vec<f64> = h.iter().map(|c| crate::numeric::to_f64(&rat(c.abs()))).collect();
    let proper: Vec<f64> = divisors(params.alpha as u64)
        .into_iter()
        .filter(|&d| d < params.alpha as u64)
        .map(|d| d as f64)
        .collect();
    let ln_u0 = -alpha * q.ln();
    let n1 = order as f64 + 1.0;
    let mut best = f64::INFINITY;
    for step in 1..=2000 {
        let theta = 0.5 + 0.4995 * step as f64 / 2000.0;
        let ln_rho = ln_u0 / 2.0 + theta.ln();
        let rho = ln_rho.exp();
        let s: f64 = habs.iter().skip(2).enumerate().map(|(k, c)| c * rho.powi(k as i32)).sum();
        let qa_rho2 = (alpha * q.ln() + 2.0 * ln_rho).exp();
        let mut ln_g = -(s / alpha) * (-qa_rho2).ln_1p();
        for &d in &proper {
            ln_g -= w * (-(d * q.ln() + ln_rho).exp()).ln_1p();
        }
        let ln_z = ln_u0 - ln_rho;
        let mut worst = f64::NEG_INFINITY;
        for j in 0..=j_max {
            let ratio = (ln_z + j as f64 * ((n1 + 1.0) / n1).ln()).exp();
            if ratio >= 1.0 {
                worst = f64::INFINITY;
                break;
            }
            let ln_t = -alpha * w * q.ln() + ln_g - j as f64 * ln_u0 + j as f64 * n1.ln() + n1 * ln_z
                - (1.0 - ratio).ln();
            worst = worst.max(ln_t);
        }
        best = best.min(worst);
    }
    if !best.is_finite() {
        return Err(Error::CutoffTooSmall {
            cutoff: order as u32,
            detail: format!("series order {order} is too low to bound derivatives up to {j_max}"),
        });
    }
    // 1% slack for floating-point evaluation of the majorant
    let exponent = ((best + 0.01) / std::f64::consts::LN_2).ceil() as i64;
    Ok(if exponent >= 0 {
        rat(BigInt::one() << exponent as u32)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-exponent) as u32)
    })
}
