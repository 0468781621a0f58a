//! Coefficient asymptotics from a pole of known order.
//!
//! If `f(u) = g(u) (u - u0)^{-w} + h(u)` with `u0 = q^{-a}`, `g` analytic
//! on a disc of radius `q^{-(a - δ)}` and `h` analytic there too, then
//!
//! ```text
//! [u^n] f = q^{a n} Q(n) + O(q^{(a - δ + ε) n})
//! ```
//!
//! where `Q` has degree `w - 1` and is determined by the jet of `g` at `u0`.
//! The `Q` computed here is the one that reproduces the coefficients; its
//! leading coefficient is `c_1 = (-1)^w g(u0) q^{a w} / (w - 1)!`.

mod demo;

pub use demo::{
    binomial_pole_series, c1_c2_real, gamma, gamma_ratio_check, integrate_adaptive, keyhole_integral_check,
    GammaRatioCheck, KeyholeCheck,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::census::PrimeCensus;
use crate::field::FieldParams;
use crate::lfunc::{build_f_series, zg_tail_bound};
use crate::numeric::{ln_abs, to_f64};
use crate::series::{Enclosure, TruncatedSeries};
use crate::{Error, Result};

/// A pole at `u0 = q^{-a}` of integer order `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoleData {
    pub q: u64,
    pub a: u32,
    pub w: u32,
}

impl PoleData {
    pub fn new(q: u64, a: u32, w: u32) -> Result<Self> {
        if q < 2 || a == 0 || w == 0 {
            return Err(Error::InvalidParameter(format!("pole needs q >= 2, a >= 1, w >= 1 (got {q}, {a}, {w})")));
        }
        Ok(Self { q, a, w })
    }

    /// `q^a`.
    pub fn q_a(&self) -> BigInt {
        BigInt::from(self.q).pow(self.a)
    }

    /// `u0 = q^{-a}`.
    pub fn u0(&self) -> BigRational {
        BigRational::new(BigInt::one(), self.q_a())
    }
}

/// A real quantity known to within `radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub radius: f64,
}

impl Estimate {
    pub fn relative_radius(&self) -> f64 {
        self.radius / self.value.abs()
    }
}

/// One line of a prediction table. `residual = exact - predicted`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub n: usize,
    pub exact: BigInt,
    pub predicted: BigRational,
    pub residual: BigRational,
    /// `log_q |residual| / n`; `None` when the residual vanishes.
    pub residual_exponent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticModel {
    pub pole: PoleData,
    /// `g^{(j)}(u0)` for `j = 0..=max(w - 1, 1)`.
    pub jets: Vec<Enclosure>,
    /// Coefficients of `Q`, constant term first.
    pub q_coeffs: Vec<Enclosure>,
    pub c1: Enclosure,
    /// Present when `w >= 2`.
    pub c2: Option<Enclosure>,
    /// `r(K, ell)`, present for models built from a field.
    pub r: Option<Estimate>,
    /// `a - δ`, when known.
    pub secondary_radius_exponent: Option<f64>,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// `Σ k_i e_i` with the radii combined accordingly.
fn combine(terms: &[(BigRational, &Enclosure)]) -> Enclosure {
    let mut value = BigRational::zero();
    let mut radius = BigRational::zero();
    for (k, e) in terms {
        value += k * &e.value;
        radius += k.abs() * &e.radius;
    }
    Enclosure { value, radius }
}

/// `f · (u - u0)^w`, dropping the top `w` coefficients, which depend on
/// terms of `f` beyond its order.
pub fn strip_pole(f: &TruncatedSeries, pole: &PoleData) -> Result<TruncatedSeries> {
    let w = pole.w as usize;
    if w > f.order() {
        return Err(Error::InvalidParameter(format!(
            "pole order {w} exceeds series order {}",
            f.order()
        )));
    }
    let lin = TruncatedSeries::new(vec![-pole.u0(), BigRational::one()], f.scale());
    let mut factor = TruncatedSeries::one(f.order(), f.scale());
    for _ in 0..w {
        let padded = TruncatedSeries::from_poly(lin.coeffs(), f.order(), f.scale());
        factor = factor.checked_mul(&padded)?;
    }
    Ok(f.checked_mul(&factor)?.truncate(f.order() - w))
}

/// Coefficients of `Q`, constant term first, from the jet `g^{(j)}(u0)`,
/// `j < w`:
///
/// `Q(X) = -Σ_j g^{(j)}(u0) (-1)^{w-j-1} / (j! (w-j-1)!) · ∏_{l=1}^{w-j-1} (X + l) · q^{a(w-j)}`.
pub fn q_polynomial(jets: &[Enclosure], pole: &PoleData) -> Result<Vec<Enclosure>> {
    let w = pole.w as usize;
    if jets.len() < w {
        return Err(Error::InvalidParameter(format!("{w} derivatives needed, {} given", jets.len())));
    }
    let qa = pole.q_a();
    // per_jet[j][k]: multiplier of g^{(j)} in the X^k coefficient
    let mut per_jet = Vec::with_capacity(w);
    for j in 0..w {
        let m = w - j - 1;
        let mut poly = vec![BigInt::one()];
        for l in 1..=m {
            let mut next = vec![BigInt::zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i] += c * BigInt::from(l);
                next[i + 1] += c;
            }
            poly = next;
        }
        let sign = if m.is_multiple_of(2) { -BigInt::one() } else { BigInt::one() };
        let scale = BigRational::new(sign * qa.pow((w - j) as u32), factorial(j as u32) * factorial(m as u32));
        per_jet.push(poly.into_iter().map(|c| &scale * rat(c)).collect::<Vec<_>>());
    }
    Ok((0..w)
        .map(|k| {
            let terms: Vec<_> = (0..w)
                .filter(|&j| k < per_jet[j].len())
                .map(|j| (per_jet[j][k].clone(), &jets[j]))
                .collect();
            combine(&terms)
        })
        .collect())
}

/// `c_1 = (-1)^w g(u0) q^{a w} / (w - 1)!`.
pub fn c1(g0: &Enclosure, pole: &PoleData) -> Enclosure {
    let sign = if pole.w.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let k = BigRational::new(sign * pole.q_a().pow(pole.w), factorial(pole.w - 1));
    combine(&[(k, g0)])
}

/// `c_2 = (-1)^w q^{a w} [g(u0) w / 2 - g'(u0) / q^a] / (w - 2)!`, the
/// coefficient of `X^{w-2}` in `Q`.
pub fn c2(g0: &Enclosure, g1: &Enclosure, pole: &PoleData) -> Result<Enclosure> {
    if pole.w < 2 {
        return Err(Error::InvalidParameter("c2 is defined only for w >= 2".into()));
    }
    let sign = if pole.w.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let qa = pole.q_a();
    let k = BigRational::new(sign * qa.pow(pole.w), factorial(pole.w - 2));
    let k0 = &k * BigRational::new(BigInt::from(pole.w), BigInt::from(2));
    let k1 = -(&k / rat(qa));
    Ok(combine(&[(k0, g0), (k1, g1)]))
}

/// `r = Z_g(q^{-alpha}) (-q^alpha / log q^alpha)^w`; must come out positive.
pub fn r_from_series(zg_at_pole: &Enclosure, params: &FieldParams) -> Result<Estimate> {
    let qa = BigInt::from(params.q).pow(params.alpha);
    let w = params.w;
    let sign = if w.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let exact = rat(sign * qa.pow(w));
    let value_rat = &zg_at_pole.value * &exact;
    let radius_rat = &zg_at_pole.radius * exact.abs();
    let log_qa = params.alpha as f64 * (params.q as f64).ln();
    let denom = log_qa.powi(w as i32);
    let value = to_f64(&value_rat) / denom;
    if value.is_nan() || value <= 0.0 {
        return Err(Error::NonPositive(format!("r evaluated to {value}")));
    }
    Ok(Estimate {
        value,
        radius: to_f64(&radius_rat) / denom + value.abs() * 1e-15,
    })
}

impl AsymptoticModel {
    /// Builds the model from the first `f.order() + 1` coefficients of `f`,
    /// given a bound on the discarded tail of the stripped series and of its
    /// first `max(w - 1, 1)` derivatives at `u0`.
    pub fn from_series(f: &TruncatedSeries, pole: PoleData, tail_bound: &BigRational) -> Result<Self> {
        let stripped = strip_pole(f, &pole)?;
        let j_max = (pole.w as usize - 1).max(1);
        let jets = stripped.eval_derivatives(&pole.u0(), j_max, tail_bound)?;
        let q_coeffs = q_polynomial(&jets, &pole)?;
        let c1 = c1(&jets[0], &pole);
        let c2 = if pole.w >= 2 { Some(c2(&jets[0], &jets[1], &pole)?) } else { None };
        Ok(Self {
            pole,
            jets,
            q_coeffs,
            c1,
            c2,
            r: None,
            secondary_radius_exponent: None,
        })
    }

    /// The model for `f(s)` of the given field, built from `f` through `order`.
    pub fn for_field(params: &FieldParams, census: &PrimeCensus, order: usize) -> Result<Self> {
        let pole = PoleData::new(params.q, params.alpha, params.w)?;
        if order <= pole.w as usize {
            return Err(Error::InvalidParameter(format!("order {order} is too small for a pole of order {}", pole.w)));
        }
        let f = build_f_series(params, census, order)?;
        let j_max = (pole.w as usize - 1).max(1);
        let tail = zg_tail_bound(params, order - pole.w as usize, j_max)?;
        let mut model = Self::from_series(&f, pole, &tail)?;
        model.r = Some(r_from_series(&model.jets[0], params)?);
        model.secondary_radius_exponent = Some(params.alpha as f64 / 2.0);
        Ok(model)
    }

    /// `Q(n)` at the coefficient midpoints.
    pub fn q_at(&self, n: usize) -> BigRational {
        let x = rat(n as u64);
        self.q_coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + &c.value)
    }

    /// `q^{a n} Q(n)`.
    pub fn predict(&self, n: usize) -> BigRational {
        self.q_at(n) * rat(self.pole.q_a().pow(n as u32))
    }

    /// Bound on how far [`predict`](Self::predict) can be from the value
    /// with exact `Q` coefficients.
    pub fn predict_radius(&self, n: usize) -> BigRational {
        let x = rat(n as u64);
        let q = self
            .q_coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + &c.radius);
        q * rat(self.pole.q_a().pow(n as u32))
    }

    /// Leading coefficient of `Q` divided by `r (log q^a)^w / (w - 1)!`;
    /// equal to 1 when the two routes to `c_1` agree.
    pub fn normalized_leading(&self, r: f64) -> f64 {
        let log_qa = self.pole.a as f64 * (self.pole.q as f64).ln();
        let fact: f64 = (1..self.pole.w).map(|i| i as f64).product();
        to_f64(&self.q_coeffs[self.pole.w as usize - 1].value) * fact / (r * log_qa.powi(self.pole.w as i32))
    }

    /// Compares `exact[n]` with the prediction for every `n` in `range`.
    pub fn compare(&self, exact: &[BigInt], range: std::ops::RangeInclusive<usize>) -> Vec<ComparisonRow> {
        self.compare_scaled(exact, range, &BigRational::one())
    }

    /// As [`compare`](Self::compare) for a sequence equal to `factor` times
    /// the coefficients, such as `a_ell(n) = 2 b_{alpha n} / (ell - 1)`.
    pub fn compare_scaled(
        &self,
        exact: &[BigInt],
        range: std::ops::RangeInclusive<usize>,
        factor: &BigRational,
    ) -> Vec<ComparisonRow> {
        let ln_q = (self.pole.q as f64).ln();
        range
            .filter(|&n| n < exact.len())
            .map(|n| {
                let predicted = self.predict(n) * factor;
                let residual = rat(exact[n].clone()) - &predicted;
                let residual_exponent = if residual.is_zero() || n == 0 {
                    None
                } else {
                    Some(ln_abs(&residual) / ln_q / n as f64)
                };
                ComparisonRow {
                    n,
                    exact: exact[n].clone(),
                    predicted,
                    residual,
                    residual_exponent,
                }
            })
            .collect()
    }
}

/// Least-squares slope of `log_q |residual|` against `n`, ignoring zero
/// residuals.
pub fn fitted_exponent(rows: &[ComparisonRow], q: u64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| !r.residual.is_zero())
        .map(|r| (r.n as f64, ln_abs(&r.residual) / (q as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
