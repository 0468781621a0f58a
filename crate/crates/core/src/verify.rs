//! The self-check suite: every identity and oracle equivalence the crate
//! relies on, runnable as one unit.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::census::{EnumLimits, PrimeCensus};
use crate::counting::{
    character_multiplicity, exact_counts_dp, exact_counts_enumerative, exact_counts_series, ENUMERATIVE_MAX_DEGREE,
};
use crate::field::{is_prime, FieldParams};
use crate::lfunc::{g_at_one, h_coefficient_closed_form, h_coefficients, verify_identity, Identity, ProductConfig};
use crate::series::TruncatedSeries;
use crate::tauberian::{gamma_ratio_check, keyhole_integral_check, AsymptoticModel, PoleData};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub limits: EnumLimits,
    /// Search space allowed for the conductor enumeration in the three-route
    /// comparison and for the trial-division recheck of the census lists.
    /// Kept well below the census budget: each polynomial there costs a full
    /// factorization.
    pub conductor_space: u64,
    /// Order through which the factorization identities are expanded.
    pub identity_order: usize,
    /// Largest `n` for the series-versus-knapsack comparison.
    pub dp_max_n: usize,
    /// Order of `f` used for the asymptotic models.
    pub model_order: usize,
    /// Partial Euler product used for the product route to `r`.
    pub product: ProductConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            limits: EnumLimits::from_env(),
            conductor_space: 200_000,
            identity_order: 24,
            dp_max_n: 200,
            model_order: 60,
            product: ProductConfig::with_cutoff(40),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// What was compared, or where the first disagreement sits.
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            passed: false,
            detail: detail.into(),
        }
    }
}

type Check = fn(&VerifyConfig) -> Result<CheckOutcome>;

/// Every check, in the order [`run`] executes them.
pub fn checks() -> Vec<(&'static str, Check)> {
    vec![
        ("census-enumeration", census_enumeration),
        ("census-gauss-identity", gauss_identity),
        ("counting-three-routes", counting_three_routes),
        ("counting-series-vs-dp", counting_series_vs_dp),
        ("counting-quadratic-closed-form", quadratic_closed_form),
        ("character-multiplicity", character_multiplicities),
        ("h-coefficients", h_coefficient_structure),
        ("factorization-identities", factorization_identities),
        ("pole-stripping-exactness", synthetic_poles),
        ("dual-route-r", dual_route_r),
        ("appendix-lemmas", appendix_lemmas),
    ]
}

/// Runs the checks in order, reporting each through `report`, and stops at
/// the first failure.
pub fn run(config: &VerifyConfig, mut report: impl FnMut(&CheckOutcome)) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for (_, check) in checks() {
        let outcome = check(config)?;
        report(&outcome);
        let passed = outcome.passed;
        out.push(outcome);
        if !passed {
            break;
        }
    }
    Ok(out)
}

/// Largest degree `d <= cap` with `p^d` inside the budget.
fn degree_within(limits: &EnumLimits, p: u64, cap: u32) -> u32 {
    (1..=cap.min(limits.max_deg))
        .take_while(|&d| p.checked_pow(d).is_some_and(|s| s <= limits.max_space))
        .last()
        .unwrap_or(0)
}

fn census_enumeration(config: &VerifyConfig) -> Result<CheckOutcome> {
    const NAME: &str = "census-enumeration";
    let recheck_limits = EnumLimits {
        max_space: config.limits.max_space.min(config.conductor_space),
        ..config.limits
    };
    let mut covered = Vec::new();
    for p in [2u64, 3, 5, 7] {
        let d_max = degree_within(&config.limits, p, 8);
        if d_max == 0 {
            continue;
        }
        let census = PrimeCensus::with_lists(p, d_max, &config.limits)?;
        let lists = census.lists().expect("requested");
        for d in 1..=d_max {
            if BigUint::from(lists[&d].len()) != *census.count(d) {
                return Ok(CheckOutcome::fail(NAME, format!("p={p} d={d}")));
            }
        }
        let recheck = degree_within(&recheck_limits, p, d_max);
        if !census.verify_lists_through(recheck) {
            return Ok(CheckOutcome::fail(NAME, format!("p={p}: a listed polynomial is reducible")));
        }
        covered.push(format!("p={p} d<={d_max} (trial division d<={recheck})"));
    }
    Ok(CheckOutcome::pass(NAME, covered.join(", ")))
}

fn gauss_identity(_: &VerifyConfig) -> Result<CheckOutcome> {
    const NAME: &str = "census-gauss-identity";
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        if !PrimeCensus::new(q, 16)?.gauss_identity_holds() {
            return Ok(CheckOutcome::fail(NAME, format!("q={q}")));
        }
    }
    Ok(CheckOutcome::pass(NAME, "sum_{d|n} d N_q(d) = q^n for q <= 9, n <= 16"))
}

/// Largest `n` whose conductor enumeration fits the budget.
pub fn enumerative_reach(p: u64, alpha: u32, limits: &EnumLimits) -> usize {
    (degree_within(limits, p, ENUMERATIVE_MAX_DEGREE) / alpha) as usize
}

fn counting_three_routes(config: &VerifyConfig) -> Result<CheckOutcome> {
    const NAME: &str = "counting-three-routes";
    let limits = EnumLimits {
        max_space: config.limits.max_space.min(config.conductor_space),
        ..config.limits
    };
    let mut covered = Vec::new();
    for (p, ell) in [(2u64, 3u64), (2, 5), (3, 2), (5, 2), (5, 3), (7, 2)] {
        let params = FieldParams::new(p, ell)?;
        let n = enumerative_reach(p, params.alpha, &limits);
        if n == 0 {
            continue;
        }
        let census = PrimeCensus::new(p, params.alpha * n as u32)?;
        let s = exact_counts_series(&params, &census, n)?;
        let d = exact_counts_dp(&params, &census, n)?;
        let e = exact_counts_enumerative(p, ell, n, &limits)?;
        for k in 1..=n {
            if s.get(k) != d.get(k) || s.get(k) != e.get(k) {
                return Ok(CheckOutcome::fail(NAME, format!("q={p} ell={ell} n={k}")));
            }
        }
        covered.push(format!("({p},{ell}) n<={n}"));
    }
    Ok(CheckOutcome::pass(NAME, covered.join(", ")))
}

fn counting_series_vs_dp(config: &VerifyConfig) -> Result<CheckOutcome> {
    const NAME: &str = "counting-series-vs-dp";
    let n = config.dp_max_n;
    for (q, ell) in [(4u64, 3u64), (4, 5), (2, 3)] {
        let params = FieldParams::new(q, ell)?;
        let census = PrimeCensus::new(q, params.alpha * n as u32)?;
        let s = exact_counts_series(&params, &census, n)?;
        let d = exact_counts_dp(&params, &census, n)?;
        if let Some(k) = (1..=n).find(|&k| s.get(k) != d.get(k)) {
            return Ok(CheckOutcome::fail(NAME, format!("q={q} ell={ell} n={k}")));
        }
    }
    Ok(CheckOutcome::pass(NAME, format!("(4,3), (4,5), (2,3) through n={n}")))
}

fn quadratic_closed_form(_: &VerifyConfig) -> Result<CheckOutcome> {
    const NAME: &str = "counting-quadratic-closed-form";
    for q in [3u64, 5, 7] {
        let params = FieldParams::new(q, 2)?;
        let census = PrimeCensus::new(q, 100)?;
        let table = exact_counts_series(&params, &census, 100)?;
        if *table.get(1) != BigInt::from(2 * q) {
            return Ok(CheckOutcome::fail(NAME, format!("q={q} n=1")));
        }
        for n in 2..=100u32 {
            let qn = BigInt::from(q).pow(n);
            let expected = BigInt::from(2) * (&qn - &qn / BigInt::from(q));
            if *table.get(n as usize) != expected {
                return Ok(CheckOutcome::fail(NAME, format!("q={q} n={n}")));
            }
        }
    }
    Ok(CheckOutcome::pass(NAME, "a_2(n) = 2(q^n - q^{n-1}) for q in {3,5,7}, n <= 100"))
}

fn character_multiplicities(config: &VerifyConfig) -> Result<CheckOutcome> {
    const NAME: &str = "character-multiplicity";
    for ell in [2u64, 3, 5, 7, 11, 13] {
        for m in 1..=12u32 {
            if (ell - 1).checked_pow(m).is_none_or(|s| s > config.limits.max_space.min(1 << 20)) {
                break;
            }
            if character_multiplicity(m, ell, &config.limits)? != BigUint::from(ell - 1).pow(m - 1) {
                return Ok(CheckOutcome::fail(NAME, format!("m={m} ell={ell}")));
            }
        }
    }
    Ok(CheckOutcome::pass(NAME, "orbit counts equal (ell-1)^(m-1)"))
}

fn h_coefficient_structure(_: &VerifyConfig) -> Result<CheckOutcome> {
    const NAME: &str = "h-coefficients";
    for ell in (2..=97u64).filter(|&l| is_prime(l)) {
        let h = h_coefficients(ell);
        let top = if ell % 2 == 1 { BigInt::from(ell - 1) } else { -BigInt::from(ell - 1) };
        if !h[1].is_zero() || h[ell as usize] != top || h[ell as usize] != h_coefficient_closed_form(ell, ell) {
            return Ok(CheckOutcome::fail(NAME, format!("ell={ell}")));
        }
    }
    Ok(CheckOutcome::pass(NAME, "c_1 = 0 and c_ell = (-1)^(ell-1)(ell-1) for ell <= 97"))
}

fn factorization_identities(config: &VerifyConfig) -> Result<CheckOutcome> {
    const NAME: &str = "factorization-identities";
    let n = config.identity_order;
    for (q, ell) in [(2u64, 3u64), (2, 5), (3, 7), (4, 3), (4, 5), (5, 2)] {
        let params = FieldParams::new(q, ell)?;
        let census = PrimeCensus::new(q, params.alpha * n as u32)?;
        for which in [Identity::ZetaFactorization, Identity::LemmaF] {
            let check = verify_identity(which, &params, &census, n)?;
            if let Some(i) = check.first_mismatch {
                return Ok(CheckOutcome::fail(NAME, format!("{which:?} q={q} ell={ell} index={i}")));
            }
        }
    }
    for q in [2u64, 5] {
        let params = FieldParams::new(q, 3)?;
        let census = PrimeCensus::new(q, 2 * n as u32)?;
        let check = verify_identity(Identity::CubicEven, &params, &census, n)?;
        if let Some(i) = check.first_mismatch {
            return Ok(CheckOutcome::fail(NAME, format!("CubicEven q={q} index={i}")));
        }
    }
    Ok(CheckOutcome::pass(NAME, format!("all identities through order {n}")))
}

fn synthetic_poles(_: &VerifyConfig) -> Result<CheckOutcome> {
    const NAME: &str = "pole-stripping-exactness";
    let order = 30;
    for q in [2i64, 3, 7] {
        for w in 1..=2u32 {
            let base = TruncatedSeries::from_poly(&TruncatedSeries::from_integers([1, -q], 1).into_coeffs(), order, 1);
            let f = base.pow_int(-(w as i64))?;
            let h = TruncatedSeries::from_poly(
                &TruncatedSeries::from_integers([5, -3, 11], 1).into_coeffs(),
                order,
                1,
            );
            let pole = PoleData::new(q as u64, 1, w)?;
            let plain = AsymptoticModel::from_series(&f, pole, &BigRational::zero())?;
            let shifted = AsymptoticModel::from_series(&f.checked_add(&h)?, pole, &BigRational::zero())?;
            if plain.q_coeffs != shifted.q_coeffs {
                return Ok(CheckOutcome::fail(NAME, format!("q={q} w={w}: Q moved when h was added")));
            }
            let exact = f.integer_coeffs().expect("integral");
            for row in plain.compare(&exact, 0..=order - w as usize) {
                if !row.residual.is_zero() {
                    return Ok(CheckOutcome::fail(NAME, format!("q={q} w={w} n={}", row.n)));
                }
            }
        }
    }
    Ok(CheckOutcome::pass(NAME, "zero residual for simple and double poles, with and without h"))
}

fn dual_route_r(config: &VerifyConfig) -> Result<CheckOutcome> {
    const NAME: &str = "dual-route-r";
    let mut worst = 0f64;
    for (q, ell) in [(2u64, 3u64), (4, 3), (3, 2), (4, 5)] {
        let params = FieldParams::new(q, ell)?;
        let n = config.model_order;
        let depth = (params.alpha * n as u32).max(config.product.cutoff);
        let census = PrimeCensus::new(q, depth)?;
        let model = AsymptoticModel::for_field(&params, &census, n)?;
        let g = g_at_one(&params, &census, &config.product)?;
        let r_prod = g.value.value_f64() / (params.alpha as f64 * (q as f64).ln()).powi(params.w as i32);
        let r_series = model.r.expect("field model").value;
        let rel = ((r_prod - r_series) / r_prod).abs();
        worst = worst.max(rel);
        if rel > 1e-6 {
            return Ok(CheckOutcome::fail(NAME, format!("q={q} ell={ell}: relative gap {rel:.3e}")));
        }
        if (q, ell) == (3, 2) {
            let closed = (2.0 / 3.0) / 3f64.ln();
            if ((r_series - closed) / closed).abs() > 1e-9 {
                return Ok(CheckOutcome::fail(NAME, "q=3 ell=2: closed form (2/3)/log 3 missed"));
            }
        }
    }
    Ok(CheckOutcome::pass(NAME, format!("largest relative gap {worst:.3e}")))
}

fn appendix_lemmas(_: &VerifyConfig) -> Result<CheckOutcome> {
    const NAME: &str = "appendix-lemmas";
    let res: Vec<f64> = [1000u64, 2000, 4000]
        .iter()
        .map(|&n| gamma_ratio_check(0.5, n).map(|c| c.residual))
        .collect::<Result<_>>()?;
    for k in 0..2 {
        let ratio = res[k + 1] / res[k];
        if (ratio - 0.25).abs() > 0.25 * 0.25 {
            return Ok(CheckOutcome::fail(NAME, format!("gamma ratio residual ratio {ratio:.4} at step {k}")));
        }
    }
    for n in [50u64, 100, 200] {
        let chk = keyhole_integral_check(1.0, 0.5, 0.5, 2.0, n)?;
        let nf = n as f64;
        if chk.relative_error > 10.0 / (nf * nf) + 2f64.powf(-0.5 * nf) {
            return Ok(CheckOutcome::fail(NAME, format!("keyhole n={n}: relative error {:.3e}", chk.relative_error)));
        }
    }
    Ok(CheckOutcome::pass(NAME, "1/n^2 residual scaling and keyhole estimate"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reach_respects_budget() {
        let limits = EnumLimits {
            max_space: 1000,
            ..EnumLimits::default()
        };
        assert_eq!(enumerative_reach(2, 2, &limits), 4);
        assert_eq!(enumerative_reach(7, 1, &limits), 3);
        assert_eq!(enumerative_reach(2, 4, &limits), 2);
    }

    #[test]
    fn quick_checks_pass() {
        let config = VerifyConfig {
            limits: EnumLimits {
                max_space: 5000,
                ..EnumLimits::default()
            },
            conductor_space: 5000,
            identity_order: 12,
            dp_max_n: 30,
            model_order: 30,
            product: ProductConfig::with_cutoff(40),
        };
        for (name, check) in checks() {
            let outcome = check(&config).unwrap();
            assert!(outcome.passed, "{name}: {}", outcome.detail);
        }
    }
}
