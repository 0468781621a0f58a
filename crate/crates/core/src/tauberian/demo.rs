//! Floating-point checks of the non-integer-order expansion and of the two
//! auxiliary estimates behind it.

use crate::{Error, Result};

/// `Γ(x)`.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `q^{-a n} [u^n] (1 - q^a u)^{-w} = Γ(w + n) / (Γ(w) n!)` for `n = 0..=order`.
///
/// The factor `q^{a n}` is left out so that large `n` stay in range; the
/// recurrence is `c_{n+1} = c_n (w + n) / (n + 1)`.
pub fn binomial_pole_series(w: f64, order: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(order + 1);
    let mut c = 1.0;
    for n in 0..=order {
        out.push(c);
        c *= (w + n as f64) / (n as f64 + 1.0);
    }
    out
}

/// The two leading constants of
/// `[u^n] f ≈ c_1 q^{a n} n^{w-1} + c_2 q^{a n} n^{w-2}` for a pole of real
/// order `w`, where `g0, g1` are the value and derivative at `u0 = q^{-a}` of
/// the real factor `g` in `f = g(u) q^{a w} (1 - q^a u)^{-w}`.
pub fn c1_c2_real(g0: f64, g1: f64, q_a: f64, w: f64) -> (f64, f64) {
    let scale = q_a.powf(w);
    let c1 = g0 * scale / gamma(w);
    let c2 = scale * (g0 * w / 2.0 - g1 / q_a) / gamma(w - 1.0);
    (c1, c2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatioCheck {
    pub ratio: f64,
    pub prediction: f64,
    pub residual: f64,
}

/// `n! n^t / ∏_{i=0}^n (t + i)` against `Γ(t) (1 - (t^2 + t) / (2n))`.
pub fn gamma_ratio_check(t: f64, n: u64) -> Result<GammaRatioCheck> {
    if t <= 0.0 && t.fract() == 0.0 {
        return Err(Error::InvalidParameter(format!("t = {t} is a pole of Γ")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    // log of ∏_{i=1}^n i / (t + i), summed with compensation
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for i in 1..=n {
        let term = -(t / i as f64).ln_1p() - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    let ratio = (sum + t * (n as f64).ln()).exp() / t;
    let prediction = gamma(t) * (1.0 - (t * t + t) / (2.0 * n as f64));
    Ok(GammaRatioCheck {
        ratio,
        prediction,
        residual: ratio - prediction,
    })
}

/// Adaptive Simpson quadrature by recursive bisection, to relative tolerance
/// `rel_tol` of the running total.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Option<f64> {
        let m = (a + b) / 2.0;
        let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return Some(left + right + delta / 15.0);
        }
        if depth == 0 {
            return None;
        }
        Some(
            recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
                + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?,
        )
    }
    let (fa, fm, fb) = (f(a), f((a + b) / 2.0), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    // a coarse pass fixes the scale for the absolute tolerance
    let coarse = recurse(&f, a, b, fa, fm, fb, whole, whole.abs() * 1e-3, 30)
        .ok_or_else(|| Error::Quadrature("coarse pass did not converge".into()))?;
    let tol = coarse.abs() * rel_tol;
    recurse(&f, a, b, fa, fm, fb, whole, tol, 50)
        .ok_or_else(|| Error::Quadrature(format!("tolerance {rel_tol:e} not reached")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyholeCheck {
    pub integral: f64,
    pub prediction: f64,
    pub relative_error: f64,
}

/// `∫_{q^{-a}}^{q^{-a(1-δ)}} du / (u^{n+1} (u - q^{-a})^w)` against
/// `Γ(1 - w) q^{a(n+w)} n^{w-1} (1 + (w^2 - w) / (2n))`.
///
/// With `u = q^{-a}(1 + v)` the integral is `q^{a(n+w)} ∫_0^V v^{-w} (1 + v)^{-n-1} dv`,
/// `V = q^{aδ} - 1`, and `v = t^{1/(1-w)}` removes the endpoint singularity.
pub fn keyhole_integral_check(a: f64, w: f64, delta: f64, q: f64, n: u64) -> Result<KeyholeCheck> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::InvalidParameter(format!("w = {w} must lie strictly between 0 and 1")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("δ = {delta} must lie strictly between 0 and 1")));
    }
    let n_f = n as f64;
    let upper = (q.powf(a * delta) - 1.0).powf(1.0 - w);
    let p = 1.0 / (1.0 - w);
    let integrand = |t: f64| (-(n_f + 1.0) * t.powf(p).ln_1p()).exp();
    let j = integrate_adaptive(integrand, 0.0, upper, 1e-10)? * p;
    let j_pred = gamma(1.0 - w) * n_f.powf(w - 1.0) * (1.0 + (w * w - w) / (2.0 * n_f));
    let scale = q.powf(a * (n_f + w));
    Ok(KeyholeCheck {
        integral: j * scale,
        prediction: j_pred * scale,
        relative_error: ((j - j_pred) / j_pred).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn gamma_special_values() {
        assert!(close(gamma(0.5), std::f64::consts::PI.sqrt(), 1e-13));
        assert!(close(gamma(1.5), std::f64::consts::PI.sqrt() / 2.0, 1e-13));
        assert!(close(gamma(-0.5), -2.0 * std::f64::consts::PI.sqrt(), 1e-13));
        for (n, f) in [(1.0, 1.0), (2.0, 1.0), (5.0, 24.0), (11.0, 3628800.0)] {
            assert!(close(gamma(n), f, 1e-13));
        }
    }

    #[test]
    fn binomial_pole_examples() {
        assert!(binomial_pole_series(1.0, 10).iter().all(|&c| c == 1.0));
        let two = binomial_pole_series(2.0, 10);
        assert!(two.iter().enumerate().all(|(n, &c)| c == n as f64 + 1.0));
        // (1 - 4x)^{-1/2} = Σ C(2n, n) x^n
        let half = binomial_pole_series(0.5, 12);
        let central = [1.0, 2.0, 6.0, 20.0, 70.0, 252.0];
        for (n, &c) in central.iter().enumerate() {
            assert!(close(half[n] * 4f64.powi(n as i32), c, 1e-14));
        }
    }

    #[test]
    fn half_order_expansion() {
        let (c1, c2) = c1_c2_real(0.25f64.sqrt(), 0.0, 4.0, 0.5);
        assert!(close(c1, 1.0 / std::f64::consts::PI.sqrt(), 1e-14));
        assert!(close(c2 / c1, -1.0 / 8.0, 1e-13));
        let coef = binomial_pole_series(0.5, 10_000);
        let n = 10_000f64;
        let raw = coef[10_000] * n.sqrt();
        assert!(close(raw, c1, 1e-2));
        assert!(close(raw / (1.0 - 1.0 / (8.0 * n)), c1, 2e-4));
    }

    #[test]
    fn gamma_ratio_at_one_is_exact() {
        for n in [2u64, 5, 40] {
            let c = gamma_ratio_check(1.0, n).unwrap();
            assert!(close(c.ratio, n as f64 / (n as f64 + 1.0), 1e-14));
            assert!(close(c.prediction, 1.0 - 1.0 / n as f64, 1e-14));
        }
        assert!(gamma_ratio_check(-2.0, 10).is_err());
        assert!(gamma_ratio_check(0.5, 1).is_err());
    }

    #[test]
    fn gamma_ratio_residual_is_second_order() {
        let c = gamma_ratio_check(0.5, 100).unwrap();
        assert!((c.ratio - gamma(0.5) * (1.0 - 0.375 / 100.0)).abs() < 1e-4);
        let r: Vec<f64> = [1000u64, 2000, 4000].iter().map(|&n| gamma_ratio_check(0.5, n).unwrap().residual).collect();
        for k in 0..2 {
            let q = r[k + 1] / r[k];
            assert!((q - 0.25).abs() < 0.25 * 0.25, "ratio {q}");
        }
    }

    #[test]
    fn quadrature_against_closed_forms() {
        let v = integrate_adaptive(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-10).unwrap();
        assert!(close(v, 2.0, 1e-10));
        let v = integrate_adaptive(|x| (-x * x).exp(), 0.0, 8.0, 1e-10).unwrap();
        assert!(close(v, std::f64::consts::PI.sqrt() / 2.0, 1e-10));
    }

    #[test]
    fn keyhole_matches_beta_function() {
        // with V = q^{aδ} - 1 = 10 the cutoff error (1 + V)^{-n} is
        // negligible and the integral is B(1 - w, n + w)
        for (w, n) in [(0.5, 30u64), (0.25, 60), (0.75, 40)] {
            let chk = keyhole_integral_check(1.0, w, 0.5, 121.0, n).unwrap();
            let scale = 121f64.powf(n as f64 + w);
            let beta = gamma(1.0 - w) * gamma(n as f64 + w) / gamma(n as f64 + 1.0);
            assert!(close(chk.integral / scale, beta, 1e-8), "w={w} n={n}");
        }
    }

    #[test]
    fn keyhole_relative_error_is_small() {
        for n in [50u64, 100, 200] {
            let chk = keyhole_integral_check(1.0, 0.5, 0.5, 2.0, n).unwrap();
            let nf = n as f64;
            assert!(chk.relative_error <= 10.0 / (nf * nf) + 2f64.powf(-0.5 * nf), "n = {n}");
        }
        let p50 = keyhole_integral_check(1.0, 0.5, 0.5, 2.0, 50).unwrap();
        let expected = std::f64::consts::PI.sqrt() * 2f64.powf(50.5) / 50f64.sqrt() * (1.0 - 1.0 / 400.0);
        assert!(close(p50.prediction, expected, 1e-12));
        assert!(keyhole_integral_check(1.0, 1.0, 0.5, 2.0, 50).is_err());
    }
}
