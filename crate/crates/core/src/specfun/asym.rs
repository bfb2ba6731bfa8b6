//! The auxiliary integral `F_μ(x) = ∫₀¹ t^μ e^(-xt) dt` and the large-`x`
//! leading-order form of `I₀^α`.

use super::gamma::gamma;
use super::series::{i0_alpha, FracOrder, DEFAULT_REL_TOL};
use crate::error::{domain, Error, Result};
use crate::quad::integrate;

const FMU_REL_TOL: f64 = 1e-13;

/// `F_μ(x) = ∫₀¹ t^μ e^(-xt) dt` for `μ > -1`, `x ≥ 0`.
///
/// The interval is split at `t = min(1, 10/x)`, beyond which the integrand
/// is exponentially small. For `μ < 0` the left piece is mapped through
/// `t = u^(1/(μ+1))`, which turns `t^μ dt` into `du/(μ+1)` and removes the
/// endpoint singularity.
pub fn f_mu(mu: f64, x: f64) -> Result<f64> {
    if !(mu > -1.0) || !mu.is_finite() {
        return Err(domain(format!("F_mu requires mu > -1, got {mu}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(format!("F_mu requires finite x ≥ 0, got {x}")));
    }
    let split = if x > 10.0 { 10.0 / x } else { 1.0 };
    let p = mu + 1.0;
    let left = if mu < 0.0 {
        let upper = split.powf(p);
        integrate(
            |u: f64| (-x * u.powf(1.0 / p)).exp() / p,
            0.0,
            upper,
            0.0,
            FMU_REL_TOL,
        )?
    } else {
        integrate(
            |t: f64| t.powf(mu) * (-x * t).exp(),
            0.0,
            split,
            0.0,
            FMU_REL_TOL,
        )?
    };
    let mut value = left.value;
    if split < 1.0 {
        // Absolute tolerance relative to the dominant left piece.
        let right = integrate(
            |t: f64| t.powf(mu) * (-x * t).exp(),
            split,
            1.0,
            FMU_REL_TOL * left.value.abs(),
            FMU_REL_TOL,
        )?;
        value += right.value;
    }
    Ok(value)
}

/// Leading-order term `x^(-(μ+1)) Γ(μ+1)` of `F_μ(x)` as `x → ∞`.
pub fn f_mu_leading(mu: f64, x: f64) -> Result<f64> {
    if !(mu > -1.0) {
        return Err(domain(format!("F_mu requires mu > -1, got {mu}")));
    }
    if !(x > 0.0) {
        return Err(domain(format!(
            "leading-order F_mu requires x > 0, got {x}"
        )));
    }
    Ok(x.powf(-(mu + 1.0)) * gamma(mu + 1.0)?)
}

/// Exponent `λ = 2/(1+α)` of the exponential growth.
pub fn growth_exponent(alpha: FracOrder) -> f64 {
    2.0 / (1.0 + alpha.value())
}

/// Exponent `-α(2-α)/(1+α)` of the algebraic prefactor.
pub fn prefactor_exponent(alpha: FracOrder) -> f64 {
    let a = alpha.value();
    -a * (2.0 - a) / (1.0 + a)
}

/// `ln` of [`i0_alpha_asym`]; finite wherever `x > 0`.
pub fn ln_i0_alpha_asym(alpha: FracOrder, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!(
            "asymptotic form requires finite x > 0, got {x}"
        )));
    }
    let lambda = growth_exponent(alpha);
    Ok(prefactor_exponent(alpha) * x.ln() + x.powf(lambda) / lambda)
}

/// `x^(-α(2-α)/(1+α)) · exp(((1+α)/2) · x^(2/(1+α)))`.
///
/// This is the leading-order growth of `I₀^α` up to a multiplicative
/// constant that is not determined; at `α = 0` it is `exp(x²/2)` exactly,
/// and at `α = 1` it is `x^(-1/2) eˣ`, which is `√(2π)·I₀(x)` asymptotically.
pub fn i0_alpha_asym(alpha: FracOrder, x: f64) -> Result<f64> {
    let value = ln_i0_alpha_asym(alpha, x)?.exp();
    if !value.is_finite() {
        return Err(Error::Overflow(format!("asymptotic I0^{alpha}({x})")));
    }
    Ok(value)
}

/// Largest `x` (to relative 1e-10) at which both the series value of
/// `I₀^α` and [`i0_alpha_asym`] are finite.
pub fn max_finite_x(alpha: FracOrder) -> Result<f64> {
    let finite = |x: f64| {
        i0_alpha(alpha, x, DEFAULT_REL_TOL).is_ok_and(|v| v.value.is_finite())
            && i0_alpha_asym(alpha, x).is_ok()
    };
    let (mut lo, mut hi) = (1.0_f64, 2.0_f64);
    if !finite(lo) {
        return Err(Error::Overflow(format!("I0^{alpha} overflows below x = 1")));
    }
    while finite(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Err(domain("no overflow point found below x = 1e6"));
        }
    }
    while hi - lo > 1e-10 * lo {
        let mid = 0.5 * (lo + hi);
        if finite(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// One row of the ratio-flattening check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymRow {
    pub x: f64,
    pub series: f64,
    pub asym: f64,
    /// `I₀^α(x) / asym(x)`.
    pub ratio: f64,
    /// `|ratio / previous ratio - 1|`; absent on the first row.
    pub change: Option<f64>,
}

/// Ratio of the series value to [`i0_alpha_asym`] at each `x`, in the
/// order given.
pub fn asym_ratio_table(alpha: FracOrder, xs: &[f64]) -> Result<Vec<AsymRow>> {
    let mut rows: Vec<AsymRow> = Vec::with_capacity(xs.len());
    for &x in xs {
        let series = i0_alpha(alpha, x, DEFAULT_REL_TOL)?.value;
        if !series.is_finite() {
            return Err(Error::Overflow(format!("I0^{alpha}({x})")));
        }
        let asym = i0_alpha_asym(alpha, x)?;
        let ratio = series / asym;
        let change = rows.last().map(|p| (ratio / p.ratio - 1.0).abs());
        rows.push(AsymRow {
            x,
            series,
            asym,
            ratio,
            change,
        });
    }
    Ok(rows)
}

/// `x_max · 2^(-k)` for `k = n-1, ..., 0`: a doubling ladder ending at
/// `x_max`.
pub fn doubling_ladder(x_max: f64, n: usize) -> Vec<f64> {
    (0..n)
        .rev()
        .map(|k| x_max * 0.5_f64.powi(k as i32))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_mu_at_zero() {
        for &mu in &[-0.5, 0.0, 0.5, 2.0] {
            let v = f_mu(mu, 0.0).unwrap();
            assert!((v - 1.0 / (mu + 1.0)).abs() < 1e-12, "mu = {mu}");
        }
    }

    #[test]
    fn f_mu_closed_forms() {
        let e = (1.0 - (-1.0f64).exp()) / 1.0;
        assert!((f_mu(0.0, 1.0).unwrap() - e).abs() < 1e-14);
        assert!((f_mu(0.0, 1.0).unwrap() - 0.632_120_558_8).abs() < 1e-10);
        for &x in &[0.5_f64, 3.0, 25.0, 400.0] {
            // F_1(x) = (1 - (1+x)e^{-x}) / x²
            let f1 = (1.0 - (1.0 + x) * (-x).exp()) / (x * x);
            assert!(((f_mu(1.0, x).unwrap() - f1) / f1).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn f_mu_domain() {
        assert!(f_mu(-1.0, 1.0).is_err());
        assert!(f_mu(-3.0, 1.0).is_err());
        assert!(f_mu(0.5, -1.0).is_err());
    }

    #[test]
    fn asym_reductions() {
        for &x in &[0.5, 1.0, 3.0, 10.0] {
            let one = i0_alpha_asym(FracOrder::ONE, x).unwrap();
            assert!((one - x.powf(-0.5) * x.exp()).abs() < 1e-13 * one);
            let zero = i0_alpha_asym(FracOrder::ZERO, x).unwrap();
            assert!((zero - (0.5 * x * x).exp()).abs() < 1e-13 * zero);
        }
        let half = i0_alpha_asym(FracOrder::new(0.5).unwrap(), 1.0).unwrap();
        assert!((half - 0.75f64.exp()).abs() < 1e-15);
        assert!((half - 2.117_000_016_612_675).abs() < 1e-12);
    }

    #[test]
    fn asym_overflow() {
        assert!(matches!(
            i0_alpha_asym(FracOrder::ZERO, 40.0),
            Err(Error::Overflow(_))
        ));
        assert!(ln_i0_alpha_asym(FracOrder::ZERO, 40.0).unwrap() > 709.0);
        assert!(i0_alpha_asym(FracOrder::ONE, 0.0).is_err());
    }

    #[test]
    fn overflow_point_alpha_zero() {
        // exp(x²/2) overflows at x = √(2 ln f64::MAX).
        let x = max_finite_x(FracOrder::ZERO).unwrap();
        let expect = (2.0 * f64::MAX.ln()).sqrt();
        assert!((x / expect - 1.0).abs() < 1e-9, "{x} {expect}");
    }

    #[test]
    fn ratio_table_alpha_one() {
        let rows = asym_ratio_table(FracOrder::ONE, &[5.0, 10.0, 20.0, 40.0]).unwrap();
        assert!(rows[0].change.is_none());
        let inv = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        // I₀(x) √x e^(-x) = (1 + 1/(8x) + ...)/√(2π).
        assert!((rows[3].ratio / inv - 1.0 - 1.0 / 320.0).abs() < 1e-4);
        assert!(rows
            .windows(2)
            .all(|w| w[1].change.unwrap() < w[0].change.unwrap_or(1.0)));
        assert_eq!(doubling_ladder(8.0, 3), vec![2.0, 4.0, 8.0]);
    }
}
