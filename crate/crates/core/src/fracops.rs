//! Riemann–Liouville fractional integrals and derivatives acting on
//! monomials and finite power series.
//!
//! On powers of `t` both operators have closed forms:
//!
//! ```text
//! D^(-μ) t^n = Γ(n+1)/Γ(n+μ+1) · x^(n+μ)
//! D^α    t^n = Γ(n+1)/Γ(n-α+1) · x^(n-α)
//! ```
//!
//! The derivative coefficient uses the reciprocal-gamma convention
//! `1/Γ(0) = 0`, so `D¹` annihilates constants without a special case.
//! For analytic `y` with `x·y'(x) → 0` at the origin the Riemann–Liouville
//! and Caputo derivatives agree, so only the former is provided.

use crate::error::{domain, Error, Result};
use crate::specfun::{gamma, gamma_ratio, recip_gamma, CoeffTable, FracOrder, DEFAULT_REL_TOL};

/// A truncated power series `Σ a_n x^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<f64>,
    radius_hint: Option<f64>,
}

impl PowerSeries {
    /// `radius_hint = None` means the series is entire.
    pub fn new(coeffs: Vec<f64>, radius_hint: Option<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(domain("power series needs at least one coefficient"));
        }
        if let Some(r) = radius_hint {
            if !(r > 0.0) {
                return Err(domain(format!("radius hint must be positive, got {r}")));
            }
        }
        Ok(PowerSeries {
            coeffs,
            radius_hint,
        })
    }

    /// The first `n_even + 1` even-power terms of `I₀^α`, laid out by
    /// power of `x` (odd slots are zero).
    pub fn i0_alpha(alpha: FracOrder, n_even: usize) -> Result<Self> {
        let table = CoeffTable::new(alpha, n_even.max(1))?;
        let mut coeffs = vec![0.0; 2 * n_even + 1];
        for n in 0..=n_even {
            coeffs[2 * n] = table.coeff(n);
        }
        PowerSeries::new(coeffs, None)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn radius_hint(&self) -> Option<f64> {
        self.radius_hint
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// The series of `x·y'(x)`: coefficient `n·a_n` at power `n`.
    pub fn x_times_derivative(&self) -> PowerSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| n as f64 * c)
            .collect();
        PowerSeries {
            coeffs,
            radius_hint: self.radius_hint,
        }
    }
}

/// `(D^(-μ) t^n)(x) = Γ(n+1)/Γ(n+μ+1) · x^(n+μ)`.
pub fn frac_integral_monomial(mu: f64, n: f64, x: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(domain(format!(
            "fractional integral order must be > 0, got {mu}"
        )));
    }
    if !(n >= 0.0) || !(x >= 0.0) {
        return Err(domain(format!(
            "need n ≥ 0 and x ≥ 0, got n = {n}, x = {x}"
        )));
    }
    Ok(gamma_ratio(n + 1.0, n + mu + 1.0)? * x.powf(n + mu))
}

/// `Γ(n+1)/Γ(n-α+1)`, zero when `n - α + 1` is a non-positive integer.
pub fn frac_deriv_coeff(alpha: FracOrder, n: f64) -> Result<f64> {
    if !(n >= 0.0) {
        return Err(domain(format!("monomial power must be ≥ 0, got {n}")));
    }
    let lower = n - alpha.value() + 1.0;
    if lower > 0.0 {
        gamma_ratio(n + 1.0, lower)
    } else {
        Ok(gamma(n + 1.0)? * recip_gamma(lower))
    }
}

/// `(D^α t^n)(x) = Γ(n+1)/Γ(n-α+1) · x^(n-α)` for `x > 0`.
pub fn frac_deriv_monomial(alpha: FracOrder, n: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!(
            "fractional derivative needs x > 0, got {x}"
        )));
    }
    let c = frac_deriv_coeff(alpha, n)?;
    if c == 0.0 {
        return Ok(0.0);
    }
    Ok(c * x.powf(n - alpha.value()))
}

/// `D^α` applied termwise to a power series and evaluated at `x > 0`.
///
/// Terms are accumulated in index order; summation stops early once a
/// nonzero term falls below the default relative tolerance of the partial
/// sum while shrinking by at least half relative to the previous nonzero term.
pub fn frac_deriv_series(alpha: FracOrder, p: &PowerSeries, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!(
            "fractional derivative needs x > 0, got {x}"
        )));
    }
    if let Some(r) = p.radius_hint {
        if x > r {
            return Err(domain(format!(
                "x = {x} lies outside the series radius {r}"
            )));
        }
    }
    let mut sum = 0.0_f64;
    let mut prev: Option<f64> = None;
    let mut used = 0;
    for (n, &a) in p.coeffs.iter().enumerate() {
        used = n + 1;
        if a == 0.0 {
            continue;
        }
        let term = a * frac_deriv_monomial(alpha, n as f64, x)?;
        sum += term;
        if let Some(q) = prev {
            if term.abs() < DEFAULT_REL_TOL * sum.abs() && term.abs() < 0.5 * q.abs() {
                break;
            }
        }
        if term != 0.0 {
            prev = Some(term);
        }
    }
    if !sum.is_finite() {
        return Err(Error::NonConvergence {
            what: format!("fractional derivative of a power series at x = {x}"),
            iterations: used,
        });
    }
    Ok(sum)
}

/// Relative residual `|x^α D^α(x y') - x² y| / (x² y)` of the homogeneous
/// equation, with `y` the `I₀^α` series truncated after `n_even` even terms.
pub fn defining_residual(alpha: FracOrder, x: f64, n_even: usize) -> Result<f64> {
    let y = PowerSeries::i0_alpha(alpha, n_even)?;
    let xdy = y.x_times_derivative();
    let lhs = x.powf(alpha.value()) * frac_deriv_series(alpha, &xdy, x)?;
    let rhs = x * x * y.eval(x);
    Ok(((lhs - rhs) / rhs).abs())
}
