//! The power series of the modified fractional Bessel function `I₀^α`.
//!
//! `I₀^α(x) = Σ c_n x^(2n)` with `c_0 = 1` and
//!
//! ```text
//! c_n / c_(n-1) = Γ(2n - α + 1) / ((2n)² Γ(2n)),   n ≥ 1.
//! ```
//!
//! Terms are generated by multiplying the previous term by this ratio and by
//! `x²`, so no individual coefficient (which underflows for large `n`) or Γ
//! value (which overflows near `n ≈ 85`) is ever formed during summation.

use std::fmt;

use super::gamma::ln_gamma_ratio;
use crate::error::{domain, Error, Result};

/// Default relative truncation tolerance for series evaluation.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

/// Hard cap on the number of series terms before giving up.
pub const MAX_TERMS: usize = 10_000;

// Below this the running coefficient product is replaced by exp(ln c_n).
const LN_COEFF_FLOOR: f64 = -690.0;

/// Fractional order `α ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub const ZERO: FracOrder = FracOrder(0.0);
    pub const ONE: FracOrder = FracOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(domain(format!(
                "fractional order must lie in [0, 1], got {alpha}"
            )));
        }
        Ok(FracOrder(alpha))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        FracOrder::new(alpha)
    }
}

impl fmt::Display for FracOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A truncated series value with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    /// Number of terms summed, counting the constant term.
    pub terms_used: usize,
    /// Magnitude of the last term added.
    pub last_term_magnitude: f64,
    /// Geometric upper bound on the neglected tail.
    pub tail_bound: f64,
}

/// `c_n / c_(n-1)` for `n ≥ 1`.
pub fn coeff_ratio(alpha: FracOrder, n: usize) -> f64 {
    debug_assert!(n >= 1);
    let m = 2.0 * n as f64;
    // Both arguments are ≥ 2, so the log-ratio is always finite.
    let ln_r = ln_gamma_ratio(m + 1.0 - alpha.value(), m).expect("positive gamma arguments");
    ln_r.exp() / (m * m)
}

/// Sums `1 + Σ_{n≥1} t_n` with `t_n = t_(n-1)·ratio(n)·x2`.
///
/// Stops once a term is below `rel_tol` times the partial sum and the
/// current term ratio is below 1/2. The coefficient ratios decrease in `n`,
/// so every later term ratio is bounded by the current one and the tail is
/// bounded by a geometric series.
pub(crate) fn sum_even_series<R>(x2: f64, rel_tol: f64, mut ratio: R) -> Result<SeriesEval>
where
    R: FnMut(usize) -> f64,
{
    if x2 == 0.0 {
        return Ok(SeriesEval {
            value: 1.0,
            terms_used: 1,
            last_term_magnitude: 0.0,
            tail_bound: 0.0,
        });
    }
    let mut sum = 1.0_f64;
    let mut term = 1.0_f64;
    for n in 1..MAX_TERMS {
        let q = ratio(n) * x2;
        term *= q;
        sum += term;
        if !sum.is_finite() {
            return Err(Error::Overflow(format!(
                "series exceeds f64 range after {} terms (x² = {x2})",
                n + 1
            )));
        }
        if term < rel_tol * sum && q < 0.5 {
            return Ok(SeriesEval {
                value: sum,
                terms_used: n + 1,
                last_term_magnitude: term,
                tail_bound: term * q / (1.0 - q),
            });
        }
    }
    Err(Error::NonConvergence {
        what: format!("I0^alpha series at x² = {x2}"),
        iterations: MAX_TERMS,
    })
}

fn check_eval_args(x: f64, rel_tol: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(format!(
            "series argument must be finite and ≥ 0, got {x}"
        )));
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(domain(format!("rel_tol must lie in (0, 1), got {rel_tol}")));
    }
    Ok(())
}

/// Evaluates `I₀^α(x)` by direct summation of its power series.
///
/// ```
/// use fracbessel::specfun::{i0_alpha, FracOrder, DEFAULT_REL_TOL};
///
/// // At α = 0 the series is exp(x²/2).
/// let v = i0_alpha(FracOrder::ZERO, 2.0, DEFAULT_REL_TOL).unwrap();
/// assert!((v.value - 2f64.exp()).abs() < 1e-12 * v.value);
/// ```
pub fn i0_alpha(alpha: FracOrder, x: f64, rel_tol: f64) -> Result<SeriesEval> {
    check_eval_args(x, rel_tol)?;
    sum_even_series(x * x, rel_tol, |n| coeff_ratio(alpha, n))
}

/// Coefficients `c_0 … c_N` of `I₀^α` in powers of `x²`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    alpha: FracOrder,
    ratios: Vec<f64>,
    coeffs: Vec<f64>,
    ln_coeffs: Vec<f64>,
}

impl CoeffTable {
    /// Builds `c_0 … c_n`, `n ≥ 1`.
    pub fn new(alpha: FracOrder, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("coefficient table needs N ≥ 1"));
        }
        let mut ratios = Vec::with_capacity(n + 1);
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut ln_coeffs = Vec::with_capacity(n + 1);
        ratios.push(f64::NAN);
        coeffs.push(1.0);
        ln_coeffs.push(0.0);
        for k in 1..=n {
            let r = coeff_ratio(alpha, k);
            let ln_c = ln_coeffs[k - 1] + r.ln();
            let c = if ln_c > LN_COEFF_FLOOR {
                coeffs[k - 1] * r
            } else {
                ln_c.exp()
            };
            ratios.push(r);
            coeffs.push(c);
            ln_coeffs.push(ln_c);
        }
        Ok(CoeffTable {
            alpha,
            ratios,
            coeffs,
            ln_coeffs,
        })
    }

    /// Builds exactly as many coefficients as the series needs at `x_max`.
    /// The series terms grow with `x`, so the table then suffices on
    /// `[0, x_max]`.
    pub fn for_range(alpha: FracOrder, x_max: f64, rel_tol: f64) -> Result<Self> {
        let probe = i0_alpha(alpha, x_max, rel_tol)?;
        CoeffTable::new(alpha, probe.terms_used.max(2) - 1)
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }

    /// Highest stored index `N`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_n`. Underflows to zero for very large `n`; see [`Self::ln_coeff`].
    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs[n]
    }

    pub fn ln_coeff(&self, n: usize) -> f64 {
        self.ln_coeffs[n]
    }

    /// `c_n / c_(n-1)`, `n ≥ 1`.
    pub fn ratio(&self, n: usize) -> f64 {
        self.ratios[n]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Evaluates `I₀^α(x)` from the stored ratios, extending past the table
    /// on the fly if needed. Results are bitwise identical to [`i0_alpha`].
    pub fn eval(&self, x: f64, rel_tol: f64) -> Result<SeriesEval> {
        check_eval_args(x, rel_tol)?;
        self.eval_sq(x * x, rel_tol)
    }

    /// As [`Self::eval`], taking `x²` directly.
    pub fn eval_sq(&self, x2: f64, rel_tol: f64) -> Result<SeriesEval> {
        sum_even_series(x2, rel_tol, |n| match self.ratios.get(n) {
            Some(&r) => r,
            None => coeff_ratio(self.alpha, n),
        })
    }
}
