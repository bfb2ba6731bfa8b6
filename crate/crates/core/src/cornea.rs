//! Axisymmetric corneal height model
//!
//! ```text
//! h(r) = (b/a) · (1 - I₀^α(√a r) / I₀^α(√a)),   0 ≤ r ≤ 1,
//! ```
//!
//! the solution of the fractional boundary-value problem with a flat apex
//! (`h'(0) = 0`) and a zero rim (`h(1) = 0`). The radius is normalized by
//! the physical rim radius, and `b` carries the height unit (mm) when the
//! model is fitted to measured surfaces.

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::specfun::{CoeffTable, FracOrder, DEFAULT_REL_TOL};

/// Model parameters `(a, b, α)` plus the rim radius in mm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornealParams {
    pub a: f64,
    pub b: f64,
    pub alpha: FracOrder,
    pub rim_radius: f64,
}

impl CornealParams {
    pub fn new(a: f64, b: f64, alpha: f64, rim_radius: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(domain(format!("a must be finite and > 0, got {a}")));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(domain(format!("b must be finite and > 0, got {b}")));
        }
        if !(rim_radius > 0.0) || !rim_radius.is_finite() {
            return Err(domain(format!(
                "rim radius must be finite and > 0, got {rim_radius}"
            )));
        }
        Ok(CornealParams {
            a,
            b,
            alpha: FracOrder::new(alpha)?,
            rim_radius,
        })
    }

    /// Same parameters on a unit rim.
    pub fn unit(a: f64, b: f64, alpha: f64) -> Result<Self> {
        CornealParams::new(a, b, alpha, 1.0)
    }
}

/// A parameter set with its series coefficients and the `I₀^α(√a)`
/// denominator precomputed, for repeated height evaluation.
#[derive(Debug, Clone)]
pub struct CornealModel {
    params: CornealParams,
    table: CoeffTable,
    rim_value: f64,
}

impl CornealModel {
    pub fn new(params: CornealParams) -> Result<Self> {
        let table = CoeffTable::for_range(params.alpha, params.a.sqrt(), DEFAULT_REL_TOL)?;
        let rim_value = table.eval_sq(params.a, DEFAULT_REL_TOL)?.value;
        Ok(CornealModel {
            params,
            table,
            rim_value,
        })
    }

    pub fn params(&self) -> &CornealParams {
        &self.params
    }

    /// `I₀^α(√a)`.
    pub fn rim_value(&self) -> f64 {
        self.rim_value
    }

    /// Height at normalized radius `r ∈ [0, 1]`. Exactly zero at `r = 1`:
    /// the numerator there is evaluated at the same `x² = a` as the
    /// denominator.
    pub fn height(&self, r: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&r) {
            return Err(domain(format!(
                "normalized radius must lie in [0, 1], got {r}"
            )));
        }
        let x2 = self.params.a * r * r;
        let inner = self.table.eval_sq(x2, DEFAULT_REL_TOL)?.value;
        Ok(self.params.b / self.params.a * (1.0 - inner / self.rim_value))
    }

    /// Height at a physical radius in mm.
    pub fn height_mm(&self, radius_mm: f64) -> Result<f64> {
        self.height(radius_mm / self.params.rim_radius)
    }

    /// Apex height `h(0) = (b/a)(1 - 1/I₀^α(√a))`.
    pub fn apex(&self) -> f64 {
        self.params.b / self.params.a * (1.0 - 1.0 / self.rim_value)
    }
}

/// `h(r)` for a single radius; see [`CornealModel`] for repeated use.
pub fn height(params: &CornealParams, r: f64) -> Result<f64> {
    CornealModel::new(*params)?.height(r)
}

/// `(r, h(r))` on `n_points ≥ 2` uniformly spaced radii covering `[0, 1]`.
pub fn height_profile(params: &CornealParams, n_points: usize) -> Result<Vec<(f64, f64)>> {
    if n_points < 2 {
        return Err(domain(format!(
            "profile needs at least 2 points, got {n_points}"
        )));
    }
    let model = CornealModel::new(*params)?;
    let last = (n_points - 1) as f64;
    (0..n_points)
        .into_par_iter()
        .map(|i| {
            let r = if i + 1 == n_points {
                1.0
            } else {
                i as f64 / last
            };
            model.height(r).map(|h| (r, h))
        })
        .collect()
}
