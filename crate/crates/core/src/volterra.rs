//! Independent solution of the Volterra integro-differential form of the
//! homogeneous equation,
//!
//! ```text
//! y'(x) = 1/(Γ(α) x) ∫₀ˣ (x-t)^(α-1) t^(2-α) y(t) dt,   y(0) = 1,
//! ```
//!
//! by a second-order marching scheme. It never touches the power-series
//! recurrence, so agreement between the two is a genuine cross-check.
//!
//! Discretization on the uniform grid `x_k = k h`:
//!
//! * Away from the origin the integral is a product trapezoidal rule: the
//!   weakly singular factor `(x-t)^(α-1)` is integrated exactly against the
//!   piecewise-linear interpolant of `g(t) = t^(2-α) y(t)`.
//! * On the first [`STARTING_PANELS`] panels `t^(2-α)` is not smooth enough
//!   for that (its second derivative blows up at `t = 0`), so the whole
//!   kernel `(x-t)^(α-1) t^(2-α)` is integrated by quadrature against the
//!   linear interpolant of `y` alone.
//! * `y` is advanced by the trapezoidal rule on `y'`. The unknown `y_k`
//!   enters both updates linearly, so each step is solved exactly.
//! * `y'(0) = 0` is the analytic limit of the right-hand side.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::quad::integrate;
use crate::specfun::{gamma, CoeffTable, FracOrder, DEFAULT_REL_TOL};

/// Panels next to the origin that use the exact kernel.
pub const STARTING_PANELS: usize = 4;

const NEAR_QUAD_TOL: f64 = 1e-13;

/// Grid solution of the integro-differential equation.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub alpha: FracOrder,
    pub step: f64,
    pub values: Vec<f64>,
    pub derivative_values: Vec<f64>,
}

impl OracleSolution {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, k: usize) -> f64 {
        k as f64 * self.step
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.x(k))
    }

    /// `y'(x_k) / x_k`, `k ≥ 1`.
    pub fn derivative_over_x(&self, k: usize) -> f64 {
        self.derivative_values[k] / self.x(k)
    }
}

/// `lim_{x→0} y'(x)/x = B(α, 3-α)/Γ(α) = Γ(3-α)/2`.
pub fn near_origin_slope(alpha: FracOrder) -> f64 {
    gamma(3.0 - alpha.value()).expect("3 - alpha is positive") / 2.0
}

/// `m^β - (m-1)^β` without cancellation, `m ≥ 1`.
fn power_step(m: f64, beta: f64) -> f64 {
    if m == 1.0 {
        return 1.0;
    }
    -m.powf(beta) * (beta * (-1.0 / m).ln_1p()).exp_m1()
}

/// Product-trapezoid panel weights `(L(m), R(m))` for a panel whose right
/// end lies `m - 1` steps below the evaluation point:
/// `L = ∫₀¹ (m-τ)^(α-1) (1-τ) dτ`, `R = ∫₀¹ (m-τ)^(α-1) τ dτ`.
fn panel_weights(alpha: f64, m: usize) -> (f64, f64) {
    let mf = m as f64;
    if m == 1 {
        let total = 1.0 / alpha;
        let right = 1.0 / (alpha * (alpha + 1.0));
        return (total - right, right);
    }
    let total = power_step(mf, alpha) / alpha;
    let right = mf * total - power_step(mf, alpha + 1.0) / (alpha + 1.0);
    (total - right, right)
}

/// Scaled near-panel weights `(A, B)` with
/// `A = ∫_p^{p+1} (k-s)^(α-1) s^(2-α) (p+1-s) ds` and `B` the same with
/// `(s-p)`.
///
/// When the panel ends at the evaluation point (`k = p + 1`) the kernel is
/// absorbed by `v = (k-s)^α`; otherwise the kernel is smooth on the panel
/// and the integral is taken directly in `s`.
fn near_weights(alpha: f64, k: usize, p: usize) -> Result<(f64, f64)> {
    let kf = k as f64;
    let pf = p as f64;
    let shape = move |s: f64| s.max(0.0).powf(2.0 - alpha);
    let pair = |f_left: &dyn Fn(f64) -> f64,
                f_right: &dyn Fn(f64) -> f64,
                lo: f64,
                hi: f64,
                scale: f64| {
        let abs_tol = 1e-16 * (hi - lo) * scale;
        let l = integrate(f_left, lo, hi, abs_tol, NEAR_QUAD_TOL)?;
        let r = integrate(f_right, lo, hi, abs_tol, NEAR_QUAD_TOL)?;
        Ok::<_, Error>((l.value, r.value))
    };
    let bound = (pf + 1.0).powf(2.0 - alpha);
    if k == p + 1 {
        let inv = 1.0 / alpha;
        let (l, r) = pair(
            &|v: f64| {
                let s = kf - v.powf(inv);
                shape(s) * (pf + 1.0 - s)
            },
            &|v: f64| {
                let s = kf - v.powf(inv);
                shape(s) * (s - pf)
            },
            0.0,
            1.0,
            bound,
        )?;
        Ok((l * inv, r * inv))
    } else {
        let kernel = move |s: f64| (kf - s).powf(alpha - 1.0);
        pair(
            &|s: f64| kernel(s) * shape(s) * (pf + 1.0 - s),
            &|s: f64| kernel(s) * shape(s) * (s - pf),
            pf,
            pf + 1.0,
            bound * (kf - pf - 1.0).powf(alpha - 1.0),
        )
    }
}

/// Solves the integro-differential equation on `[0, x_max]` with `steps`
/// uniform steps, `0 < α ≤ 1`.
///
/// At `α = 1` the kernel is identically one and the scheme reduces to the
/// ordinary trapezoidal rule for `y' = (1/x) ∫₀ˣ t y dt`.
pub fn solve_volterra(alpha: FracOrder, x_max: f64, steps: usize) -> Result<OracleSolution> {
    let a = alpha.value();
    if a <= 0.0 {
        return Err(domain("the integro-differential form needs alpha > 0"));
    }
    if !(x_max > 0.0) || !x_max.is_finite() {
        return Err(domain(format!("x_max must be finite and > 0, got {x_max}")));
    }
    if steps < 2 {
        return Err(domain(format!("need at least 2 steps, got {steps}")));
    }
    let n = steps;
    let h = x_max / n as f64;
    let inv_gamma = 1.0 / gamma(a)?;
    let h_near = h * h;
    let h_far = h.powf(a);

    // Far-field weights by offset m = k - j.
    let lr: Vec<(f64, f64)> = (0..=n + 1)
        .map(|m| {
            if m == 0 {
                (0.0, 0.0)
            } else {
                panel_weights(a, m)
            }
        })
        .collect();
    let interior: Vec<f64> = (0..=n)
        .map(|m| if m == 0 { 0.0 } else { lr[m].0 + lr[m + 1].1 })
        .collect();

    let j0 = STARTING_PANELS;
    let mut y = vec![0.0; n + 1];
    let mut dy = vec![0.0; n + 1];
    let mut g = vec![0.0; n + 1];
    y[0] = 1.0;

    for k in 1..=n {
        let xk = k as f64 * h;
        // Known part of the integral, and the coefficient of the unknown y_k.
        let mut known = 0.0;
        let near_panels = k.min(j0);
        for p in 0..near_panels {
            let (wa, wb) = near_weights(a, k, p)?;
            known += h_near * wa * y[p];
            if p + 1 < k {
                known += h_near * wb * y[p + 1];
            }
        }
        let coeff = if k <= j0 {
            let (_, wb) = near_weights(a, k, k - 1)?;
            h_near * wb
        } else {
            let mut far = lr[k - j0].0 * g[j0];
            for j in (j0 + 1)..k {
                far += interior[k - j] * g[j];
            }
            known += h_far * far;
            h_far * lr[1].1 * xk.powf(2.0 - a)
        };
        let p_term = inv_gamma * known / xk;
        let q_term = inv_gamma * coeff / xk;
        let yk = (y[k - 1] + 0.5 * h * (dy[k - 1] + p_term)) / (1.0 - 0.5 * h * q_term);
        if !yk.is_finite() {
            return Err(Error::Blowup { step: k });
        }
        y[k] = yk;
        dy[k] = p_term + q_term * yk;
        g[k] = xk.powf(2.0 - a) * yk;
    }

    Ok(OracleSolution {
        alpha,
        step: h,
        values: y,
        derivative_values: dy,
    })
}

/// Maximum relative difference between an oracle solution and the series
/// `I₀^α` over the solution grid.
pub fn max_rel_diff_vs_series(sol: &OracleSolution) -> Result<f64> {
    let x_max = sol.x(sol.len() - 1);
    let table = CoeffTable::for_range(sol.alpha, x_max, DEFAULT_REL_TOL)?;
    let mut worst = 0.0_f64;
    for (k, x) in sol.grid().enumerate() {
        let s = table.eval(x, DEFAULT_REL_TOL)?.value;
        worst = worst.max(((sol.values[k] - s) / s).abs());
    }
    Ok(worst)
}

/// One line of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub steps: usize,
    pub step_size: f64,
    pub max_rel_diff: f64,
    /// Empirical order against the previous row; absent on the first row.
    pub order: Option<f64>,
}

/// Oracle-versus-series differences across a sequence of step counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub alpha: FracOrder,
    pub x_max: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Order estimate from the last two rows.
    pub fn final_order(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.order)
    }

    pub fn to_csv(&self) -> String {
        use crate::format::sig;
        let mut out = String::from("steps,h,max_rel_diff,order\n");
        for r in &self.rows {
            let order = r.order.map(sig).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.steps,
                sig(r.step_size),
                sig(r.max_rel_diff),
                order
            ));
        }
        out
    }
}

/// Solves at each step count (in parallel) and tabulates the maximum
/// relative difference against the series, with Richardson-style order
/// estimates `log(e_prev/e) / log(n/n_prev)`.
pub fn oracle_report(
    alpha: FracOrder,
    x_max: f64,
    steps_list: &[usize],
) -> Result<ConvergenceTable> {
    if steps_list.is_empty() {
        return Err(domain("steps list is empty"));
    }
    if steps_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("steps list must be strictly increasing"));
    }
    let diffs: Vec<f64> = steps_list
        .par_iter()
        .map(|&n| solve_volterra(alpha, x_max, n).and_then(|s| max_rel_diff_vs_series(&s)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(steps_list.len());
    for (i, (&n, &e)) in steps_list.iter().zip(&diffs).enumerate() {
        let order = (i > 0).then(|| {
            let (n0, e0) = (steps_list[i - 1] as f64, diffs[i - 1]);
            (e0 / e).ln() / (n as f64 / n0).ln()
        });
        rows.push(ConvergenceRow {
            steps: n,
            step_size: x_max / n as f64,
            max_rel_diff: e,
            order,
        });
    }
    Ok(ConvergenceTable { alpha, x_max, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::i0_alpha;

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn panel_weights_sum_to_kernel_integral() {
        for &a in &[0.25, 0.5, 1.0] {
            for m in 1..50 {
                let (l, r) = panel_weights(a, m);
                let mf = m as f64;
                let total = (mf.powf(a) - (mf - 1.0).powf(a)) / a;
                assert!(((l + r) - total).abs() < 1e-13 * total, "a {a} m {m}");
                assert!(l > 0.0 && r > 0.0);
            }
        }
        let (l, r) = panel_weights(1.0, 7);
        assert!((l - 0.5).abs() < 1e-14 && (r - 0.5).abs() < 1e-14);
    }

    #[test]
    fn near_weights_first_panel_is_beta() {
        // A + B over [0, 1] with k = 1 is B(3 - α, α).
        for &a in &[0.25, 0.5, 0.75] {
            let (wa, wb) = near_weights(a, 1, 0).unwrap();
            let beta = gamma(3.0 - a).unwrap() * gamma(a).unwrap() / gamma(3.0).unwrap();
            assert!(((wa + wb) - beta).abs() < 1e-12 * beta, "a {a}");
        }
    }

    #[test]
    fn normalization_and_monotone() {
        let sol = solve_volterra(order(0.5), 1.0, 64).unwrap();
        assert_eq!(sol.values[0], 1.0);
        assert_eq!(sol.derivative_values[0], 0.0);
        assert!(sol.values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn agrees_with_series_at_one() {
        let sol = solve_volterra(order(0.5), 1.0, 2048).unwrap();
        let s = i0_alpha(order(0.5), 1.0, DEFAULT_REL_TOL).unwrap().value;
        let y1 = *sol.values.last().unwrap();
        assert!(((y1 - s) / s).abs() <= 1e-5, "{y1} vs {s}");
    }

    #[test]
    fn classical_path() {
        let sol = solve_volterra(FracOrder::ONE, 2.0, 2048).unwrap();
        let y2 = *sol.values.last().unwrap();
        assert!(
            ((y2 - 2.279_585_302_336_067) / 2.279_585_302_336_067).abs() <= 1e-6,
            "{y2}"
        );
    }

    #[test]
    fn near_origin_slope_matches() {
        for &a in &[0.25, 0.5, 0.75] {
            let sol = solve_volterra(order(a), 2.0, 4096).unwrap();
            let limit = near_origin_slope(order(a));
            for k in 1..=5 {
                let got = sol.derivative_over_x(k);
                assert!(
                    ((got - limit) / limit).abs() < 1e-2,
                    "a {a} k {k}: {got} vs {limit}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(solve_volterra(FracOrder::ZERO, 1.0, 10).is_err());
        assert!(solve_volterra(order(0.5), 0.0, 10).is_err());
        assert!(solve_volterra(order(0.5), 1.0, 1).is_err());
        assert!(oracle_report(order(0.5), 1.0, &[]).is_err());
        assert!(oracle_report(order(0.5), 1.0, &[64, 32]).is_err());
    }

    #[test]
    fn single_row_report() {
        let t = oracle_report(order(0.5), 1.0, &[128]).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert!(t.rows[0].order.is_none());
        assert!(t.final_order().is_none());
    }
}
