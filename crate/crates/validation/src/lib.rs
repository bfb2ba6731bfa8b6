//! Acceptance criteria for `fracbessel`, each checked against reference
//! values computed independently of the code under test. The runner is the
//! `acceptance` test target.

use std::f64::consts::PI;
use std::time::Duration;

use fracbessel::cornea::{CornealModel, CornealParams};
use fracbessel::fitting::{fit_grid, synth_grid, FitOptions, FitReport, SynthOptions};
use fracbessel::fracops::defining_residual;
use fracbessel::specfun::*;
use fracbessel::volterra::oracle_report;
use fracbessel::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Classical `I₀(x)` from `(1/π) ∫₀^π e^(x cos θ) dθ` by the trapezoid
/// rule, which converges geometrically for this periodic integrand.
pub fn classical_i0(x: f64) -> f64 {
    const PANELS: usize = 96;
    let h = PI / PANELS as f64;
    let mut sum = 0.5 * (x.exp() + (-x).exp());
    for k in 1..PANELS {
        sum += (x * (k as f64 * h).cos()).exp();
    }
    sum * h / PI
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Verdict and a one-line summary of the measured values.
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn order(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

pub fn alpha_one() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    for x in linspace(0.0, 10.0, 200) {
        let v = i0_alpha(FracOrder::ONE, x, DEFAULT_REL_TOL)?.value;
        worst = worst.max(rel(v, classical_i0(x)));
    }
    Ok(check(
        worst <= 1e-10,
        format!("max rel err vs quadrature I0 = {worst:.2e} (limit 1e-10)"),
    ))
}

pub fn alpha_zero() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    for x in linspace(0.0, 10.0, 200) {
        let v = i0_alpha(FracOrder::ZERO, x, DEFAULT_REL_TOL)?.value;
        worst = worst.max(rel(v, (0.5 * x * x).exp()));
    }
    Ok(check(
        worst <= 1e-10,
        format!("max rel err vs exp(x^2/2) = {worst:.2e} (limit 1e-10)"),
    ))
}

pub fn recurrence_residual() -> Result<Outcome> {
    let mut worst = 0.0_f64;
    for &a in &[0.25, 0.5, 0.75] {
        let xs = [1e-4, 1e-3, 1e-2]
            .into_iter()
            .chain(linspace(0.02, 2.0, 100));
        for x in xs {
            worst = worst.max(defining_residual(order(a), x, 40)?);
        }
    }
    Ok(check(
        worst <= 1e-8,
        format!("max residual on (0, 2] = {worst:.2e} (limit 1e-8)"),
    ))
}

pub fn oracle_agreement() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for &a in &[0.25, 0.5, 0.75] {
        let t = oracle_report(order(a), 2.0, &[512, 1024, 2048, 4096])?;
        let diff = t.rows.last().unwrap().max_rel_diff;
        let p = t.final_order().unwrap();
        pass &= diff <= 1e-4 && (p - 2.0).abs() <= 0.3;
        parts.push(format!("a={a}: diff {diff:.2e}, order {p:.3}"));
    }
    Ok(check(
        pass,
        format!("{} (limits 1e-4, 2.0 +- 0.3)", parts.join("; ")),
    ))
}

pub fn asymptotic_ratio() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for &a in &[0.25, 0.5, 0.75] {
        let x = max_finite_x(order(a))?;
        let rows = asym_ratio_table(order(a), &[0.5 * x, x])?;
        let change = rows[1].change.unwrap();
        pass &= change <= 0.05;
        parts.push(format!("a={a}: change {:.4} at x={x:.1}", change));
    }
    let x = max_finite_x(FracOrder::ONE)?;
    let r1 = asym_ratio_table(FracOrder::ONE, &[x])?[0].ratio;
    let inv = 1.0 / (2.0 * PI).sqrt();
    pass &= (r1 - inv).abs() <= 1e-3;
    parts.push(format!("a=1: ratio {r1:.6} at x={x:.1}"));
    let x0 = max_finite_x(FracOrder::ZERO)?;
    let rows = asym_ratio_table(FracOrder::ZERO, &doubling_ladder(x0, 8))?;
    let dev = rows
        .iter()
        .map(|r| (r.ratio - 1.0).abs())
        .fold(0.0, f64::max);
    pass &= dev <= 1e-12;
    parts.push(format!("a=0: |ratio-1| {dev:.1e}"));
    Ok(check(
        pass,
        format!("{} (limits 0.05, 1e-3, 1e-12)", parts.join("; ")),
    ))
}

pub fn f_mu_limit() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for &mu in &[-0.5, 0.0, 0.5, 1.0] {
        let q = 100.0_f64.powf(mu + 1.0) * f_mu(mu, 100.0)? / gamma(mu + 1.0)?;
        pass &= (0.99..=1.01).contains(&q);
        parts.push(format!("mu={mu}: {q:.12}"));
    }
    Ok(check(
        pass,
        format!("{} (range [0.99, 1.01])", parts.join("; ")),
    ))
}

fn recovery(t: (f64, f64, f64), sigma: f64, seed: u64) -> Result<(FitReport, f64)> {
    let p = CornealParams::new(t.0, t.1, t.2, 6.0)?;
    let g = synth_grid(
        &p,
        &SynthOptions {
            sigma,
            seed,
            ..SynthOptions::default()
        },
    )?;
    let rep = fit_grid(&g, &FitOptions::default())?;
    let got = [rep.params.a, rep.params.b, rep.params.alpha.value()];
    let worst = got
        .iter()
        .zip([t.0, t.1, t.2])
        .map(|(g, w)| (g / w - 1.0).abs())
        .fold(0.0, f64::max);
    Ok((rep, worst))
}

pub fn fitting_surrogate() -> Result<Outcome> {
    let sets = [
        ("exterior", (0.580404, 1.19734, 0.421345)),
        ("interior", (0.818763, 1.66664, 0.503431)),
    ];
    let mae_target = 0.01 * (2.0 / PI).sqrt();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, t) in sets {
        let (_, clean) = recovery(t, 0.0, 0)?;
        let (rep, noisy) = recovery(t, 0.01, 1)?;
        let mae_ok = (rep.mae / mae_target - 1.0).abs() <= 0.3;
        pass &= clean <= 1e-3 && noisy <= 0.02 && mae_ok;
        parts.push(format!(
            "{name}: noiseless max param err {clean:.1e}, noisy max param err {noisy:.3}, noisy mae {:.5}",
            rep.mae
        ));
    }
    Ok(check(
        pass,
        format!(
            "{} (limits 1e-3, 0.02, mae {mae_target:.5} +- 30%)",
            parts.join("; ")
        ),
    ))
}

pub fn model_sanity() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let mut worst_flat = 0.0_f64;
    for _ in 0..50 {
        let (a, b, al) = (
            rng.gen_range(0.2..2.0),
            rng.gen_range(0.5..3.0),
            rng.gen_range(0.1..=1.0),
        );
        let m = CornealModel::new(CornealParams::unit(a, b, al)?)?;
        let hs: Vec<f64> = linspace(0.0, 1.0, 501)
            .map(|r| m.height(r))
            .collect::<Result<_>>()?;
        let h0 = hs[0];
        let slope = ((m.height(2e-3)? - h0) - (m.height(1e-3)? - h0)) / 1e-3;
        worst_flat = worst_flat.max(slope.abs() / h0);
        let rim_ok = *hs.last().unwrap() == 0.0;
        let dec_ok = hs.windows(2).all(|w| w[1] < w[0]);
        let pos_ok = hs.iter().all(|&h| h >= 0.0);
        if !(rim_ok && dec_ok && pos_ok && slope.abs() / h0 <= 1e-2) {
            failures.push(format!("({a:.3}, {b:.3}, {al:.3})"));
        }
    }
    Ok(check(
        failures.is_empty(),
        format!(
            "50 triples, worst flatness {worst_flat:.2e}, failures [{}]",
            failures.join(", ")
        ),
    ))
}

/// A named check with its runtime limit.
pub struct Criterion {
    pub name: &'static str,
    pub limit: Duration,
    pub run: fn() -> Result<Outcome>,
}

/// All criteria, in order.
pub fn criteria() -> [Criterion; 8] {
    let c = |name, secs, run| Criterion {
        name,
        limit: Duration::from_secs(secs),
        run,
    };
    [
        c("alpha=1 reduction", 1, alpha_one),
        c("alpha=0 reduction", 1, alpha_zero),
        c("recurrence residual", 5, recurrence_residual),
        c("oracle agreement", 30, oracle_agreement),
        c("asymptotic ratio", 10, asymptotic_ratio),
        c("F_mu leading order", 1, f_mu_limit),
        c("fitting round trip", 60, fitting_surrogate),
        c("model sanity", 5, model_sanity),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_i0_known_values() {
        assert!(rel(classical_i0(0.0), 1.0) < 1e-15);
        assert!(rel(classical_i0(1.0), 1.266_065_877_752_008_4) < 1e-14);
        assert!(rel(classical_i0(2.0), 2.279_585_302_336_067_3) < 1e-14);
        assert!(rel(classical_i0(10.0), 2_815.716_628_466_254) < 1e-13);
    }
}
