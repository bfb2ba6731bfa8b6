#![allow(dead_code)]

use std::f64::consts::PI;

/// Classical `I₀(x)` from `(1/π) ∫₀^π e^(x cos θ) dθ` by the trapezoid
/// rule, which converges geometrically for this periodic integrand.
/// Independent of any series code.
pub fn classical_i0(x: f64) -> f64 {
    const PANELS: usize = 96;
    let h = PI / PANELS as f64;
    let mut sum = 0.5 * ((x * 1.0_f64).exp() + (-x).exp());
    for k in 1..PANELS {
        sum += (x * (k as f64 * h).cos()).exp();
    }
    sum * h / PI
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn classical_i0_known_values() {
    assert!(rel(classical_i0(0.0), 1.0) < 1e-15);
    assert!(rel(classical_i0(1.0), 1.266_065_877_752_008_4) < 1e-14);
    assert!(rel(classical_i0(2.0), 2.279_585_302_336_067_3) < 1e-14);
    assert!(rel(classical_i0(10.0), 2_815.716_628_466_254) < 1e-13);
}
