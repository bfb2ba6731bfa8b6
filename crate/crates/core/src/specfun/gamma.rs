//! Gamma function for positive real arguments.
//!
//! Arguments below [`STIRLING_MIN`] are shifted upward with the recurrence
//! `Γ(z) = Γ(z + 1) / z`; at and above it the Stirling series with eight
//! Bernoulli terms is accurate to well under one ulp. The ratio
//! `Γ(a)/Γ(b)` is formed from the difference of the two Stirling
//! expansions so that neither factor is ever materialized, which keeps it
//! finite and accurate for arguments far beyond the `Γ` overflow point.

use crate::error::{domain, Error, Result};

/// Largest argument for which `Γ(z)` is finite in `f64`.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

const STIRLING_MIN: f64 = 10.0;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

// B_{2k} / (2k (2k - 1)), k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Stirling correction `ln Γ(z) - [(z - 1/2) ln z - z + ln(2π)/2]`, `z ≥ 10`.
fn stirling_correction(z: f64) -> f64 {
    let w = 1.0 / (z * z);
    let mut acc = 0.0;
    for &c in STIRLING.iter().rev() {
        acc = acc * w + c;
    }
    acc / z
}

/// Shifts `z` up to the Stirling range. Returns the shifted argument and the
/// product `z (z + 1) ... (z + k - 1)` that was divided out.
fn shift_up(mut z: f64) -> (f64, f64) {
    let mut prod = 1.0;
    while z < STIRLING_MIN {
        prod *= z;
        z += 1.0;
    }
    (z, prod)
}

fn check_positive(z: f64, what: &str) -> Result<()> {
    if z.is_nan() || z <= 0.0 {
        return Err(domain(format!(
            "{what} requires a positive argument, got {z}"
        )));
    }
    Ok(())
}

/// `Γ(z)` for `z > 0`.
///
/// Relative error is a few times 1e-14 at worst across `(0, 171.6)`.
pub fn gamma(z: f64) -> Result<f64> {
    check_positive(z, "gamma")?;
    if z > GAMMA_MAX_ARG {
        return Err(Error::Overflow(format!("gamma({z})")));
    }
    let (s, prod) = shift_up(z);
    // z^(z - 1/2) is split in two halves so that neither half overflows.
    let half = s.powf(0.5 * (s - 0.5));
    let large = SQRT_2PI * half * (half * (-s).exp()) * stirling_correction(s).exp();
    let value = large / prod;
    if !value.is_finite() {
        return Err(Error::Overflow(format!("gamma({z})")));
    }
    Ok(value)
}

/// `ln Γ(z)` for `z > 0`.
pub fn ln_gamma(z: f64) -> Result<f64> {
    check_positive(z, "ln_gamma")?;
    if z.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let (s, prod) = shift_up(z);
    Ok((s - 0.5) * s.ln() - s + HALF_LN_2PI + stirling_correction(s) - prod.ln())
}

/// `ln(Γ(a) / Γ(b))` for `a, b > 0`, without cancellation between the two
/// log-gamma values when `a` and `b` are large and close.
pub fn ln_gamma_ratio(a: f64, b: f64) -> Result<f64> {
    check_positive(a, "gamma_ratio numerator")?;
    check_positive(b, "gamma_ratio denominator")?;
    let (sa, pa) = shift_up(a);
    let (sb, pb) = shift_up(b);
    let d = sa - sb;
    // (sa - 1/2) ln sa - (sb - 1/2) ln sb, rearranged around ln(1 + d/sb).
    let power = d * sa.ln() + (sb - 0.5) * (d / sb).ln_1p();
    let corr = stirling_correction(sa) - stirling_correction(sb);
    Ok(power - d + corr - (pa / pb).ln())
}

/// `Γ(a) / Γ(b)` for `a, b > 0`.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    let value = ln_gamma_ratio(a, b)?.exp();
    if !value.is_finite() {
        return Err(Error::Overflow(format!("gamma({a}) / gamma({b})")));
    }
    Ok(value)
}

/// `1 / Γ(z)` for any real `z`, with the entire-function convention
/// `1/Γ(0) = 1/Γ(-1) = ... = 0`.
pub fn recip_gamma(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z <= 0.0 {
        if z == z.floor() {
            return 0.0;
        }
        // Reflection: 1/Γ(z) = sin(πz) Γ(1 - z) / π.
        let pi = std::f64::consts::PI;
        return match gamma(1.0 - z) {
            Ok(g) => (pi * z).sin() * g / pi,
            Err(_) => f64::NAN,
        };
    }
    if z > GAMMA_MAX_ARG {
        return (-ln_gamma(z).unwrap_or(f64::INFINITY)).exp();
    }
    gamma(z).map_or(0.0, |g| 1.0 / g)
}
