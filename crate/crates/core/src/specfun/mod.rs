//! Special functions: Γ, the coefficient table and power series of `I₀^α`,
//! the auxiliary integral `F_μ`, and the large-argument form of `I₀^α`.

mod asym;
mod gamma;
mod series;

pub use asym::{
    asym_ratio_table, doubling_ladder, f_mu, f_mu_leading, growth_exponent, i0_alpha_asym,
    ln_i0_alpha_asym, max_finite_x, prefactor_exponent, AsymRow,
};
pub use gamma::{gamma, gamma_ratio, ln_gamma, ln_gamma_ratio, recip_gamma, GAMMA_MAX_ARG};
pub use series::{
    coeff_ratio, i0_alpha, CoeffTable, FracOrder, SeriesEval, DEFAULT_REL_TOL, MAX_TERMS,
};
