//! The modified fractional Bessel function `I₀^α`, its asymptotics, an
//! independent Volterra-equation oracle, and an axisymmetric corneal
//! height model with least-squares fitting to gridded surfaces.

// Argument guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cornea;
pub mod error;
pub mod fitting;
pub mod format;
pub mod fracops;
pub mod quad;
pub mod specfun;
pub mod volterra;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/fractional-operators.md")]
    mod fractional_operators {}
    #[doc = include_str!("../../../book/src/asymptotics.md")]
    mod asymptotics {}
    #[doc = include_str!("../../../book/src/volterra-oracle.md")]
    mod volterra_oracle {}
    #[doc = include_str!("../../../book/src/cornea.md")]
    mod cornea {}
    #[doc = include_str!("../../../book/src/fitting.md")]
    mod fitting {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
