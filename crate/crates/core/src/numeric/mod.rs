//! Numerical building blocks: double-double accumulation, exact binomial
//! coefficients, adaptive quadrature and special functions.

mod binomial;
mod dd;
mod quadrature;
pub mod special;

pub use binomial::{binomial_u128, ln_binomial};
pub use dd::DoubleDouble;
pub use quadrature::{integrate_adaptive, QuadratureResult};
