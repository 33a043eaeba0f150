//! Special functions and quadrature primitives: the real Gamma function, the
//! complex Airy function `Ai` with its derivative, Gauss rules, adaptive
//! Gauss–Kronrod integration and integrals against the WKB phase factor
//! `exp(-2i phi(y))`.

mod airy;
mod gamma;
mod oscillatory;
pub(crate) mod quadrature;

pub use airy::{airy_ai, airy_log_derivative_shifted, AiryPair};
pub use gamma::gamma_fn;
pub use oscillatory::{gamma_identity_residual, osc_integral, OscConfig, UpperLimit};
pub use quadrature::{gauss_legendre, integrate, integrate_real, GaussLegendre};

use crate::Complex64;
use num_traits::Float;
#[allow(unused_imports)]
use crate::prelude::*;

/// `(2i)^p` on the principal branch, `2^p * exp(i pi p / 2)`.
pub fn pow_2i(p: f64) -> Complex64 {
    Complex64::from_polar(2.0.powf(p), core::f64::consts::FRAC_PI_2 * p)
}
