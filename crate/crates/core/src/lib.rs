//! Reflection of acoustic plane waves by a fractional-ramp interface.
//!
//! The medium is described in nondimensional form by the slowness profile
//! `c(x)^-2 = 1 + theta * max(x, 0)^alpha`. This crate computes the complex
//! reflection coefficient `R(alpha, theta)` through several independent routes:
//!
//! * [`propagate::reflection_volterra`]: fixed-point solution of the Volterra
//!   equation for the outgoing wave on `[x0, inf)`, followed by direct
//!   integration of the wave equation back to the interface;
//! * [`propagate::reflection_shooting`]: WKB initialisation far from the interface
//!   and integration of the wave equation down to `x = 0`;
//! * [`closedform::reflection_airy`]: the exact Airy-function formula for `alpha = 1`;
//! * [`closedform::reflection_asymptotic`]: the leading small-`theta` law
//!   `Gamma(alpha + 1) / (2i)^(alpha + 2) * theta`.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![warn(missing_debug_implementations)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Tabulated coefficients keep the digits of their source.
#![allow(clippy::excessive_precision)]

extern crate alloc;
#[cfg(test)]
extern crate std;

/// Float methods for `no_std` builds; with `std` linked the inherent ones win.
#[allow(unused_imports)]
mod prelude {
    pub(crate) use num_traits::Float;
}

pub mod closedform;
mod error;
pub mod ode;
pub mod profile;
pub mod propagate;
pub mod special;
pub mod volterra;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use profile::{Contraction, FractionalProfile, PhysicalScenario, WkbDirection, WkbWave};
pub use propagate::{BoundaryState, Diagnostics, Method, ReflectionResult};
pub use volterra::{SampledSolution, SolveConfig};



/// The imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);
