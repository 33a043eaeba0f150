//! Reference formulas: small-`theta` law, the exact `alpha = 1` coefficient and the sharp interface.

#[allow(unused_imports)]
use crate::prelude::*;
use crate::special::{airy_log_derivative_shifted, gamma_fn, pow_2i};
use crate::{Complex64, Error, Result};

/// `Gamma(alpha + 1) / (2i)^(alpha + 2) * theta`, principal branch.
pub fn reflection_asymptotic(alpha: f64, theta: f64) -> Result<Complex64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::param("alpha", "must be finite and > 0"));
    }
    if !(theta >= 0.0) || !theta.is_finite() {
        return Err(Error::param("theta", "must be finite and >= 0"));
    }
    Ok(gamma_fn(alpha + 1.0)? * theta / pow_2i(alpha + 2.0))
}

/// Exponent `min(1/alpha, 1)` of the relative remainder of [`reflection_asymptotic`].
pub fn remainder_exponent(alpha: f64) -> f64 {
    (1.0 / alpha).min(1.0)
}

/// Exact coefficient for the linear ramp `alpha = 1`.
///
/// With `beta = theta^(-2/3)` and `w(X) = Ai(e^{i pi/3} X)` the coefficient is
/// `(w' + i sqrt(beta) w) / (-w' + i sqrt(beta) w)` at `X = beta`. Writing
/// `w'/w = e^{i pi/3} L - i sqrt(beta)` with `L = Ai'/Ai + sqrt(z)` gives
/// `R = e^{i pi/3} L / (2i sqrt(beta) - e^{i pi/3} L)`, which neither
/// overflows nor cancels for small `theta`.
pub fn reflection_airy(theta: f64) -> Result<Complex64> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::param("theta", "must be finite and > 0"));
    }
    let beta = theta.powf(-2.0 / 3.0);
    let rot = Complex64::from_polar(1.0, core::f64::consts::FRAC_PI_3);
    let l = rot * airy_log_derivative_shifted(rot * beta)?;
    let two_i_root = Complex64::new(0.0, 2.0 * beta.sqrt());
    Ok(l / (two_i_root - l))
}

/// Coefficient of the sharp interface (`alpha = 0`) with speed ratio `c_ratio = c_-/c_+`.
///
/// An imaginary transmitted root is taken on the upper half plane.
pub fn reflection_fresnel(c_ratio: f64, eta: f64) -> Result<Complex64> {
    if !(c_ratio > 0.0) || !c_ratio.is_finite() {
        return Err(Error::param("c_ratio", "must be finite and > 0"));
    }
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::GrazingIncidence(eta));
    }
    let e2 = eta * eta;
    let below = c_ratio * c_ratio - e2;
    let t = if below >= 0.0 {
        Complex64::new(below.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-below).sqrt())
    };
    let i = Complex64::new((1.0 - e2).sqrt(), 0.0);
    Ok((t - i) / (t + i))
}
