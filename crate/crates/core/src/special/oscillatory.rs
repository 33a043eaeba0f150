//! Oscillatory integrals with the WKB phase of a profile.
use super::quadrature::integrate;
use super::{gamma_fn, pow_2i};
use crate::profile::FractionalProfile;
use crate::{Complex64, Error, Result};
#[allow(unused_imports)]
use crate::prelude::*;

/// Upper limit of an oscillatory integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpperLimit {
    Finite(f64),
    Infinity,
}

/// Tolerances for [`osc_integral`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for OscConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-12, max_panels: 2_000_000 }
    }
}

fn phase_factor(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, -2.0 * phi)
}

/// `int_a^b f(y) exp(-2 i phi(y)) dy` with `phi` taken from `profile`.
///
/// Panels advance the phase `2 phi` by at most `pi/2`. For an infinite upper
/// limit the tail beyond the current panel end `X` is estimated by two
/// integrations by parts, `exp(-2i phi(X)) (h0 + h0' / (2i phi'))` with
/// `h0 = f / (2i phi')`, and marching stops once the second term is below
/// tolerance. `f` must decay without oscillating.
pub fn osc_integral<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: UpperLimit,
    profile: &FractionalProfile,
    cfg: &OscConfig,
) -> Result<Complex64> {
    if !a.is_finite() {
        return Err(Error::param("a", "lower limit must be finite"));
    }
    let end = match b {
        UpperLimit::Finite(b) if !b.is_finite() => return Err(Error::param("b", "use UpperLimit::Infinity")),
        UpperLimit::Finite(b) if b <= a => {
            if b == a {
                return Ok(Complex64::new(0.0, 0.0));
            }
            return Err(Error::param("b", "upper limit must not be below the lower limit"));
        }
        UpperLimit::Finite(b) => b,
        UpperLimit::Infinity => f64::INFINITY,
    };
    let quarter = core::f64::consts::FRAC_PI_4;
    let panel_abs = cfg.abs_tol * 1e-2;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut left = a;
    let mut phi_left = profile.phase(a);
    for _ in 0..cfg.max_panels {
        // phi' is nondecreasing, so its left value bounds the phase advance from above.
        let mut width = quarter / profile.phase_rate(left);
        // keep panels near a singular left end graded
        if left > 0.0 {
            width = width.min(left.max(1e-3));
        }
        let right = (left + width).min(end);
        let pl = phi_left;
        let panel = integrate(
            |y| f(y) * phase_factor(pl + profile.phase_between(left, y)),
            left,
            right,
            panel_abs,
            cfg.rel_tol * 1e-1,
        )?;
        sum += panel;
        phi_left += profile.phase_between(left, right);
        left = right;
        if left >= end {
            return Ok(sum);
        }
        if end.is_infinite() {
            let rate = profile.phase_rate(left);
            let h = 1e-4 * left.abs().max(1.0);
            let k = Complex64::new(0.0, 2.0);
            let h0 = |y: f64, fy: Complex64| fy / (k * profile.phase_rate(y));
            let fl = f(left);
            let d0 = (h0(left + h, f(left + h)) - h0(left - h, f(left - h))) / (2.0 * h);
            let t0 = h0(left, fl);
            let t1 = d0 / (k * rate);
            let scale = cfg.abs_tol.max(cfg.rel_tol * sum.norm());
            if t1.norm() < scale && (t1.norm() <= 0.1 * t0.norm() || t0.norm() < scale) {
                return Ok(sum + phase_factor(phi_left) * (t0 + t1));
            }
        }
    }
    Err(Error::Quadrature("oscillatory integral exceeded its panel budget"))
}

/// `|LHS - RHS|` of the identity
/// `Gamma(alpha+1)/(2i)^{alpha+1} = int_0^{x0} y^alpha e^{-2iy} dy
///   + (2i)^{-n} int_{x0}^inf (y^alpha)^{(n)} e^{-2iy} dy
///   + e^{-2i x0} sum_{p<n} (y^alpha)^{(p)}(x0) / (2i)^{p+1}`.
pub fn gamma_identity_residual(alpha: f64, x0: f64, n: u32) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::param("alpha", "must be finite and > 0"));
    }
    if !(x0 > 0.0) || !x0.is_finite() {
        return Err(Error::param("x0", "must be finite and > 0"));
    }
    if n == 0 {
        return Err(Error::param("n", "must be >= 1"));
    }
    let terminates = alpha.fract() == 0.0 && (n as f64) > alpha;
    if !terminates && alpha - n as f64 >= 0.0 {
        return Err(Error::param("n", "the n-th derivative of y^alpha must decay"));
    }
    // d^p(y^alpha) = c_p y^{alpha - p}
    let deriv_coeff = |p: u32| (0..p).fold(1.0, |acc, j| acc * (alpha - j as f64));
    let free = FractionalProfile::new(1.0, 0.0)?;
    let cfg = OscConfig::default();
    let lhs = gamma_fn(alpha + 1.0)? / pow_2i(alpha + 1.0);
    let near = osc_integral(|y| Complex64::new(y.powf(alpha), 0.0), 0.0, UpperLimit::Finite(x0), &free, &cfg)?;
    let cn = deriv_coeff(n);
    let far = if cn == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        osc_integral(|y| Complex64::new(cn * y.powf(alpha - n as f64), 0.0), x0, UpperLimit::Infinity, &free, &cfg)?
            / pow_2i(n as f64)
    };
    let mut boundary = Complex64::new(0.0, 0.0);
    for p in 0..n {
        boundary += deriv_coeff(p) * x0.powf(alpha - p as f64) / pow_2i(p as f64 + 1.0);
    }
    let rhs = near + far + phase_factor(x0) * boundary;
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn free() -> FractionalProfile {
        FractionalProfile::new(1.0, 0.0).unwrap()
    }

    #[test]
    fn exponential_against_closed_form() {
        let v = osc_integral(|y| Complex64::new((-y).exp(), 0.0), 0.0, UpperLimit::Infinity, &free(), &OscConfig::default())
            .unwrap();
        assert!((v - Complex64::new(0.2, -0.4)).norm() < 1e-12, "{v}");
    }

    #[test]
    fn zero_integrand() {
        let v = osc_integral(|_| Complex64::new(0.0, 0.0), 1.0, UpperLimit::Infinity, &free(), &OscConfig::default()).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn inverse_square_against_riemann_sum() {
        // Midpoint sum on [1, 2000] with h = 2e-4 plus the exact-IBP tail of the oracle.
        let h = 2e-4;
        let upper = 2000.0;
        let n = ((upper - 1.0) / h) as usize;
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let y = 1.0 + (k as f64 + 0.5) * h;
            s += Complex64::from_polar(1.0 / (y * y), -2.0 * y);
        }
        s *= h;
        // midpoint rule bias for e^{-2iy}: factor sin(h)/h
        s *= h.sin() / h;
        let i2 = Complex64::new(0.0, 2.0);
        let tail = Complex64::from_polar(1.0, -2.0 * upper)
            * (1.0 / (upper * upper * i2) - 2.0 / (upper * upper * upper * i2 * i2));
        let oracle = s + tail;
        let v = osc_integral(|y| Complex64::new(1.0 / (y * y), 0.0), 1.0, UpperLimit::Infinity, &free(), &OscConfig::default())
            .unwrap();
        assert!((v - oracle).norm() < 1e-8, "{v} {oracle}");
    }

    #[test]
    fn finite_limits_with_ramp_profile() {
        // f = 2 phi'(y) i exp(...) integrates to exp(-2i phi) difference
        let pr = FractionalProfile::new(1.5, 0.3).unwrap();
        let v = osc_integral(
            |y| Complex64::new(0.0, 2.0 * pr.phase_rate(y)),
            0.2,
            UpperLimit::Finite(6.0),
            &pr,
            &OscConfig::default(),
        )
        .unwrap();
        let exact = phase_factor(pr.phase(0.2)) - phase_factor(pr.phase(6.0));
        assert!((v - exact).norm() < 1e-12, "{v} {exact}");
    }

    #[test]
    fn gamma_identity_examples() {
        for &(alpha, x0, n) in &[(0.5, 1.0, 2), (1.7, 0.5, 3), (2.0, 1.0, 4), (3.2, 2.0, 5)] {
            let r = gamma_identity_residual(alpha, x0, n).unwrap();
            assert!(r < 1e-8, "alpha={alpha} residual={r}");
        }
        assert!(gamma_identity_residual(2.5, 1.0, 2).is_err());
        assert!(gamma_identity_residual(0.5, 0.0, 2).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn linear_in_integrand(c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, r1 in 0.3f64..2.0, r2 in 0.3f64..2.0, theta in 0.0f64..0.5) {
            let pr = FractionalProfile::new(1.3, theta).unwrap();
            let cfg = OscConfig::default();
            let f = move |y: f64| Complex64::new(c1 * (-r1 * y).exp(), 0.5 * c1 / (1.0 + y * y));
            let g = move |y: f64| Complex64::new(c2 / (1.0 + r2 * y).powi(3), c2 * (-y).exp());
            let lim = UpperLimit::Infinity;
            let a = osc_integral(f, 0.5, lim, &pr, &cfg).unwrap();
            let b = osc_integral(g, 0.5, lim, &pr, &cfg).unwrap();
            let ab = osc_integral(|y| f(y) + g(y), 0.5, lim, &pr, &cfg).unwrap();
            prop_assert!((ab - a - b).norm() < 1e-12 * (1.0 + a.norm() + b.norm()));
        }
    }
}
