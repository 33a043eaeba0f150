//! The fractional-ramp medium `c^{-2}(x) = 1 + theta * x_+^alpha` and the
//! WKB quantities derived from it.

use crate::special::integrate_real;
use crate::{Complex64, Error, Result};
#[allow(unused_imports)]
use crate::prelude::*;

/// Positive half of the 16-point Gauss–Legendre rule.
const GL16_NODES: [f64; 8] = [
    0.095_012_509_837_637_45,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_37,
    0.617_876_244_402_643_8,
    0.755_404_408_355_003,
    0.865_631_202_387_831_8,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];
const GL16_WEIGHTS: [f64; 8] = [
    0.189_450_610_455_068_59,
    0.182_603_415_044_923_6,
    0.169_156_519_395_002_62,
    0.149_595_988_816_576_76,
    0.124_628_971_255_534_03,
    0.095_158_511_682_492_59,
    0.062_253_523_938_647_706,
    0.027_152_459_411_754_037,
];

/// Below this value of `theta * x^alpha` the phase is summed from its binomial series.
const SERIES_LIMIT: f64 = 0.25;

/// Nondimensional medium with `c^{-2}(x) = 1 + theta * max(x, 0)^alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalProfile {
    alpha: f64,
    theta: f64,
}

/// Result of the contraction test `M_{x0} < 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contraction {
    pub holds: bool,
    /// `2 - M_{x0}`.
    pub margin: f64,
    pub m_norm: f64,
}

/// Direction of a one-term WKB wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WkbDirection {
    /// `v^> = b e^{-i phi}`.
    Rightgoing,
    /// `v^< = b e^{+i phi}`.
    Leftgoing,
}

/// A WKB wave `b(x) e^{-/+ i phi(x)}` evaluated at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbWave {
    pub direction: WkbDirection,
    pub x: f64,
    pub amplitude: f64,
    pub amplitude_derivative: f64,
    pub phase: f64,
    pub phase_rate: f64,
}

impl WkbWave {
    fn sign(&self) -> f64 {
        match self.direction {
            WkbDirection::Rightgoing => -1.0,
            WkbDirection::Leftgoing => 1.0,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.sign() * self.phase)
    }

    /// `(b' -/+ i b phi') e^{-/+ i phi}`.
    pub fn derivative(&self) -> Complex64 {
        let s = self.sign();
        Complex64::new(self.amplitude_derivative, s * self.amplitude * self.phase_rate)
            * Complex64::from_polar(1.0, s * self.phase)
    }
}

impl FractionalProfile {
    pub fn new(alpha: f64, theta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::param("alpha", "must be finite and > 0"));
        }
        if !(theta >= 0.0) || !theta.is_finite() {
            return Err(Error::param("theta", "must be finite and >= 0"));
        }
        Ok(Self { alpha, theta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `theta * x_+^alpha`.
    fn ramp(&self, x: f64) -> f64 {
        if x <= 0.0 || self.theta == 0.0 {
            0.0
        } else {
            self.theta * x.powf(self.alpha)
        }
    }

    /// `c^{-2}(x) = 1 + theta * x_+^alpha`.
    pub fn slowness_sq(&self, x: f64) -> f64 {
        1.0 + self.ramp(x)
    }

    pub fn sound_speed(&self, x: f64) -> f64 {
        1.0 / self.slowness_sq(x).sqrt()
    }

    /// `phi'(x) = 1 / c(x)`.
    pub fn phase_rate(&self, x: f64) -> f64 {
        self.slowness_sq(x).sqrt()
    }

    /// `phi''(x)`; infinite at `0+` when `alpha < 1`.
    pub fn phase_rate_derivative(&self, x: f64) -> f64 {
        if x <= 0.0 || self.theta == 0.0 {
            return 0.0;
        }
        let f = self.slowness_sq(x);
        self.theta * self.alpha * x.powf(self.alpha - 1.0) / (2.0 * f.sqrt())
    }

    /// `b(x) = (1 + theta x_+^alpha)^{-1/4}`.
    pub fn amplitude(&self, x: f64) -> f64 {
        self.slowness_sq(x).powf(-0.25)
    }

    pub fn amplitude_derivative(&self, x: f64) -> f64 {
        if x <= 0.0 || self.theta == 0.0 {
            return 0.0;
        }
        let f = self.slowness_sq(x);
        -0.25 * f.powf(-1.25) * self.theta * self.alpha * x.powf(self.alpha - 1.0)
    }

    /// `phi(x) = int_0^x c^{-1}(y) dy`, equal to `x` for `x <= 0`.
    pub fn phase(&self, x: f64) -> f64 {
        self.phase_between(0.0, x)
    }

    /// `phi(b) - phi(a)`.
    pub fn phase_between(&self, a: f64, b: f64) -> f64 {
        if a > b {
            return -self.phase_between(b, a);
        }
        if self.theta == 0.0 || b <= 0.0 {
            return b - a;
        }
        let mut acc = 0.0;
        let mut lo = a;
        if lo < 0.0 {
            acc += -lo;
            lo = 0.0;
        }
        let xs = (SERIES_LIMIT / self.theta).powf(1.0 / self.alpha);
        if lo < xs {
            let hi = b.min(xs);
            acc += self.phase_series(hi) - self.phase_series(lo);
            lo = hi;
        }
        if lo < b {
            acc += self.phase_graded(lo, b);
        }
        acc
    }

    /// Binomial series of `int_0^x sqrt(1 + theta y^alpha) dy`, valid for `theta x^alpha <= 1/4`.
    fn phase_series(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let big_x = self.ramp(x);
        let mut coeff = 1.0;
        let mut pow = 1.0;
        let mut sum = 1.0;
        for k in 0..200 {
            let kf = k as f64;
            coeff *= (0.5 - kf) / (kf + 1.0);
            pow *= big_x;
            let term = coeff * pow / (self.alpha * (kf + 1.0) + 1.0);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        x * sum
    }

    /// Composite 16-point Gauss–Legendre on panels no wider than half their left end.
    fn phase_graded(&self, a: f64, b: f64) -> f64 {
        let mut acc = 0.0;
        let mut y = a;
        while y < b {
            let w = (b - y).min(0.5 * y);
            let w = if b - y - w < 1e-3 * w { b - y } else { w };
            acc += self.gl16(y, y + w);
            y += w;
        }
        acc
    }

    fn gl16(&self, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (t, w) in GL16_NODES.iter().zip(&GL16_WEIGHTS) {
            s += w * (self.phase_rate(c - h * t) + self.phase_rate(c + h * t));
        }
        s * h
    }

    fn t0_coeffs(&self) -> (f64, f64) {
        let a = self.alpha;
        (a * (a - 1.0) / 4.0, 5.0 * a * a / 16.0)
    }

    /// `T0(X) = a (1+X)^{-3/2} - b X (1+X)^{-5/2}` so that `M = -theta x^{alpha-2} T0(theta x^alpha)`.
    fn t0(&self, big_x: f64) -> f64 {
        let (a, b) = self.t0_coeffs();
        let g = 1.0 + big_x;
        (a * g - b * big_x) * g.powf(-2.5)
    }

    fn t0_derivative(&self, big_x: f64) -> f64 {
        let (a, b) = self.t0_coeffs();
        let g = 1.0 + big_x;
        (-1.5 * a - b) * g.powf(-2.5) + 2.5 * b * big_x * g.powf(-3.5)
    }

    /// The WKB defect `M = c^{1/2} (c^{1/2})''` at `x > 0`.
    pub fn coupling(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::param("x", "coupling is defined for x > 0"));
        }
        Ok(self.coupling_unchecked(x))
    }

    pub(crate) fn coupling_unchecked(&self, x: f64) -> f64 {
        if self.theta == 0.0 {
            return 0.0;
        }
        -self.theta * x.powf(self.alpha - 2.0) * self.t0(self.ramp(x))
    }

    /// `M'(x)` at `x > 0`.
    pub fn coupling_derivative(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::param("x", "coupling is defined for x > 0"));
        }
        Ok(self.coupling_derivative_unchecked(x))
    }

    pub(crate) fn coupling_derivative_unchecked(&self, x: f64) -> f64 {
        if self.theta == 0.0 {
            return 0.0;
        }
        let big_x = self.ramp(x);
        -self.theta
            * x.powf(self.alpha - 3.0)
            * ((self.alpha - 2.0) * self.t0(big_x) + self.alpha * big_x * self.t0_derivative(big_x))
    }

    /// Zero of `M` on `(0, inf)`; only present for `alpha > 1`.
    pub fn coupling_sign_change(&self) -> Option<f64> {
        if self.alpha <= 1.0 || self.theta == 0.0 {
            return None;
        }
        let xs = 4.0 * (self.alpha - 1.0) / (self.alpha + 4.0);
        Some((xs / self.theta).powf(1.0 / self.alpha))
    }

    /// `int_{X0}^inf X^{-1/alpha} T0(X) dX` (or of `|T0|`), integrated in `ln X`.
    fn t0_moment(&self, x_lo: f64, absolute: bool) -> Result<f64> {
        const U_MAX: f64 = 60.0;
        let inv = 1.0 / self.alpha;
        let (a, b) = self.t0_coeffs();
        let integrand = |u: f64| {
            let big_x = u.exp();
            let t = self.t0(big_x);
            big_x.powf(1.0 - inv) * if absolute { t.abs() } else { t }
        };
        // Beyond X = e^U, T0 ~ (a - b) X^{-3/2}.
        let tail_at = |u: f64| {
            let p = inv + 0.5;
            let lead = if absolute { (a - b).abs() } else { a - b };
            lead * (-p * u).exp() / p
        };
        let u_lo = x_lo.ln();
        if u_lo >= U_MAX {
            return Ok(tail_at(u_lo));
        }
        let mut breaks = alloc::vec![u_lo];
        if self.alpha > 1.0 {
            let us = (4.0 * (self.alpha - 1.0) / (self.alpha + 4.0)).ln();
            if us > u_lo {
                breaks.push(us);
            }
        }
        let mut u = u_lo.max(-40.0);
        while u + 8.0 < U_MAX {
            u += 8.0;
            if u > *breaks.last().unwrap() {
                breaks.push(u);
            }
        }
        breaks.push(U_MAX);
        // Error floor per unit of ln X. A purely relative target is out of reach
        // on a sliver window ending at the zero of T0, or when the signed moment cancels.
        let peak = (0..=256)
            .map(|k| integrand(u_lo + (U_MAX - u_lo) * k as f64 / 256.0).abs())
            .fold(0.0, f64::max);
        let mut acc = 0.0;
        for w in breaks.windows(2) {
            acc += integrate_real(integrand, w[0], w[1], 1e-16 * peak * (w[1] - w[0]), 1e-14)?;
        }
        Ok(acc + tail_at(U_MAX))
    }

    /// `M_{x0} = int_{x0}^inf |M(x)| dx`.
    pub fn m_norm(&self, x0: f64) -> Result<f64> {
        if !(x0 > 0.0) {
            return Err(Error::param("x0", "must be > 0"));
        }
        if self.theta == 0.0 {
            return Ok(0.0);
        }
        let scale = self.theta.powf(1.0 / self.alpha) / self.alpha;
        Ok(scale * self.t0_moment(self.ramp(x0), true)?)
    }

    /// Signed tail `int_x^inf M(y) dy`.
    pub fn coupling_integral(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::param("x", "must be > 0"));
        }
        if self.theta == 0.0 {
            return Ok(0.0);
        }
        let scale = self.theta.powf(1.0 / self.alpha) / self.alpha;
        Ok(-scale * self.t0_moment(self.ramp(x), false)?)
    }

    pub fn check_contraction(&self, x0: f64) -> Result<Contraction> {
        let m_norm = self.m_norm(x0)?;
        Ok(Contraction { holds: m_norm < 2.0, margin: 2.0 - m_norm, m_norm })
    }

    /// Constant `I*` of the bound `M_{x0} <= theta^{min(1/alpha, 1)} I*`.
    ///
    /// For `alpha >= 1` this is `int_0^inf z^{alpha-2} |T0(z^alpha)| dz` and does
    /// not depend on `x0`; for `alpha < 1` it is `x0^{alpha-1} / (1-alpha) * sup |T0|`.
    pub fn i_star(&self, x0: f64) -> Result<f64> {
        if !(x0 > 0.0) {
            return Err(Error::param("x0", "must be > 0"));
        }
        let (a, b) = self.t0_coeffs();
        if self.alpha < 1.0 {
            let aa = a.abs();
            let xm = ((b - 1.5 * aa) / (1.5 * (b + aa))).max(0.0);
            let sup = aa * (1.0 + xm).powf(-1.5) + b * xm * (1.0 + xm).powf(-2.5);
            return Ok(x0.powf(self.alpha - 1.0) / (1.0 - self.alpha) * sup);
        }
        // Near X = 0, |T0| = a - (3a/2 + b) X + O(X^2) with a >= 0.
        let xl: f64 = 1e-8;
        let p = 1.0 - 1.0 / self.alpha;
        let c = 1.5 * a + b;
        let lead = if a == 0.0 { 0.0 } else { a * xl.powf(p) / p };
        let head = lead - c * xl.powf(p + 1.0) / (p + 1.0);
        Ok((head.abs() + self.t0_moment(xl, true)?) / self.alpha)
    }

    /// One-term WKB wave at `x`.
    pub fn wkb_wave(&self, direction: WkbDirection, x: f64) -> WkbWave {
        WkbWave {
            direction,
            x,
            amplitude: self.amplitude(x),
            amplitude_derivative: self.amplitude_derivative(x),
            phase: self.phase(x),
            phase_rate: self.phase_rate(x),
        }
    }
}

/// Dimensional inputs that determine `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScenario {
    /// Wave speed above the interface (m/s).
    pub c0: f64,
    /// Skin depth of the ramp (m).
    pub ell: f64,
    /// Angular frequency (rad/s).
    pub omega: f64,
    /// Transverse slowness fraction, `0 <= eta < 1`.
    pub eta: f64,
    pub alpha: f64,
}

impl PhysicalScenario {
    pub fn new(c0: f64, ell: f64, omega: f64, eta: f64, alpha: f64) -> Result<Self> {
        let s = Self { c0, ell, omega, eta, alpha };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if !(self.c0 > 0.0) || !self.c0.is_finite() {
            return Err(Error::param("c0", "must be finite and > 0"));
        }
        if !(self.ell > 0.0) || !self.ell.is_finite() {
            return Err(Error::param("ell", "must be finite and > 0"));
        }
        if self.omega == 0.0 || !self.omega.is_finite() {
            return Err(Error::param("omega", "must be finite and nonzero"));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::param("alpha", "must be finite and > 0"));
        }
        if !(self.eta.abs() < 1.0) {
            return Err(Error::GrazingIncidence(self.eta));
        }
        Ok(())
    }

    /// `theta = (c0 / (ell |omega|))^alpha (1 - eta^2)^{-(alpha+2)/2}`.
    pub fn theta(&self) -> Result<f64> {
        self.validate()?;
        let base = (self.c0 / (self.ell * self.omega.abs())).powf(self.alpha);
        Ok(base * (1.0 - self.eta * self.eta).powf(-(self.alpha + 2.0) / 2.0))
    }

    pub fn profile(&self) -> Result<FractionalProfile> {
        FractionalProfile::new(self.alpha, self.theta()?)
    }
}
