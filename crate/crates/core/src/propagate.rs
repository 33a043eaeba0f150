//! From `R_{x0}` to the physical coefficient, plus the independent WKB shooting route.

#[allow(unused_imports)]
use crate::prelude::*;
use crate::ode::{self, State};
use crate::profile::{FractionalProfile, WkbDirection};
use crate::volterra::{solve_series, SolveConfig};
use crate::{Complex64, Error, Result};

/// Field and derivative at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryState {
    pub u: Complex64,
    pub du: Complex64,
    pub x: f64,
}

/// How a coefficient was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Volterra,
    Shooting,
    Airy,
    Asymptotic,
    Fresnel,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Volterra => "volterra",
            Method::Shooting => "shooting",
            Method::Airy => "airy",
            Method::Asymptotic => "asymptotic",
            Method::Fresnel => "fresnel",
        }
    }
}

impl core::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "volterra" => Method::Volterra,
            "shooting" => Method::Shooting,
            "airy" => Method::Airy,
            "asymptotic" => Method::Asymptotic,
            "fresnel" => Method::Fresnel,
            _ => return Err(Error::param("method", "unknown method")),
        })
    }
}

/// Solver bookkeeping; fields that do not apply to a method stay `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Diagnostics {
    pub m_norm: Option<f64>,
    pub iterations: Option<usize>,
    pub x_max: Option<f64>,
    pub est_error: Option<f64>,
    pub x0_used: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionResult {
    pub r: Complex64,
    pub method: Method,
    pub diagnostics: Diagnostics,
}

/// `u = v^>(x0) + R_{x0} v^<(x0)` and the matching derivative.
pub fn outgoing_initial_data(p: &FractionalProfile, x0: f64, r_x0: Complex64) -> Result<BoundaryState> {
    if !(x0 > 0.0) || !x0.is_finite() {
        return Err(Error::param("x0", "must be finite and > 0"));
    }
    let right = p.wkb_wave(WkbDirection::Rightgoing, x0);
    let left = p.wkb_wave(WkbDirection::Leftgoing, x0);
    let u = right.value() + r_x0 * left.value();
    let du = right.derivative() + r_x0 * left.derivative();
    if u == Complex64::new(0.0, 0.0) && du == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateState);
    }
    Ok(BoundaryState { u, du, x: x0 })
}

fn cauchy(p: &FractionalProfile, from: BoundaryState, to_x: f64, cfg: &ode::OdeConfig) -> Result<(BoundaryState, usize)> {
    if !(to_x >= 0.0) || !(from.x > to_x) || !from.x.is_finite() {
        return Err(Error::param("to_x", "need from.x > to_x >= 0"));
    }
    let rhs = |x: f64, y: &State| [y[1], -y[0] * p.slowness_sq(x)];
    let cap = |x: f64| core::f64::consts::PI / 20.0 / p.phase_rate(x);
    let (y, stats) = ode::integrate(rhs, from.x, [from.u, from.du], to_x, cfg, cap)?;
    Ok((BoundaryState { u: y[0], du: y[1], x: to_x }, stats.accepted))
}

/// Integrates `u'' + c^{-2} u = 0` from `from.x` down to `to_x`.
pub fn integrate_cauchy(p: &FractionalProfile, from: BoundaryState, to_x: f64, cfg: &ode::OdeConfig) -> Result<BoundaryState> {
    Ok(cauchy(p, from, to_x, cfg)?.0)
}

/// `R = (q + i)/(i - q)` with `q = u'(0)/u(0)`; `-1` when `u(0) = 0`.
pub fn extract_r(state: &BoundaryState) -> Result<Complex64> {
    if state.x != 0.0 {
        return Err(Error::param("state", "must be taken at x = 0"));
    }
    let zero = Complex64::new(0.0, 0.0);
    if state.u == zero {
        if state.du == zero {
            return Err(Error::DegenerateState);
        }
        return Ok(Complex64::new(-1.0, 0.0));
    }
    let i = Complex64::new(0.0, 1.0);
    // (q + i)/(i - q) = (du + i u)/(i u - du)
    let den = i * state.u - state.du;
    if den.norm() <= 4.0 * f64::EPSILON * state.u.norm() {
        return Err(Error::PureIncoming);
    }
    Ok((state.du + i * state.u) / den)
}

/// Volterra solve on `[x0, inf)` followed by direct integration to the interface.
pub fn reflection_volterra(p: &FractionalProfile, cfg: &SolveConfig) -> Result<ReflectionResult> {
    let sol = solve_series(p, cfg)?;
    let start = outgoing_initial_data(p, sol.x0, sol.r_x0)?;
    let end = integrate_cauchy(p, start, 0.0, &cfg.ode)?;
    let r = extract_r(&end)?;
    Ok(ReflectionResult {
        r,
        method: Method::Volterra,
        diagnostics: Diagnostics {
            m_norm: Some(sol.m_norm),
            iterations: Some(sol.iterations),
            x_max: Some(sol.x_max),
            est_error: Some(sol.term_norms.last().copied().unwrap_or(0.0) + cfg.tol_tail),
            x0_used: Some(sol.x0),
        },
    })
}

/// First neglected term of the local reflection `int_X^inf M e^{-2i(phi - phi(X))} / 2i`,
/// bounded termwise, plus the second-order coupling.
fn wkb_truncation(p: &FractionalProfile, x: f64) -> Result<f64> {
    let m = p.coupling(x)?;
    let dm = p.coupling_derivative(x)?;
    let rate = p.phase_rate(x);
    let drate = p.phase_rate_derivative(x);
    let first = (dm.abs() / rate + m.abs() * drate / (rate * rate)) / (8.0 * rate);
    let second = m.abs() / (4.0 * rate) * p.m_norm(x)?;
    Ok(first + second)
}

/// Accumulated local tolerance of the integrator, treated as a random walk.
fn ode_floor(cfg: &SolveConfig, steps: usize) -> f64 {
    cfg.ode.rtol * (steps as f64).sqrt()
}

/// Shooting start `X_max` with its WKB truncation estimate.
fn shooting_start(p: &FractionalProfile, cfg: &SolveConfig) -> Result<(f64, f64)> {
    let mut x = cfg.x0.max(4.0);
    loop {
        let est = wkb_truncation(p, x)?;
        if est < cfg.shooting_tol {
            return Ok((x, est));
        }
        x *= 2.0;
        if x > cfg.x_max_limit {
            return Err(Error::MaxIterations(cfg.max_iter));
        }
    }
}

fn shoot_from(p: &FractionalProfile, x: f64, cfg: &SolveConfig) -> Result<(Complex64, usize)> {
    // Phases are measured from X; a common factor cancels in R.
    let b = p.amplitude(x);
    let db = p.amplitude_derivative(x);
    let rate = p.phase_rate(x);
    let corr = -p.coupling(x)? / (4.0 * rate);
    let u = Complex64::new(b * (1.0 + corr), 0.0);
    let du = Complex64::new(db, -b * rate) + Complex64::new(db, b * rate) * corr;
    let start = BoundaryState { u, du, x };
    let (end, steps) = cauchy(p, start, 0.0, &cfg.ode)?;
    Ok((extract_r(&end)?, steps))
}

/// WKB initialisation at `X_max`, corrected by the first local reflection term,
/// and integration down to the interface.
pub fn reflection_shooting(p: &FractionalProfile, cfg: &SolveConfig) -> Result<ReflectionResult> {
    cfg.validate()?;
    let (x, est) = shooting_start(p, cfg)?;
    let (r, steps) = shoot_from(p, x, cfg)?;
    let est = est + ode_floor(cfg, steps);
    Ok(ReflectionResult {
        r,
        method: Method::Shooting,
        diagnostics: Diagnostics {
            m_norm: None,
            iterations: Some(steps),
            x_max: Some(x),
            est_error: Some(est),
            x0_used: None,
        },
    })
}

/// Shooting from an explicit start point; used to check the `X_max` policy.
pub fn reflection_shooting_from(p: &FractionalProfile, x_max: f64, cfg: &SolveConfig) -> Result<ReflectionResult> {
    cfg.validate()?;
    if !(x_max > 0.0) || !x_max.is_finite() {
        return Err(Error::param("x_max", "must be finite and > 0"));
    }
    let (r, steps) = shoot_from(p, x_max, cfg)?;
    let est = wkb_truncation(p, x_max)? + ode_floor(cfg, steps);
    Ok(ReflectionResult {
        r,
        method: Method::Shooting,
        diagnostics: Diagnostics { iterations: Some(steps), x_max: Some(x_max), est_error: Some(est), ..Diagnostics::default() },
    })
}
