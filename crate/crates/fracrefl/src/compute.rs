//! Single evaluations and parameter sweeps producing CSV rows.

use fracrefl_core::closedform::{reflection_airy, reflection_asymptotic, reflection_fresnel};
use fracrefl_core::propagate::{reflection_shooting, reflection_volterra};
use fracrefl_core::{Complex64, FractionalProfile, Method, PhysicalScenario, SolveConfig};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::fmt17;

pub const ROW_HEADER: &str = "alpha,theta,omega,eta,method,re_R,im_R,abs_R,arg_R,est_error";

/// One evaluated coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub alpha: f64,
    pub theta: Option<f64>,
    pub omega: Option<f64>,
    pub eta: Option<f64>,
    pub method: Method,
    pub r: Complex64,
    pub est_error: Option<f64>,
}

impl Row {
    pub fn csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            fmt17(self.alpha),
            opt(self.theta),
            opt(self.omega),
            opt(self.eta),
            self.method.name(),
            fmt17(self.r.re),
            fmt17(self.r.im),
            fmt17(self.r.norm()),
            fmt17(self.r.arg()),
            opt(self.est_error)
        )
    }
}

/// `R(alpha, theta)` by any method except the sharp-interface one.
pub fn coefficient(alpha: f64, theta: f64, method: Method, cfg: &SolveConfig) -> Result<(Complex64, Option<f64>)> {
    let profile = FractionalProfile::new(alpha, theta)?;
    Ok(match method {
        Method::Volterra => {
            let r = reflection_volterra(&profile, cfg)?;
            (r.r, r.diagnostics.est_error)
        }
        Method::Shooting => {
            let r = reflection_shooting(&profile, cfg)?;
            (r.r, r.diagnostics.est_error)
        }
        Method::Airy => {
            if alpha != 1.0 {
                return Err(Error::Usage("the airy method needs alpha = 1".into()));
            }
            if theta == 0.0 {
                (Complex64::new(0.0, 0.0), None)
            } else {
                (reflection_airy(theta)?, None)
            }
        }
        Method::Asymptotic => (reflection_asymptotic(alpha, theta)?, None),
        Method::Fresnel => return Err(Error::Usage("the fresnel method takes --c-ratio and --eta".into())),
    })
}

/// Where `theta` comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaSource {
    Direct(f64),
    Physical { c0: f64, ell: f64, omega: f64, eta: f64 },
}

pub fn reflect_row(alpha: f64, source: ThetaSource, method: Method, cfg: &SolveConfig) -> Result<Row> {
    let (theta, omega, eta) = match source {
        ThetaSource::Direct(t) => (t, None, None),
        ThetaSource::Physical { c0, ell, omega, eta } => {
            (PhysicalScenario::new(c0, ell, omega, eta, alpha)?.theta()?, Some(omega), Some(eta))
        }
    };
    let (r, est_error) = coefficient(alpha, theta, method, cfg)?;
    Ok(Row { alpha, theta: Some(theta), omega, eta, method, r, est_error })
}

pub fn fresnel_row(c_ratio: f64, eta: f64) -> Result<Row> {
    Ok(Row {
        alpha: 0.0,
        theta: None,
        omega: None,
        eta: Some(eta),
        method: Method::Fresnel,
        r: reflection_fresnel(c_ratio, eta)?,
        est_error: None,
    })
}

/// Log-spaced grid from `lo:hi:n`.
pub fn parse_theta_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Usage(format!("theta grid `{spec}` must be lo:hi:n with 0 < lo <= hi and n >= 1"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0) || !(hi >= lo) || !hi.is_finite() || n == 0 || (n == 1 && hi != lo) {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|k| match k {
            0 => lo,
            k if k == n - 1 => hi,
            k => (a + (b - a) * k as f64 / (n - 1) as f64).exp(),
        })
        .collect())
}

pub fn parse_list(spec: &str) -> Result<Vec<f64>> {
    let vals: Vec<f64> = spec
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| Error::Usage(format!("`{s}` is not a number"))))
        .collect::<Result<_>>()?;
    if vals.is_empty() {
        return Err(Error::Usage("empty list".into()));
    }
    Ok(vals)
}

/// Rows in alpha-major, theta-minor order; evaluated in parallel.
pub fn sweep(alphas: &[f64], thetas: &[f64], method: Method, cfg: &SolveConfig) -> Result<Vec<Row>> {
    let pairs: Vec<(f64, f64)> = alphas.iter().flat_map(|&a| thetas.iter().map(move |&t| (a, t))).collect();
    pairs
        .par_iter()
        .map(|&(a, t)| reflect_row(a, ThetaSource::Direct(t), method, cfg))
        .collect()
}
