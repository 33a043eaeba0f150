//! Self-checks behind the `validate` command.

use std::collections::BTreeMap;

use fracrefl_core::closedform::{reflection_airy, reflection_asymptotic, remainder_exponent};
use fracrefl_core::propagate::{reflection_shooting, reflection_volterra};
use fracrefl_core::special::gamma_identity_residual;
use fracrefl_core::volterra::solve_series;
use fracrefl_core::{Complex64, Error as CoreError, FractionalProfile, SolveConfig};
use rayon::prelude::*;
use serde::Serialize;

/// One entry of the JSON report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub pass: bool,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
}

impl Check {
    /// `|measured - expected| <= tolerance`.
    pub fn near(measured: f64, expected: f64, tolerance: f64) -> Self {
        Self { pass: (measured - expected).abs() <= tolerance, measured, expected, tolerance }
    }

    /// `measured <= expected + tolerance`, used for error maxima with `expected = 0`.
    pub fn at_most(measured: f64, expected: f64, tolerance: f64) -> Self {
        Self { pass: measured <= expected + tolerance, measured, expected, tolerance }
    }

    /// `measured >= expected - tolerance`.
    pub fn at_least(measured: f64, expected: f64, tolerance: f64) -> Self {
        Self { pass: measured >= expected - tolerance, measured, expected, tolerance }
    }

    fn failed(expected: f64, tolerance: f64) -> Self {
        Self { pass: false, measured: f64::NAN, expected, tolerance }
    }
}

pub type Report = BTreeMap<String, Check>;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ValidateOptions {
    pub quick: bool,
    /// Adds a check on a profile whose kernel is not a contraction.
    pub inject_contraction_failure: bool,
}

pub fn all_pass(report: &Report) -> bool {
    report.values().all(|c| c.pass)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| match k {
            0 => lo,
            k if k == n - 1 => hi,
            k => (lo.ln() + (hi / lo).ln() * k as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (b.norm() + 1e-12)
}

fn volterra(alpha: f64, theta: f64, cfg: &SolveConfig) -> Result<Complex64, CoreError> {
    Ok(reflection_volterra(&FractionalProfile::new(alpha, theta)?, cfg)?.r)
}

fn shooting(alpha: f64, theta: f64, cfg: &SolveConfig) -> Result<Complex64, CoreError> {
    Ok(reflection_shooting(&FractionalProfile::new(alpha, theta)?, cfg)?.r)
}

fn max_or_fail<I: IntoIterator<Item = Result<f64, CoreError>>>(items: I, tol: f64) -> Check {
    let mut worst: f64 = 0.0;
    for it in items {
        match it {
            Ok(v) => worst = worst.max(v),
            Err(_) => return Check::failed(0.0, tol),
        }
    }
    Check::at_most(worst, 0.0, tol)
}

fn airy_exactness(thetas: &[f64], cfg: &SolveConfig, report: &mut Report) {
    let v = thetas.par_iter().map(|&t| Ok(rel(volterra(1.0, t, cfg)?, reflection_airy(t)?))).collect::<Vec<_>>();
    report.insert("airy_exactness_volterra".into(), max_or_fail(v, 1e-5));
    let s = thetas.par_iter().map(|&t| Ok(rel(shooting(1.0, t, cfg)?, reflection_airy(t)?))).collect::<Vec<_>>();
    report.insert("airy_exactness_shooting".into(), max_or_fail(s, 1e-5));
}

fn grid(quick: bool) -> Vec<(f64, f64)> {
    let (alphas, thetas): (&[f64], &[f64]) = if quick {
        (&[0.5, 2.0], &[0.05, 0.3])
    } else {
        (&[0.25, 0.5, 1.0, 2.0, 4.0], &[0.0, 0.01, 0.05, 0.2, 0.5])
    };
    alphas.iter().flat_map(|&a| thetas.iter().map(move |&t| (a, t))).collect()
}

fn grid_checks(quick: bool, cfg: &SolveConfig, report: &mut Report) {
    struct Point {
        cross: Result<f64, CoreError>,
        x0_spread: Result<f64, CoreError>,
        abs_r: Result<f64, CoreError>,
        violations: Result<f64, CoreError>,
    }
    let pts: Vec<Point> = grid(quick)
        .par_iter()
        .map(|&(a, t)| {
            let rs: Vec<Result<Complex64, CoreError>> = [0.5, 1.0, 2.0]
                .iter()
                .map(|&x0| volterra(a, t, &SolveConfig { x0, ..*cfg }))
                .collect();
            let base = rs[1].clone();
            let cross = base.clone().and_then(|v| {
                let s = shooting(a, t, cfg)?;
                Ok((v - s).norm() / (v.norm() + 1e-12))
            });
            let x0_spread = rs.iter().cloned().collect::<Result<Vec<_>, _>>().map(|v| {
                let mut m: f64 = 0.0;
                for p in &v {
                    for q in &v {
                        m = m.max((p - q).norm());
                    }
                }
                m
            });
            let violations = FractionalProfile::new(a, t).and_then(|p| solve_series(&p, cfg)).map(|sol| {
                let q = sol.m_norm / 2.0;
                sol.term_norms
                    .iter()
                    .enumerate()
                    .filter(|(n, v)| **v > q.powi(*n as i32) * (1.0 + 1e-10))
                    .count() as f64
            });
            Point { cross, x0_spread, abs_r: base.map(|v| v.norm()), violations }
        })
        .collect();
    report.insert("cross_method_grid".into(), max_or_fail(pts.iter().map(|p| p.cross.clone()), 1e-5));
    report.insert("x0_independence".into(), max_or_fail(pts.iter().map(|p| p.x0_spread.clone()), 1e-8));
    let energy = max_or_fail(pts.iter().map(|p| p.abs_r.clone()), 1.0 + 1e-9);
    report.insert("energy_bound".into(), Check { expected: 1.0, tolerance: 1e-9, ..energy });
    report.insert("contraction_bound_violations".into(), max_or_fail(pts.iter().map(|p| p.violations.clone()), 0.0));
}

fn gamma_identity(report: &mut Report) {
    let cases = [(0.5, 1.0, 2), (1.7, 0.5, 3), (2.0, 1.0, 4), (3.2, 2.0, 5)];
    let vals = cases.iter().map(|&(a, x0, n)| gamma_identity_residual(a, x0, n));
    report.insert("gamma_identity".into(), max_or_fail(vals, 1e-8));
}

fn order_checks(quick: bool, cfg: &SolveConfig, report: &mut Report) {
    let npts = if quick { 5 } else { 9 };
    // alpha = 1: |R - i theta/8| ~ theta^2
    let th = logspace(1e-3, 1e-1, npts);
    let res: Result<Vec<f64>, CoreError> = th
        .par_iter()
        .map(|&t| Ok((volterra(1.0, t, cfg)? - Complex64::new(0.0, t / 8.0)).norm()))
        .collect();
    let check = match res {
        Ok(y) => Check::near(loglog_slope(&th, &y), 2.0, 0.15),
        Err(_) => Check::failed(2.0, 0.15),
    };
    report.insert("alpha1_remainder_order".into(), check);
    if quick {
        return;
    }
    // the remainder of R/theta decays at least like theta^{min(1/alpha, 1)}
    let th = logspace(3e-3, 1e-1, npts);
    for &alpha in &[0.5, 1.5, 2.0, 3.0] {
        let lead = reflection_asymptotic(alpha, 1.0).expect("alpha > 0");
        let res: Result<Vec<f64>, CoreError> =
            th.par_iter().map(|&t| Ok((volterra(alpha, t, cfg)? / t - lead).norm())).collect();
        let expected = remainder_exponent(alpha);
        let check = match res {
            Ok(y) => Check::at_least(loglog_slope(&th, &y), expected, 0.15),
            Err(_) => Check::failed(expected, 0.15),
        };
        report.insert(format!("remainder_order_lower_bound_alpha_{alpha}"), check);
    }
}

fn injected(report: &mut Report) {
    let cfg = SolveConfig { x0: 1e-6, x0_limit: 1e-6, ..SolveConfig::default() };
    let p = FractionalProfile::new(0.5, 1e3).expect("valid profile");
    let check = match solve_series(&p, &cfg) {
        Err(CoreError::ContractionViolated { m_norm, .. }) => Check::at_most(m_norm, 2.0, 0.0),
        Err(_) => Check::failed(2.0, 0.0),
        Ok(sol) => Check::at_most(sol.m_norm, 2.0, 0.0),
    };
    report.insert("injected_contraction".into(), Check { pass: check.measured < 2.0, ..check });
}

pub fn run_validate(opts: ValidateOptions) -> Report {
    let cfg = SolveConfig::default();
    let mut report = Report::new();
    let thetas: &[f64] = if opts.quick { &[0.3, 0.03, 0.003] } else { &[0.3, 0.1, 0.03, 0.01, 0.003] };
    airy_exactness(thetas, &cfg, &mut report);
    grid_checks(opts.quick, &cfg, &mut report);
    gamma_identity(&mut report);
    order_checks(opts.quick, &cfg, &mut report);
    if opts.inject_contraction_failure {
        injected(&mut report);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x = logspace(1e-3, 1.0, 7);
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(1.7)).collect();
        assert!((loglog_slope(&x, &y) - 1.7).abs() < 1e-12);
        assert_eq!(x[0], 1e-3);
        assert_eq!(x[6], 1.0);
    }

    #[test]
    fn check_kinds() {
        assert!(Check::near(1.9, 2.0, 0.15).pass);
        assert!(!Check::near(1.8, 2.0, 0.15).pass);
        assert!(Check::at_most(1e-9, 0.0, 1e-8).pass);
        assert!(Check::at_least(1.0, 0.5, 0.15).pass);
        assert!(!Check::at_least(0.3, 0.5, 0.15).pass);
        assert!(!Check::failed(0.0, 1.0).pass);
    }

    #[test]
    fn injected_failure_is_recorded() {
        let mut r = Report::new();
        injected(&mut r);
        assert!(!all_pass(&r));
        assert!(r["injected_contraction"].measured >= 2.0);
    }
}
