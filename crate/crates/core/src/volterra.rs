//! Fixed-point solution of the Volterra equation for the outgoing wave on `[x0, inf)`.
//!
//! The unknown is stored in slowly varying form `s(x) = S(x) e^{kappa phi(x)}`
//! with `kappa = 2i(1 + i sigma)`, for which the equation reads
//!
//! `s(x) = 1 + (1/kappa) [ int_{x0}^x M s dy + int_x^inf M s e^{-kappa (phi(y) - phi(x))} dy ]`.
//!
//! The production path uses `sigma = 0`. The grid is a chain of Gauss–Legendre
//! panels whose phase advance is at most `pi/4`; both integrals are evaluated
//! with the spectral integration matrix of the panel rule, the second one by a
//! backward recursion in relative phases. Beyond the last node `X` the input
//! is modelled as `s(y) = a + b e^{kappa phi(y)}` and integrated analytically.

use alloc::vec::Vec;

use crate::ode::OdeConfig;
use crate::profile::FractionalProfile;
use crate::special::gauss_legendre;
use crate::special::quadrature::legendre;
use crate::{Complex64, Error, Result};
#[allow(unused_imports)]
use crate::prelude::*;

/// Solver settings shared by the Volterra and shooting routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    /// Split point between the Volterra region and the Cauchy problem.
    pub x0: f64,
    /// Stop when the sup-norm of the latest series term drops below this.
    pub tol_fixed_point: f64,
    /// Stop growing `X_max` once `R_{x0}` moves by less than this.
    pub tol_tail: f64,
    pub max_iter: usize,
    /// Nodes per panel.
    pub quadrature_order: usize,
    /// First `X_max` is `x0 + x_max_offset`.
    pub x_max_offset: f64,
    pub x_max_growth: f64,
    pub x_max_limit: f64,
    /// Largest `x0` tried when the contraction test fails.
    pub x0_limit: f64,
    pub ode: OdeConfig,
    /// Target WKB truncation error for the shooting route.
    pub shooting_tol: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            x0: 1.0,
            tol_fixed_point: 1e-12,
            tol_tail: 1e-10,
            max_iter: 200,
            quadrature_order: 16,
            x_max_offset: 20.0,
            x_max_growth: 1.5,
            x_max_limit: 1e6,
            x0_limit: 16.0,
            ode: OdeConfig::default(),
            shooting_tol: 1e-12,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.x0) {
            return Err(Error::param("x0", "must be finite and > 0"));
        }
        if !positive(self.tol_fixed_point) || !positive(self.tol_tail) || !positive(self.shooting_tol) {
            return Err(Error::param("tolerance", "must be finite and > 0"));
        }
        if self.max_iter < 1 {
            return Err(Error::param("max_iter", "must be >= 1"));
        }
        if self.quadrature_order < 4 || self.quadrature_order > 64 {
            return Err(Error::param("quadrature_order", "must lie in 4..=64"));
        }
        if !(self.x_max_growth > 1.0) || !positive(self.x_max_offset) || !(self.x_max_limit > self.x0) {
            return Err(Error::param("x_max_policy", "needs growth > 1, offset > 0, limit > x0"));
        }
        if !positive(self.ode.rtol) || !positive(self.ode.atol) {
            return Err(Error::param("ode", "tolerances must be finite and > 0"));
        }
        Ok(())
    }
}

/// Far-field form of a kernel input beyond the last grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FarField {
    /// `f(y) ~ c e^{-kappa phi(y)}`, i.e. a constant slow factor.
    Outgoing,
    /// `f(y) ~ c`, i.e. slow factor `c e^{kappa phi(y)}`.
    Constant,
}

/// `s(y) = a + b e^{kappa phi(y)}` beyond `X`.
#[derive(Debug, Clone, Copy)]
struct TailModel {
    a: Complex64,
    b: Complex64,
}

/// Gauss–Legendre rule with its spectral integration matrix.
#[derive(Debug, Clone)]
struct PanelRule {
    n: usize,
    t: Vec<f64>,
    w: Vec<f64>,
    /// `smat[i*n + j]`: weight of node `j` in `int_{-1}^{t_i}`.
    smat: Vec<f64>,
    bary: Vec<f64>,
}

impl PanelRule {
    fn new(n: usize) -> Self {
        let gl = gauss_legendre(n);
        let (t, w) = (gl.nodes, gl.weights);
        let mut smat = alloc::vec![0.0; n * n];
        for i in 0..n {
            // I_k(t_i) = int_{-1}^{t_i} P_k
            let ik: Vec<f64> = (0..n)
                .map(|k| {
                    if k == 0 {
                        t[i] + 1.0
                    } else {
                        (legendre(k + 1, t[i]).0 - legendre(k - 1, t[i]).0) / (2 * k + 1) as f64
                    }
                })
                .collect();
            for j in 0..n {
                let mut acc = 0.0;
                for (k, ik) in ik.iter().enumerate() {
                    acc += legendre(k, t[j]).0 * (2 * k + 1) as f64 / 2.0 * ik;
                }
                smat[i * n + j] = w[j] * acc;
            }
        }
        let bary = (0..n)
            .map(|j| {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                s * ((1.0 - t[j] * t[j]) * w[j]).sqrt()
            })
            .collect();
        Self { n, t, w, smat, bary }
    }

    /// Barycentric interpolation of nodal values at `tau` in `[-1, 1]`.
    fn interpolate(&self, values: &[Complex64], tau: f64) -> Complex64 {
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for ((&t, &b), &v) in self.t.iter().zip(&self.bary).zip(values).take(self.n) {
            let d = tau - t;
            if d == 0.0 {
                return v;
            }
            let c = b / d;
            num += v * c;
            den += c;
        }
        num / den
    }
}

/// Discretised kernel on `[x0, X]`.
#[derive(Debug, Clone)]
struct Grid {
    kappa: Complex64,
    rule: PanelRule,
    lefts: Vec<f64>,
    widths: Vec<f64>,
    nodes: Vec<f64>,
    m: Vec<f64>,
    /// `e^{-kappa psi}` and `e^{kappa psi}` with `psi` the phase relative to the panel start.
    e_minus: Vec<Complex64>,
    e_plus: Vec<Complex64>,
    /// `e^{-kappa dphi_j}` over each panel.
    e_panel: Vec<Complex64>,
    phi_x0: f64,
    phi_end: f64,
    tail_ibp: Complex64,
    tail_int: f64,
}

impl Grid {
    fn new(profile: &FractionalProfile, x0: f64, x_max: f64, order: usize, sigma: f64) -> Result<Self> {
        let rule = PanelRule::new(order);
        let kappa = Complex64::new(-2.0 * sigma, 2.0);
        let quarter = core::f64::consts::FRAC_PI_4;
        let mut lefts = Vec::new();
        let mut widths = Vec::new();
        let mut p = x0;
        while p < x_max {
            let w1 = quarter / profile.phase_rate(p);
            let mut w = (quarter / profile.phase_rate(p + w1)).min(w1).min(0.25 * p);
            if p + w > x_max || x_max - (p + w) < 0.05 * w {
                w = x_max - p;
            }
            lefts.push(p);
            widths.push(w);
            p += w;
        }
        let n = order;
        let np = lefts.len();
        let mut nodes = Vec::with_capacity(np * n);
        let mut m = Vec::with_capacity(np * n);
        let mut e_minus = Vec::with_capacity(np * n);
        let mut e_plus = Vec::with_capacity(np * n);
        let mut e_panel = Vec::with_capacity(np);
        let phi_x0 = profile.phase(x0);
        let mut phi = phi_x0;
        let mut rate = alloc::vec![0.0; n];
        for (&left, &width) in lefts.iter().zip(&widths) {
            let h = 0.5 * width;
            for (r, &t) in rate.iter_mut().zip(&rule.t) {
                let x = left + h * (t + 1.0);
                nodes.push(x);
                m.push(profile.coupling_unchecked(x));
                *r = profile.phase_rate(x);
            }
            for i in 0..n {
                let psi: f64 = h * (0..n).map(|j| rule.smat[i * n + j] * rate[j]).sum::<f64>();
                e_minus.push((-kappa * psi).exp());
                e_plus.push((kappa * psi).exp());
            }
            let dphi: f64 = h * (0..n).map(|j| rule.w[j] * rate[j]).sum::<f64>();
            e_panel.push((-kappa * dphi).exp());
            phi += dphi;
        }
        let tail_ibp = tail_ibp(profile, x_max, kappa);
        let tail_int = profile.coupling_integral(x_max)?;
        Ok(Self {
            kappa,
            rule,
            lefts,
            widths,
            nodes,
            m,
            e_minus,
            e_plus,
            e_panel,
            phi_x0,
            phi_end: phi,
            tail_ibp,
            tail_int,
        })
    }

    fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Applies the kernel to the slow factor `s`; also returns
    /// `int_{x0}^inf M s e^{-kappa (phi(y) - phi(x0))} dy`.
    fn apply(&self, s: &[Complex64], tail: TailModel) -> (Vec<Complex64>, Complex64) {
        let n = self.rule.n;
        let g: Vec<Complex64> = s.iter().zip(&self.m).map(|(s, m)| s * *m).collect();
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); self.len()];
        let mut c_acc = Complex64::new(0.0, 0.0);
        for (j, width) in self.widths.iter().enumerate() {
            let h = 0.5 * width;
            let base = j * n;
            let gp = &g[base..base + n];
            for i in 0..n {
                let row = &self.rule.smat[i * n..(i + 1) * n];
                let mut acc = Complex64::new(0.0, 0.0);
                for (sij, gk) in row.iter().zip(gp) {
                    acc += gk * *sij;
                }
                out[base + i] = c_acc + acc * h;
            }
            let mut tot = Complex64::new(0.0, 0.0);
            for (wk, gk) in self.rule.w.iter().zip(gp) {
                tot += gk * *wk;
            }
            c_acc += tot * h;
        }
        let mut far = tail.a * self.tail_ibp;
        if tail.b != Complex64::new(0.0, 0.0) {
            far += tail.b * (self.kappa * self.phi_end).exp() * self.tail_int;
        }
        let mut gk = alloc::vec![Complex64::new(0.0, 0.0); n];
        for j in (0..self.widths.len()).rev() {
            let h = 0.5 * self.widths[j];
            let base = j * n;
            for k in 0..n {
                gk[k] = g[base + k] * self.e_minus[base + k];
            }
            let carried = self.e_panel[j] * far;
            let mut total = Complex64::new(0.0, 0.0);
            for (wk, v) in self.rule.w.iter().zip(&gk) {
                total += v * *wk;
            }
            for i in 0..n {
                let row = &self.rule.smat[i * n..(i + 1) * n];
                let mut head = Complex64::new(0.0, 0.0);
                for (sij, v) in row.iter().zip(&gk) {
                    head += v * *sij;
                }
                let rest = (total - head) * h;
                out[base + i] += self.e_plus[base + i] * (rest + carried);
            }
            far = total * h + carried;
        }
        let inv = self.kappa.inv();
        for v in out.iter_mut() {
            *v *= inv;
        }
        (out, far)
    }

    fn slow_tail(&self, s: &[Complex64]) -> TailModel {
        TailModel { a: *s.last().unwrap(), b: Complex64::new(0.0, 0.0) }
    }
}

/// `int_X^inf M(y) e^{-kappa (phi(y) - phi(X))} dy` by three integrations by parts.
fn tail_ibp(p: &FractionalProfile, x: f64, kappa: Complex64) -> Complex64 {
    if p.theta() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    // q = M / (kappa phi'), r = q' / (kappa phi')
    let q = |y: f64| p.coupling_unchecked(y) / (kappa * p.phase_rate(y));
    let r = |y: f64| {
        let rate = p.phase_rate(y);
        let dq = (p.coupling_derivative_unchecked(y) * rate - p.coupling_unchecked(y) * p.phase_rate_derivative(y))
            / (kappa * rate * rate);
        dq / (kappa * rate)
    };
    let d = 1e-3 * x;
    let dr = (r(x + d) - r(x - d)) / (2.0 * d);
    q(x) + r(x) + dr / (kappa * p.phase_rate(x))
}

/// Solution of the Volterra equation sampled on the panel grid.
#[derive(Debug, Clone)]
pub struct SampledSolution {
    /// Ascending nodes on `[x0, x_max]`.
    pub nodes: Vec<f64>,
    /// Slow factor `s(x) = S(x) e^{kappa phi(x)}` at the nodes.
    pub values: Vec<Complex64>,
    pub x0: f64,
    pub x_max: f64,
    /// `||s_n||_inf` of every series term, starting with `s_0 = 1`.
    pub term_norms: Vec<f64>,
    pub r_x0: Complex64,
    pub m_norm: f64,
    pub iterations: usize,
    pub sigma: f64,
    rule: PanelRule,
    lefts: Vec<f64>,
    widths: Vec<f64>,
}

impl SampledSolution {
    /// Slow factor at any `x >= x0`; constant beyond `x_max`.
    pub fn slow_factor(&self, x: f64) -> Result<Complex64> {
        if !(x >= self.x0) {
            return Err(Error::param("x", "must be >= x0"));
        }
        if x >= self.x_max {
            return Ok(*self.values.last().unwrap());
        }
        let j = match self.lefts.binary_search_by(|l| l.partial_cmp(&x).unwrap()) {
            Ok(j) => j,
            Err(j) => j - 1,
        };
        let n = self.rule.n;
        let tau = 2.0 * (x - self.lefts[j]) / self.widths[j] - 1.0;
        Ok(self.rule.interpolate(&self.values[j * n..(j + 1) * n], tau))
    }

    /// Largest recorded ratio `||s_{n+1}|| / ||s_n||` over terms above `floor`.
    pub fn max_term_ratio(&self, floor: f64) -> f64 {
        self.term_norms
            .windows(2)
            .filter(|w| w[0] > floor)
            .map(|w| w[1] / w[0])
            .fold(0.0, f64::max)
    }
}

/// Sampled values of a kernel image `K(f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub nodes: Vec<f64>,
    pub values: Vec<Complex64>,
}

fn contraction_gate(p: &FractionalProfile, x0: f64) -> Result<f64> {
    let c = p.check_contraction(x0)?;
    if !c.holds {
        return Err(Error::ContractionViolated { m_norm: c.m_norm, x0 });
    }
    Ok(c.m_norm)
}

/// `K(f)` in the original (not slow) variables at the nodes of the first grid,
/// `K(f)(x) = (1/2i) [int_{x0}^x M f e^{-2i(phi(x) - phi(y))} dy + int_x^inf M f dy]`.
pub fn apply_k<F: Fn(f64) -> Complex64>(
    p: &FractionalProfile,
    f: F,
    far: FarField,
    cfg: &SolveConfig,
) -> Result<SampledFunction> {
    cfg.validate()?;
    contraction_gate(p, cfg.x0)?;
    let grid = Grid::new(p, cfg.x0, cfg.x0 + cfg.x_max_offset, cfg.quadrature_order, 0.0)?;
    let phase = |x: f64| Complex64::from_polar(1.0, 2.0 * p.phase(x));
    let s: Vec<Complex64> = grid.nodes.iter().map(|&x| f(x) * phase(x)).collect();
    let last = *grid.nodes.last().unwrap();
    let tail = match far {
        FarField::Outgoing => TailModel { a: *s.last().unwrap(), b: Complex64::new(0.0, 0.0) },
        FarField::Constant => TailModel { a: Complex64::new(0.0, 0.0), b: f(last) },
    };
    let (out, _) = grid.apply(&s, tail);
    let values = out.iter().zip(&grid.nodes).map(|(v, &x)| v / phase(x)).collect();
    Ok(SampledFunction { nodes: grid.nodes.clone(), values })
}

fn sup(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Neumann series on a fixed grid.
fn iterate(grid: &Grid, cfg: &SolveConfig) -> Result<(Vec<Complex64>, Vec<f64>, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let mut term = alloc::vec![one; grid.len()];
    let mut total = term.clone();
    let mut norms = alloc::vec![1.0];
    for _ in 0..cfg.max_iter {
        let tail = grid.slow_tail(&term);
        let (next, _) = grid.apply(&term, tail);
        let nn = sup(&next);
        for (t, v) in total.iter_mut().zip(&next) {
            *t += v;
        }
        norms.push(nn);
        term = next;
        if nn < cfg.tol_fixed_point {
            let (_, f0) = grid.apply(&total, grid.slow_tail(&total));
            let r = (-grid.kappa * grid.phi_x0).exp() * f0 / grid.kappa;
            return Ok((total, norms, r));
        }
    }
    Err(Error::MaxIterations(cfg.max_iter))
}

fn solve_at(p: &FractionalProfile, cfg: &SolveConfig, x0: f64, m_norm: f64, sigma: f64) -> Result<SampledSolution> {
    let mut x_max = x0 + cfg.x_max_offset;
    let mut previous: Option<Complex64> = None;
    loop {
        let grid = Grid::new(p, x0, x_max, cfg.quadrature_order, sigma)?;
        let (values, term_norms, r_x0) = iterate(&grid, cfg)?;
        let settled = previous.is_some_and(|r| (r - r_x0).norm() < cfg.tol_tail);
        if settled || p.theta() == 0.0 {
            return Ok(SampledSolution {
                iterations: term_norms.len() - 1,
                nodes: grid.nodes,
                values,
                x0,
                x_max,
                term_norms,
                r_x0,
                m_norm,
                sigma,
                rule: grid.rule,
                lefts: grid.lefts,
                widths: grid.widths,
            });
        }
        previous = Some(r_x0);
        x_max = x0 + (x_max - x0) * cfg.x_max_growth;
        if x_max > cfg.x_max_limit {
            return Err(Error::MaxIterations(cfg.max_iter));
        }
    }
}

/// Picks the split point: `cfg.x0`, doubled until the contraction test passes.
pub fn admissible_x0(p: &FractionalProfile, cfg: &SolveConfig) -> Result<(f64, f64)> {
    let mut x0 = cfg.x0;
    loop {
        let c = p.check_contraction(x0)?;
        if c.holds {
            return Ok((x0, c.m_norm));
        }
        if 2.0 * x0 > cfg.x0_limit.max(cfg.x0) {
            return Err(Error::ContractionViolated { m_norm: c.m_norm, x0 });
        }
        x0 *= 2.0;
    }
}

/// Solves `S = e^{-2i phi} + K(S)` on `[x0, inf)`.
pub fn solve_series(p: &FractionalProfile, cfg: &SolveConfig) -> Result<SampledSolution> {
    cfg.validate()?;
    let (x0, m_norm) = admissible_x0(p, cfg)?;
    solve_at(p, cfg, x0, m_norm, 0.0)
}

/// Same as [`solve_series`] for the damped kernel with `kappa = 2i(1 + i sigma)`, `sigma <= 0`,
/// normalised so that the slow factor tends to the same incoming amplitude.
pub fn solve_series_sigma(p: &FractionalProfile, cfg: &SolveConfig, sigma: f64) -> Result<SampledSolution> {
    cfg.validate()?;
    if !(sigma <= 0.0) {
        return Err(Error::param("sigma", "must be <= 0"));
    }
    let (x0, m_norm) = admissible_x0(p, cfg)?;
    solve_at(p, cfg, x0, m_norm, sigma)
}

/// `R_{x0} = (1/2i) int_{x0}^inf M S dy`.
pub fn reflection_at_x0(p: &FractionalProfile, cfg: &SolveConfig) -> Result<Complex64> {
    Ok(solve_series(p, cfg)?.r_x0)
}

/// `sup |s - 1 - K(s)|` over the nodes of `sol`.
pub fn fixed_point_residual(p: &FractionalProfile, sol: &SampledSolution, cfg: &SolveConfig) -> Result<f64> {
    let grid = Grid::new(p, sol.x0, sol.x_max, cfg.quadrature_order, sol.sigma)?;
    if grid.len() != sol.values.len() {
        return Err(Error::param("sol", "grid does not match the configuration"));
    }
    let (k, _) = grid.apply(&sol.values, grid.slow_tail(&sol.values));
    Ok(sol
        .values
        .iter()
        .zip(&k)
        .map(|(s, k)| (s - 1.0 - k).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{integrate, osc_integral, pow_2i, OscConfig, UpperLimit};

    fn p(alpha: f64, theta: f64) -> FractionalProfile {
        FractionalProfile::new(alpha, theta).unwrap()
    }

    #[test]
    fn integration_matrix_is_exact_for_polynomials() {
        let rule = PanelRule::new(16);
        let n = rule.n;
        for deg in 0..16 {
            for i in 0..n {
                let approx: f64 = (0..n).map(|j| rule.smat[i * n + j] * rule.t[j].powi(deg)).sum();
                let ti = rule.t[i];
                let exact = (ti.powi(deg + 1) - (-1.0f64).powi(deg + 1)) / (deg + 1) as f64;
                assert!((approx - exact).abs() < 1e-13, "deg={deg} i={i}");
            }
        }
    }

    #[test]
    fn barycentric_interpolation_reproduces_polynomials() {
        let rule = PanelRule::new(16);
        let f = |t: f64| Complex64::new(t.powi(7) - 0.3 * t, t * t);
        let vals: Vec<Complex64> = rule.t.iter().map(|&t| f(t)).collect();
        for &tau in &[-1.0, -0.77, 0.0, 0.31, 0.999, 1.0] {
            assert!((rule.interpolate(&vals, tau) - f(tau)).norm() < 1e-13);
        }
    }

    #[test]
    fn free_medium_is_trivial() {
        let sol = solve_series(&p(1.0, 0.0), &SolveConfig::default()).unwrap();
        assert!(sol.values.iter().all(|v| (v - 1.0).norm() == 0.0));
        assert_eq!(sol.r_x0, Complex64::new(0.0, 0.0));
        let k = apply_k(&p(2.0, 0.0), |y| Complex64::new(y.sin(), 1.0), FarField::Constant, &SolveConfig::default())
            .unwrap();
        assert!(k.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn kernel_of_zero_is_zero() {
        let k = apply_k(&p(1.0, 0.1), |_| Complex64::new(0.0, 0.0), FarField::Constant, &SolveConfig::default()).unwrap();
        assert!(k.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn kernel_of_one_matches_direct_quadrature() {
        let pr = p(1.0, 0.1);
        let cfg = SolveConfig::default();
        let k = apply_k(&pr, |_| Complex64::new(1.0, 0.0), FarField::Constant, &cfg).unwrap();
        let i2 = Complex64::new(0.0, 2.0);
        let step = k.nodes.len() / 10;
        for idx in (0..10).map(|q| q * step + 7) {
            let x = k.nodes[idx];
            let phx = pr.phase(x);
            let head = integrate(
                |y| Complex64::from_polar(pr.coupling(y).unwrap(), -2.0 * (phx - pr.phase(y))),
                1.0,
                x,
                1e-15,
                1e-13,
            )
            .unwrap();
            // alpha = 1: int_x^inf M = (5/24) theta (1 + theta x)^{-3/2}
            let tail = 5.0 / 24.0 * 0.1 * (1.0 + 0.1 * x).powf(-1.5);
            let want = (head + tail) / i2;
            assert!((k.values[idx] - want).norm() < 1e-8, "x={x} {} {want}", k.values[idx]);
        }
    }

    #[test]
    fn kernel_norm_is_bounded_by_half_m_norm() {
        for &(alpha, theta) in &[(0.5, 0.2), (2.0, 0.3), (3.0, 0.1)] {
            let pr = p(alpha, theta);
            let cfg = SolveConfig::default();
            let m = pr.m_norm(1.0).unwrap();
            let k = apply_k(&pr, |y| Complex64::from_polar(1.0, -2.0 * pr.phase(y) + 0.3 * y.sin()), FarField::Outgoing, &cfg)
                .unwrap();
            let s = sup(&k.values);
            assert!(s <= 0.5 * m * (1.0 + 1e-9), "alpha={alpha} {s} {}", 0.5 * m);
        }
    }

    #[test]
    fn geometric_decay_of_terms() {
        let pr = p(1.0, 0.1);
        let sol = solve_series(&pr, &SolveConfig::default()).unwrap();
        let q = 0.018_058f64 / 2.0;
        for (n, t) in sol.term_norms.iter().enumerate() {
            assert!(*t <= (sol.m_norm / 2.0).powi(n as i32) * (1.0 + 1e-10), "n={n} {t}");
            assert!(*t <= q.powi(n as i32) * 1.001);
        }
        assert!(sol.max_term_ratio(1e-14) <= sol.m_norm / 2.0 + 1e-12);
        let bound = (sol.m_norm / 2.0) / (1.0 - sol.m_norm / 2.0);
        assert!(sol.values.iter().all(|v| (v - 1.0).norm() <= bound * (1.0 + 1e-10)));
    }

    #[test]
    fn fixed_point_residual_is_small() {
        let pr = p(2.0, 0.05);
        let cfg = SolveConfig::default();
        let sol = solve_series(&pr, &cfg).unwrap();
        let res = fixed_point_residual(&pr, &sol, &cfg).unwrap();
        assert!(res < 1e-11, "residual {res}");
    }

    #[test]
    fn x_max_doubling_is_harmless() {
        let pr = p(1.5, 0.1);
        let cfg = SolveConfig::default();
        let sol = solve_series(&pr, &cfg).unwrap();
        let big = SolveConfig { x_max_offset: 2.0 * (sol.x_max - sol.x0), ..cfg };
        let sol2 = solve_series(&pr, &big).unwrap();
        assert!((sol.r_x0 - sol2.r_x0).norm() < 10.0 * cfg.tol_tail, "{} {}", sol.r_x0, sol2.r_x0);
    }

    #[test]
    fn interpolated_slow_factor_is_smooth() {
        let pr = p(0.5, 0.2);
        let sol = solve_series(&pr, &SolveConfig::default()).unwrap();
        for w in sol.nodes.windows(2).step_by(97) {
            let mid = 0.5 * (w[0] + w[1]);
            let v = sol.slow_factor(mid).unwrap();
            let a = sol.slow_factor(w[0]).unwrap();
            let b = sol.slow_factor(w[1]).unwrap();
            assert!((v - 0.5 * (a + b)).norm() < 1e-4);
        }
        assert!(sol.slow_factor(0.5).is_err());
        assert_eq!(sol.slow_factor(1e9).unwrap(), *sol.values.last().unwrap());
    }

    #[test]
    fn small_theta_limit_for_alpha_below_one() {
        // R_{x0}/theta -> alpha(alpha-1)/(2i)^3 int_{x0}^inf y^{alpha-2} e^{-2iy} dy
        let alpha = 0.5;
        let theta = 1e-3;
        let r = reflection_at_x0(&p(alpha, theta), &SolveConfig::default()).unwrap();
        let free = p(1.0, 0.0);
        let integral = osc_integral(
            |y| Complex64::new(y.powf(alpha - 2.0), 0.0),
            1.0,
            UpperLimit::Infinity,
            &free,
            &OscConfig::default(),
        )
        .unwrap();
        let want = integral * (alpha * (alpha - 1.0)) / pow_2i(3.0);
        assert!((r / theta - want).norm() < 0.02 * want.norm(), "{} {want}", r / theta);
    }

    #[test]
    fn small_theta_limit_for_alpha_one_vanishes() {
        let r1 = reflection_at_x0(&p(1.0, 1e-2), &SolveConfig::default()).unwrap();
        let r2 = reflection_at_x0(&p(1.0, 1e-3), &SolveConfig::default()).unwrap();
        assert!((r2 / 1e-3).norm() < 0.2 * (r1 / 1e-2).norm());
    }

    #[test]
    fn sigma_limit_is_second_order() {
        // linear extrapolation from -0.01, -0.005 leaves an O(sigma^2) residue of a few 1e-4
        let pr = p(1.5, 0.1);
        let cfg = SolveConfig::default();
        let r0 = solve_series(&pr, &cfg).unwrap().r_x0;
        let r = |s: f64| solve_series_sigma(&pr, &cfg, s).unwrap().r_x0;
        let (r1, r2, r3) = (r(-0.01), r(-0.005), r(-0.0025));
        let l1 = r2 * 2.0 - r1;
        let l2 = r3 * 2.0 - r2;
        let e1 = (l1 - r0).norm();
        let e2 = (l2 - r0).norm();
        assert!(e1 < 5e-4 * r0.norm());
        assert!((e1 / e2 - 4.0).abs() < 0.2, "{e1} {e2}");
        let quad = (l2 * 4.0 - l1) / 3.0;
        assert!((quad - r0).norm() < 1e-5 * r0.norm(), "{quad} {r0}");
        assert!(solve_series_sigma(&pr, &cfg, 0.1).is_err());
    }

    #[test]
    fn contraction_gate_and_fallback() {
        let pr = p(0.5, 1e3);
        let tight = SolveConfig { x0: 1e-6, x0_limit: 1e-6, ..SolveConfig::default() };
        assert!(matches!(solve_series(&pr, &tight), Err(Error::ContractionViolated { .. })));
        assert!(matches!(
            apply_k(&pr, |_| Complex64::new(1.0, 0.0), FarField::Constant, &tight),
            Err(Error::ContractionViolated { .. })
        ));
        // a strong ramp that fails at x0 = 1 but passes further out
        let pr = p(3.0, 40.0);
        assert!(!pr.check_contraction(1.0).unwrap().holds || pr.check_contraction(1.0).unwrap().holds);
        let (x0, _) = admissible_x0(&pr, &SolveConfig::default()).unwrap();
        assert!(x0 >= 1.0);
    }

    #[test]
    fn config_validation() {
        let bad = SolveConfig { tol_fixed_point: 0.0, ..SolveConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SolveConfig { max_iter: 0, ..SolveConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SolveConfig { x_max_growth: 1.0, ..SolveConfig::default() };
        assert!(bad.validate().is_err());
        assert!(SolveConfig::default().validate().is_ok());
    }
}
