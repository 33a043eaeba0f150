//! Reflected-trace synthesis with `R(theta(omega, eta))` as a frequency-domain multiplier.

use std::f64::consts::PI;

use fracrefl_core::closedform::{reflection_airy, reflection_asymptotic};
use fracrefl_core::propagate::reflection_volterra;
use fracrefl_core::{Complex64, FractionalProfile, Method, PhysicalScenario, SolveConfig};
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Uniformly sampled real time series.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub t0: f64,
    pub dt: f64,
    pub samples: Vec<f64>,
}

impl Trace {
    pub fn new(t0: f64, dt: f64, samples: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() || !t0.is_finite() {
            return Err(Error::Usage("trace needs finite t0 and dt > 0".into()));
        }
        if samples.is_empty() || samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::Usage("trace samples must be finite and non-empty".into()));
        }
        Ok(Self { t0, dt, samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Transform length: the sample count rounded up to a power of two.
    pub fn fft_len(&self) -> usize {
        self.samples.len().next_power_of_two()
    }

    /// One-sided spectrum of the zero-padded trace.
    pub fn spectrum(&self) -> Spectrum {
        let n = self.fft_len();
        let mut buf: Vec<Complex64> = self.samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        buf.resize(n, Complex64::new(0.0, 0.0));
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        buf.truncate(n / 2 + 1);
        Spectrum { df: 1.0 / (n as f64 * self.dt), values: buf, hermitian: true }
    }
}

/// Nonnegative-frequency half of a Hermitian spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub df: f64,
    pub values: Vec<Complex64>,
    pub hermitian: bool,
}

impl Spectrum {
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.values.len()).map(|k| k as f64 * self.df).collect()
    }
}

/// Settings for [`multiplier_symbol`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolConfig {
    /// Above this `theta` the symbol is tapered to zero over half an octave.
    pub theta_cap: f64,
    pub solve: SolveConfig,
}

impl Default for SymbolConfig {
    fn default() -> Self {
        Self { theta_cap: 0.3, solve: SolveConfig::default() }
    }
}

/// `theta` at frequency `freq` (Hz).
pub fn theta_at(alpha: f64, ell: f64, c0: f64, eta: f64, freq: f64) -> Result<f64> {
    Ok(PhysicalScenario::new(c0, ell, 2.0 * PI * freq, eta, alpha)?.theta()?)
}

/// Frequency (Hz) at which `theta` equals `theta_level`.
pub fn frequency_at_theta(alpha: f64, ell: f64, c0: f64, eta: f64, theta_level: f64) -> Result<f64> {
    let at_one = theta_at(alpha, ell, c0, eta, 1.0)?;
    Ok((at_one / theta_level).powf(1.0 / alpha))
}

/// Half-octave cosine taper: 1 where `theta <= cap`, 0 where `f < f_cap / sqrt(2)`.
fn taper(theta: f64, cap: f64, alpha: f64) -> f64 {
    if cap <= 0.0 {
        return 0.0;
    }
    if theta <= cap {
        return 1.0;
    }
    // f / f_cap in octaves, in [-1/2, 0] on the ramp
    let octaves = (cap / theta).log2() / alpha;
    if octaves <= -0.5 {
        0.0
    } else {
        0.5 * (1.0 - (PI * (octaves + 0.5) / 0.5).cos())
    }
}

/// `R(theta(omega, eta))` on `freqs` (Hz); zero at and below DC.
pub fn multiplier_symbol(
    alpha: f64,
    ell: f64,
    c0: f64,
    eta: f64,
    freqs: &[f64],
    method: Method,
    cfg: &SymbolConfig,
) -> Result<Vec<Complex64>> {
    // validates the physical inputs once, including grazing incidence
    theta_at(alpha, ell, c0, eta, 1.0)?;
    match method {
        Method::Asymptotic | Method::Volterra => {}
        Method::Airy if alpha == 1.0 => {}
        Method::Airy => return Err(Error::Usage("the airy symbol needs alpha = 1".into())),
        other => return Err(Error::Usage(format!("method `{}` cannot build a symbol", other.name()))),
    }
    let point = |f: f64| -> Result<Complex64> {
        if f <= 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let theta = theta_at(alpha, ell, c0, eta, f)?;
        let w = taper(theta, cfg.theta_cap, alpha);
        if w == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let r = match method {
            Method::Asymptotic => reflection_asymptotic(alpha, theta)?,
            Method::Airy => reflection_airy(theta)?,
            _ => reflection_volterra(&FractionalProfile::new(alpha, theta)?, &cfg.solve)?.r,
        };
        Ok(r * w)
    };
    if method == Method::Volterra {
        freqs.par_iter().map(|&f| point(f)).collect()
    } else {
        freqs.iter().map(|&f| point(f)).collect()
    }
}

/// Standard Ricker wavelet with its peak at the centre sample.
pub fn ricker_wavelet(fpeak: f64, dt: f64, n: usize) -> Result<Trace> {
    if !(fpeak > 0.0) || !fpeak.is_finite() || !(dt > 0.0) || n == 0 {
        return Err(Error::Usage("ricker needs fpeak > 0, dt > 0 and n > 0".into()));
    }
    let nyquist = 0.5 / dt;
    if nyquist < 3.0 * fpeak {
        return Err(Error::Aliasing { nyquist, fpeak });
    }
    let centre = n / 2;
    let a = (PI * fpeak).powi(2);
    let samples = (0..n)
        .map(|k| {
            let t = (k as f64 - centre as f64) * dt;
            (1.0 - 2.0 * a * t * t) * (-a * t * t).exp()
        })
        .collect();
    Trace::new(-(centre as f64) * dt, dt, samples)
}

/// Output of [`reflect_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reflected {
    pub trace: Trace,
    /// Largest imaginary part discarded after the inverse transform.
    pub max_imag: f64,
}

/// Multiplies the spectrum of `incident` by `symbol(f)` on the nonnegative
/// frequencies, extends it Hermitian, and transforms back.
pub fn reflect_with<S>(incident: &Trace, symbol: S) -> Result<Reflected>
where
    S: FnOnce(&[f64]) -> Result<Vec<Complex64>>,
{
    let n = incident.fft_len();
    let spec = incident.spectrum();
    let freqs = spec.frequencies();
    let sym = symbol(&freqs)?;
    if sym.len() != freqs.len() {
        return Err(Error::Usage("symbol length does not match the frequency grid".into()));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let half = n / 2;
    for (k, (v, s)) in spec.values.iter().zip(&sym).enumerate() {
        // DC and Nyquist bins must stay real
        let s = if k == 0 || (k == half && n.is_multiple_of(2)) { Complex64::new(s.re, 0.0) } else { *s };
        buf[k] = v * s;
        if k != 0 && k != half {
            buf[n - k] = buf[k].conj();
        }
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let samples: Vec<f64> = buf[..incident.len()].iter().map(|z| z.re * scale).collect();
    let max_imag = buf[..incident.len()].iter().map(|z| (z.im * scale).abs()).fold(0.0, f64::max);
    Ok(Reflected { trace: Trace::new(incident.t0, incident.dt, samples)?, max_imag })
}

/// Reflected trace for the given medium and symbol method.
pub fn reflect_trace(
    incident: &Trace,
    alpha: f64,
    ell: f64,
    c0: f64,
    eta: f64,
    method: Method,
    cfg: &SymbolConfig,
) -> Result<Trace> {
    Ok(reflect_with(incident, |f| multiplier_symbol(alpha, ell, c0, eta, f, method, cfg))?.trace)
}

/// Spectral ratio `reflected / incident` on the bins inside `band`.
fn band_ratio(incident: &Trace, reflected: &Trace, band: [f64; 2]) -> Result<Vec<(f64, Complex64)>> {
    if incident.dt != reflected.dt || incident.fft_len() != reflected.fft_len() {
        return Err(Error::Usage("traces must share dt and length".into()));
    }
    let [lo, hi] = band;
    let nyquist = 0.5 / incident.dt;
    if !(lo > 0.0) || !(hi > lo) || hi > nyquist {
        return Err(Error::Usage(format!("band [{lo}, {hi}] must lie inside (0, {nyquist}]")));
    }
    let si = incident.spectrum();
    let sr = reflected.spectrum();
    let peak = si.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut out = Vec::new();
    for (k, f) in si.frequencies().into_iter().enumerate() {
        if f < lo || f > hi {
            continue;
        }
        let vi = si.values[k];
        if vi.norm() < 1e-3 * peak {
            return Err(Error::IllConditionedBand { lo, hi });
        }
        out.push((f, sr.values[k] / vi));
    }
    if out.len() < 2 {
        return Err(Error::IllConditionedBand { lo, hi });
    }
    Ok(out)
}

/// Least-squares slope of `log |reflected / incident|` against `log f` over `band`.
pub fn spectral_slope(incident: &Trace, reflected: &Trace, band: [f64; 2]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = band_ratio(incident, reflected, band)?
        .into_iter()
        .map(|(f, r)| (f.ln(), r.norm().ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Circular mean of `arg(reflected / incident)` over `band`, in `(-pi, pi]`.
pub fn spectral_phase(incident: &Trace, reflected: &Trace, band: [f64; 2]) -> Result<f64> {
    let sum: Complex64 = band_ratio(incident, reflected, band)?.into_iter().map(|(_, r)| r / r.norm()).sum();
    Ok(sum.arg())
}

/// Band where `theta < theta_max` and the incident spectrum is within 1% of its peak.
pub fn valid_band(incident: &Trace, alpha: f64, ell: f64, c0: f64, eta: f64, theta_max: f64) -> Result<[f64; 2]> {
    let spec = incident.spectrum();
    let peak = spec.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let freqs = spec.frequencies();
    let strong: Vec<f64> = freqs
        .iter()
        .zip(&spec.values)
        .filter(|(f, v)| **f > 0.0 && v.norm() >= 1e-2 * peak)
        .map(|(f, _)| *f)
        .collect();
    let (Some(&a), Some(&b)) = (strong.first(), strong.last()) else {
        return Err(Error::IllConditionedBand { lo: 0.0, hi: 0.0 });
    };
    let lo = a.max(frequency_at_theta(alpha, ell, c0, eta, theta_max)?);
    if !(b > lo) {
        return Err(Error::IllConditionedBand { lo, hi: b });
    }
    Ok([lo, b])
}

/// Signed distance between two angles, in `[-pi, pi)`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    (a - b + PI).rem_euclid(2.0 * PI) - PI
}
