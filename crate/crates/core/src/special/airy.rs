
use crate::{Complex64, Error, Result};
#[allow(unused_imports)]
use crate::prelude::*;

/// `Ai(0)`.
const AI0: f64 = 0.355_028_053_887_817_239_260;
/// `-Ai'(0)`.
const AIP0: f64 = 0.258_819_403_792_806_798_405;

const MACLAURIN_RADIUS: f64 = 1.5;
const ASYMPTOTIC_ZETA: f64 = 15.0;
const TAYLOR_START: f64 = 8.2;
const TAYLOR_STEP: f64 = 0.5;

/// `Ai(z)` together with `Ai'(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryPair {
    pub ai: Complex64,
    pub aip: Complex64,
}

/// Airy function of the first kind and its derivative for complex `z`.
///
/// The negative real axis is treated as a branch cut of the principal
/// `z^{3/2}` and rejected; points just off it are accepted.
pub fn airy_ai(z: Complex64) -> Result<AiryPair> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::param("z", "must be finite"));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::BranchCut);
    }
    Ok(airy_unchecked(z))
}

fn zeta_of(z: Complex64) -> Complex64 {
    z.powf(1.5) * (2.0 / 3.0)
}

fn airy_unchecked(z: Complex64) -> AiryPair {
    let r = z.norm();
    if r <= MACLAURIN_RADIUS {
        return maclaurin(z);
    }
    let zeta = zeta_of(z);
    let zn = zeta.norm();
    // Maclaurin loses roughly exp(|zeta| + Re zeta) relative to the result.
    if zn + zeta.re <= 11.0 && zn < ASYMPTOTIC_ZETA {
        return maclaurin(z);
    }
    if z.arg().abs() <= 2.0 * core::f64::consts::FRAC_PI_3 {
        if zn >= ASYMPTOTIC_ZETA {
            return asymptotic(z);
        }
        let start = z * (TAYLOR_START / r);
        let mut state = if TAYLOR_START <= MACLAURIN_RADIUS {
            maclaurin(start)
        } else {
            asymptotic_at_start(start)
        };
        let dist = TAYLOR_START - r;
        if dist <= 0.0 {
            return asymptotic(z);
        }
        let steps = (dist / TAYLOR_STEP).ceil() as usize;
        let h = (z - start) / steps as f64;
        let mut zc = start;
        for _ in 0..steps {
            state = taylor_step(zc, state, h);
            zc += h;
        }
        return state;
    }
    let omega = Complex64::from_polar(1.0, 2.0 * core::f64::consts::FRAC_PI_3);
    let omega2 = omega * omega;
    let a1 = airy_unchecked(omega * z);
    let a2 = airy_unchecked(omega2 * z);
    AiryPair {
        ai: -omega * a1.ai - omega2 * a2.ai,
        aip: -omega2 * a1.aip - omega * a2.aip,
    }
}

fn asymptotic_at_start(z: Complex64) -> AiryPair {
    // |zeta| at radius 8.2 is about 15.65, inside the asymptotic regime.
    asymptotic(z)
}

fn maclaurin(z: Complex64) -> AiryPair {
    let z3 = z * z * z;
    let mut f = Complex64::new(1.0, 0.0);
    let mut g = z;
    let mut fp = Complex64::new(0.0, 0.0);
    let mut gp = Complex64::new(1.0, 0.0);
    let mut tf = f;
    let mut tg = g;
    let mut tfp = z * z * 0.5;
    let mut tgp = gp;
    fp += tfp;
    for k in 0..400usize {
        let kf = k as f64;
        tf = tf * z3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        tg = tg * z3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        tgp = tgp * z3 / ((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
        let next_fp = tfp * z3 / (3.0 * (kf + 1.0) * (3.0 * kf + 5.0));
        f += tf;
        g += tg;
        gp += tgp;
        fp += next_fp;
        tfp = next_fp;
        let small = |t: Complex64, s: Complex64| t.norm() <= 1e-17 * s.norm().max(1e-300);
        if k > 2 && small(tf, f) && small(tg, g) && small(tgp, gp) && small(tfp, fp) {
            break;
        }
    }
    AiryPair {
        ai: f * AI0 - g * AIP0,
        aip: fp * AI0 - gp * AIP0,
    }
}

/// Coefficients `u_k`, `v_k` of the large-argument expansion.
struct AsymptoticCoeffs {
    k: usize,
    u: f64,
}

impl AsymptoticCoeffs {
    fn new() -> Self {
        Self { k: 0, u: 1.0 }
    }
    fn current(&self) -> (f64, f64) {
        let kf = self.k as f64;
        (self.u, -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * self.u)
    }
    fn advance(&mut self) {
        let kf = self.k as f64;
        self.u *= (6.0 * kf + 5.0) * (6.0 * kf + 3.0) * (6.0 * kf + 1.0)
            / (216.0 * (kf + 1.0) * (2.0 * kf + 1.0));
        self.k += 1;
    }
}

/// Sums `sum (-1)^k u_k zeta^{-k}` and `sum (-1)^k v_k zeta^{-k}`, truncated at
/// the smallest term or at double precision.
fn asymptotic_sums(zeta: Complex64) -> (Complex64, Complex64, Complex64) {
    let inv = -zeta.inv();
    let mut coeffs = AsymptoticCoeffs::new();
    let mut pow = Complex64::new(1.0, 0.0);
    let mut su = Complex64::new(0.0, 0.0);
    let mut sv = Complex64::new(0.0, 0.0);
    // v - u, accumulated from k = 1 so the cancellation of the leading 1 is exact.
    let mut diff = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for _ in 0..60 {
        let (u, v) = coeffs.current();
        let tu = pow * u;
        let tv = pow * v;
        let size = tu.norm().max(tv.norm());
        if size > last {
            break;
        }
        su += tu;
        sv += tv;
        if coeffs.k > 0 {
            diff += pow * (v - u);
        }
        last = size;
        if size < 1e-17 {
            break;
        }
        coeffs.advance();
        pow *= inv;
    }
    (su, sv, diff)
}

fn asymptotic(z: Complex64) -> AiryPair {
    let zeta = zeta_of(z);
    let (su, sv, _) = asymptotic_sums(zeta);
    let q = z.powf(0.25);
    let pref = (-zeta).exp() / (2.0 * core::f64::consts::PI.sqrt());
    AiryPair {
        ai: pref * su / q,
        aip: -pref * q * sv,
    }
}

fn taylor_step(z0: Complex64, state: AiryPair, h: Complex64) -> AiryPair {
    // Ai'' = z Ai; expand about z0 with a_{n+2} = (z0 a_n + a_{n-1}) / ((n+2)(n+1)).
    let mut a_prev = Complex64::new(0.0, 0.0); // a_{n-1}
    let mut a0 = state.ai;
    let mut a1 = state.aip;
    let mut y = a0 + a1 * h;
    let mut yp = a1;
    let mut hp = h; // h^{n}, starting at n = 1
    let scale = state.ai.norm() + state.aip.norm();
    for n in 0..200usize {
        let nf = n as f64;
        let a2 = (z0 * a0 + a_prev) / ((nf + 2.0) * (nf + 1.0));
        // term for y: a_{n+2} h^{n+2}; for y': (n+2) a_{n+2} h^{n+1}
        let term_p = a2 * hp * (nf + 2.0);
        hp *= h;
        let term = a2 * hp;
        y += term;
        yp += term_p;
        a_prev = a0;
        a0 = a1;
        a1 = a2;
        if n > 4 && term.norm() + term_p.norm() < 1e-18 * scale.max(y.norm() + yp.norm()) {
            break;
        }
    }
    AiryPair { ai: y, aip: yp }
}

/// `Ai'(z)/Ai(z) + sqrt(z)` for `|arg z| < pi`, evaluated without cancellation.
///
/// For large `|zeta|` the shifted logarithmic derivative is
/// `-sqrt(z) (V - U) / U` in terms of the asymptotic sums; otherwise the
/// difference is formed directly.
pub fn airy_log_derivative_shifted(z: Complex64) -> Result<Complex64> {
    let pair = airy_ai(z)?;
    let sz = z.sqrt();
    let zeta = zeta_of(z);
    if zeta.norm() >= ASYMPTOTIC_ZETA && z.arg().abs() <= 2.0 * core::f64::consts::FRAC_PI_3 {
        let (su, _, diff) = asymptotic_sums(zeta);
        return Ok(-sz * diff / su);
    }
    if pair.ai.norm() == 0.0 {
        return Err(Error::DegenerateState);
    }
    Ok(pair.aip / pair.ai + sz)
}
