//! Dormand–Prince 8(5,3) integrator for two-component complex linear systems.

use crate::{Complex64, Error, Result};
#[allow(unused_imports)]
use crate::prelude::*;

/// `(u, u')`.
pub type State = [Complex64; 2];

const C: [f64; 12] = [
    0.0,
    5.260_015_195_876_773e-2,
    7.890_022_793_815_16e-2,
    1.183_503_419_072_274e-1,
    2.816_496_580_927_726e-1,
    3.333_333_333_333_333e-1,
    0.25,
    3.076_923_076_923_077e-1,
    6.512_820_512_820_513e-1,
    0.6,
    8.571_428_571_428_571e-1,
    1.0,
];

const A: [[f64; 11]; 12] = [
    [0.0; 11],
    [5.260_015_195_876_773e-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.972_505_698_453_79e-2, 5.917_517_095_361_37e-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.958_758_547_680_685e-2, 0.0, 8.876_275_643_042_054e-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.413_651_341_592_667e-1, 0.0, -8.845_494_793_282_861e-1, 9.248_340_032_617_92e-1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.703_703_703_703_703_5e-2, 0.0, 0.0, 1.708_286_087_294_738_6e-1, 1.254_676_875_668_224_2e-1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.710_937_5e-2, 0.0, 0.0, 1.702_522_110_195_440_5e-1, 6.021_653_898_045_596e-2, -1.757_812_5e-2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [
        3.709_200_011_850_479e-2,
        0.0,
        0.0,
        1.703_839_257_122_399_8e-1,
        1.072_620_304_463_732_8e-1,
        -1.531_943_774_862_440_2e-2,
        8.273_789_163_814_023e-3,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        6.241_109_587_160_757e-1,
        0.0,
        0.0,
        -3.360_892_629_446_941_4,
        -8.682_193_468_417_26e-1,
        2.759_209_969_944_671e1,
        2.015_406_755_047_789_4e1,
        -4.348_988_418_106_996e1,
        0.0,
        0.0,
        0.0,
    ],
    [
        4.776_625_364_382_643_4e-1,
        0.0,
        0.0,
        -2.488_114_619_971_667_7,
        -5.902_908_268_368_43e-1,
        2.123_005_144_818_119_3e1,
        1.527_923_363_288_242_3e1,
        -3.328_821_096_898_486e1,
        -2.033_120_170_850_862_7e-2,
        0.0,
        0.0,
    ],
    [
        -9.371_424_300_859_873e-1,
        0.0,
        0.0,
        5.186_372_428_844_064,
        1.091_437_348_996_729_5,
        -8.149_787_010_746_927,
        -1.852_006_565_999_696e1,
        2.273_948_709_935_050_5e1,
        2.493_605_552_679_652_3,
        -3.046_764_471_898_219_6,
        0.0,
    ],
    [
        2.273_310_147_516_538,
        0.0,
        0.0,
        -1.053_449_546_673_725e1,
        -2.000_872_058_224_862_5,
        -1.795_893_186_311_88e1,
        2.794_888_452_941_996e1,
        -2.858_998_277_135_023_5,
        -8.872_856_933_530_63,
        1.236_056_717_579_430_3e1,
        6.433_927_460_157_636e-1,
    ],
];

const B: [f64; 12] = [
    5.429_373_411_656_876_5e-2,
    0.0,
    0.0,
    0.0,
    0.0,
    4.450_312_892_752_409,
    1.891_517_899_314_500_3,
    -5.801_203_960_010_585,
    3.111_643_669_578_199e-1,
    -1.521_609_496_625_161e-1,
    2.013_654_008_040_303_4e-1,
    4.471_061_572_777_259e-2,
];

const ER: [f64; 12] = [
    1.312_004_499_419_488e-2,
    0.0,
    0.0,
    0.0,
    0.0,
    -1.225_156_446_376_204_4,
    -4.957_589_496_572_502e-1,
    1.664_377_182_454_986_4,
    -3.503_288_487_499_736_6e-1,
    3.341_791_187_130_175e-1,
    8.192_320_648_511_571e-2,
    -2.235_530_786_388_629_4e-2,
];

const BHH: [f64; 3] = [2.440_944_881_889_764e-1, 7.338_466_882_816_118e-1, 2.205_882_352_941_176_6e-2];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self { rtol: 1e-11, atol: 1e-13, max_steps: 50_000_000 }
    }
}

/// Step counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

fn axpy(y: &State, h: f64, coeffs: &[f64], k: &[State; 12]) -> State {
    let mut out = *y;
    for (c, ki) in coeffs.iter().zip(k.iter()) {
        if *c != 0.0 {
            out[0] += ki[0] * (h * c);
            out[1] += ki[1] * (h * c);
        }
    }
    out
}

/// Integrates `y' = rhs(x, y)` from `x0` to `x1` (either direction).
///
/// `step_cap(x)` bounds `|h|` at the start of each step.
pub fn integrate<F, H>(mut rhs: F, x0: f64, y0: State, x1: f64, cfg: &OdeConfig, step_cap: H) -> Result<(State, OdeStats)>
where
    F: FnMut(f64, &State) -> State,
    H: Fn(f64) -> f64,
{
    let mut stats = OdeStats::default();
    if x0 == x1 {
        return Ok((y0, stats));
    }
    let dir = if x1 > x0 { 1.0 } else { -1.0 };
    let span = (x1 - x0).abs();
    let mut x = x0;
    let mut y = y0;
    let mut k = [[Complex64::new(0.0, 0.0); 2]; 12];
    k[0] = rhs(x, &y);
    stats.evaluations += 1;
    let mut h = (0.1 * step_cap(x)).min(span) * dir;
    let mut last_rejected = false;
    while stats.accepted + stats.rejected < cfg.max_steps {
        let cap = step_cap(x);
        if h.abs() > cap {
            h = cap * dir;
        }
        let remaining = x1 - x;
        let finishing = h.abs() >= remaining.abs();
        if finishing {
            h = remaining;
        }
        if h.abs() <= 1e-14 * x.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow(x));
        }
        for s in 1..12 {
            let ys = axpy(&y, h, &A[s][..s], &k);
            k[s] = rhs(x + C[s] * h, &ys);
        }
        stats.evaluations += 11;
        let y_new = axpy(&y, h, &B, &k);
        let mut err = 0.0;
        let mut err2 = 0.0;
        for i in 0..2 {
            let sk = cfg.atol + cfg.rtol * y[i].norm().max(y_new[i].norm());
            let mut e5 = Complex64::new(0.0, 0.0);
            for (c, ks) in ER.iter().zip(k.iter()) {
                e5 += ks[i] * *c;
            }
            let mut incr = Complex64::new(0.0, 0.0);
            for (c, ks) in B.iter().zip(k.iter()) {
                incr += ks[i] * *c;
            }
            let e3 = incr - k[0][i] * BHH[0] - k[8][i] * BHH[1] - k[11][i] * BHH[2];
            err += (e5 / sk).norm_sqr();
            err2 += (e3 / sk).norm_sqr();
        }
        let deno = {
            let d = err + 0.01 * err2;
            if d <= 0.0 {
                1.0
            } else {
                d
            }
        };
        // two complex components count as four real ones
        let err = h.abs() * err * (1.0 / (deno * 4.0)).sqrt();
        if err <= 1.0 {
            let fac = (err.powf(0.125) / 0.9).clamp(1.0 / 6.0, 3.0);
            x = if finishing { x1 } else { x + h };
            y = y_new;
            stats.accepted += 1;
            if finishing {
                return Ok((y, stats));
            }
            k[0] = rhs(x, &y);
            stats.evaluations += 1;
            let mut h_new = h / fac;
            if last_rejected {
                h_new = dir * h_new.abs().min(h.abs());
            }
            h = h_new;
            last_rejected = false;
        } else {
            let shrink = if err.is_finite() { (err.powf(0.125) / 0.9).min(3.0) } else { 10.0 };
            h /= shrink;
            stats.rejected += 1;
            last_rejected = true;
        }
    }
    Err(Error::MaxIterations(cfg.max_steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unbounded(_: f64) -> f64 {
        f64::INFINITY
    }

    #[test]
    fn harmonic_oscillator_round_trip() {
        let i = Complex64::new(0.0, 1.0);
        let y0 = [Complex64::new(1.0, 0.0), -i];
        let rhs = |_x: f64, y: &State| [y[1], -y[0]];
        let (y, stats) = integrate(rhs, 0.0, y0, 10.0, &OdeConfig::default(), unbounded).unwrap();
        let exact = (-i * 10.0).exp();
        assert!((y[0] - exact).norm() < 1e-10);
        assert!((y[1] + i * exact).norm() < 1e-10);
        assert!(stats.accepted > 10);
        let (back, _) = integrate(rhs, 10.0, y, 0.0, &OdeConfig::default(), unbounded).unwrap();
        assert!((back[0] - y0[0]).norm() < 1e-10);
    }

    #[test]
    fn airy_equation_against_special_function() {
        // u'' = x u on [0, 3] starting from Ai(0), Ai'(0)
        let a0 = crate::special::airy_ai(Complex64::new(0.0, 0.0)).unwrap();
        let a3 = crate::special::airy_ai(Complex64::new(3.0, 0.0)).unwrap();
        let rhs = |x: f64, y: &State| [y[1], y[0] * x];
        let cfg = OdeConfig { rtol: 1e-13, atol: 1e-15, ..OdeConfig::default() };
        let (y, _) = integrate(rhs, 0.0, [a0.ai, a0.aip], 3.0, &cfg, unbounded).unwrap();
        // Ai is recessive forwards, so compare with an absolute tolerance
        assert!((y[0] - a3.ai).norm() < 1e-10);
    }

    #[test]
    fn step_cap_is_respected() {
        let rhs = |_x: f64, y: &State| [y[1], -y[0]];
        let y0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let (_, stats) = integrate(rhs, 0.0, y0, 10.0, &OdeConfig::default(), |_| 0.01).unwrap();
        assert!(stats.accepted >= 1000);
    }
}
