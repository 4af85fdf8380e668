//! Complex log-Gamma by the Lanczos approximation (g = 7, nine terms),
//! with the reflection formula on the left half-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{AsaiError, Result};

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn near_pole(z: Complex64) -> bool {
    z.im.abs() < 1e-13 && z.re <= 0.0 && (z.re - z.re.round()).abs() < 1e-13
}

/// `log Gamma(z)` on some branch; `exp` of it is `Gamma(z)`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if near_pole(z) {
        return Err(AsaiError::Pole(format!("Gamma at {z}")));
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z)?);
    }
    let z = z - 1.0;
    let mut a = Complex64::new(COEF[0], 0.0);
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln())
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}
