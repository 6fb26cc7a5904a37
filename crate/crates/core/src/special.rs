//! Special functions: Gamma/Beta via the Lanczos approximation, the
//! curvature-dependent scale function, and unit-ball volumes.

use crate::error::FinslerError;
use crate::Result;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive real arguments (Lanczos, g = 7, n = 9).
pub fn gamma_fn(z: f64) -> Result<f64> {
    if !z.is_finite() || z <= 0.0 {
        return Err(FinslerError::DomainError);
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: f64) -> f64 {
    if z < 0.5 {
        // reflection
        std::f64::consts::PI / ((std::f64::consts::PI * z).sin() * gamma_unchecked(1.0 - z))
    } else {
        let z = z - 1.0;
        let mut x = LANCZOS[0];
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            x += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * x
    }
}

pub fn ln_gamma(z: f64) -> Result<f64> {
    if !z.is_finite() || z <= 0.0 {
        return Err(FinslerError::DomainError);
    }
    if z < 0.5 {
        return Ok(gamma_unchecked(z).ln());
    }
    let zm = z - 1.0;
    let mut x = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (zm + i as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (zm + 0.5) * t.ln() - t + x.ln())
}

/// Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b), positive arguments.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    Ok((ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?).exp())
}

/// Scale function of constant curvature k:
/// sin(sqrt(k) t)/sqrt(k) for k > 0, t for k = 0, sinh(sqrt(-k) t)/sqrt(-k) for k < 0.
pub fn sk(t: f64, k: f64) -> f64 {
    if k > 0.0 {
        let s = k.sqrt();
        (s * t).sin() / s
    } else if k < 0.0 {
        let s = (-k).sqrt();
        (s * t).sinh() / s
    } else {
        t
    }
}

/// Volume of the Euclidean unit ball, `pi^(n/2) / Gamma(n/2 + 1)`.
/// Accepts a real dimension parameter so radial formulas can be used generically.
pub fn unit_ball_volume(n: f64) -> f64 {
    std::f64::consts::PI.powf(n / 2.0) / gamma_unchecked(n / 2.0 + 1.0)
}
