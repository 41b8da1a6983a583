//! Gamma, reciprocal Gamma and digamma for complex arguments.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2k} / (2k (2k-1))` for k = 1..=10: coefficients of the Stirling series.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// `B_{2k} / (2k)` for k = 1..=10: coefficients of the digamma asymptotic series.
const DIGAMMA_ASYMPTOTIC: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
    43867.0 / 14364.0,
    -174_611.0 / 6600.0,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn needs_shift(z: Complex64) -> bool {
    z.re < 0.0 || z.norm() < 15.0
}

/// Stirling series, valid for large `|z|` away from the negative axis.
fn ln_gamma_stirling(z: Complex64) -> Complex64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += power * c;
        power *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series
}

/// Logarithm of the Gamma function.
///
/// For `Re z > 0` this is the branch continuous from the positive real
/// axis (the one whose imaginary part is the Riemann–Siegel theta
/// ingredient). Elsewhere it agrees with `ln Γ` up to a multiple of `2πi`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(z));
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while needs_shift(w) {
        shift += w.ln();
        w += 1.0;
    }
    Ok(ln_gamma_stirling(w) - shift)
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// `1/Γ(z)`, entire; exactly zero at the nonpositive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    let mut product = Complex64::new(1.0, 0.0);
    let mut w = z;
    while needs_shift(w) {
        product *= w;
        w += 1.0;
    }
    product * (-ln_gamma_stirling(w)).exp()
}

/// Digamma `ψ(z) = Γ'(z)/Γ(z)` by upward recurrence and the asymptotic series.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(z));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    while needs_shift(w) {
        acc -= 1.0 / w;
        w += 1.0;
    }
    let inv2 = 1.0 / (w * w);
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv2;
    for c in DIGAMMA_ASYMPTOTIC {
        series += power * c;
        power *= inv2;
    }
    Ok(acc + w.ln() - 0.5 / w - series)
}

/// Real digamma.
pub fn digamma_real(x: f64) -> Result<f64> {
    Ok(digamma(Complex64::new(x, 0.0))?.re)
}

/// Reflection check helper: `Γ(z)Γ(1-z) = π / sin(πz)`.
pub fn reflection_rhs(z: Complex64) -> Complex64 {
    PI / (z * PI).sin()
}
