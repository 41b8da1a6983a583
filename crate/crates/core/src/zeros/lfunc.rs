//! `ζ(s)` and `L(s, χ_D)` by Euler–Maclaurin summation, their completions
//! and the Hardy functions that are real on the critical line.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::LFunctionId;
use crate::error::{Error, Result};
use crate::numeric::{exprel, KahanSum};
use crate::quadfield::kronecker;
use crate::testfn::ln_gamma;

/// Largest `|Im s|` accepted by the evaluators.
pub const MAX_HEIGHT: f64 = 500.0;

/// Number of Euler–Maclaurin correction terms.
const EM_TERMS: usize = 20;

/// `B_{2k} / (2k)!` for `k = 1..=EM_TERMS`.
fn bernoulli_ratios() -> &'static [f64; EM_TERMS] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[f64; EM_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let exact = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1_209_600.0, 1.0 / 47_900_160.0];
        let mut out = [0.0; EM_TERMS];
        for (k, slot) in out.iter_mut().enumerate() {
            let k1 = k + 1;
            *slot = if k < exact.len() {
                exact[k]
            } else {
                // B_{2k}/(2k)! = (-1)^(k+1) 2 ζ(2k) / (2π)^(2k).
                let zeta: f64 = (1..60).map(|n| (n as f64).powi(-2 * k1 as i32)).sum();
                let sign = if k1 % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * zeta / (2.0 * PI).powi(2 * k1 as i32)
            };
        }
        out
    })
}

fn check_envelope(s: Complex64) -> Result<()> {
    if !(-1.0..=2.0).contains(&s.re) || s.im.abs() > MAX_HEIGHT {
        return Err(Error::Envelope(format!(
            "s = {s} lies outside Re s ∈ [-1, 2], |Im s| ≤ {MAX_HEIGHT}"
        )));
    }
    Ok(())
}

/// Euler–Maclaurin remainder `Σ_{n≥0} (x + n)^(-s)` without the
/// `x^(1-s)/(s-1)` term: `x^(-s)/2 + Σ_k B_{2k}/(2k)! (s)_{2k-1} x^(-s-2k+1)`.
fn em_correction(s: Complex64, x: f64) -> Complex64 {
    let ln_x = x.ln();
    let x_s = (-s * ln_x).exp();
    let mut acc = x_s * 0.5;
    let mut rising = s; // (s)_{2k-1}
    let mut power = x_s / x; // x^(-s-2k+1)
    let inv_x2 = 1.0 / (x * x);
    for (k, &b) in bernoulli_ratios().iter().enumerate() {
        acc += rising * power * b;
        let m = (2 * k + 1) as f64;
        rising = rising * (s + m) * (s + m + 1.0);
        power *= inv_x2;
    }
    acc
}

/// Series length `N` such that the Euler–Maclaurin terms decrease by a
/// factor of at least four each.
fn series_length(s: Complex64) -> usize {
    ((s.norm() + 2.0 * EM_TERMS as f64) / PI).ceil() as usize + 5
}

/// `ζ(s)`.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    check_envelope(s)?;
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole(s));
    }
    let n = series_length(s);
    let mut acc = KahanSum::<Complex64>::new();
    for k in (1..n).rev() {
        acc.add((-s * (k as f64).ln()).exp());
    }
    let x = n as f64;
    acc.add((-(s - 1.0) * x.ln()).exp() / (s - 1.0));
    acc.add(em_correction(s, x));
    Ok(acc.value())
}

/// `L(s, χ)` for the real primitive character `χ(n) = (D/n)` of conductor
/// `q = |D|`, as `Σ_a χ(a) Σ_n (a + nq)^(-s)` with Euler–Maclaurin tails.
/// The pole parts `1/(s-1)` of the Hurwitz pieces cancel because
/// `Σ_a χ(a) = 0`, which keeps `s = 1` regular.
pub fn dirichlet_l(discriminant: i64, s: Complex64) -> Result<Complex64> {
    check_envelope(s)?;
    let q = discriminant.unsigned_abs();
    let n = series_length(s);
    let ln_q = (q as f64).ln();
    let q_s = (-s * ln_q).exp();
    let mut acc = KahanSum::<Complex64>::new();
    for a in 1..=q {
        let chi = kronecker(discriminant, a)?;
        if chi == 0 {
            continue;
        }
        let mut part = KahanSum::<Complex64>::new();
        for k in (0..n).rev() {
            let m = a as f64 + (k * q as usize) as f64;
            part.add((-s * m.ln()).exp());
        }
        // q^(-s) ζ(s, x) tail with x = n + a/q, minus the cancelling 1/(s-1).
        let x = n as f64 + a as f64 / q as f64;
        let ln_x = x.ln();
        let pole_free = -ln_x * exprel((c1() - s) * ln_x);
        part.add(q_s * (pole_free + em_correction(s, x)));
        acc.add(part.value() * chi as f64);
    }
    Ok(acc.value())
}

fn c1() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// `L(s)` for the given function.
pub fn l_value(id: &LFunctionId, s: Complex64) -> Result<Complex64> {
    match id.discriminant() {
        None => zeta(s),
        Some(d) => dirichlet_l(d, s),
    }
}

/// Logarithm of the archimedean factor: `-(s/2) log π + log Γ(s/2)` for
/// `ζ`, `((s+1)/2) log(q/π) + log Γ((s+1)/2)` for odd characters.
pub fn ln_gamma_factor(id: &LFunctionId, s: Complex64) -> Result<Complex64> {
    match id.discriminant() {
        None => Ok(-s * 0.5 * PI.ln() + ln_gamma(s * 0.5)?),
        Some(d) => {
            let q = d.unsigned_abs() as f64;
            let w = (s + 1.0) * 0.5;
            Ok(w * (q / PI).ln() + ln_gamma(w)?)
        }
    }
}

/// Completed function `Λ(s)`, symmetric under `s ↦ 1 - s`.
pub fn completed(id: &LFunctionId, s: Complex64) -> Result<Complex64> {
    Ok(ln_gamma_factor(id, s)?.exp() * l_value(id, s)?)
}

/// Phase `θ(t) = Im log(gamma factor)(1/2 + it)`.
pub fn theta(id: &LFunctionId, t: f64) -> Result<f64> {
    Ok(ln_gamma_factor(id, Complex64::new(0.5, t))?.im)
}

/// Hardy function `Z(t) = e^(iθ(t)) L(1/2 + it)`, real for real `t`.
pub fn hardy_z(id: &LFunctionId, t: f64) -> Result<f64> {
    let rotated = Complex64::from_polar(1.0, theta(id, t)?) * l_value(id, Complex64::new(0.5, t))?;
    Ok(rotated.re)
}
