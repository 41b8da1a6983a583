//! Riesz kernels at finite places, by exact shell calculus.
//!
//! Let `q = N(p)`, `d = N(d_v)` and `κ = d^(-1/2)`. The ball of level `n`
//! (`|x| ≤ q^-n`) has measure `κ q^-n` and the shell `S_n` (`|x| = q^-n`)
//! has measure `μ_n = κ q^-n (1 - 1/q)`. The kernel acts by
//!
//! ```text
//! R^s * φ(y) = B(s) ∫ φ(y + x) |x|^(s-1) dx,      B(s) = d^(1/2-s) (1 - q^-s) / (1 - q^(s-1)),
//! ```
//!
//! which converges for `0 < Re s < 1`. Subtracting `φ(y)` on the unit ball
//! gives the form used everywhere else,
//!
//! ```text
//! R^s * φ(y) = A(s) φ(y) + B(s) Σ_k ∫_{S_k} (φ(y + x) - φ(y)·[k ≥ 0]) |x|^(s-1) dx,
//! A(s) = d^(-s) (1 - 1/q) / (1 - q^(s-1)),
//! ```
//!
//! where the sum is finite for locally constant, compactly supported `φ`
//! and defines the continuation to every `s` off the poles
//! `q^(s-1) = 1`. At `s = 0`, `A = 1` and `B = 0` exactly.
//!
//! For `|y| = q^-m` and `x ∈ S_k`: if `k < m` then `|y + x| = q^-k`; if
//! `k > m` then `|y + x| = |y|`; on the critical shell `k = m`,
//! `{x ∈ S_m : |y + x| ≤ q^-j}` is the ball of level `j` centred at `-y`
//! for every `j > m`, of measure `κ q^-j` (see
//! [`shell_intersection_measure`]), so the points of `S_m` with
//! `|y + x| = q^-j` have measure `μ_j` for `j > m` and `κ q^-m (1 - 2/q)`
//! for `j = m`.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::numeric::KahanSum;
use crate::quadfield::PlaceInfo;
use crate::testfn::TestFunction;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Residue field size, different norm and derived constants of a finite place.
#[derive(Clone, Copy, Debug)]
struct Local {
    q: f64,
    ln_q: f64,
    ln_d: f64,
    kappa: f64,
}

impl Local {
    fn new(place: &PlaceInfo) -> Result<Self> {
        let Some(q) = place.norm else {
            return invalid("p-adic shell calculus needs a finite place");
        };
        let q = q as f64;
        let d = place.different_norm as f64;
        Ok(Local {
            q,
            ln_q: q.ln(),
            ln_d: d.ln(),
            kappa: d.powf(-0.5),
        })
    }

    /// `q^z`, computed as `exp(z log q)` everywhere so that identical
    /// exponents produce identical values.
    fn qpow(&self, z: Complex64) -> Complex64 {
        (z * self.ln_q).exp()
    }

    fn qpow_int(&self, n: i64) -> f64 {
        self.q.powi(n as i32)
    }

    /// `μ_n`.
    fn shell(&self, n: i64) -> f64 {
        self.kappa * self.qpow_int(-n) * (1.0 - 1.0 / self.q)
    }

    /// `∫_{S_k} |x|^(s-1) dx = κ (1 - 1/q) q^(-ks)`.
    fn omega(&self, k: i64, s: Complex64) -> Complex64 {
        self.qpow(-s * k as f64) * (self.kappa * (1.0 - 1.0 / self.q))
    }

    fn denominator(&self, s: Complex64) -> Result<Complex64> {
        let den = c(1.0) - self.qpow(s - 1.0);
        if den.norm() < 1e-14 {
            return Err(Error::Pole(s));
        }
        Ok(den)
    }

    fn a_coefficient(&self, s: Complex64) -> Result<Complex64> {
        let den = self.denominator(s)?;
        let num = c(1.0) - self.qpow(c(-1.0));
        Ok((-s * self.ln_d).exp() * num / den)
    }

    fn b_coefficient(&self, s: Complex64) -> Result<Complex64> {
        let den = self.denominator(s)?;
        let num = c(1.0) - self.qpow(-s);
        Ok(((0.5 - s) * self.ln_d).exp() * num / den)
    }
}

/// Measure of the ball `{|x| ≤ q^-n}`.
pub fn ball_measure(place: &PlaceInfo, n: i64) -> Result<f64> {
    let l = Local::new(place)?;
    Ok(l.kappa * l.qpow_int(-n))
}

/// Measure of the shell `{|x| = q^-n}`.
pub fn shell_measure(place: &PlaceInfo, n: i64) -> Result<f64> {
    Ok(Local::new(place)?.shell(n))
}

/// Measure of `{x : |x| = q^-m, |x + y| ≤ q^-k}` for a fixed `y` with
/// `|y| = q^-m` and `k > m`: the ball of level `k` around `-y`, which lies
/// inside the shell, so the answer is `κ q^-k`.
///
/// For `k ≤ m` every `x` of the shell satisfies the condition; that case
/// is served by [`shell_intersection_measure_any`].
pub fn shell_intersection_measure(place: &PlaceInfo, m: i64, k: i64) -> Result<f64> {
    if k <= m {
        return invalid(format!(
            "shell intersection needs k > m (got m = {m}, k = {k}); use shell_intersection_measure_any"
        ));
    }
    ball_measure(place, k)
}

/// As [`shell_intersection_measure`], returning the full shell measure for `k ≤ m`.
pub fn shell_intersection_measure_any(place: &PlaceInfo, m: i64, k: i64) -> Result<f64> {
    if k <= m {
        shell_measure(place, m)
    } else {
        ball_measure(place, k)
    }
}

/// Power-law extension `coef · |x|^exponent` of a profile below its window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerTail {
    pub coef: Complex64,
    pub exponent: Complex64,
}

/// A radial function on a finite place: `values[n - n_min]` on the shell of
/// level `n` for `n_min ≤ n ≤ n_max`, `value_at_zero` on every level above
/// `n_max`, and zero (or the power tail, if present) below `n_min`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    place: PlaceInfo,
    n_min: i64,
    values: Vec<Complex64>,
    value_at_zero: Complex64,
    tail: Option<PowerTail>,
}

impl RadialProfile {
    pub fn new(place: PlaceInfo, n_min: i64, values: Vec<Complex64>, value_at_zero: Complex64) -> Result<Self> {
        Local::new(&place)?;
        Ok(RadialProfile {
            place,
            n_min,
            values,
            value_at_zero,
            tail: None,
        })
    }

    pub fn from_real(place: PlaceInfo, n_min: i64, values: &[f64], value_at_zero: f64) -> Result<Self> {
        Self::new(place, n_min, values.iter().map(|&v| c(v)).collect(), c(value_at_zero))
    }

    /// Indicator of the ball of level `n` (`n = 0` is the ring of integers).
    pub fn ball_indicator(place: PlaceInfo, n: i64) -> Result<Self> {
        Self::from_real(place, n, &[1.0], 1.0)
    }

    /// Indicator of the unit group `{|x| = 1}`.
    pub fn unit_indicator(place: PlaceInfo) -> Result<Self> {
        Self::from_real(place, 0, &[1.0], 0.0)
    }

    /// `x ↦ f(|x|)`: level `n` carries `f(q^-n)`.
    pub fn from_test_function(place: PlaceInfo, f: &TestFunction) -> Result<Self> {
        let l = Local::new(&place)?;
        let Some((a, b)) = f.support() else {
            return Self::new(place, 0, Vec::new(), c(0.0));
        };
        // Levels n with a ≤ q^-n ≤ b, padded by one on each side to absorb
        // rounding in the logarithms (f vanishes there anyway).
        let n_lo = (-b.ln() / l.ln_q).floor() as i64 - 1;
        let n_hi = (-a.ln() / l.ln_q).ceil() as i64 + 1;
        let values = (n_lo..=n_hi).map(|n| c(f.eval(l.qpow_int(-n)))).collect();
        Self::new(place, n_lo, values, c(0.0))
    }

    pub fn with_tail(mut self, tail: PowerTail) -> Result<Self> {
        if self.n_min > 0 {
            return invalid("a power tail needs the explicit window to reach level 0");
        }
        self.tail = Some(tail);
        Ok(self)
    }

    pub fn place(&self) -> &PlaceInfo {
        &self.place
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.values.len() as i64 - 1
    }

    pub fn value_at_zero(&self) -> Complex64 {
        self.value_at_zero
    }

    pub fn tail(&self) -> Option<PowerTail> {
        self.tail
    }

    /// Value on the shell of level `n`.
    pub fn level_value(&self, n: i64) -> Complex64 {
        if n > self.n_max() {
            return self.value_at_zero;
        }
        if n >= self.n_min {
            return self.values[(n - self.n_min) as usize];
        }
        match self.tail {
            Some(t) => {
                let q = self.place.norm.expect("finite place") as f64;
                t.coef * (-t.exponent * (n as f64 * q.ln())).exp()
            }
            None => c(0.0),
        }
    }

    /// Value at `y` with `|y| = q^-level`, or at `y = 0` for `None`.
    pub fn value(&self, level: Option<i64>) -> Complex64 {
        match level {
            Some(n) => self.level_value(n),
            None => self.value_at_zero,
        }
    }

    /// `∫ φ dx`. Profiles with a power tail are rejected.
    pub fn integral(&self) -> Result<Complex64> {
        if self.tail.is_some() {
            return Err(Error::Divergent("integral of a profile with a power tail".into()));
        }
        let l = Local::new(&self.place)?;
        let mut acc = KahanSum::<Complex64>::new();
        for n in self.n_min..=self.n_max() {
            acc.add(self.level_value(n) * l.shell(n));
        }
        acc.add(self.value_at_zero * (l.kappa * l.qpow_int(-(self.n_max() + 1))));
        Ok(acc.value())
    }
}

/// `A(s)` and `B(s)` for a finite place.
pub fn kernel_coefficients(place: &PlaceInfo, s: Complex64) -> Result<(Complex64, Complex64)> {
    let l = Local::new(place)?;
    Ok((l.a_coefficient(s)?, l.b_coefficient(s)?))
}

/// `Σ_{k < upper} coef q^(-k·exponent) ω(k)`, the contribution of a power
/// tail to the shell sum: `coef κ (1-1/q) z^(1-upper) / (1 - z)` with
/// `z = q^(exponent + s)`.
fn tail_sum(l: &Local, tail: PowerTail, s: Complex64, upper: i64) -> Result<Complex64> {
    let e = tail.exponent + s;
    if e.re >= 0.0 {
        return Err(Error::Divergent(format!(
            "power tail |x|^{} against |x|^(s-1) with s = {s} diverges at infinity",
            tail.exponent
        )));
    }
    let z = l.qpow(e);
    let zpow = l.qpow(e * (1 - upper) as f64);
    Ok(tail.coef * (l.kappa * (1.0 - 1.0 / l.q)) * zpow / (c(1.0) - z))
}

/// The shell-sum `Σ_k ∫_{S_k} (φ(y+x) - φ(y)[k ≥ 0]) |x|^(s-1) dx`.
fn subtracted_sum(phi: &RadialProfile, l: &Local, s: Complex64, m: Option<i64>) -> Result<Complex64> {
    let phi_y = phi.value(m);
    let n_max = phi.n_max();
    let mut acc = KahanSum::<Complex64>::new();

    // Shells farther out than |y|.
    let k_start = match phi.tail {
        Some(_) => phi.n_min,
        None => phi.n_min.min(0),
    };
    let mut k_end = n_max.max(-1);
    if let Some(m) = m {
        k_end = k_end.min(m - 1);
    }
    for k in k_start..=k_end {
        let indicator = if k >= 0 { phi_y } else { c(0.0) };
        acc.add((phi.level_value(k) - indicator) * l.omega(k, s));
    }
    if let Some(tail) = phi.tail {
        let upper = m.map_or(phi.n_min, |m| m.min(phi.n_min));
        acc.add(tail_sum(l, tail, s, upper)?);
    }

    if let Some(m) = m {
        // Critical shell |x| = |y|.
        let mut inner = KahanSum::<Complex64>::new();
        for j in (m + 1)..=n_max {
            inner.add(phi.level_value(j) * l.shell(j));
        }
        inner.add(phi.value_at_zero * (l.kappa * l.qpow_int(-(m.max(n_max) + 1))));
        inner.add(phi.level_value(m) * (l.kappa * l.qpow_int(-m) * (1.0 - 2.0 / l.q)));
        if m >= 0 {
            inner.add(-phi_y * l.shell(m));
        }
        acc.add(l.qpow((c(1.0) - s) * m as f64) * inner.value());

        // Shells closer to 0 than |y| but outside the unit ball.
        for k in (m + 1)..0 {
            acc.add(phi_y * l.omega(k, s));
        }
    }
    Ok(acc.value())
}

/// `R^s * φ(y)` with `|y| = q^-y_level` (`None` for `y = 0`), by the
/// continued (subtracted) form.
pub fn riesz_convolve_padic(phi: &RadialProfile, s: Complex64, y_level: Option<i64>) -> Result<Complex64> {
    let l = Local::new(&phi.place)?;
    let a = l.a_coefficient(s)?;
    let b = l.b_coefficient(s)?;
    let phi_y = phi.value(y_level);
    if b == c(0.0) {
        return Ok(a * phi_y);
    }
    Ok(a * phi_y + b * subtracted_sum(phi, &l, s, y_level)?)
}

/// `R^s * φ(y)` by the defining integral, `0 < Re s < 1` only. Shells
/// closer to 0 than `|y|` (or than the window) are summed as geometric series.
pub fn riesz_convolve_padic_direct(phi: &RadialProfile, s: Complex64, y_level: Option<i64>) -> Result<Complex64> {
    if !(s.re > 0.0 && s.re < 1.0) {
        return invalid(format!("the direct form needs 0 < Re s < 1, got s = {s}"));
    }
    let l = Local::new(&phi.place)?;
    let b = l.b_coefficient(s)?;
    let n_max = phi.n_max();
    let geometric_from = |k0: i64| l.omega(k0, s) / (c(1.0) - l.qpow(-s));
    let mut acc = KahanSum::<Complex64>::new();
    let k_start = phi.n_min;
    if let Some(tail) = phi.tail {
        let upper = y_level.map_or(phi.n_min, |m| m.min(phi.n_min));
        acc.add(tail_sum(&l, tail, s, upper)?);
    }
    match y_level {
        None => {
            for k in k_start..=n_max {
                acc.add(phi.level_value(k) * l.omega(k, s));
            }
            acc.add(phi.value_at_zero * geometric_from(n_max + 1));
        }
        Some(m) => {
            for k in k_start..m {
                acc.add(phi.level_value(k) * l.omega(k, s));
            }
            let mut inner = KahanSum::<Complex64>::new();
            for j in (m + 1)..=n_max {
                inner.add(phi.level_value(j) * l.shell(j));
            }
            inner.add(phi.value_at_zero * (l.kappa * l.qpow_int(-(m.max(n_max) + 1))));
            inner.add(phi.level_value(m) * (l.kappa * l.qpow_int(-m) * (1.0 - 2.0 / l.q)));
            acc.add(l.qpow((c(1.0) - s) * m as f64) * inner.value());
            acc.add(phi.level_value(m) * geometric_from(m + 1));
        }
    }
    Ok(b * acc.value())
}

/// The whole function `R^s * φ` as a profile: window `[min(n_min, 0), n_max]`,
/// value at zero `R^s * φ(0)`, and power tail `B(s) (∫φ) |y|^(s-1)`
/// outside the window.
pub fn convolve_profile(phi: &RadialProfile, s: Complex64) -> Result<RadialProfile> {
    if phi.tail.is_some() {
        return invalid("convolve_profile expects a compactly supported profile");
    }
    let l = Local::new(&phi.place)?;
    let lo = phi.n_min.min(0);
    let hi = phi.n_max().max(lo);
    let values = (lo..=hi)
        .map(|n| riesz_convolve_padic(phi, s, Some(n)))
        .collect::<Result<Vec<_>>>()?;
    let at_zero = riesz_convolve_padic(phi, s, None)?;
    let coef = l.b_coefficient(s)? * phi.integral()?;
    RadialProfile::new(phi.place, lo, values, at_zero)?.with_tail(PowerTail {
        coef,
        exponent: s - 1.0,
    })
}

/// `max |R^s' * (R^s * φ) - R^(s+s') * φ|` over the given levels.
pub fn semigroup_defect_padic(
    phi: &RadialProfile,
    s: Complex64,
    s_prime: Complex64,
    levels: &[Option<i64>],
) -> Result<f64> {
    if (s + s_prime).re >= 1.0 {
        return invalid("semigroup identity needs Re(s + s') < 1");
    }
    let inner = convolve_profile(phi, s)?;
    let mut worst = 0.0f64;
    for &level in levels {
        let lhs = riesz_convolve_padic(&inner, s_prime, level)?;
        let rhs = riesz_convolve_padic(phi, s + s_prime, level)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// `∫ φ(x) |x|^s d×x` with `d×x = dx / ((1 - 1/q)|x|)`, `Re s > 0`.
pub fn local_zeta(phi: &RadialProfile, s: Complex64) -> Result<Complex64> {
    if phi.tail.is_some() {
        return invalid("local zeta integral of a profile with a power tail");
    }
    if s.re <= 0.0 {
        return invalid(format!("local zeta integral needs Re s > 0, got {s}"));
    }
    let l = Local::new(&phi.place)?;
    let mut acc = KahanSum::<Complex64>::new();
    for n in phi.n_min..=phi.n_max() {
        acc.add(phi.level_value(n) * l.qpow(-s * n as f64) * l.kappa);
    }
    let from = phi.n_max() + 1;
    acc.add(phi.value_at_zero * l.kappa * l.qpow(-s * from as f64) / (c(1.0) - l.qpow(-s)));
    Ok(acc.value())
}

/// `c_v^s = N(d_v)^(-s) · R^(-s) * 1_{O_v^×}(1)`.
pub fn c_factor(place: &PlaceInfo, s: f64) -> Result<f64> {
    if !(s.abs() < 1.0) {
        return invalid(format!("c_factor needs |s| < 1, got {s}"));
    }
    let phi = RadialProfile::unit_indicator(*place)?;
    let l = Local::new(place)?;
    let value = riesz_convolve_padic(&phi, c(-s), Some(0))?;
    Ok(((-s * l.ln_d).exp() * value).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::{discriminant, splitting_type, PlaceKind};

    fn place(d: i64, p: u64) -> PlaceInfo {
        splitting_type(&discriminant(d).unwrap(), p).unwrap()
    }

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shell_intersection_examples() {
        let inert = place(-1, 3);
        assert!((shell_intersection_measure(&inert, 0, 1).unwrap() - 1.0 / 9.0).abs() < 1e-16);
        let ram = place(-1, 2);
        assert!((shell_intersection_measure(&ram, 0, 1).unwrap() - 0.25).abs() < 1e-16);
        assert!(shell_intersection_measure(&ram, 0, 0).is_err());
        let full = shell_intersection_measure_any(&ram, 2, 1).unwrap();
        assert!((full - 0.5 * 0.25 * 0.5).abs() < 1e-16);
    }

    #[test]
    fn measures_are_normalized() {
        for p in [place(-1, 2), place(-1, 3), place(-1, 5), place(-2, 2), place(-3, 3)] {
            let kappa = (p.different_norm as f64).powf(-0.5);
            assert!((ball_measure(&p, 0).unwrap() - kappa).abs() < 1e-16);
            let shells: f64 = (0..60).map(|n| shell_measure(&p, n).unwrap()).sum();
            assert!((shells - kappa).abs() < 1e-15);
        }
    }

    #[test]
    fn delta_at_zero_is_exact() {
        let p = place(-1, 2);
        let f = TestFunction::log_bump(2.0, 0.7).unwrap();
        let phi = RadialProfile::from_test_function(p, &f).unwrap();
        for level in [Some(-3), Some(-1), Some(0), Some(2), None] {
            assert_eq!(riesz_convolve_padic(&phi, z(0.0, 0.0), level).unwrap(), phi.value(level));
        }
    }

    #[test]
    fn continued_matches_direct_in_the_strip() {
        let f = TestFunction::log_bump(3.0, 1.3).unwrap();
        for p in [place(-1, 2), place(-1, 3), place(-1, 5), place(-7, 7)] {
            let profiles = [
                RadialProfile::ball_indicator(p, 0).unwrap(),
                RadialProfile::ball_indicator(p, -2).unwrap(),
                RadialProfile::from_test_function(p, &f).unwrap(),
                RadialProfile::from_real(p, -1, &[0.3, -1.0, 2.0], 0.5).unwrap(),
            ];
            for phi in &profiles {
                for s in [z(0.5, 0.0), z(0.2, 3.0), z(0.9, -1.0)] {
                    for level in [Some(-4), Some(-1), Some(0), Some(1), Some(3), None] {
                        let a = riesz_convolve_padic(phi, s, level).unwrap();
                        let b = riesz_convolve_padic_direct(phi, s, level).unwrap();
                        assert!((a - b).norm() < 1e-12, "{p} {s} {level:?}: {a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn ring_of_integers_matches_closed_form() {
        // For φ = 1_O and y ∈ O the direct integral is
        // B(s) ∫_O |x|^(s-1) dx = B(s) κ (1 - 1/q)/(1 - q^-s) = A(s).
        let p = place(-1, 3);
        let phi = RadialProfile::ball_indicator(p, 0).unwrap();
        let s = z(0.4, 0.0);
        let (a, _) = kernel_coefficients(&p, s).unwrap();
        for level in [Some(0), Some(2), None] {
            let v = riesz_convolve_padic(&phi, s, level).unwrap();
            assert!((v - a).norm() < 1e-14);
        }
    }

    #[test]
    fn ramified_two_routes() {
        let p = place(-1, 2);
        let phi = RadialProfile::ball_indicator(p, 0).unwrap();
        let s = z(0.5, 0.0);
        let a = riesz_convolve_padic(&phi, s, Some(0)).unwrap();
        let b = riesz_convolve_padic_direct(&phi, s, Some(0)).unwrap();
        assert!((a - b).norm() < 1e-12);
        // At s = 1/2 the different factor d^(1/2-s) is 1.
        let (_, bcoef) = kernel_coefficients(&p, s).unwrap();
        let expected = (1.0 - 0.5f64.sqrt()) / (1.0 - 0.5f64.sqrt());
        assert!((bcoef.re - expected).abs() < 1e-15);
    }

    #[test]
    fn pole_is_reported() {
        let p = place(-1, 3);
        let phi = RadialProfile::ball_indicator(p, 0).unwrap();
        assert!(matches!(
            riesz_convolve_padic(&phi, z(1.0, 0.0), Some(0)),
            Err(Error::Pole(_))
        ));
        let period = 2.0 * std::f64::consts::PI / 9f64.ln();
        assert!(riesz_convolve_padic(&phi, z(1.0, period), Some(0)).is_err());
    }

    #[test]
    fn profile_tail_matches_pointwise_values() {
        let p = place(-1, 5);
        let f = TestFunction::log_bump(5.0, 0.4).unwrap();
        let phi = RadialProfile::from_test_function(p, &f).unwrap();
        let s = z(0.3, 1.0);
        let psi = convolve_profile(&phi, s).unwrap();
        for level in -6..4 {
            let direct = riesz_convolve_padic(&phi, s, Some(level)).unwrap();
            assert!((psi.level_value(level) - direct).norm() < 1e-13, "level {level}");
        }
        let at_zero = riesz_convolve_padic(&phi, s, None).unwrap();
        assert!((psi.value_at_zero() - at_zero).norm() < 1e-15);
    }

    #[test]
    fn semigroup_on_ring_of_integers() {
        let levels = [Some(-3), Some(-1), Some(0), Some(1), Some(4), None];
        for p in [place(-1, 2), place(-1, 3), place(-1, 5), place(-3, 3)] {
            let phi = RadialProfile::ball_indicator(p, 0).unwrap();
            let defect = semigroup_defect_padic(&phi, z(0.2, 0.0), z(0.3, 0.0), &levels).unwrap();
            assert!(defect <= 1e-12, "{p}: {defect}");
            let trivial = semigroup_defect_padic(&phi, z(0.4, 0.0), z(0.0, 0.0), &levels).unwrap();
            assert!(trivial <= 1e-12);
        }
    }

    #[test]
    fn divergent_tail_is_reported() {
        let p = place(-1, 3);
        let phi = RadialProfile::ball_indicator(p, 0).unwrap();
        let psi = convolve_profile(&phi, z(0.6, 0.0)).unwrap();
        assert!(matches!(
            riesz_convolve_padic(&psi, z(0.5, 0.0), Some(0)),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn local_zeta_table() {
        for p in [place(-1, 2), place(-1, 3), place(-1, 5)] {
            let phi = RadialProfile::ball_indicator(p, 0).unwrap();
            let q = p.norm.unwrap() as f64;
            let kappa = if p.kind == PlaceKind::Ramified {
                (p.different_norm as f64).powf(-0.5)
            } else {
                1.0
            };
            for s in [z(0.5, 0.0), z(1.3, 2.0), z(2.0, -7.0)] {
                let expected = kappa / (1.0 - (-s * q.ln()).exp());
                assert!((local_zeta(&phi, s).unwrap() - expected).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn c_factor_closed_form() {
        for p in [place(-1, 2), place(-1, 3), place(-1, 5), place(-2, 2), place(-7, 7)] {
            assert_eq!(c_factor(&p, 0.0).unwrap(), 1.0);
            let q = p.norm.unwrap() as f64;
            for s in [0.01, -0.2, 0.5] {
                let expected = (1.0 - 2.0 / q + q.powf(s - 1.0)) / (1.0 - q.powf(-s - 1.0));
                assert!((c_factor(&p, s).unwrap() - expected).abs() < 1e-14, "{p} {s}");
            }
        }
    }
}
