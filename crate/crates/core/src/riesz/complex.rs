//! Riesz kernel at the complex place.
//!
//! Conventions: `|z|_∞ = z z̄` and `dz` is twice Lebesgue measure. A radial
//! function is written `φ(z) = g(|z|_∞)`. For `|y|² = η²` (η the usual
//! modulus), polar coordinates `x = r e^(iθ)` give
//!
//! ```text
//! R^s * φ(y) = B(s) · 2 ∫_0^∞ r^(2s-1) G(r) dr,
//! G(r) = ∫_0^2π g((η - r)² + 4ηr cos²(θ/2)) dθ,
//! B(s) = (2π)^(2s-1) Γ(1-s)/Γ(s),
//! ```
//!
//! valid for `0 < Re s < 1`. Subtracting `2π g(η²)` on `r ≤ 1` gives
//!
//! ```text
//! R^s * φ(y) = A(s) g(η²) + B(s) · 2 ∫_0^∞ r^(2s-1) [G(r) - 2π g(η²) 1_{r≤1}] dr,
//! A(s) = (2π)^(2s) Γ(1-s)/Γ(1+s),
//! ```
//!
//! which converges for `Re s > -1` since `G(r) - 2π g(η²) = O(r²)`. On
//! `[0, r0]` the bracket is replaced by its Taylor term
//! `2π r² (g'(η²) + η² g''(η²))` (the circle mean of a radial function)
//! and integrated in closed form.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::numeric::KahanSum;
use crate::testfn::quadrature::{integrate_panels, integrate_to_infinity, integrate_with, Options};
use crate::testfn::{ln_gamma, rgamma, TestFunction};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A radial function `φ(z) = g(|z|²)` at the complex place.
pub trait Radial: Sync {
    /// `g(t)` for `t = |z|_∞ ≥ 0`.
    fn value(&self, t: f64) -> Complex64;
    /// `[lo, hi]` in `t` outside which `g` vanishes; `hi` may be infinite.
    fn support(&self) -> (f64, f64);
    /// Interior values of `t` where `g` is not smooth.
    fn breaks(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl Radial for TestFunction {
    fn value(&self, t: f64) -> Complex64 {
        c(self.eval(t))
    }
    fn support(&self) -> (f64, f64) {
        self.support().unwrap_or((1.0, 1.0))
    }
}

/// The self-dual Gaussian `e^(-2π z z̄)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Gaussian;

impl Radial for Gaussian {
    fn value(&self, t: f64) -> Complex64 {
        c((-2.0 * PI * t).exp())
    }
    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

/// A radial function given by a closure, with declared support.
pub struct RadialFn<F> {
    pub f: F,
    pub lo: f64,
    pub hi: f64,
}

impl<F: Fn(f64) -> Complex64 + Sync> Radial for RadialFn<F> {
    fn value(&self, t: f64) -> Complex64 {
        if t < self.lo || t > self.hi {
            return c(0.0);
        }
        (self.f)(t)
    }
    fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// `A(s) = (2π)^(2s) Γ(1-s)/Γ(1+s)`.
pub fn a_coefficient(s: Complex64) -> Result<Complex64> {
    if s == c(0.0) {
        return Ok(c(1.0));
    }
    Ok((s * 2.0 * (2.0 * PI).ln() + ln_gamma(c(1.0) - s)?).exp() * rgamma(s + 1.0))
}

/// `B(s) = (2π)^(2s-1) Γ(1-s)/Γ(s)`.
pub fn b_coefficient(s: Complex64) -> Result<Complex64> {
    Ok(((s * 2.0 - 1.0) * (2.0 * PI).ln() + ln_gamma(c(1.0) - s)?).exp() * rgamma(s))
}

/// Quadrature tolerance for the radial and angular integrals.
pub const DEFAULT_TOL: f64 = 1e-11;

const TAYLOR_RADIUS: f64 = 1e-4;

struct Geometry<'a, G: Radial + ?Sized> {
    g: &'a G,
    eta: f64,
    lo: f64,
    hi: f64,
    breaks: Vec<f64>,
    g0: Complex64,
    tol: f64,
}

impl<'a, G: Radial + ?Sized> Geometry<'a, G> {
    fn new(g: &'a G, eta: f64, tol: f64) -> Self {
        let (lo, hi) = g.support();
        Geometry {
            g,
            eta,
            lo,
            hi,
            breaks: g.breaks(),
            g0: g.value(eta * eta),
            tol,
        }
    }

    /// `t(θ)` written to avoid cancellation near `θ = π`.
    fn t_of(&self, r: f64, theta: f64) -> f64 {
        let d = self.eta - r;
        let h = (0.5 * theta).cos();
        d * d + 4.0 * self.eta * r * h * h
    }

    /// Range of `θ ∈ [0, π]` on which `t(θ) ∈ [lo, hi]`, if any.
    fn theta_range(&self, r: f64) -> Option<(f64, f64)> {
        let a = self.eta * self.eta + r * r;
        let b = 2.0 * self.eta * r;
        let c_hi = if self.hi.is_finite() {
            ((self.hi - a) / b).clamp(-1.0, 1.0)
        } else {
            1.0
        };
        let c_lo = ((self.lo - a) / b).clamp(-1.0, 1.0);
        if c_lo >= c_hi {
            return None;
        }
        Some((c_hi.acos(), c_lo.acos()))
    }

    /// `G(r) - subtract·2π g(η²)`, integrating the difference pointwise so
    /// that small `r` does not cancel catastrophically.
    fn angular(&self, r: f64, subtract: bool) -> Result<Complex64> {
        let g0 = if subtract { self.g0 } else { c(0.0) };
        if self.eta == 0.0 || r == 0.0 {
            let t = self.eta * self.eta + r * r;
            return Ok((self.g.value(t) - g0) * (2.0 * PI));
        }
        let Some((t1, t2)) = self.theta_range(r) else {
            return Ok(-g0 * (2.0 * PI));
        };
        let scale = if subtract { (r * r).min(1.0) } else { 1.0 };
        let mut pts = vec![t1, t2];
        let (a, b) = (self.eta * self.eta + r * r, 2.0 * self.eta * r);
        for &tb in &self.breaks {
            let theta = ((tb - a) / b).clamp(-1.0, 1.0).acos();
            if theta > t1 && theta < t2 {
                pts.push(theta);
            }
        }
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let inside = integrate_panels(
            |theta| self.g.value(self.t_of(r, theta)) - g0,
            &pts,
            // g(t) - g0 carries rounding of order eps·|g0| that no refinement removes.
            Options::with_tol((1e-2 * self.tol * scale).max(1e-14 * g0.norm())),
        )?;
        // Outside the θ-range g vanishes and the integrand is -g0.
        let outside = -g0 * (PI - (t2 - t1));
        Ok((inside.value + outside) * 2.0)
    }

    /// Breakpoints in `r` where the θ-range changes shape.
    fn breakpoints(&self, from: f64) -> Vec<f64> {
        let mut pts = vec![from, 1.0];
        let sl = self.lo.sqrt();
        pts.push((sl - self.eta).abs());
        pts.push(sl + self.eta);
        if self.hi.is_finite() {
            let sh = self.hi.sqrt();
            pts.push((sh - self.eta).abs());
            pts.push(sh + self.eta);
        }
        for &tb in &self.breaks {
            let sb = tb.sqrt();
            pts.push((sb - self.eta).abs());
            pts.push(sb + self.eta);
        }
        pts.retain(|&p| p >= from && p.is_finite());
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1.0));
        pts
    }

    /// Radius beyond which `G` vanishes (infinite for unbounded support).
    fn outer_radius(&self) -> f64 {
        if self.hi.is_finite() {
            self.hi.sqrt() + self.eta
        } else {
            f64::INFINITY
        }
    }

    /// `g'(η²)` and `g''(η²)` by central differences.
    fn derivatives(&self) -> (Complex64, Complex64) {
        let t0 = self.eta * self.eta;
        let h = 1e-3 * t0.max(1e-3);
        let (lo, mid, hi) = (self.g.value(t0 - h), self.g0, self.g.value(t0 + h));
        let (lo2, hi2) = (self.g.value(t0 - 2.0 * h), self.g.value(t0 + 2.0 * h));
        let d1 = (lo2 - hi2 + (hi - lo) * 8.0) / (12.0 * h);
        let d2 = (-lo2 - hi2 + (hi + lo) * 16.0 - mid * 30.0) / (12.0 * h * h);
        (d1, d2)
    }

    /// `∫_from^∞ r^(2s-1) (G(r) - 2π g0 1_{r≤1}) dr`.
    fn radial(&self, s: Complex64, from: f64, subtract: bool) -> Result<Complex64> {
        let power = s * 2.0 - 1.0;
        let integrand = |r: f64| -> Result<Complex64> {
            let weight = (power * r.ln()).exp();
            let bracket = self.angular(r, subtract && r <= 1.0)?;
            Ok(weight * bracket)
        };
        let mut error = None;
        let mut wrap = |r: f64| match integrand(r) {
            Ok(v) => v,
            Err(e) => {
                error.get_or_insert(e);
                c(0.0)
            }
        };
        let opts = Options::with_tol(self.tol);
        let mut acc = KahanSum::<Complex64>::new();
        let outer = self.outer_radius();
        let mut pts = self.breakpoints(from);
        let end = if outer.is_finite() {
            outer.max(1.0)
        } else {
            pts.last().copied().unwrap_or(1.0).max(1.0) * 2.0 + 1.0
        };
        pts.retain(|&p| p <= end);
        pts.push(end);
        pts.dedup();
        acc.add(integrate_panels(&mut wrap, &pts, opts)?.value);
        if !outer.is_finite() {
            let tail = integrate_to_infinity(|u| wrap(end + u), 0.0, opts)?;
            acc.add(tail.value);
        }
        if let Some(e) = error {
            return Err(e);
        }
        Ok(acc.value())
    }
}

/// `R^s * φ(y)` at `|y| = η` (usual modulus) by the subtracted form,
/// `-1 < Re s < 1`.
pub fn riesz_convolve_complex<G: Radial + ?Sized>(g: &G, s: Complex64, eta: f64) -> Result<Complex64> {
    riesz_convolve_complex_with(g, s, eta, DEFAULT_TOL)
}

pub fn riesz_convolve_complex_with<G: Radial + ?Sized>(
    g: &G,
    s: Complex64,
    eta: f64,
    tol: f64,
) -> Result<Complex64> {
    if !(s.re > -1.0 && s.re < 1.0) {
        return invalid(format!("complex Riesz convolution needs -1 < Re s < 1, got {s}"));
    }
    if !(eta >= 0.0 && eta.is_finite()) {
        return invalid(format!("radius must be nonnegative, got {eta}"));
    }
    let geo = Geometry::new(g, eta, tol);
    let a = a_coefficient(s)?;
    let b = b_coefficient(s)?;
    if b == c(0.0) {
        return Ok(a * geo.g0);
    }
    let (d1, d2) = geo.derivatives();
    let lap = d1 + d2 * (eta * eta);
    let e = s * 2.0 + 2.0;
    let taylor = lap * (4.0 * PI) * (e * TAYLOR_RADIUS.ln()).exp() / e;
    let rest = geo.radial(s, TAYLOR_RADIUS, true)? * 2.0;
    Ok(a * geo.g0 + b * (taylor + rest))
}

/// `R^s * φ(y)` by the defining integral, `0 < Re s < 1`.
pub fn riesz_convolve_complex_direct<G: Radial + ?Sized>(
    g: &G,
    s: Complex64,
    eta: f64,
    tol: f64,
) -> Result<Complex64> {
    if !(s.re > 0.0 && s.re < 1.0) {
        return invalid(format!("the direct form needs 0 < Re s < 1, got {s}"));
    }
    let geo = Geometry::new(g, eta, tol);
    let b = b_coefficient(s)?;
    Ok(b * geo.radial(s, 0.0, false)? * 2.0)
}

/// Chebyshev interpolant on one panel.
struct ChebPanel {
    lo: f64,
    hi: f64,
    nodes: Vec<f64>,
    values: Vec<Complex64>,
}

impl ChebPanel {
    fn eval(&self, t: f64) -> Complex64 {
        // Barycentric formula for Chebyshev points of the second kind.
        let n = self.nodes.len() - 1;
        let mut num = c(0.0);
        let mut den = 0.0;
        for (j, (&x, &v)) in self.nodes.iter().zip(&self.values).enumerate() {
            let diff = t - x;
            if diff == 0.0 {
                return v;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n {
                w *= 0.5;
            }
            let w = w / diff;
            num += v * w;
            den += w;
        }
        num / den
    }
}

/// `R^s * φ` as a function of `t = |y|²`: Chebyshev panels on `[0, 4·hi]`
/// and the exact multipole expansion
/// `4π B(s) η^(2s-2) Σ_k ((1-s)_k/k!)² η^(-2k) m_k`, `m_k = ½∫ g(t) t^k dt`,
/// beyond, where `φ` vanishes.
pub struct TabulatedConvolution {
    panels: Vec<ChebPanel>,
    cutoff: f64,
    s: Complex64,
    prefactor: Complex64,
    coefficients: Vec<Complex64>,
}

impl TabulatedConvolution {
    pub fn new(f: &TestFunction, s: Complex64, panels: usize, degree: usize) -> Result<Self> {
        let Some((_, hi)) = f.support() else {
            return invalid("tabulating the convolution of the zero function");
        };
        let cutoff = 4.0 * hi;
        let mut out = Vec::with_capacity(panels);
        for p in 0..panels {
            let lo = cutoff * p as f64 / panels as f64;
            let hi_p = cutoff * (p + 1) as f64 / panels as f64;
            let nodes: Vec<f64> = (0..=degree)
                .map(|j| {
                    let x = (PI * j as f64 / degree as f64).cos();
                    0.5 * (lo + hi_p) + 0.5 * (hi_p - lo) * x
                })
                .collect();
            let values = nodes
                .iter()
                .map(|&t| riesz_convolve_complex(f, s, t.max(0.0).sqrt()))
                .collect::<Result<Vec<_>>>()?;
            out.push(ChebPanel {
                lo,
                hi: hi_p,
                nodes,
                values,
            });
        }
        let prefactor = b_coefficient(s)? * (4.0 * PI);
        let mut coefficients = Vec::new();
        let mut pochhammer = c(1.0);
        let (a, b) = f.support().expect("checked above");
        for k in 0..60usize {
            if k > 0 {
                pochhammer = pochhammer * (c(1.0) - s + (k - 1) as f64) / k as f64;
            }
            let moment = integrate_with(
                |t: f64| f.eval(t) * t.powi(k as i32),
                a,
                b,
                Options::with_tol(1e-14 * b.powi(k as i32)),
            )?
            .value
                * 0.5;
            coefficients.push(pochhammer * pochhammer * moment);
        }
        Ok(TabulatedConvolution {
            panels: out,
            cutoff,
            s,
            prefactor,
            coefficients,
        })
    }

    /// Value at `t = |y|²`.
    pub fn at(&self, t: f64) -> Complex64 {
        if t <= self.cutoff {
            let width = self.cutoff / self.panels.len() as f64;
            let i = ((t / width) as usize).min(self.panels.len() - 1);
            let panel = &self.panels[i];
            debug_assert!(t >= panel.lo - 1e-12 && t <= panel.hi + 1e-12);
            return panel.eval(t);
        }
        let mut acc = c(0.0);
        let mut inv = 1.0;
        for coef in &self.coefficients {
            let term = *coef * inv;
            acc += term;
            if term.norm() < 1e-18 * acc.norm() {
                break;
            }
            inv /= t;
        }
        self.prefactor * ((self.s - 1.0) * t.ln()).exp() * acc
    }
}

impl Radial for TabulatedConvolution {
    fn value(&self, t: f64) -> Complex64 {
        self.at(t)
    }
    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
    fn breaks(&self) -> Vec<f64> {
        self.panels.iter().map(|p| p.hi).collect()
    }
}

/// `max |R^s' * (R^s * φ) - R^(s+s') * φ|` at the given radii.
pub fn semigroup_defect_complex(f: &TestFunction, s: Complex64, s_prime: Complex64, radii: &[f64]) -> Result<f64> {
    if (s + s_prime).re >= 1.0 {
        return invalid("semigroup identity needs Re(s + s') < 1");
    }
    let table = TabulatedConvolution::new(f, s, 24, 20)?;
    let mut worst = 0.0f64;
    for &eta in radii {
        let lhs = riesz_convolve_complex_with(&table, s_prime, eta, 1e-10)?;
        let rhs = riesz_convolve_complex(f, s + s_prime, eta)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// `R^s * φ_∞(y)` computed on the frequency side: with the character
/// `e^(-4πi Re z)`, `φ_∞` is its own transform and the kernel multiplies
/// by `|ξ|^(-s)`, so
/// `R^s * φ_∞(y) = 2 ∫_0^∞ ρ^(1-2s) e^(-2πρ²) ∫_0^2π cos(4πηρ cos θ) dθ dρ`.
pub fn gaussian_multiplier_side(s: Complex64, eta: f64) -> Result<Complex64> {
    if !(s.re < 1.0) {
        return invalid("frequency-side integral needs Re s < 1");
    }
    let opts = Options::with_tol(1e-13);
    let angular = |rho: f64| -> Result<f64> {
        let k = 4.0 * PI * eta * rho;
        let panels = ((k / PI).ceil() as usize).max(1);
        let pts: Vec<f64> = (0..=panels).map(|i| 0.5 * PI * i as f64 / panels as f64).collect();
        Ok(4.0 * integrate_panels(|th: f64| (k * th.cos()).cos(), &pts, opts)?.value)
    };
    let mut error = None;
    let pts: Vec<f64> = (0..=12).map(|i| 0.5 * i as f64).collect();
    let r = integrate_panels(
        |rho: f64| {
            let weight = ((c(1.0) - s * 2.0) * rho.ln()).exp() * (-2.0 * PI * rho * rho).exp();
            match angular(rho) {
                Ok(a) => weight * a,
                Err(e) => {
                    error.get_or_insert(e);
                    c(0.0)
                }
            }
        },
        &pts,
        opts,
    )?;
    if let Some(e) = error {
        return Err(e);
    }
    Ok(r.value * 2.0)
}

/// Stein's Riesz potential `I_{2s}` of the planar Gaussian `e^(-2π|x|²)`
/// (Lebesgue measure on ℝ²) at `|x| = η`, computed from its Fourier
/// multiplier `(2π|ξ|)^(-2s)` with `f̂(ξ) = ∫ f(x) e^(-2πi x·ξ) dx = ½ e^(-π|ξ|²/2)`:
/// `I_{2s} f(η) = π (2π)^(-2s) ∫_0^∞ ρ^(1-2s) e^(-πρ²/2) J_0(2πηρ) dρ`.
pub fn stein_potential_gaussian(s: Complex64, eta: f64) -> Result<Complex64> {
    let opts = Options::with_tol(1e-13);
    let bessel_j0 = |x: f64| -> Result<f64> {
        let panels = ((x / PI).ceil() as usize).max(1);
        let pts: Vec<f64> = (0..=panels).map(|i| PI * i as f64 / panels as f64).collect();
        Ok(integrate_panels(|th: f64| (x * th.sin()).cos(), &pts, opts)?.value / PI)
    };
    let mut error = None;
    let pts: Vec<f64> = (0..=16).map(|i| 0.5 * i as f64).collect();
    let r = integrate_panels(
        |rho: f64| {
            let weight = ((c(1.0) - s * 2.0) * rho.ln()).exp() * (-0.5 * PI * rho * rho).exp();
            match bessel_j0(2.0 * PI * eta * rho) {
                Ok(j) => weight * j,
                Err(e) => {
                    error.get_or_insert(e);
                    c(0.0)
                }
            }
        },
        &pts,
        opts,
    )?;
    if let Some(e) = error {
        return Err(e);
    }
    Ok(r.value * PI * (-s * 2.0 * (2.0 * PI).ln()).exp())
}

/// `∫ φ_∞(x) |x|^s d×x = 2π ∫_0^∞ e^(-2πt) t^(s-1) dt` by quadrature, `Re s > 0`.
pub fn local_zeta_complex(s: Complex64) -> Result<Complex64> {
    if s.re <= 0.0 {
        return invalid(format!("local zeta integral needs Re s > 0, got {s}"));
    }
    let integrand = |t: f64| ((s - 1.0) * t.ln()).exp() * (-2.0 * PI * t).exp();
    let opts = Options::with_tol(1e-14);
    let head = integrate_with(integrand, 0.0, 1.0, opts)?;
    let tail = integrate_to_infinity(integrand, 1.0, opts)?;
    Ok((head.value + tail.value) * (2.0 * PI))
}
