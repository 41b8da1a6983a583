//! Local generators `W_v(f) = d/ds|_{s=0} R_v^(-s) * f|_v(1)`.
//!
//! Each place has three independent routes: a closed form, a truncated
//! vertical-line integral of the Mellin transform against the logarithmic
//! derivative of the local factor ratio, and a finite difference of the
//! Riesz convolution itself.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::numeric::KahanSum;
use crate::quadfield::{PlaceInfo, PlaceKind};
use crate::riesz::{generator_fd, FD_STEP};
use crate::testfn::quadrature::{integrate_panels, Options};
use crate::testfn::{digamma, mellin_tail, TestFunction, VerticalMellin, EULER_GAMMA};

pub use crate::riesz::c_factor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    Contour,
    FiniteDifference,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::ClosedForm => "closed_form",
            Route::Contour => "contour",
            Route::FiniteDifference => "finite_difference",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalTerm {
    pub place: PlaceInfo,
    pub value: f64,
    pub route: Route,
    pub error_estimate: f64,
    /// Set when a contour tail estimate exceeds the requested tolerance.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl LocalTerm {
    fn new(place: PlaceInfo, value: f64, route: Route, error_estimate: f64) -> Self {
        LocalTerm {
            place,
            value,
            route,
            error_estimate,
            warning: None,
        }
    }
}

/// `-log q · Σ_{n≠0} f(q^n) min(1, q^n)` over the powers of `q` in the support.
fn prime_power_sum(q: u64, f: &TestFunction) -> f64 {
    let Some((a, b)) = f.support() else {
        return 0.0;
    };
    let ln_q = (q as f64).ln();
    let lo = (a.ln() / ln_q).floor() as i32 - 1;
    let hi = (b.ln() / ln_q).ceil() as i32 + 1;
    let mut acc = KahanSum::<f64>::new();
    for n in lo..=hi {
        if n == 0 {
            continue;
        }
        let x = (q as f64).powi(n);
        acc.add(f.eval(x) * x.min(1.0));
    }
    -ln_q * acc.value()
}

fn finite_norm(place: &PlaceInfo) -> Result<u64> {
    place
        .norm
        .ok_or_else(|| crate::Error::InvalidInput("finite place expected, got the complex place".into()))
}

/// `W_v` at a split or inert place.
pub fn w_unramified(place: &PlaceInfo, f: &TestFunction) -> Result<LocalTerm> {
    if !matches!(place.kind, PlaceKind::Split | PlaceKind::Inert) {
        return invalid(format!("{place} is not unramified"));
    }
    let q = finite_norm(place)?;
    Ok(LocalTerm::new(*place, prime_power_sum(q, f), Route::ClosedForm, 0.0))
}

/// `W_v` at a ramified place: `log N(d_v) f(1)` plus the prime-power sum.
pub fn w_ramified(place: &PlaceInfo, f: &TestFunction) -> Result<LocalTerm> {
    if place.kind != PlaceKind::Ramified {
        return invalid(format!("{place} is not ramified"));
    }
    let q = finite_norm(place)?;
    let value = (place.different_norm as f64).ln() * f.eval(1.0) + prime_power_sum(q, f);
    Ok(LocalTerm::new(*place, value, Route::ClosedForm, 0.0))
}

/// Radius around `u = 1` inside which the difference quotients of
/// [`w_complex`] are replaced by their Taylor expansions.
const SERIES_RADIUS: f64 = 1e-4;

/// `W_∞` from the five-term expression
///
/// ```text
/// -2(γ + log 2π) f(1) - ∫_1^∞ f(u) du/u - ∫_1^∞ (f(u) - f(1))/(u - 1) du/u
///                     - ∫_0^1 f(u) du  - ∫_0^1 (u f(u) - f(1))/(1 - u) du.
/// ```
pub fn w_complex(f: &TestFunction) -> Result<LocalTerm> {
    let place = PlaceInfo::COMPLEX;
    let Some((a, b)) = f.support() else {
        return Ok(LocalTerm::new(place, 0.0, Route::ClosedForm, 0.0));
    };
    if !f.is_smooth() {
        return invalid(format!("{} is not smooth; the archimedean generator needs f′(1)", f.label()));
    }
    let f1 = f.eval(1.0);
    let h = 1e-3;
    let (m2, m1, p1, p2) = (f.eval(1.0 - 2.0 * h), f.eval(1.0 - h), f.eval(1.0 + h), f.eval(1.0 + 2.0 * h));
    let d1 = (m2 - p2 + 8.0 * (p1 - m1)) / (12.0 * h);
    let d2 = (-m2 - p2 + 16.0 * (p1 + m1) - 30.0 * f1) / (12.0 * h * h);
    let opts = Options::with_tol(1e-12);

    // Upper half: f(u)/u + (f(u) - f(1))/(u(u-1)), zero-tail closed form beyond b.
    let upper = |u: f64| -> f64 {
        let delta = u - 1.0;
        let quotient = if delta.abs() < SERIES_RADIUS {
            d1 + 0.5 * d2 * delta
        } else {
            (f.eval(u) - f1) / delta
        };
        (f.eval(u) + quotient) / u
    };
    // Lower half: f(u) + (u f(u) - f(1))/(1 - u), zero-head closed form below a.
    let lower = |u: f64| -> f64 {
        let delta = u - 1.0;
        let quotient = if delta.abs() < SERIES_RADIUS {
            -(f1 + d1) - (d1 + 0.5 * d2) * delta
        } else {
            (u * f.eval(u) - f1) / (1.0 - u)
        };
        f.eval(u) + quotient
    };

    let mut error = 0.0;
    let mut upper_value = 0.0;
    if b > 1.0 {
        let from = a.max(1.0);
        let from = if f1 != 0.0 { 1.0 } else { from };
        let mut pts = vec![from];
        for p in [1.0 + SERIES_RADIUS, 1.0 + 10.0 * SERIES_RADIUS] {
            if p > from && p < b {
                pts.push(p);
            }
        }
        pts.push(b);
        let r = integrate_panels(upper, &pts, opts)?;
        upper_value = r.value - f1 * (b / (b - 1.0)).ln();
        error += r.error;
    }
    let mut lower_value = 0.0;
    if a < 1.0 {
        let to = if f1 != 0.0 { 1.0 } else { b.min(1.0) };
        let mut pts = vec![a];
        for p in [1.0 - 10.0 * SERIES_RADIUS, 1.0 - SERIES_RADIUS] {
            if p > a && p < to {
                pts.push(p);
            }
        }
        pts.push(to);
        let r = integrate_panels(lower, &pts, opts)?;
        lower_value = r.value + f1 * (1.0 - a).ln();
        error += r.error;
    }
    let value = -2.0 * (EULER_GAMMA + (2.0 * PI).ln()) * f1 - upper_value - lower_value;
    Ok(LocalTerm::new(place, value, Route::ClosedForm, error))
}

/// Closed form for any place.
pub fn w_closed_form(place: &PlaceInfo, f: &TestFunction) -> Result<LocalTerm> {
    match place.kind {
        PlaceKind::Split | PlaceKind::Inert => w_unramified(place, f),
        PlaceKind::Ramified => w_ramified(place, f),
        PlaceKind::Complex => w_complex(f),
    }
}

/// Richardson-extrapolated finite difference of `R^(-s) * f|_v(1)` at `s = 0`.
/// The error estimate is the change between steps `h` and `h/2`.
pub fn w_finite_difference(place: &PlaceInfo, f: &TestFunction, h: f64) -> Result<LocalTerm> {
    let value = generator_fd(place, f, h)?;
    let finer = generator_fd(place, f, 0.5 * h)?;
    Ok(LocalTerm::new(*place, finer, Route::FiniteDifference, (finer - value).abs()))
}

/// [`w_finite_difference`] with the default step.
pub fn w_finite_difference_default(place: &PlaceInfo, f: &TestFunction) -> Result<LocalTerm> {
    w_finite_difference(place, f, FD_STEP)
}

/// `d/ds log` of the local factor ratio along the contour.
///
/// Unramified: `(1 - q^(s-1))/(1 - q^(-s))`; ramified adds `N(d)^(s-1/2)`;
/// complex: `ζ_C(s)/ζ_C(1-s)` with `ζ_C(s) = (2π)^(1-s) Γ(s)`.
pub fn log_derivative_density(place: &PlaceInfo, s: Complex64) -> Result<Complex64> {
    match place.norm {
        Some(q) => {
            let ln_q = (q as f64).ln();
            let up = ((s - 1.0) * ln_q).exp();
            let down = (-s * ln_q).exp();
            let unramified = -ln_q * up / (1.0 - up) - ln_q * down / (1.0 - down);
            Ok(unramified + (place.different_norm as f64).ln())
        }
        None => Ok(digamma(s)? + digamma(Complex64::new(1.0, 0.0) - s)? - 2.0 * (2.0 * PI).ln()),
    }
}

/// Controls for [`w_contour_with`].
#[derive(Clone, Copy, Debug)]
pub struct ContourOptions {
    /// Absolute tolerance for the truncated integral.
    pub tol: f64,
    /// A warning is attached when the tail estimate exceeds this.
    pub warn_above: f64,
}

impl Default for ContourOptions {
    fn default() -> Self {
        ContourOptions {
            tol: 1e-7,
            warn_above: 1e-6,
        }
    }
}

/// `(1/2πi)∫_{σ-iT}^{σ+iT} M^s(f) d log(local factor ratio)`.
pub fn w_contour(place: &PlaceInfo, f: &TestFunction, sigma: f64, height: f64) -> Result<LocalTerm> {
    w_contour_with(place, f, sigma, height, ContourOptions::default())
}

pub fn w_contour_with(
    place: &PlaceInfo,
    f: &TestFunction,
    sigma: f64,
    height: f64,
    opts: ContourOptions,
) -> Result<LocalTerm> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return invalid(format!("contour abscissa must lie in (0, 1), got {sigma}"));
    }
    if !(height > 0.0 && height.is_finite()) {
        return invalid(format!("truncation height must be positive, got {height}"));
    }
    let Some((a, b)) = f.support() else {
        return Ok(LocalTerm::new(*place, 0.0, Route::Contour, 0.0));
    };
    // The integrand is Re(M · density)/π on [0, T] (conjugate symmetry
    // folds the lower half onto the upper).
    let transform = VerticalMellin::new(f, sigma, height)?;
    let mut failure = None;
    let integrand = |t: f64| -> f64 {
        let s = Complex64::new(sigma, t);
        let value = transform
            .at(t)
            .and_then(|m| Ok(m.value * log_derivative_density(place, s)?));
        match value {
            Ok(v) => v.re / PI,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    // Panels short against both oscillation scales: the Mellin phase
    // t·log x over the support and the period 2π/log q of the density.
    let frequency = a.ln().abs().max(b.ln().abs()) + place.norm.map_or(0.0, |q| (q as f64).ln());
    let width = 1.0 / (1.0 + frequency);
    let panels = (height / width).ceil() as usize;
    let pts: Vec<f64> = (0..=panels).map(|i| height * i as f64 / panels as f64).collect();
    let r = integrate_panels(integrand, &pts, Options::with_tol(opts.tol));
    if let Some(e) = failure {
        return Err(e);
    }
    let r = r?;
    let tail = mellin_tail(f, sigma, height, |t| {
        log_derivative_density(place, Complex64::new(sigma, t)).map_or(f64::INFINITY, |d| d.norm()) / PI
    })?;
    let mut term = LocalTerm::new(*place, r.value, Route::Contour, r.error + tail);
    if tail > opts.warn_above {
        term.warning = Some(format!(
            "truncation tail estimate {tail:.3e} at T = {height} exceeds {:.1e}",
            opts.warn_above
        ));
    }
    Ok(term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::{discriminant, splitting_type};

    fn place(d: i64, p: u64) -> PlaceInfo {
        splitting_type(&discriminant(d).unwrap(), p).unwrap()
    }

    /// Piecewise-linear hat through prescribed values at a few nodes.
    fn hat(points: &'static [(f64, f64)], a: f64, b: f64) -> TestFunction {
        TestFunction::custom("hat", a, b, false, move |x| {
            let mut prev = (a, 0.0);
            for &(px, py) in points.iter().chain(std::iter::once(&(b, 0.0))) {
                if x <= px {
                    let t = (x - prev.0) / (px - prev.0);
                    return prev.1 + t * (py - prev.1);
                }
                prev = (px, py);
            }
            0.0
        })
        .unwrap()
    }

    #[test]
    fn unramified_examples() {
        let q9 = place(-1, 3);
        let f = TestFunction::custom("far", 4.0, 8.0, true, |x| x).unwrap();
        assert_eq!(w_unramified(&q9, &f).unwrap().value, 0.0);

        let p2 = place(-7, 2);
        let f = hat(&[(0.5, 0.2), (1.0, 1.0), (2.0, 0.3), (4.0, 0.1)], 0.4, 5.0);
        let w = w_unramified(&p2, &f).unwrap().value;
        assert!((w + 2f64.ln() * 0.5).abs() < 1e-14, "{w}");

        let f = TestFunction::log_bump(9.0, 0.1).unwrap();
        let w = w_unramified(&q9, &f).unwrap().value;
        assert!((w + 9f64.ln() * (-1f64).exp()).abs() < 1e-15);
        assert!((w + 0.808312).abs() < 2e-6);
    }

    #[test]
    fn ramified_examples() {
        let p2 = place(-1, 2);
        let f = hat(&[(0.5, 0.2), (1.0, 1.0), (2.0, 0.3), (4.0, 0.1)], 0.4, 5.0);
        let w = w_ramified(&p2, &f).unwrap().value;
        assert!((w - (4f64.ln() - 2f64.ln() * 0.5)).abs() < 1e-14);
        assert!((w - 1.039721).abs() < 1e-6);

        let p3 = place(-3, 3);
        let f = TestFunction::log_bump(1.0, 0.2).unwrap();
        let w = w_ramified(&p3, &f).unwrap().value;
        assert!((w - 3f64.ln() * (-1f64).exp()).abs() < 1e-15);
        assert!((w - 0.404158).abs() < 3e-6);

        let f = TestFunction::log_bump(1.5, 0.05).unwrap();
        assert_eq!(w_ramified(&p3, &f).unwrap().value, 0.0);
        assert!(w_ramified(&place(-1, 3), &f).is_err());
        assert!(w_unramified(&p3, &f).is_err());
    }

    #[test]
    fn complex_zero_and_right_support() {
        assert_eq!(w_complex(&TestFunction::zero()).unwrap().value, 0.0);
        // Supported in (1, ∞): the five terms collapse to -∫ f(u)/(u-1) du.
        let f = TestFunction::log_bump(3.0, 0.5).unwrap();
        let (a, b) = f.support().unwrap();
        let (direct, _) = crate::testfn::integrate(|u| f.eval(u) / (u - 1.0), a, b, 1e-13).unwrap();
        let w = w_complex(&f).unwrap().value;
        assert!((w + direct).abs() < 1e-11, "{w} {direct}");
        // Supported in (0, 1): -∫ f(u)/(1-u) du.
        let f = TestFunction::log_bump(0.4, 0.5).unwrap();
        let (a, b) = f.support().unwrap();
        let (direct, _) = crate::testfn::integrate(|u| f.eval(u) / (1.0 - u), a, b, 1e-13).unwrap();
        assert!((w_complex(&f).unwrap().value + direct).abs() < 1e-11);
    }

    #[test]
    fn complex_rejects_non_smooth() {
        let f = TestFunction::indicator(0.5, 2.0).unwrap();
        assert!(w_complex(&f).is_err());
    }

    #[test]
    fn support_locality_at_finite_places() {
        // Adding a bump that avoids 1 and every power of 3 changes nothing.
        let p3 = place(-3, 3);
        let base = TestFunction::log_bump(3.0, 0.4).unwrap();
        let noise = TestFunction::log_bump(5.0, 0.2).unwrap();
        let mixed = TestFunction::combine(1.0, &base, 0.7, &noise).unwrap();
        assert_eq!(
            w_ramified(&p3, &base).unwrap().value,
            w_ramified(&p3, &mixed).unwrap().value
        );
    }

    #[test]
    fn contour_of_zero_is_zero() {
        let w = w_contour(&PlaceInfo::COMPLEX, &TestFunction::zero(), 0.5, 200.0).unwrap();
        assert_eq!(w.value, 0.0);
        assert!(w_contour(&PlaceInfo::COMPLEX, &TestFunction::zero(), 1.5, 200.0).is_err());
    }

    #[test]
    fn contour_matches_closed_form() {
        let f = TestFunction::log_bump(2.0, 0.9).unwrap();
        for pl in [place(-1, 2), place(-1, 5), place(-7, 2), PlaceInfo::COMPLEX] {
            let closed = w_closed_form(&pl, &f).unwrap().value;
            let contour = w_contour(&pl, &f, 0.5, 200.0).unwrap();
            assert!(
                (closed - contour.value).abs() < 1e-6,
                "{pl}: {closed} vs {} (tail {:e})",
                contour.value,
                contour.error_estimate
            );
            assert!((closed - contour.value).abs() <= contour.error_estimate);
        }
    }

    #[test]
    fn contour_is_independent_of_sigma() {
        let f = TestFunction::log_bump(3.0, 1.0).unwrap();
        let pl = place(-1, 3);
        let lo = w_contour(&pl, &f, 0.3, 150.0).unwrap();
        let hi = w_contour(&pl, &f, 0.7, 150.0).unwrap();
        assert!((lo.value - hi.value).abs() <= lo.error_estimate + hi.error_estimate + 1e-9);
    }

    #[test]
    fn finite_difference_matches_closed_form() {
        let f = TestFunction::log_bump(2.0, 0.5).unwrap();
        for pl in [place(-1, 2), place(-7, 2), PlaceInfo::COMPLEX] {
            let closed = w_closed_form(&pl, &f).unwrap().value;
            let fd = w_finite_difference_default(&pl, &f).unwrap().value;
            assert!((closed - fd).abs() < 1e-5, "{pl}: {closed} vs {fd}");
        }
        let f = TestFunction::log_bump(9.0, 0.3).unwrap();
        let pl = place(-1, 3);
        let closed = w_unramified(&pl, &f).unwrap().value;
        let fd = w_finite_difference_default(&pl, &f).unwrap().value;
        assert!((closed - fd).abs() < 1e-5, "{closed} vs {fd}");
    }

    #[test]
    fn c_factor_is_one_at_zero() {
        for pl in [place(-1, 2), place(-1, 3), place(-1, 5), place(-2, 2)] {
            assert_eq!(c_factor(&pl, 0.0).unwrap(), 1.0);
        }
    }
}
