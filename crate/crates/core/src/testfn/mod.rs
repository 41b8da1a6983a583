//! Test functions on the positive reals, Mellin transforms and the
//! numerical machinery they need.
//!
//! The Mellin transform is `M^s(f) = ∫_0^∞ f(x) x^(s-1) dx`. With this
//! convention the contour integral `(1/2πi)∫ M^s(f) d log((1-q^(s-1))/(1-q^(-s)))`
//! along `Re s = σ ∈ (0,1)` expands, term by term in the two geometric
//! series, into `-log q · Σ_{n≠0} f(q^n) min(1, q^n)` by Mellin inversion
//! `f(x) = (1/2πi)∫ M^s(f) x^(-s) ds`. The derivation is written out in
//! `docs/mellin.md` at the repository root.

pub mod quadrature;
pub mod special;
pub mod vertical;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::numeric::KahanSum;
use quadrature::{integrate_with, Options, QuadResult};

pub use quadrature::integrate;
pub use special::{digamma, gamma, ln_gamma, rgamma, EULER_GAMMA};
pub use vertical::VerticalMellin;

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Zero,
    LogBump { center: f64, radius: f64 },
    Indicator,
    Custom(Evaluator),
}

/// A real function on `(0, ∞)` supported in a compact interval `[a, b]`.
///
/// Log bumps are smooth; indicators (kept for quadrature validation) and
/// custom closures carry a `smooth` flag that callers may consult.
#[derive(Clone)]
pub struct TestFunction {
    shape: Shape,
    support: Option<(f64, f64)>,
    smooth: bool,
    label: String,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("label", &self.label)
            .field("support", &self.support)
            .finish()
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        invalid(format!("{name} must be positive and finite, got {x}"))
    }
}

impl TestFunction {
    /// The zero function.
    pub fn zero() -> Self {
        TestFunction {
            shape: Shape::Zero,
            support: None,
            smooth: true,
            label: "zero".into(),
        }
    }

    /// `exp(-1/(1-u²))` with `u = log(x/center)/radius` for `|u| < 1`.
    pub fn log_bump(center: f64, radius: f64) -> Result<Self> {
        check_positive("center", center)?;
        check_positive("radius", radius)?;
        Ok(TestFunction {
            shape: Shape::LogBump { center, radius },
            support: Some((center * (-radius).exp(), center * radius.exp())),
            smooth: true,
            label: format!("bump:center={center},radius={radius}"),
        })
    }

    /// Indicator of `[a, b]`. Not smooth; useful as a quadrature check.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        check_positive("a", a)?;
        if !(b.is_finite() && b > a) {
            return invalid(format!("indicator needs a < b, got [{a}, {b}]"));
        }
        Ok(TestFunction {
            shape: Shape::Indicator,
            support: Some((a, b)),
            smooth: false,
            label: format!("indicator:a={a},b={b}"),
        })
    }

    /// A caller-supplied function. It must vanish outside `[a, b]`;
    /// evaluation clamps to zero there regardless.
    pub fn custom<F>(label: impl Into<String>, a: f64, b: f64, smooth: bool, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_positive("a", a)?;
        if !(b.is_finite() && b >= a) {
            return invalid(format!("support needs a ≤ b < ∞, got [{a}, {b}]"));
        }
        Ok(TestFunction {
            shape: Shape::Custom(Arc::new(f)),
            support: Some((a, b)),
            smooth,
            label: label.into(),
        })
    }

    /// Parse the `bump:center=<x>,radius=<r>` grammar (also accepts
    /// `zero` and `indicator:a=<x>,b=<y>`).
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "zero" {
            return Ok(Self::zero());
        }
        let (kind, params) = spec
            .split_once(':')
            .ok_or_else(|| Error::InvalidInput(format!("expected <kind>:<params>, got '{spec}'")))?;
        let mut values = std::collections::BTreeMap::new();
        for item in params.split(',') {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("expected key=value, got '{item}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("'{v}' is not a number")))?;
            if values.insert(k.trim().to_string(), v).is_some() {
                return invalid(format!("parameter '{}' given twice", k.trim()));
            }
        }
        let mut take = |key: &str| {
            values
                .remove(key)
                .ok_or_else(|| Error::InvalidInput(format!("missing parameter '{key}' in '{spec}'")))
        };
        let f = match kind.trim() {
            "bump" => {
                let center = take("center")?;
                let radius = take("radius")?;
                Self::log_bump(center, radius)?
            }
            "indicator" => {
                let a = take("a")?;
                let b = take("b")?;
                Self::indicator(a, b)?
            }
            other => return invalid(format!("unknown test function kind '{other}'")),
        };
        if let Some(extra) = values.keys().next() {
            return invalid(format!("unknown parameter '{extra}' in '{spec}'"));
        }
        Ok(f)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.shape, Shape::Zero)
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    /// `[a, b]`, or `None` for the zero function.
    pub fn support(&self) -> Option<(f64, f64)> {
        self.support
    }

    pub fn eval(&self, x: f64) -> f64 {
        let Some((a, b)) = self.support else {
            return 0.0;
        };
        if !(x >= a && x <= b) {
            return 0.0;
        }
        match &self.shape {
            Shape::Zero => 0.0,
            Shape::LogBump { center, radius } => {
                let u = (x / center).ln() / radius;
                let gap = 1.0 - u * u;
                if gap <= 0.0 {
                    0.0
                } else {
                    (-1.0 / gap).exp()
                }
            }
            Shape::Indicator => 1.0,
            Shape::Custom(f) => f(x),
        }
    }

    /// `x ↦ f(c·x)`.
    pub fn dilate(&self, c: f64) -> Result<Self> {
        check_positive("dilation", c)?;
        let Some((a, b)) = self.support else {
            return Ok(Self::zero());
        };
        let inner = self.clone();
        Self::custom(
            format!("({})(x*{c})", self.label),
            a / c,
            b / c,
            self.smooth,
            move |x| inner.eval(c * x),
        )
    }

    /// `α·f + β·g`.
    pub fn combine(alpha: f64, f: &Self, beta: f64, g: &Self) -> Result<Self> {
        let support = match (f.support, g.support) {
            (None, None) => return Ok(Self::zero()),
            (Some(s), None) | (None, Some(s)) => s,
            (Some((a1, b1)), Some((a2, b2))) => (a1.min(a2), b1.max(b2)),
        };
        let (f2, g2) = (f.clone(), g.clone());
        Self::custom(
            format!("{alpha}*({}) + {beta}*({})", f.label, g.label),
            support.0,
            support.1,
            f.smooth && g.smooth,
            move |x| alpha * f2.eval(x) + beta * g2.eval(x),
        )
    }
}

/// A Mellin transform value with its quadrature error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MellinValue {
    pub value: Complex64,
    pub abs_error_estimate: f64,
}

/// Default absolute tolerance for Mellin transforms.
pub const MELLIN_TOL: f64 = 1e-13;

/// `M^s(f) = ∫ f(x) x^(s-1) dx`, evaluated as `∫ f(e^u) e^(us) du` over
/// `[log a, log b]`, split into panels of about two oscillations of
/// `e^(i·Im(s)·u)`.
pub fn mellin(f: &TestFunction, s: Complex64) -> Result<MellinValue> {
    mellin_with(f, s, Options::with_tol(MELLIN_TOL))
}

pub fn mellin_with(f: &TestFunction, s: Complex64, opts: Options) -> Result<MellinValue> {
    let Some((a, b)) = f.support() else {
        return Ok(MellinValue {
            value: Complex64::new(0.0, 0.0),
            abs_error_estimate: 0.0,
        });
    };
    let (lo, hi) = (a.ln(), b.ln());
    if hi <= lo {
        return Ok(MellinValue {
            value: Complex64::new(0.0, 0.0),
            abs_error_estimate: 0.0,
        });
    }
    let periods = s.im.abs() * (hi - lo) / (2.0 * std::f64::consts::PI);
    let panels = ((periods / 2.0).ceil() as usize).max(1);
    let step = (hi - lo) / panels as f64;
    let points: Vec<f64> = (0..=panels)
        .map(|i| if i == panels { hi } else { lo + step * i as f64 })
        .collect();
    let r: QuadResult<Complex64> = quadrature::integrate_panels(
        |u| {
            let fx = f.eval(u.exp());
            if fx == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                (s * u).exp() * fx
            }
        },
        &points,
        opts,
    )?;
    Ok(MellinValue {
        value: r.value,
        abs_error_estimate: r.error,
    })
}

/// `∫ f(x) dx = M^1(f)`, real.
pub fn integral(f: &TestFunction) -> Result<f64> {
    Ok(mellin(f, Complex64::new(1.0, 0.0))?.value.re)
}

/// Upper bound for the truncated part of a vertical-line integral,
/// `∫_T^∞ E(t) w(t) dt`, where `E(t) = sup_{t' ≥ t} |M^(σ+it')(f)|` is the
/// monotone decay envelope of the Mellin transform and `w ≥ 0` a density.
///
/// `E` is sampled on a grid anchored at `t = 0` with spacing a fraction of
/// the oscillation scale `2π/log(b/a)`; sampling continues until the
/// transform has stayed below `floor` for a run of samples, and the
/// running maximum from the right is then taken. The grid does not depend
/// on `T`, so the returned bound is nonincreasing in `T`.
pub fn mellin_tail<W: Fn(f64) -> f64>(
    f: &TestFunction,
    sigma: f64,
    t_from: f64,
    density: W,
) -> Result<f64> {
    let Some((a, b)) = f.support() else {
        return Ok(0.0);
    };
    let width = (b / a).ln().max(1e-3);
    let step = 0.2 / width;
    let floor = 1e-13 * mellin(f, Complex64::new(sigma, 0.0))?.value.norm().max(1e-300);
    const QUIET_RUN: usize = 32;
    const MAX_SAMPLES: usize = 200_000;

    let first = (t_from / step).floor().max(0.0) as usize;
    let mut samples = Vec::new();
    let mut quiet = 0;
    let mut k = first;
    let mut transform = VerticalMellin::new(f, sigma, 2.0 * t_from.max(50.0))?;
    while quiet < QUIET_RUN {
        if samples.len() >= MAX_SAMPLES {
            return Err(Error::Envelope(format!(
                "Mellin transform of {} does not decay below {floor:e} by t = {}",
                f.label(),
                k as f64 * step
            )));
        }
        let t = k as f64 * step;
        if t > transform.height() && f.is_smooth() {
            transform = VerticalMellin::new(f, sigma, 2.0 * t)?;
        }
        let m = transform.at(t)?;
        let mag = m.value.norm() + m.abs_error_estimate;
        quiet = if mag < floor { quiet + 1 } else { 0 };
        samples.push((t, mag));
        k += 1;
    }
    // Running maximum from the right, then a left-endpoint (upper) rule
    // cell by cell. The cell containing T is cut at T.
    let mut envelope = 0.0f64;
    let mut acc = KahanSum::<f64>::new();
    for i in (0..samples.len() - 1).rev() {
        envelope = envelope.max(samples[i].1).max(samples[i + 1].1);
        let (t0, t1) = (samples[i].0.max(t_from), samples[i + 1].0);
        if t1 <= t0 {
            continue;
        }
        // The density may have cusps where it vanishes; a loose relative
        // tolerance suffices for a bound.
        let opts = Options {
            rel: 1e-6,
            ..Options::with_tol(1e-12)
        };
        let r = integrate_with(&density, t0, t1, opts)?;
        acc.add(envelope * r.value);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn log_bump_values() {
        let f = TestFunction::log_bump(2.0, 0.7).unwrap();
        assert!((f.eval(2.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(f.eval(4.5), 0.0);
        let g = TestFunction::log_bump(1.0, 1.0).unwrap();
        assert_eq!(g.eval(E), 0.0);
        assert_eq!(g.eval(1.0 / E), 0.0);
        let (a, b) = f.support().unwrap();
        assert!((a - 2.0 * (-0.7f64).exp()).abs() < 1e-15);
        assert!((b - 2.0 * 0.7f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn bump_rejects_nonpositive_parameters() {
        assert!(TestFunction::log_bump(1.0, 0.0).is_err());
        assert!(TestFunction::log_bump(-1.0, 0.5).is_err());
        assert!(TestFunction::log_bump(1.0, f64::NAN).is_err());
    }

    #[test]
    fn grammar() {
        let f = TestFunction::parse("bump:center=9,radius=0.1").unwrap();
        assert_eq!(f.label(), "bump:center=9,radius=0.1");
        assert!((f.eval(9.0) - (-1.0f64).exp()).abs() < 1e-15);
        let g = TestFunction::parse(" bump:radius=0.5, center=2 ").unwrap();
        assert!(g.support().is_some());
        assert!(TestFunction::parse("bump:center=1,radius=0").is_err());
        assert!(TestFunction::parse("bump:center=1").is_err());
        assert!(TestFunction::parse("bump:center=1,radius=0.3,width=2").is_err());
        assert!(TestFunction::parse("gauss:center=1,radius=0.3").is_err());
        assert!(TestFunction::parse("bump").is_err());
        assert!(TestFunction::parse("zero").unwrap().is_zero());
        let h = TestFunction::parse("indicator:a=1,b=2").unwrap();
        assert_eq!(h.eval(1.5), 1.0);
    }

    #[test]
    fn mellin_of_indicator() {
        let f = TestFunction::indicator(1.0, E).unwrap();
        let m1 = mellin(&f, c(1.0, 0.0)).unwrap();
        assert!((m1.value - (E - 1.0)).norm() < 1e-12);
        let m0 = mellin(&f, c(0.0, 0.0)).unwrap();
        assert!((m0.value - 1.0).norm() < 1e-12);
        let tiny = mellin(&f, c(1e-9, 0.0)).unwrap();
        assert!((tiny.value - 1.0).norm() < 1e-8);
    }

    #[test]
    fn mellin_self_convergence() {
        let f = TestFunction::log_bump(2.0, 0.7).unwrap();
        let s = c(0.5, 14.0);
        let base = mellin(&f, s).unwrap();
        let refined = mellin_with(
            &f,
            s,
            Options {
                tol: 1e-15,
                min_level: 8,
                max_level: 12,
                rel: 0.0,
            },
        )
        .unwrap();
        assert!((base.value - refined.value).norm() < 1e-10);
        assert!(base.abs_error_estimate.is_finite());
    }

    #[test]
    fn mellin_of_zero() {
        let m = mellin(&TestFunction::zero(), c(0.5, 3.0)).unwrap();
        assert_eq!(m.value, c(0.0, 0.0));
    }

    #[test]
    fn vertical_decay() {
        for (center, radius) in [(2.0, 0.7), (3.0, 0.5), (1.0, 0.8)] {
            let f = TestFunction::log_bump(center, radius).unwrap();
            // The transform oscillates with period about 2π/(2·radius), so
            // compare maxima over one period starting at each height.
            let period = std::f64::consts::PI / radius;
            let peak = |sigma: f64, t0: f64| {
                (0..=20)
                    .map(|i| t0 + period * i as f64 / 20.0)
                    .map(|t| mellin(&f, c(sigma, t)).unwrap().value.norm())
                    .fold(0.0, f64::max)
            };
            for sigma in [0.0, 0.5, 1.0] {
                let (at10, at40) = (peak(sigma, 10.0), peak(sigma, 40.0));
                assert!(at40 * 10.0 < at10, "{center} {radius} {sigma}: {at10} {at40}");
            }
        }
    }

    #[test]
    fn tail_is_monotone_in_height() {
        let f = TestFunction::log_bump(2.0, 0.7).unwrap();
        let dens = |t: f64| (t / (2.0 * std::f64::consts::PI)).max(1.0).ln();
        let t60 = mellin_tail(&f, 0.5, 60.0, dens).unwrap();
        let t120 = mellin_tail(&f, 0.5, 120.0, dens).unwrap();
        let t121 = mellin_tail(&f, 0.5, 121.0, dens).unwrap();
        assert!(t60 > t120 && t120 >= t121 && t121 > 0.0);
        assert_eq!(mellin_tail(&TestFunction::zero(), 0.5, 10.0, dens).unwrap(), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn mellin_scaling(scale in 0.3f64..3.0, sre in -0.5f64..1.5, sim in -20.0f64..20.0) {
            let f = TestFunction::log_bump(2.0, 0.6).unwrap();
            let g = f.dilate(scale).unwrap();
            let s = c(sre, sim);
            let lhs = mellin(&g, s).unwrap().value;
            let rhs = (-s * scale.ln()).exp() * mellin(&f, s).unwrap().value;
            prop_assert!((lhs - rhs).norm() < 1e-11, "{} vs {}", lhs, rhs);
        }

        #[test]
        fn mellin_linearity(alpha in -2.0f64..2.0, beta in -2.0f64..2.0, sim in -15.0f64..15.0) {
            let f = TestFunction::log_bump(2.0, 0.7).unwrap();
            let g = TestFunction::log_bump(3.0, 0.4).unwrap();
            let h = TestFunction::combine(alpha, &f, beta, &g).unwrap();
            let s = c(0.5, sim);
            let lhs = mellin(&h, s).unwrap().value;
            let rhs = mellin(&f, s).unwrap().value * alpha + mellin(&g, s).unwrap().value * beta;
            prop_assert!((lhs - rhs).norm() < 1e-11);
        }
    }
}
