//! Tanh-sinh (double exponential) quadrature.
//!
//! Nodes `x = c ± h·(1 - tanh(π/2·sinh t))` cluster doubly exponentially at
//! both endpoints, so integrands with algebraic or logarithmic endpoint
//! singularities converge as fast as smooth ones. Each level halves the
//! step in `t` and reuses every node of the previous level.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::numeric::KahanSum;

/// Values that can be integrated: real or complex.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
    /// Real part, used only for error reporting.
    fn real(&self) -> f64;
}

impl QuadValue for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn real(&self) -> f64 {
        *self
    }
}

impl QuadValue for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn real(&self) -> f64 {
        self.re
    }
}

/// Convergence controls.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Absolute tolerance on the difference of successive levels.
    pub tol: f64,
    /// Relative tolerance, against the magnitude of the current estimate.
    pub rel: f64,
    /// First level at which convergence may be declared.
    pub min_level: usize,
    /// Node budget: the step at the last level is `2^-max_level`.
    pub max_level: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tol: 1e-12,
            rel: 0.0,
            min_level: 3,
            max_level: MAX_LEVEL,
        }
    }
}

impl Options {
    pub fn with_tol(tol: f64) -> Self {
        Options {
            tol,
            ..Options::default()
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

const MAX_LEVEL: usize = 12;
const T_MAX: f64 = 6.1;

/// One abscissa: `y` is the distance from either endpoint on the
/// reference interval [-1, 1] (so the two nodes are `-1 + y` and `1 - y`),
/// `w` the weight including the `π/2·cosh t` Jacobian.
#[derive(Clone, Copy)]
struct Node {
    y: f64,
    w: f64,
}

/// Node tables per level, ordered by increasing `t` (decreasing `y`).
/// Level 0 includes `t = 0`, stored first with `y = 1`.
fn tables() -> &'static [Vec<Node>] {
    static TABLES: OnceLock<Vec<Vec<Node>>> = OnceLock::new();
    TABLES.get_or_init(|| {
        (0..=MAX_LEVEL)
            .map(|level| {
                let h = 0.5f64.powi(level as i32);
                let (start, stride) = if level == 0 { (0usize, 1usize) } else { (1, 2) };
                let mut nodes = Vec::new();
                let mut k = start;
                loop {
                    let t = k as f64 * h;
                    if t > T_MAX {
                        break;
                    }
                    let u = FRAC_PI_2 * t.sinh();
                    let e = (-2.0 * u).exp();
                    let y = 2.0 * e / (1.0 + e);
                    let w = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
                    if y == 0.0 || w == 0.0 {
                        break;
                    }
                    nodes.push(Node { y, w });
                    k += stride;
                }
                nodes
            })
            .collect()
    })
}

/// `∫_a^b g(x) dx` for real `g`, returning `(value, error_estimate)`.
pub fn integrate<F: FnMut(f64) -> f64>(g: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    let r = integrate_with(g, a, b, Options::with_tol(tol))?;
    Ok((r.value, r.error))
}

/// General tanh-sinh driver over a finite interval.
pub fn integrate_with<T, F>(mut g: F, a: f64, b: f64, opts: Options) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if !(a.is_finite() && b.is_finite()) {
        return invalid(format!("integration bounds must be finite, got [{a}, {b}]"));
    }
    if a == b {
        return Ok(QuadResult {
            value: T::default(),
            error: 0.0,
            evaluations: 0,
        });
    }
    if a > b {
        let r = integrate_with(g, b, a, opts)?;
        return Ok(QuadResult {
            value: T::default() - r.value,
            ..r
        });
    }
    let max_level = opts.max_level.min(MAX_LEVEL);
    let half = 0.5 * (b - a);
    let mid = a + half;
    let tables = tables();

    let mut sum = KahanSum::<T>::new();
    let mut abs_sum = 0.0f64;
    let mut evaluations = 0usize;
    let mut previous: Option<T> = None;

    for (level, nodes) in tables.iter().enumerate().take(max_level + 1) {
        for (i, node) in nodes.iter().enumerate() {
            if level == 0 && i == 0 {
                let v = g(mid);
                evaluations += 1;
                if !v.is_finite_value() {
                    return Err(Error::NonFinite(mid));
                }
                sum.add(v * node.w);
                abs_sum += v.magnitude() * node.w;
                continue;
            }
            let offset = half * node.y;
            let left = a + offset;
            let right = b - offset;
            // Nodes collapse onto an endpoint once the offset drops below
            // one ulp there; later nodes in the table only get closer.
            let left_open = left > a;
            let right_open = right < b;
            if !left_open && !right_open {
                break;
            }
            let mut pair = T::default();
            let mut mag = 0.0;
            for (open, x) in [(left_open, left), (right_open, right)] {
                if !open {
                    continue;
                }
                let v = g(x);
                evaluations += 1;
                if !v.is_finite_value() {
                    return Err(Error::NonFinite(x));
                }
                pair = pair + v;
                mag += v.magnitude();
            }
            sum.add(pair * node.w);
            abs_sum += mag * node.w;
        }
        let h = 0.5f64.powi(level as i32);
        let estimate = sum.value() * (h * half);
        let floor = 64.0 * f64::EPSILON * abs_sum * h * half;
        if let Some(prev) = previous {
            let diff = (estimate - prev).magnitude();
            if level >= opts.min_level && diff <= opts.tol.max(floor).max(opts.rel * estimate.magnitude()) {
                return Ok(QuadResult {
                    value: estimate,
                    error: diff.max(floor),
                    evaluations,
                });
            }
            if level == max_level {
                return Err(Error::NoConvergence {
                    value: estimate.real(),
                    error: diff,
                    evaluations,
                });
            }
        }
        previous = Some(estimate);
    }
    unreachable!("loop returns at max_level")
}

/// `∫_a^∞ g(x) dx` through `x = a + u/(1-u)`.
pub fn integrate_to_infinity<T, F>(mut g: F, a: f64, opts: Options) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_with(
        |u| {
            let v = 1.0 - u;
            let x = a + u / v;
            if !x.is_finite() {
                return T::default();
            }
            g(x) * (1.0 / (v * v))
        },
        0.0,
        1.0,
        opts,
    )
}

/// Sum of [`integrate_with`] over consecutive panels `[p_i, p_{i+1}]`.
/// Panel tolerance is the overall tolerance divided by the panel count.
pub fn integrate_panels<T, F>(mut g: F, points: &[f64], opts: Options) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let panels = points.len().saturating_sub(1).max(1);
    let sub = Options {
        tol: opts.tol / panels as f64,
        ..opts
    };
    let mut value = KahanSum::<T>::new();
    let mut error = 0.0;
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let r = integrate_with(&mut g, w[0], w[1], sub)?;
        value.add(r.value);
        error += r.error;
        evaluations += r.evaluations;
    }
    Ok(QuadResult {
        value: value.value(),
        error,
        evaluations,
    })
}
