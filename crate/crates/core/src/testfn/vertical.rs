//! Mellin transforms along a vertical line `Re s = σ`.
//!
//! With `F(u) = f(e^u) e^(σu)`, `M^(σ+it)(f) = ∫ F(u) e^(itu) du`. When `f`
//! is smooth with compact support, `F` is smooth and compactly supported,
//! and Poisson summation shows that the trapezoidal rule with step `h`
//! commits exactly the aliasing error `Σ_{k≠0} M^(σ+i(t+2πk/h))`. Once
//! `2π/h` is well past the decay scale of the transform this is below
//! rounding, so one table of samples serves every `t` up to a chosen
//! height. Non-smooth functions fall back to adaptive quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{mellin, MellinValue, TestFunction};
use crate::error::{Error, Result};
use crate::numeric::KahanSum;

const MAX_POINTS: usize = 1 << 17;

pub struct VerticalMellin {
    f: TestFunction,
    sigma: f64,
    height: f64,
    grid: Option<Grid>,
}

struct Grid {
    u0: f64,
    h: f64,
    /// `h · F(u0 + k h)`, interior points only.
    samples: Vec<f64>,
    error: f64,
}

impl Grid {
    fn build(f: &TestFunction, sigma: f64, n: usize) -> Grid {
        let (a, b) = f.support().expect("caller checks support");
        let (lo, hi) = (a.ln(), b.ln());
        let h = (hi - lo) / n as f64;
        let samples = (1..n)
            .map(|k| {
                let u = lo + h * k as f64;
                h * f.eval(u.exp()) * (sigma * u).exp()
            })
            .collect();
        Grid {
            u0: lo + h,
            h,
            samples,
            error: 0.0,
        }
    }

    fn eval(&self, t: f64) -> Complex64 {
        let mut acc = KahanSum::<Complex64>::new();
        for (k, &w) in self.samples.iter().enumerate() {
            if w != 0.0 {
                let phase = t * (self.u0 + self.h * k as f64);
                acc.add(Complex64::new(phase.cos(), phase.sin()) * w);
            }
        }
        acc.value()
    }
}

impl VerticalMellin {
    /// Prepare evaluation of `M^(σ+it)(f)` for `|t| ≤ height`.
    pub fn new(f: &TestFunction, sigma: f64, height: f64) -> Result<Self> {
        let mut this = VerticalMellin {
            f: f.clone(),
            sigma,
            height: height.abs(),
            grid: None,
        };
        if f.is_smooth() && f.support().is_some_and(|(a, b)| b > a) {
            this.grid = Some(this.refine()?);
        }
        Ok(this)
    }

    /// Double the point count until the coarse and fine rules agree at
    /// `t = 0` and `t = height`; the fine rule is kept.
    fn refine(&self) -> Result<Grid> {
        let (a, b) = self.f.support().expect("checked by caller");
        let width = (b / a).ln();
        // At least four points per oscillation at the top of the range.
        let mut n = ((4.0 * self.height * width / (2.0 * PI)).ceil() as usize).max(32);
        let mut coarse = Grid::build(&self.f, self.sigma, n);
        loop {
            let fine = Grid::build(&self.f, self.sigma, 2 * n);
            let scale = fine.eval(0.0).norm().max(1e-300);
            let diff = (fine.eval(0.0) - coarse.eval(0.0))
                .norm()
                .max((fine.eval(self.height) - coarse.eval(self.height)).norm());
            if diff <= 1e-14 * scale || diff == 0.0 {
                return Ok(Grid {
                    error: diff.max(4.0 * f64::EPSILON * scale),
                    ..fine
                });
            }
            n *= 2;
            if n > MAX_POINTS {
                return Err(Error::NoConvergence {
                    value: fine.eval(self.height).re,
                    error: diff,
                    evaluations: 2 * n,
                });
            }
            coarse = fine;
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// `M^(σ+it)(f)`. Beyond the prepared height the trapezoidal table is
    /// not trusted and adaptive quadrature is used instead.
    pub fn at(&self, t: f64) -> Result<MellinValue> {
        let s = Complex64::new(self.sigma, t);
        match &self.grid {
            Some(g) if t.abs() <= self.height => Ok(MellinValue {
                value: g.eval(t),
                abs_error_estimate: g.error,
            }),
            _ => mellin(&self.f, s),
        }
    }
}
