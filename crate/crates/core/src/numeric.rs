//! Small numerical helpers shared by the other modules: compensated
//! summation and fixed-significance formatting.

use std::ops::{Add, Sub};

use num_complex::Complex64;

/// Kahan-compensated running sum.
///
/// Works for any value type with exact-enough `+`/`-`, which in practice
/// means `f64` and `Complex64` (compensation is then componentwise).
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum<T> {
    sum: T,
    carry: T,
}

impl<T> KahanSum<T>
where
    T: Copy + Default + Add<Output = T> + Sub<Output = T>,
{
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: T) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum
    }
}

impl<T> FromIterator<T> for KahanSum<T>
where
    T: Copy + Default + Add<Output = T> + Sub<Output = T>,
{
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn kahan_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<KahanSum<f64>>().value()
}

pub fn kahan_sum_complex<I: IntoIterator<Item = Complex64>>(iter: I) -> Complex64 {
    iter.into_iter().collect::<KahanSum<Complex64>>().value()
}

/// Round `x` to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

/// Positional decimal rendering of `x` with exactly `digits` significant digits.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    let rounded = round_sig(x, digits);
    let magnitude = rounded.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    if !(-6..15).contains(&magnitude) {
        return format!("{:.*e}", digits.saturating_sub(1), x);
    }
    format!("{rounded:.decimals$}")
}

/// `(exp(z) - 1) / z`, accurate near `z = 0`.
pub fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        // Taylor series; five terms reach 1e-18 relative error here.
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for k in 2..8 {
            term = term * z / k as f64;
            acc += term;
        }
        acc
    } else {
        (z.exp() - 1.0) / z
    }
}
