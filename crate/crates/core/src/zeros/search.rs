//! Zero isolation on the critical line and argument-principle counting.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::lfunc::{hardy_z, l_value, ln_gamma_factor, theta, MAX_HEIGHT};
use super::{LFunctionId, LKind, ZeroList};
use crate::error::{invalid, Error, Result};

/// Absolute bracket width at which bisection stops.
pub const BISECTION_TOL: f64 = 1e-12;

/// Grid refinements attempted before a count mismatch is reported.
const MAX_REFINEMENTS: u32 = 4;

/// Main term of the zero count `N(T)`: `θ(T)/π + 1` for `ζ` and `θ(T)/π`
/// for odd characters, with `θ` the phase of the gamma factor on the line.
pub fn zero_count_estimate(id: &LFunctionId, height: f64) -> Result<f64> {
    let main = theta(id, height)? / PI;
    Ok(match id.kind {
        LKind::RiemannZeta => main + 1.0,
        LKind::Dirichlet => main,
    })
}

/// Zero density `dN/dT ≈ log(qT/2π)/2π`, floored at `0.5` so the grid
/// spacing `0.25/density` never exceeds `0.5`.
fn density(id: &LFunctionId, t: f64) -> f64 {
    let q = id.conductor as f64;
    ((q * t.max(1.0) / (2.0 * PI)).ln() / (2.0 * PI)).max(0.5)
}

/// `arg` of `s(s-1)/2` for `ζ` (the polynomial making `ξ` entire), 0 otherwise.
fn polynomial_arg(id: &LFunctionId, s: Complex64) -> f64 {
    match id.kind {
        LKind::RiemannZeta => s.im.atan2(s.re) + s.im.atan2(s.re - 1.0),
        LKind::Dirichlet => 0.0,
    }
}

/// Continuous change of `arg L` from `2` to `2 + iT` and on to `1/2 + iT`.
fn l_argument(id: &LFunctionId, height: f64) -> Result<f64> {
    // On Re s = 2, |L - 1| ≤ ζ(2) - 1 < 1, so the principal argument is continuous.
    let top = l_value(id, Complex64::new(2.0, height))?;
    let mut arg = top.arg();
    let mut prev = top;
    let mut sigma: f64 = 2.0;
    let mut step: f64 = 0.05;
    while sigma > 0.5 {
        let next_sigma = (sigma - step).max(0.5);
        let next = l_value(id, Complex64::new(next_sigma, height))?;
        let delta = (next / prev).arg();
        if delta.abs() > PI / 4.0 {
            step *= 0.5;
            if step < 1e-9 {
                return Err(Error::Uncertified(format!(
                    "{id}: argument of L varies too fast near {next_sigma} + {height}i"
                )));
            }
            continue;
        }
        arg += delta;
        prev = next;
        sigma = next_sigma;
        step = (step * 1.5).min(0.05);
    }
    Ok(arg)
}

/// `N(T)`, the number of zeros with `0 < γ ≤ T`, from the change of
/// `arg ξ` along `2 → 2 + iT → 1/2 + iT`: the two symmetries of `ξ` make
/// this path a quarter of the boundary of `[-1, 2] × [-T, T]`.
pub fn argument_count(id: &LFunctionId, height: f64) -> Result<usize> {
    if !(height > 0.0 && height <= MAX_HEIGHT) {
        return invalid(format!("height must lie in (0, {MAX_HEIGHT}], got {height}"));
    }
    let end = Complex64::new(0.5, height);
    let total = polynomial_arg(id, end) + ln_gamma_factor(id, end)?.im + l_argument(id, height)?;
    let count = total / PI;
    let rounded = count.round();
    if (count - rounded).abs() > 0.1 || rounded < 0.0 {
        return Err(Error::Uncertified(format!(
            "{id}: argument count {count:.6} at T = {height} is not near an integer (a zero close to T?)"
        )));
    }
    Ok(rounded as usize)
}

fn bisect(id: &LFunctionId, mut lo: f64, mut hi: f64, mut z_lo: f64) -> Result<f64> {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let z_mid = hardy_z(id, mid)?;
        if z_mid == 0.0 {
            return Ok(mid);
        }
        if (z_mid > 0.0) == (z_lo > 0.0) {
            lo = mid;
            z_lo = z_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sign changes of the Hardy function on a grid of spacing
/// `spacing_factor · 0.25/density`, each refined by bisection.
fn scan(id: &LFunctionId, height: f64, spacing_factor: f64) -> Result<Vec<f64>> {
    let mut zeros = Vec::new();
    let mut t = 0.0;
    let mut z = hardy_z(id, t)?;
    while t < height {
        let next = (t + spacing_factor * 0.25 / density(id, t)).min(height);
        let z_next = hardy_z(id, next)?;
        if z == 0.0 && t > 0.0 {
            zeros.push(t);
        } else if (z > 0.0) != (z_next > 0.0) && z_next != 0.0 {
            zeros.push(bisect(id, t, next, z)?);
        }
        t = next;
        z = z_next;
    }
    if z == 0.0 {
        zeros.push(height);
    }
    Ok(zeros)
}

/// Zeros with `0 < γ ≤ height`, certified against [`argument_count`].
/// If the grid misses zeros it is refined; a remaining mismatch is
/// returned with `certified = false`.
pub fn find_zeros(id: &LFunctionId, height: f64) -> Result<ZeroList> {
    let expected = argument_count(id, height)?;
    let mut spacing = 1.0;
    let mut ordinates = scan(id, height, spacing)?;
    for _ in 0..MAX_REFINEMENTS {
        if ordinates.len() == expected {
            break;
        }
        spacing *= 0.5;
        ordinates = scan(id, height, spacing)?;
    }
    Ok(ZeroList {
        id: *id,
        certified: ordinates.len() == expected,
        ordinates,
        height,
        precision: BISECTION_TOL,
    })
}

/// Recheck a list locally: the Hardy function must change sign across
/// every ordinate (within `window` of it) and the list length must equal
/// the argument-principle count.
pub fn certify(list: &ZeroList) -> Result<ZeroList> {
    list.validate()?;
    let expected = argument_count(&list.id, list.height)?;
    let mut ok = list.ordinates.len() == expected;
    for &g in &list.ordinates {
        if !ok {
            break;
        }
        let window = 1e-9 * g.max(1.0);
        let (a, b) = (hardy_z(&list.id, g - window)?, hardy_z(&list.id, g + window)?);
        ok = (a > 0.0) != (b > 0.0) || a == 0.0 || b == 0.0;
    }
    Ok(ZeroList {
        certified: ok,
        ..list.clone()
    })
}
