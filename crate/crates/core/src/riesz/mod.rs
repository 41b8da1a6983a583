//! Riesz kernels `R_v^s` as convolution operators on radial functions.
//!
//! Finite places use exact shell sums ([`padic`]); the complex place uses
//! polar-coordinate quadrature ([`complex`]). The functions here dispatch
//! on the place and provide the finite-difference oracle for the local
//! generator `d/ds|_{s=0} R_v^(-s) * f|_v(1)`.

pub mod complex;
pub mod padic;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::quadfield::PlaceInfo;
use crate::testfn::TestFunction;

pub use complex::{riesz_convolve_complex, semigroup_defect_complex, Gaussian, Radial};
pub use padic::{
    c_factor, convolve_profile, local_zeta, riesz_convolve_padic, semigroup_defect_padic,
    shell_intersection_measure, RadialProfile,
};

/// `R^s * f|_v` evaluated at `1`.
pub fn convolve_at_one(place: &PlaceInfo, f: &TestFunction, s: Complex64) -> Result<Complex64> {
    if place.is_finite() {
        let phi = RadialProfile::from_test_function(*place, f)?;
        riesz_convolve_padic(&phi, s, Some(0))
    } else {
        riesz_convolve_complex(f, s, 1.0)
    }
}

/// Step sizes used by [`generator_fd`] when called through the default path.
pub const FD_STEP: f64 = 0.02;

/// `d/ds|_{s=0} R^(-s) * f|_v(1)` by central differences with one
/// Richardson step: `D(h) = (R^(-h)*f(1) - R^h*f(1)) / 2h` and
/// `(4 D(h/2) - D(h)) / 3`.
pub fn generator_fd(place: &PlaceInfo, f: &TestFunction, h: f64) -> Result<f64> {
    if !(h > 0.0 && h <= 0.1) {
        return invalid(format!("finite-difference step must lie in (0, 0.1], got {h}"));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    let central = |h: f64| -> Result<f64> {
        let minus = convolve_at_one(place, f, Complex64::new(-h, 0.0))?;
        let plus = convolve_at_one(place, f, Complex64::new(h, 0.0))?;
        Ok((minus - plus).re / (2.0 * h))
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}
