//! Riesz convolutions at finite and complex places: the delta identity at
//! s = 0, the semigroup law, and the local zeta integrals.

use explicit_formula::quadfield::{discriminant, splitting_type, PlaceInfo};
use explicit_formula::riesz::{self, padic, RadialProfile};
use explicit_formula::testfn::TestFunction;
use num_complex::Complex64;

fn main() -> explicit_formula::Result<()> {
    let field = discriminant(-1)?;
    let f = TestFunction::log_bump(2.0, 0.9)?;
    let s = Complex64::new(0.2, 0.0);
    let s2 = Complex64::new(0.3, 0.5);
    let levels: Vec<Option<i64>> = (-3..=3).map(Some).chain([None]).collect();

    for p in [2, 3, 5] {
        let place = splitting_type(&field, p)?;
        let phi = RadialProfile::from_test_function(place, &f)?;
        let delta = riesz::riesz_convolve_padic(&phi, Complex64::new(0.0, 0.0), Some(0))?;
        let defect = riesz::semigroup_defect_padic(&phi, s, s2, &levels)?;
        let unit = RadialProfile::ball_indicator(place, 0)?;
        let zeta = padic::local_zeta(&unit, Complex64::new(2.0, 0.0))?;
        println!(
            "{place}: R^0*phi(1) - phi(1) = {:.1e}, semigroup defect {defect:.1e}, Z(1_O, 2) = {:.12}",
            (delta - phi.value(Some(0))).norm(),
            zeta.re
        );
    }

    let v = riesz::convolve_at_one(&PlaceInfo::COMPLEX, &f, s)?;
    println!("complex: R^0.2 * f(1) = {v:.10}");
    let defect = riesz::semigroup_defect_complex(&TestFunction::log_bump(1.0, 0.8)?, s, s, &[0.5, 1.0])?;
    println!("complex semigroup defect at two radii: {defect:.1e}");
    Ok(())
}
