//! The local term W_v(f) at every kind of place by the closed form, the
//! contour integral and the finite difference of the Riesz convolution.
//!
//! cargo run --release --example local_terms -- bump:center=3,radius=1

use explicit_formula::localterms::{self, c_factor};
use explicit_formula::quadfield::{discriminant, splitting_type, PlaceInfo};
use explicit_formula::testfn::TestFunction;

fn main() -> explicit_formula::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "bump:center=2,radius=0.9".into());
    let f = TestFunction::parse(&spec)?;
    let gaussian = discriminant(-1)?;
    let places = [
        splitting_type(&gaussian, 2)?,
        splitting_type(&gaussian, 3)?,
        splitting_type(&gaussian, 5)?,
        PlaceInfo::COMPLEX,
    ];
    println!("{:<24} {:>16} {:>16} {:>16}", "place", "closed form", "contour", "finite diff");
    for place in &places {
        let closed = localterms::w_closed_form(place, &f)?;
        let contour = localterms::w_contour(place, &f, 0.5, 200.0)?;
        let fd = localterms::w_finite_difference_default(place, &f)?;
        println!(
            "{:<24} {:>16.10} {:>16.10} {:>16.10}",
            place.to_string(),
            closed.value,
            contour.value,
            fd.value
        );
    }

    let p3 = splitting_type(&gaussian, 3)?;
    for h in [0.02, 0.01, 0.005] {
        println!("c({h}) at {p3}: (c - 1)/h^2 = {:.8}", (c_factor(&p3, h)? - 1.0) / (h * h));
    }
    Ok(())
}
