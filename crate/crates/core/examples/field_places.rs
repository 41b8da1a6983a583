//! Ramification and splitting in an imaginary quadratic field.
//!
//! cargo run --example field_places -- -7 40

use explicit_formula::quadfield::{self, FieldSpec};

fn main() -> explicit_formula::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: i64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(-4);
    let bound: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(30);

    let field = FieldSpec::from_d_or_discriminant(d)?;
    println!("{field}, class number one: {}", field.class_number_one);

    for place in quadfield::ramified_places(&field) {
        println!("ramified {place}, N(d) = {}", place.different_norm);
    }
    for p in quadfield::primes_up_to(bound) {
        let place = quadfield::splitting_type(&field, p)?;
        let chi = quadfield::kronecker(field.discriminant, p)?;
        println!("{p:>4}  chi = {chi:>2}  {place}");
    }
    Ok(())
}
