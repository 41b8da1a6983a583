//! Both sides of the explicit formula for one field and test function,
//! printed as the JSON report the CLI writes.
//!
//! cargo run --release --example explicit_formula -- -7 bump:center=3,radius=0.5 120

use explicit_formula::explicit;
use explicit_formula::quadfield::FieldSpec;
use explicit_formula::testfn::TestFunction;
use explicit_formula::zeros::ZeroStore;

fn main() -> explicit_formula::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d: i64 = args.first().and_then(|a| a.parse().ok()).unwrap_or(-4);
    let f = TestFunction::parse(args.get(1).map_or("bump:center=2,radius=0.7", |s| s))?;
    let height: f64 = args.get(2).and_then(|a| a.parse().ok()).unwrap_or(120.0);

    let field = FieldSpec::from_d_or_discriminant(d)?;
    let report = explicit::verify(&field, &f, height, explicit::DEFAULT_TOL, &ZeroStore::from_env()?)?;
    print!("{}", report.to_json());
    eprintln!(
        "lhs {:.10}  rhs {:.10}  |difference| {:.2e}  bound {:.2e}",
        report.lhs_total,
        report.rhs_total(),
        report.discrepancy.abs(),
        report.tolerance + report.tail_estimate
    );
    Ok(())
}
