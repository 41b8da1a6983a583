//! Mellin transforms of a log-bump along the critical line, and the decay
//! bound used to truncate vertical integrals.

use explicit_formula::testfn::{integral, mellin, mellin_tail, TestFunction, VerticalMellin};
use num_complex::Complex64;

fn main() -> explicit_formula::Result<()> {
    let f = TestFunction::parse("bump:center=2,radius=0.7")?;
    println!("{}: support {:?}, f(1) = {:.6}", f.label(), f.support(), f.eval(1.0));
    println!("integral = M^1(f) = {:.12}", integral(&f)?);

    let line = VerticalMellin::new(&f, 0.5, 120.0)?;
    for t in [0.0, 14.134725, 50.0, 100.0, 120.0] {
        let fast = line.at(t)?.value;
        let slow = mellin(&f, Complex64::new(0.5, t))?.value;
        println!("t = {t:>9}: M = {fast:+.6e}  |trapezoid - adaptive| = {:.1e}", (fast - slow).norm());
    }

    for height in [60.0, 120.0, 240.0] {
        let tail = mellin_tail(&f, 0.5, height, |t| (t / (2.0 * std::f64::consts::PI)).ln().max(0.0))?;
        println!("tail beyond {height}: {tail:.3e}");
    }
    Ok(())
}
