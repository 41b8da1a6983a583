//! End-to-end acceptance run: one line per criterion, nonzero exit on any failure.
//!
//! Run alone with `cargo test --test acceptance`.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::thread;
use std::time::{Duration, Instant};

use explicit_formula::explicit;
use explicit_formula::localterms::{w_closed_form, w_contour, w_finite_difference_default};
use explicit_formula::quadfield::{ramified_places, splitting_type, FieldSpec, PlaceInfo, PlaceKind};
use explicit_formula::riesz::complex::riesz_convolve_complex;
use explicit_formula::riesz::padic::local_zeta;
use explicit_formula::riesz::{c_factor, riesz_convolve_padic, semigroup_defect_complex, semigroup_defect_padic, RadialProfile};
use explicit_formula::testfn::{gamma, TestFunction};
use explicit_formula::zeros::{self, LFunctionId, ZeroStore};
use explicit_formula::Result;
use num_complex::Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn field(d: i64) -> FieldSpec {
    FieldSpec::from_d_or_discriminant(d).unwrap()
}

fn place(d: i64, p: u64) -> PlaceInfo {
    splitting_type(&field(d), p).unwrap()
}

fn bump(c: f64, r: f64) -> TestFunction {
    TestFunction::log_bump(c, r).unwrap()
}

fn explicit_formula_closes() -> Result<Outcome> {
    let start = Instant::now();
    let store = ZeroStore::in_memory();
    let mut worst_ratio = 0.0f64;
    let mut failures = Vec::new();
    for d in [-3, -4, -7, -8, -11] {
        for f in [bump(2.0, 0.7), bump(3.0, 0.5)] {
            let r = explicit::verify(&field(d), &f, 120.0, 1e-4, &store)?;
            worst_ratio = worst_ratio.max(r.discrepancy.abs() / (1e-4 + r.tail_estimate));
            if !r.pass {
                failures.push(format!("D={d} {}: {:e}", f.label(), r.discrepancy));
            }
        }
    }
    let elapsed = start.elapsed();
    Ok(Outcome {
        pass: failures.is_empty() && elapsed < Duration::from_secs(600),
        detail: format!(
            "10 runs, max |discrepancy|/(tol + tail) = {worst_ratio:.3}, {:.1}s {}",
            elapsed.as_secs_f64(),
            failures.join("; ")
        ),
    })
}

fn three_routes_agree() -> Result<Outcome> {
    let places = [place(-4, 2), place(-3, 3), place(-7, 2), place(-4, 5), place(-4, 3), PlaceInfo::COMPLEX];
    let battery = [(2.0, 0.9), (3.0, 1.0), (1.0, 0.8), (9.0, 1.0), (5.0, 1.2), (0.5, 1.0)];
    let results: Vec<Result<(f64, f64)>> = thread::scope(|scope| {
        let handles: Vec<_> = places
            .iter()
            .map(|pl| {
                scope.spawn(move || -> Result<(f64, f64)> {
                    let (mut contour, mut fd) = (0.0f64, 0.0f64);
                    for &(c, r) in &battery {
                        let f = bump(c, r);
                        let closed = w_closed_form(pl, &f)?.value;
                        contour = contour.max((closed - w_contour(pl, &f, 0.5, 200.0)?.value).abs());
                        fd = fd.max((closed - w_finite_difference_default(pl, &f)?.value).abs());
                    }
                    Ok((contour, fd))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let (mut contour, mut fd) = (0.0f64, 0.0f64);
    for r in results {
        let (c, f) = r?;
        contour = contour.max(c);
        fd = fd.max(f);
    }
    Ok(Outcome {
        pass: contour <= 1e-6 && fd <= 1e-5,
        detail: format!("6 places x 6 functions, max |closed - contour| = {contour:.2e}, max |closed - fd| = {fd:.2e}"),
    })
}

fn semigroup() -> Result<Outcome> {
    let levels: Vec<Option<i64>> = (-3..=3).map(Some).chain(std::iter::once(None)).collect();
    let pairs = [
        (z(0.2, 0.0), z(0.3, 0.0)),
        (z(-0.4, 0.0), z(0.6, 0.0)),
        (z(0.1, 2.0), z(0.35, -1.0)),
        (z(0.45, 0.5), z(0.45, 0.5)),
        (z(-1.2, 0.0), z(0.9, 3.0)),
    ];
    let mut padic = 0.0f64;
    for pl in [place(-4, 2), place(-4, 3), place(-4, 5), place(-3, 3), place(-7, 7), place(-8, 2)] {
        let profiles = [
            RadialProfile::ball_indicator(pl, 0)?,
            RadialProfile::ball_indicator(pl, -1)?,
            RadialProfile::from_test_function(pl, &bump(2.0, 0.9))?,
        ];
        for phi in &profiles {
            for &(s, sp) in &pairs {
                padic = padic.max(semigroup_defect_padic(phi, s, sp, &levels)?);
            }
        }
    }
    let complex = semigroup_defect_complex(&bump(1.0, 0.8), z(0.2, 0.0), z(0.2, 0.0), &[0.3, 0.8, 1.0, 1.5, 2.5])?;
    Ok(Outcome {
        pass: padic <= 1e-12 && complex <= 1e-6,
        detail: format!("p-adic defect {padic:.2e} (6 places, 3 profiles, 5 pairs, 8 levels), complex defect {complex:.2e} at 5 radii"),
    })
}

fn delta_identity() -> Result<Outcome> {
    let mut exact = true;
    for pl in [place(-4, 2), place(-4, 3), place(-4, 5), place(-3, 3), place(-11, 11)] {
        for phi in [
            RadialProfile::ball_indicator(pl, 0)?,
            RadialProfile::from_test_function(pl, &bump(3.0, 1.5))?,
            RadialProfile::from_real(pl, -2, &[0.5, -1.0, 2.0, 0.25], 0.125)?,
        ] {
            for level in (-5..=4).map(Some).chain(std::iter::once(None)) {
                exact &= riesz_convolve_padic(&phi, z(0.0, 0.0), level)? == phi.value(level);
            }
        }
    }
    let mut complex = 0.0f64;
    for f in [bump(2.0, 0.5), bump(1.0, 0.8)] {
        for eta in [0.0, 0.4, 0.9, 1.0, 1.3, 2.0] {
            let v = riesz_convolve_complex(&f, z(0.0, 0.0), eta)?;
            complex = complex.max((v - f.eval(eta * eta)).norm());
        }
    }
    Ok(Outcome {
        pass: exact && complex <= 1e-8,
        detail: format!("finite places exact: {exact}, complex max deviation {complex:.2e}"),
    })
}

fn local_zeta_table() -> Result<Outcome> {
    let samples = [
        z(0.3, 0.0),
        z(0.5, 0.0),
        z(1.0, 0.0),
        z(1.7, 0.0),
        z(2.5, 0.0),
        z(0.5, 5.0),
        z(0.8, -3.0),
        z(1.2, 2.5),
        z(3.0, 1.0),
        z(0.25, -0.75),
    ];
    let mut worst = 0.0f64;
    // Ramified, Q_p (split), unramified (inert).
    for pl in [place(-4, 2), place(-3, 3), place(-8, 2), place(-4, 5), place(-7, 2), place(-4, 3), place(-3, 2)] {
        let q = pl.norm.unwrap() as f64;
        let kappa = match pl.kind {
            PlaceKind::Ramified => (pl.different_norm as f64).powf(-0.5),
            _ => 1.0,
        };
        let phi = RadialProfile::ball_indicator(pl, 0)?;
        for &s in &samples {
            let expected = kappa / (1.0 - (-s * q.ln()).exp());
            worst = worst.max((local_zeta(&phi, s)? - expected).norm() / expected.norm());
        }
    }
    // The quadrature for the complex row cancels like e^(π|Im s|/2), so the
    // samples stay at |Im s| ≤ 5.
    for &s in &samples {
        let expected = ((1.0 - s) * (2.0 * PI).ln()).exp() * gamma(s)?;
        let got = explicit_formula::riesz::complex::local_zeta_complex(s)?;
        worst = worst.max((got - expected).norm() / expected.norm());
    }
    let mut different = 0.0f64;
    for d in [-3, -4, -7, -8, -11, -19, -43, -67, -163, -15, -20, -24, -35, -84] {
        let k = field(d);
        let sum: f64 = ramified_places(&k).iter().map(|p| (p.different_norm as f64).ln()).sum();
        different = different.max((sum - (k.abs_discriminant() as f64).ln()).abs());
    }
    Ok(Outcome {
        pass: worst <= 1e-12 && different <= 1e-12,
        detail: format!("4 rows x 10 values, max relative error {worst:.2e}; max |sum log N(d) - log|D|| = {different:.2e}"),
    })
}

fn rescaling_constants() -> Result<Outcome> {
    let mut exact = true;
    let mut worst_change = 0.0f64;
    let mut ratios_seen = Vec::new();
    for pl in [place(-4, 2), place(-4, 3), place(-4, 5), place(-3, 3), place(-7, 7), place(-8, 2)] {
        exact &= c_factor(&pl, 0.0)? == 1.0;
        let ratio = |h: f64| -> Result<f64> { Ok((c_factor(&pl, h)? - 1.0) / (h * h)) };
        let r: Vec<f64> = [0.02, 0.01, 0.005].iter().map(|&h| ratio(h)).collect::<Result<_>>()?;
        let (d1, d2) = ((r[1] - r[0]).abs(), (r[2] - r[1]).abs());
        // Bounded, and successive changes shrink.
        exact &= r.iter().all(|x| x.is_finite() && x.abs() < 10.0) && d2 < d1;
        worst_change = worst_change.max(d2 / r[2].abs());
        ratios_seen.push(r[2]);
    }
    Ok(Outcome {
        pass: exact && worst_change < 0.05,
        detail: format!(
            "c(0) = 1 at 6 places, (c(h)-1)/h^2 at h = 0.005 in [{:.4}, {:.4}], last relative change {worst_change:.2e}",
            ratios_seen.iter().cloned().fold(f64::INFINITY, f64::min),
            ratios_seen.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        ),
    })
}

fn zero_machinery() -> Result<Outcome> {
    let ids = [
        LFunctionId::zeta(),
        LFunctionId::dirichlet(-3)?,
        LFunctionId::dirichlet(-4)?,
        LFunctionId::dirichlet(-7)?,
        LFunctionId::dirichlet(-8)?,
        LFunctionId::dirichlet(-11)?,
    ];
    let mut certified = true;
    let mut counts = Vec::new();
    let (mut lambda, mut l_abs) = (0.0f64, 0.0f64);
    for id in &ids {
        let list = zeros::find_zeros(id, 120.0)?;
        certified &= list.certified && zeros::certify(&list)?.certified;
        counts.push(format!("{id}:{}", list.ordinates.len()));
        for &g in &list.ordinates {
            lambda = lambda.max(zeros::completed(id, z(0.5, g))?.norm());
            l_abs = l_abs.max(zeros::l_value(id, z(0.5, g))?.norm());
        }
    }
    let mut fe = 0.0f64;
    for id in &ids {
        for s in [z(0.2, 3.0), z(0.7, 25.0), z(-0.5, 60.0), z(0.1, 110.0), z(0.9, 0.5), z(1.5, 80.0)] {
            let a = zeros::completed(id, s)?;
            let b = zeros::completed(id, 1.0 - s)?;
            fe = fe.max((a - b).norm() / a.norm());
        }
    }
    let l1 = (zeros::l_value(&LFunctionId::dirichlet(-4)?, z(1.0, 0.0))?.re - PI / 4.0).abs();
    Ok(Outcome {
        pass: certified && lambda <= 1e-8 && l_abs <= 1e-8 && fe <= 1e-10 && l1 <= 1e-10,
        detail: format!(
            "certified to T=120 ({}), max |Lambda| {lambda:.1e}, max |L| {l_abs:.1e}, functional equation {fe:.1e}, |L(1) - pi/4| {l1:.1e}",
            counts.join(" ")
        ),
    })
}

fn cli_verify(cache: &Path) -> std::io::Result<Vec<u8>> {
    let out = Command::new(env!("CARGO_BIN_EXE_explicit-formula"))
        .args(["verify", "--d", "-7", "--fn", "bump:center=3,radius=0.5", "--height", "120", "--tol", "1e-4"])
        .arg("--cache-dir")
        .arg(cache)
        .output()?;
    Ok(out.stdout)
}

fn determinism() -> Result<Outcome> {
    let dir = tempfile::tempdir()?;
    let runs: Vec<Vec<u8>> = (0..3).map(|_| cli_verify(dir.path())).collect::<std::io::Result<_>>()?;
    let cli_same = runs.iter().all(|r| r == &runs[0]) && !runs[0].is_empty();
    let f = bump(2.0, 0.7);
    let a = explicit::verify(&field(-8), &f, 120.0, 1e-4, &ZeroStore::directory(dir.path())?)?.to_json();
    let b = explicit::verify(&field(-8), &f, 120.0, 1e-4, &ZeroStore::directory(dir.path())?)?.to_json();
    Ok(Outcome {
        pass: cli_same && a == b,
        detail: format!("3 CLI runs identical: {cli_same}, 2 library runs identical: {}", a == b),
    })
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 8] = [
        ("explicit formula, 5 fields x 2 functions, T = 120", explicit_formula_closes),
        ("three-route local term agreement", three_routes_agree),
        ("semigroup property", semigroup),
        ("delta identity at s = 0", delta_identity),
        ("local zeta table and different norms", local_zeta_table),
        ("rescaling constants", rescaling_constants),
        ("zero certification and L-values", zero_machinery),
        ("byte-identical reports", determinism),
    ];
    let start = Instant::now();
    let outcomes: Vec<(Result<Outcome>, Duration)> = thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, run)| {
                scope.spawn(move || {
                    let t = Instant::now();
                    (run(), t.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (outcome, took))) in criteria.iter().zip(outcomes).enumerate() {
        let (pass, detail) = match outcome {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {} {} {name}: {detail} [{:.1}s]",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    println!("acceptance: {} of 8 passed in {:.1}s", 8 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
