//! Both sides of the explicit formula for `ζ_K`, `K` imaginary quadratic:
//!
//! ```text
//! Σ_v W_v(f) = Σ_ρ M^ρ(f) - M^0(f) - M^1(f),
//! ```
//!
//! the left over all places of `K`, the right over the nontrivial zeros of
//! `ζ_K = ζ · L(·, χ_D)`. The right side is truncated at a height `T` and
//! its remainder bounded from the decay of `M^(1/2+it)(f)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::localterms::w_closed_form;
use crate::numeric::{round_sig, KahanSum};
use crate::quadfield::{places_up_to, ramified_places, FieldSpec, PlaceInfo, PlaceKind};
use crate::testfn::{mellin, mellin_tail, TestFunction, VerticalMellin};
use crate::zeros::{LFunctionId, ZeroList, ZeroStore};

/// Default truncation height of the zero sum.
pub const DEFAULT_HEIGHT: f64 = 120.0;
/// Default tolerance on the discrepancy.
pub const DEFAULT_TOL: f64 = 1e-4;

/// Significant digits kept in serialized reports.
const REPORT_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaceTerm {
    pub place: String,
    pub kind: PlaceKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<u64>,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoleTerms {
    /// `M^0(f) = ∫ f(x) dx/x`.
    pub m0: f64,
    /// `M^1(f) = ∫ f(x) dx`.
    pub m1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub field: FieldSpec,
    pub test_function: String,
    pub lhs_total: f64,
    pub lhs_breakdown: Vec<PlaceTerm>,
    pub rhs_zero_sum: f64,
    pub rhs_pole_terms: PoleTerms,
    pub truncation_height: f64,
    pub zero_counts: BTreeMap<String, usize>,
    pub tail_estimate: f64,
    pub tolerance: f64,
    pub discrepancy: f64,
    pub pass: bool,
    pub zero_cache_checksums: BTreeMap<String, String>,
}

impl VerificationReport {
    /// Right-hand side `Σ_ρ M^ρ - M^0 - M^1` as truncated.
    pub fn rhs_total(&self) -> f64 {
        self.rhs_zero_sum - self.rhs_pole_terms.m0 - self.rhs_pole_terms.m1
    }

    /// The same report with every real rounded to 12 significant digits,
    /// so that serialization does not expose the last bits of the arithmetic.
    pub fn rounded(&self) -> VerificationReport {
        // Adding 0.0 turns -0.0 into 0.0.
        let r = |x: f64| round_sig(x, REPORT_DIGITS) + 0.0;
        VerificationReport {
            lhs_total: r(self.lhs_total),
            lhs_breakdown: self
                .lhs_breakdown
                .iter()
                .map(|t| PlaceTerm { value: r(t.value), ..t.clone() })
                .collect(),
            rhs_zero_sum: r(self.rhs_zero_sum),
            rhs_pole_terms: PoleTerms {
                m0: r(self.rhs_pole_terms.m0),
                m1: r(self.rhs_pole_terms.m1),
            },
            truncation_height: r(self.truncation_height),
            tail_estimate: r(self.tail_estimate),
            tolerance: r(self.tolerance),
            discrepancy: r(self.discrepancy),
            ..self.clone()
        }
    }

    /// Pretty-printed JSON of [`rounded`](Self::rounded), newline-terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.rounded()).expect("report is serializable");
        s.push('\n');
        s
    }
}

/// Bound `X` such that no prime power above `X` or below `1/X` meets the support.
fn enumeration_bound(f: &TestFunction) -> u64 {
    match f.support() {
        Some((a, b)) => b.max(1.0 / a).ceil() as u64,
        None => 0,
    }
}

/// Refuse fields of class number greater than one.
pub fn require_class_number_one(field: &FieldSpec) -> Result<()> {
    if !field.class_number_one {
        return Err(Error::UnsupportedField(format!(
            "{field} has class number > 1; only the nine class-number-one fields are supported"
        )));
    }
    Ok(())
}

/// Places carrying a possibly nonzero local term: every place of norm up
/// to the enumeration bound, the ramified places when `f(1) ≠ 0`, and the
/// complex place. Split primes appear once per place above them.
pub fn contributing_places(field: &FieldSpec, f: &TestFunction) -> Vec<PlaceInfo> {
    if f.is_zero() {
        return vec![PlaceInfo::COMPLEX];
    }
    let mut places = places_up_to(field, enumeration_bound(f));
    if f.eval(1.0) != 0.0 {
        for r in ramified_places(field) {
            if !places.contains(&r) {
                places.insert(places.len() - 1, r);
            }
        }
    }
    places
}

/// `Σ_v W_v(f)` from the closed forms, with the term at each place.
pub fn lhs_sum(field: &FieldSpec, f: &TestFunction) -> Result<(f64, Vec<PlaceTerm>)> {
    require_class_number_one(field)?;
    let mut total = KahanSum::<f64>::new();
    let mut breakdown = Vec::new();
    for place in contributing_places(field, f) {
        let w = w_closed_form(&place, f)?;
        total.add(w.value);
        breakdown.push(PlaceTerm {
            place: place.to_string(),
            kind: place.kind,
            p: place.p,
            norm: place.norm,
            value: w.value,
        });
    }
    Ok((total.value(), breakdown))
}

/// The truncated right side.
#[derive(Clone, Debug, PartialEq)]
pub struct RhsSum {
    /// `Σ_{0 < γ ≤ T} 2 Re M^(1/2+iγ)(f)` over both factors.
    pub zero_sum: f64,
    pub poles: PoleTerms,
    /// Bound on the zeros above `T`.
    pub tail_estimate: f64,
    pub counts: BTreeMap<String, usize>,
}

/// Density of zeros of `ζ_K` at height `t`, the sum of the main terms
/// `log(q t/2π)/2π` of both factors, clipped at zero.
pub fn zero_density(field: &FieldSpec, t: f64) -> f64 {
    let q = field.abs_discriminant() as f64;
    let x = t / (2.0 * PI);
    (((x).ln() + (q * x).ln()) / (2.0 * PI)).max(0.0)
}

/// `M^0(f)` and `M^1(f)`.
pub fn pole_terms(f: &TestFunction) -> Result<PoleTerms> {
    Ok(PoleTerms {
        m0: mellin(f, Complex64::new(0.0, 0.0))?.value.re,
        m1: mellin(f, Complex64::new(1.0, 0.0))?.value.re,
    })
}

/// `Σ_ρ M^ρ(f) - M^0(f) - M^1(f)` from certified zero lists of `ζ` and
/// `L(·, χ_D)` reaching at least `height`. Zeros come in conjugate
/// pairs and `f` is real, so each pair contributes `2 Re M^(1/2+iγ)`.
pub fn rhs_sum(field: &FieldSpec, f: &TestFunction, height: f64, lists: &[ZeroList]) -> Result<RhsSum> {
    let mut counts = BTreeMap::new();
    if f.is_zero() {
        return Ok(RhsSum {
            zero_sum: 0.0,
            poles: PoleTerms { m0: 0.0, m1: 0.0 },
            tail_estimate: 0.0,
            counts,
        });
    }
    if !f.is_smooth() {
        return Err(Error::Divergent(format!(
            "the zero sum of the discontinuous {} does not converge absolutely",
            f.label()
        )));
    }
    let wanted = LFunctionId::factors(field);
    let transform = VerticalMellin::new(f, 0.5, height)?;
    let mut acc = KahanSum::<f64>::new();
    for id in &wanted {
        let Some(list) = lists.iter().find(|l| l.id == *id) else {
            return Err(Error::Uncertified(format!("no zero list for {id}")));
        };
        if !list.certified {
            return Err(Error::Uncertified(format!("the zero list for {id} is not certified")));
        }
        if list.height < height {
            return Err(Error::Uncertified(format!(
                "the zero list for {id} reaches {} < {height}",
                list.height
            )));
        }
        let list = list.truncated(height);
        for &g in &list.ordinates {
            acc.add(2.0 * transform.at(g)?.value.re);
        }
        counts.insert(id.to_string(), list.ordinates.len());
    }
    let poles = pole_terms(f)?;
    let tail = 2.0 * mellin_tail(f, 0.5, height, |t| zero_density(field, t))?;
    Ok(RhsSum {
        zero_sum: acc.value(),
        poles,
        tail_estimate: tail,
        counts,
    })
}

/// Evaluate both sides, fetching or computing zeros through `store`.
pub fn verify(
    field: &FieldSpec,
    f: &TestFunction,
    height: f64,
    tolerance: f64,
    store: &ZeroStore,
) -> Result<VerificationReport> {
    require_class_number_one(field)?;
    if !(height > 0.0) || !(tolerance > 0.0) {
        return Err(Error::InvalidInput(format!(
            "height and tolerance must be positive, got {height} and {tolerance}"
        )));
    }
    let (lhs_total, lhs_breakdown) = lhs_sum(field, f)?;
    let mut lists = Vec::new();
    let mut checksums = BTreeMap::new();
    if !f.is_zero() {
        for id in LFunctionId::factors(field) {
            lists.push(store.get_or_compute(&id, height)?);
            if let Some(sum) = store.checksum(&id) {
                checksums.insert(ZeroStore::file_name(&id), sum);
            }
        }
    }
    let rhs = rhs_sum(field, f, height, &lists)?;
    let rhs_total = rhs.zero_sum - rhs.poles.m0 - rhs.poles.m1;
    let discrepancy = lhs_total - rhs_total;
    Ok(VerificationReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        field: *field,
        test_function: f.label().to_string(),
        lhs_total,
        lhs_breakdown,
        rhs_zero_sum: rhs.zero_sum,
        rhs_pole_terms: rhs.poles,
        truncation_height: height,
        zero_counts: rhs.counts,
        tail_estimate: rhs.tail_estimate,
        tolerance,
        discrepancy,
        pass: discrepancy.abs() <= tolerance + rhs.tail_estimate,
        zero_cache_checksums: checksums,
    })
}
