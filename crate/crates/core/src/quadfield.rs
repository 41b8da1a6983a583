//! Arithmetic of imaginary quadratic fields `Q(sqrt(d))`: fundamental
//! discriminants, the Kronecker symbol, and the decomposition of rational
//! primes into places.

use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Result};

/// Fundamental discriminants of the nine imaginary quadratic fields with
/// class number one.
pub const CLASS_NUMBER_ONE: [i64; 9] = [-3, -4, -7, -8, -11, -19, -43, -67, -163];

/// An imaginary quadratic field, identified by its squarefree `d < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    /// Squarefree negative integer with `K = Q(sqrt(d))`.
    pub d: i64,
    /// Fundamental discriminant.
    pub discriminant: i64,
    pub class_number_one: bool,
}

impl FieldSpec {
    pub fn abs_discriminant(&self) -> u64 {
        self.discriminant.unsigned_abs()
    }

    /// Build a field from either a squarefree `d < 0` or a fundamental
    /// discriminant `D < 0`. The two readings never collide: a squarefree
    /// `d ≡ 2, 3 (mod 4)` is not a discriminant, and `4d` is not squarefree.
    pub fn from_d_or_discriminant(n: i64) -> Result<Self> {
        if n >= 0 {
            return invalid(format!("{n} is not negative"));
        }
        if is_squarefree(n.unsigned_abs()) {
            return discriminant(n);
        }
        if n % 4 == 0 {
            let d = n / 4;
            if is_squarefree(d.unsigned_abs()) && matches!(d.rem_euclid(4), 2 | 3) {
                return discriminant(d);
            }
        }
        invalid(format!(
            "{n} is neither squarefree nor a fundamental discriminant"
        ))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({})), D = {}", self.d, self.discriminant)
    }
}

/// How a rational prime behaves in the field, or the archimedean place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceKind {
    Split,
    Inert,
    Ramified,
    Complex,
}

impl fmt::Display for PlaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PlaceKind::Split => "split",
            PlaceKind::Inert => "inert",
            PlaceKind::Ramified => "ramified",
            PlaceKind::Complex => "complex",
        };
        f.write_str(name)
    }
}

/// One place of the field.
///
/// For finite places `p` is the rational prime below and `norm` is
/// `N(p)`; the complex place has neither.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PlaceInfo {
    pub p: Option<u64>,
    pub kind: PlaceKind,
    pub norm: Option<u64>,
    /// Norm of the local different; 1 unless ramified.
    pub different_norm: u64,
    /// Number of places of the field above `p` (1 for the complex place).
    pub places_above: u8,
}

impl PlaceInfo {
    pub const COMPLEX: PlaceInfo = PlaceInfo {
        p: None,
        kind: PlaceKind::Complex,
        norm: None,
        different_norm: 1,
        places_above: 1,
    };

    pub fn is_finite(&self) -> bool {
        self.kind != PlaceKind::Complex
    }

    /// Residue field size `q = N(p)`; `None` at the complex place.
    pub fn q(&self) -> Option<u64> {
        self.norm
    }

    /// A finite place with the given norm and different norm, detached
    /// from any particular field. Useful for exercising the local
    /// machinery directly.
    pub fn local(kind: PlaceKind, p: u64, norm: u64, different_norm: u64) -> Self {
        PlaceInfo {
            p: Some(p),
            kind,
            norm: Some(norm),
            different_norm,
            places_above: if kind == PlaceKind::Split { 2 } else { 1 },
        }
    }
}

impl fmt::Display for PlaceInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p, self.norm) {
            (Some(p), Some(n)) => write!(f, "p={p} {} (N={n})", self.kind),
            _ => f.write_str("complex"),
        }
    }
}

/// Kronecker symbol `(D/n)` for `n ≥ 1`.
pub fn kronecker(d: i64, n: u64) -> Result<i8> {
    if n == 0 {
        return invalid("kronecker symbol is undefined at n = 0");
    }
    let twos = n.trailing_zeros();
    let odd = n >> twos;
    let at_two = match d.rem_euclid(8) {
        0 | 2 | 4 | 6 => 0,
        1 | 7 => 1,
        _ => -1,
    };
    let mut sign: i8 = if twos == 0 {
        1
    } else if at_two == 0 {
        return Ok(0);
    } else if twos % 2 == 1 {
        at_two
    } else {
        1
    };
    sign *= jacobi(d.rem_euclid(odd as i64) as u64, odd);
    Ok(sign)
}

/// Jacobi symbol `(a/m)` for odd `m ≥ 1`.
fn jacobi(mut a: u64, mut m: u64) -> i8 {
    debug_assert!(m % 2 == 1);
    a %= m;
    let mut result = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(m % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// The field `Q(sqrt(d))` for squarefree `d < 0`.
pub fn discriminant(d: i64) -> Result<FieldSpec> {
    if d >= 0 {
        return invalid(format!("d = {d} must be negative"));
    }
    if !is_squarefree(d.unsigned_abs()) {
        return invalid(format!("d = {d} is not squarefree"));
    }
    let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
    Ok(FieldSpec {
        d,
        discriminant: disc,
        class_number_one: CLASS_NUMBER_ONE.contains(&disc),
    })
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: i64, p: u64) -> u32 {
    let mut m = n.unsigned_abs();
    let mut e = 0;
    while m != 0 && m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    e
}

/// Decomposition of the rational prime `p` in `field`.
pub fn splitting_type(field: &FieldSpec, p: u64) -> Result<PlaceInfo> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    let place = match kronecker(field.discriminant, p)? {
        1 => PlaceInfo::local(PlaceKind::Split, p, p, 1),
        -1 => PlaceInfo::local(PlaceKind::Inert, p, p * p, 1),
        _ => {
            let e = valuation(field.discriminant, p);
            PlaceInfo::local(PlaceKind::Ramified, p, p, p.pow(e))
        }
    };
    Ok(place)
}

/// Primes `≤ bound` by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Every finite place of norm `≤ bound` (split primes appear twice), sorted
/// by norm, followed by the complex place.
pub fn places_up_to(field: &FieldSpec, bound: u64) -> Vec<PlaceInfo> {
    let mut places = Vec::new();
    for p in primes_up_to(bound) {
        let place = splitting_type(field, p).expect("sieve yields primes");
        if place.norm.is_some_and(|n| n <= bound) {
            for _ in 0..place.places_above {
                places.push(place);
            }
        }
    }
    places.sort_by_key(|pl| (pl.norm, pl.p));
    places.push(PlaceInfo::COMPLEX);
    places
}

/// The ramified places, i.e. the primes dividing the discriminant.
pub fn ramified_places(field: &FieldSpec) -> Vec<PlaceInfo> {
    primes_up_to(field.abs_discriminant())
        .into_iter()
        .filter(|&p| field.discriminant % p as i64 == 0)
        .map(|p| splitting_type(field, p).expect("prime"))
        .collect()
}
