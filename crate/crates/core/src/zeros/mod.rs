//! Zeros of `ζ_K(s) = ζ(s) L(s, χ_D)` on the critical line.
//!
//! The two factors are handled separately: each has a completed function
//! that is real on `Re s = 1/2` after a phase rotation, so zeros are
//! isolated as sign changes and refined by bisection. A list is certified
//! when its length equals the argument-principle count up to its height.

pub mod cache;
pub mod lfunc;
pub mod search;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quadfield::{FieldSpec, CLASS_NUMBER_ONE};

pub use cache::{export_zeros, import_zeros, ZeroStore, CACHE_ENV};
pub use lfunc::{completed, hardy_z, l_value, theta};
pub use search::{argument_count, certify, find_zeros, zero_count_estimate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LKind {
    RiemannZeta,
    Dirichlet,
}

impl LKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LKind::RiemannZeta => "riemann_zeta",
            LKind::Dirichlet => "dirichlet",
        }
    }
}

impl std::str::FromStr for LKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "riemann_zeta" | "zeta" => Ok(LKind::RiemannZeta),
            "dirichlet" => Ok(LKind::Dirichlet),
            other => invalid(format!("unknown L-function kind '{other}'")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// `ζ`, or `L(s, χ_D)` for a negative fundamental discriminant `D = -conductor`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LFunctionId {
    pub kind: LKind,
    pub conductor: u64,
}

impl LFunctionId {
    pub fn zeta() -> Self {
        LFunctionId {
            kind: LKind::RiemannZeta,
            conductor: 1,
        }
    }

    /// The character `n ↦ (D/n)` for an imaginary quadratic discriminant `D`.
    pub fn dirichlet(discriminant: i64) -> Result<Self> {
        let field = FieldSpec::from_d_or_discriminant(discriminant)?;
        if field.discriminant != discriminant {
            return invalid(format!("{discriminant} is not a fundamental discriminant"));
        }
        Ok(LFunctionId {
            kind: LKind::Dirichlet,
            conductor: discriminant.unsigned_abs(),
        })
    }

    pub fn from_parts(kind: LKind, conductor: u64) -> Result<Self> {
        match kind {
            LKind::RiemannZeta if conductor == 1 => Ok(Self::zeta()),
            LKind::RiemannZeta => invalid("the Riemann zeta function has conductor 1"),
            LKind::Dirichlet => Self::dirichlet(-(conductor as i64)),
        }
    }

    /// The two factors of the Dedekind zeta function of `field`.
    pub fn factors(field: &FieldSpec) -> [LFunctionId; 2] {
        [
            Self::zeta(),
            LFunctionId {
                kind: LKind::Dirichlet,
                conductor: field.abs_discriminant(),
            },
        ]
    }

    /// `χ(-1) = -1` for every imaginary quadratic character.
    pub fn parity(&self) -> Parity {
        match self.kind {
            LKind::RiemannZeta => Parity::Even,
            LKind::Dirichlet => Parity::Odd,
        }
    }

    /// `D` for Dirichlet functions.
    pub fn discriminant(&self) -> Option<i64> {
        match self.kind {
            LKind::RiemannZeta => None,
            LKind::Dirichlet => Some(-(self.conductor as i64)),
        }
    }

    /// Whether the character belongs to a field of class number one.
    pub fn class_number_one(&self) -> bool {
        self.discriminant().is_none_or(|d| CLASS_NUMBER_ONE.contains(&d))
    }
}

impl fmt::Display for LFunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LKind::RiemannZeta => f.write_str("zeta"),
            LKind::Dirichlet => write!(f, "L(s, chi_{})", -(self.conductor as i64)),
        }
    }
}

/// Ordinates `γ` of zeros `1/2 + iγ` with `0 < γ ≤ height`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroList {
    pub id: LFunctionId,
    pub ordinates: Vec<f64>,
    pub height: f64,
    pub certified: bool,
    /// Bound on the error of each ordinate.
    pub precision: f64,
}

impl ZeroList {
    /// Ordinates up to `height`, keeping certification if the list was
    /// certified to at least that height.
    pub fn truncated(&self, height: f64) -> ZeroList {
        ZeroList {
            id: self.id,
            ordinates: self.ordinates.iter().copied().filter(|&g| g <= height).collect(),
            height: height.min(self.height),
            certified: self.certified,
            precision: self.precision,
        }
    }

    /// Structural checks: ordinates finite, positive, strictly increasing
    /// and no larger than the height.
    pub fn validate(&self) -> Result<()> {
        let mut last = 0.0;
        for &g in &self.ordinates {
            if !(g.is_finite() && g > last && g <= self.height) {
                return invalid(format!("ordinates must increase within (0, {}], found {g}", self.height));
            }
            last = g;
        }
        Ok(())
    }
}
