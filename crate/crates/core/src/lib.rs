//! Local Riesz-kernel generators and the global explicit formula for
//! imaginary quadratic fields.
//!
//! The crate computes, for a test function `f` on the positive reals, the
//! local terms `W_v(f)` at every place of `K = Q(sqrt(d))` and compares
//! their sum with the sum of the Mellin transform of `f` over the zeros of
//! the Dedekind zeta function of `K`, minus the two pole terms.
//!
//! ```no_run
//! use explicit_formula::{explicit, quadfield, testfn::TestFunction, zeros::ZeroStore};
//!
//! let field = quadfield::discriminant(-1)?;
//! let f = TestFunction::log_bump(2.0, 0.7)?;
//! let store = ZeroStore::in_memory();
//! let report = explicit::verify(&field, &f, 120.0, 1e-4, &store)?;
//! assert!(report.pass);
//! # Ok::<(), explicit_formula::Error>(())
//! ```
//!
//! Modules, bottom up:
//!
//! * [`quadfield`]: discriminants, Kronecker symbols, places.
//! * [`testfn`]: test functions, tanh-sinh quadrature, Mellin transforms,
//!   Gamma and digamma.
//! * [`riesz`]: Riesz kernels as convolution operators at p-adic and
//!   complex places.
//! * [`localterms`]: closed-form and contour local generators.
//! * [`zeros`]: zeta and Dirichlet L-values, zero isolation and certification,
//!   zero caches.
//! * [`explicit`]: both sides of the explicit formula and the report.
//! * [`cli`]: the command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod explicit;
pub mod localterms;
pub mod numeric;
pub mod quadfield;
pub mod riesz;
pub mod testfn;
pub mod zeros;

pub use error::{Error, Result};
