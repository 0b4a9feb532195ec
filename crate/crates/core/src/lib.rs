//! Exact certification of (semi)stability for syzygy bundles defined by
//! monomials, together with explicit constructions of stable monomial
//! families and the exterior-algebra machinery behind the criterion.
//!
//! Everything is computed over the rationals with arbitrary precision; no
//! floating point is used anywhere.
//!
//! Module map:
//!
//! * [`bounds`]: counting polynomials and the rank threshold for stability.
//! * [`monomial`]: monomials, monomial sets, divisibility, colon dimensions.
//! * [`criterion`]: the equal-degree and mixed-degree stability checks.
//! * [`construct`]: recursive constructions of stable monomial subspaces.
//! * [`exterior`]: exterior algebra, Koszul differential, Plücker test.
//! * [`secant`]: the exceptional `(n, d, m) = (2, 2, 5)` case for arbitrary
//!   (non-monomial) subspaces.
//! * [`document`]: JSON document formats used by the command-line tool.

pub mod bounds;
pub mod construct;
pub mod criterion;
pub mod document;
pub mod error;
pub mod exterior;
pub mod linalg;
pub mod monomial;
pub mod rational;
pub mod secant;

pub use error::{Error, Result};
pub use rational::Rational;
