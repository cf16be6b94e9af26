//! Exact arithmetic substrate: finite fields, integer polynomials,
//! arbitrary-precision rationals, and truncated Laurent series.
//!
//! Everything downstream (curves, graphs, Hecke systems, local reductions)
//! computes over these types; there is no floating point in the crate.

pub mod field;
pub mod intpoly;
pub mod laurent;

pub use field::{build_field, Fe, FieldDescriptor, FieldId};
pub use intpoly::{poly_gcd, IntPoly};
pub use laurent::Laurent;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar used by form vectors and linear systems.
pub type Rat = BigRational;

/// Convenience constructor for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}
