//! Exact-arithmetic engine for spaces of toroidal automorphic forms over the
//! rational function field and three class-number-one elliptic function fields
//! with constant fields F₂, F₃, F₄.
//!
//! Everything is computed exactly: finite-field elements as coefficient vectors
//! over the prime field, L-polynomials as integer polynomials, Hecke eigenvalue
//! systems over arbitrary-precision rationals, and local expansions as Laurent
//! series with explicit precision windows. No floating point anywhere.
//!
//! The pipeline mirrors the mathematics:
//!
//! 1. [`curve`] — the elliptic curves, their point groups, zeta numerators,
//!    constant-field extensions, and the genus-2 covers attached to degree-two
//!    places.
//! 2. [`graph`] — the weighted quotient graphs of the Bruhat–Tits tree at the
//!    place at infinity, on which unramified automorphic forms live.
//! 3. [`hecke`] — the Hecke operator at infinity, the toroidal linear system,
//!    its solution space, spectrum, and cusp subspace.
//! 4. [`reduction`] — exact coset reduction for the Hecke operator at a
//!    degree-two place, with replayable witness chains.
//! 5. [`report`] — the full analysis pipeline and its serialisable report.

pub mod curve;
pub mod error;
pub mod exact;
pub mod graph;
pub mod hecke;
pub mod reduction;
pub mod report;

pub use error::Error;

/// Convenient alias: every fallible operation in the crate uses this.
pub type Result<T> = std::result::Result<T, Error>;
