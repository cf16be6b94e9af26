//! The five finite fields F₂, F₃, F₄, F₉, F₁₆ with exact, table-fixed models.
//!
//! Models (deterministic, so element printing and golden files are stable):
//!
//! * F₄  = F₂[α]/(α²+α+1)
//! * F₉  = F₃[β]/(β²+1)
//! * F₁₆ = F₄[γ]/(γ²+γ+α)
//!
//! Elements are stored as flat coefficient vectors over the prime field in the
//! tower basis — for F₁₆ that basis is (1, α, γ, αγ) — so the subfield chain
//! F₂ ⊂ F₄ ⊂ F₁₆ acts by coordinate inclusion. The generator γ of F₁₆ also
//! satisfies γ⁴+γ+1 = 0 over F₂ (from γ² = γ+α and α² = α+1), which is the
//! defining polynomial reported by its descriptor.
//!
//! Sizes are tiny (≤ 16 elements), so inverses go through Fermat powers and
//! square roots through exhaustive search; the field axioms themselves are
//! verified exhaustively in the test suite.

use crate::{Error, Result};
use std::fmt;

/// Identifier of one of the five supported fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldId {
    F2,
    F3,
    F4,
    F9,
    F16,
}

impl FieldId {
    /// Characteristic p.
    pub const fn characteristic(self) -> u8 {
        match self {
            FieldId::F2 | FieldId::F4 | FieldId::F16 => 2,
            FieldId::F3 | FieldId::F9 => 3,
        }
    }

    /// Extension degree over the prime field.
    pub const fn degree(self) -> usize {
        match self {
            FieldId::F2 | FieldId::F3 => 1,
            FieldId::F4 | FieldId::F9 => 2,
            FieldId::F16 => 4,
        }
    }

    /// Number of elements.
    pub const fn order(self) -> u64 {
        match self {
            FieldId::F2 => 2,
            FieldId::F3 => 3,
            FieldId::F4 => 4,
            FieldId::F9 => 9,
            FieldId::F16 => 16,
        }
    }

    /// Stable display name.
    pub const fn name(self) -> &'static str {
        match self {
            FieldId::F2 => "F2",
            FieldId::F3 => "F3",
            FieldId::F4 => "F4",
            FieldId::F9 => "F9",
            FieldId::F16 => "F16",
        }
    }

    /// The quadratic extension used for constant-field extensions, if one is
    /// supported: F₂ → F₄, F₃ → F₉, F₄ → F₁₆.
    pub const fn quadratic_extension(self) -> Option<FieldId> {
        match self {
            FieldId::F2 => Some(FieldId::F4),
            FieldId::F3 => Some(FieldId::F9),
            FieldId::F4 => Some(FieldId::F16),
            FieldId::F9 | FieldId::F16 => None,
        }
    }

    /// Descriptor with the defining data over the prime field.
    pub fn descriptor(self) -> FieldDescriptor {
        let (defining_poly, generator_label) = match self {
            // Prime fields are F_p[x]/(x); the generator label is unused.
            FieldId::F2 | FieldId::F3 => (vec![0, 1], "x"),
            FieldId::F4 => (vec![1, 1, 1], "α"),
            FieldId::F9 => (vec![1, 0, 1], "β"),
            // γ² = γ+α and α² = α+1 force γ⁴+γ+1 = 0 over F₂.
            FieldId::F16 => (vec![1, 1, 0, 0, 1], "γ"),
        };
        FieldDescriptor {
            characteristic: self.characteristic(),
            degree: self.degree(),
            defining_poly,
            generator_label,
            field: self,
        }
    }

    /// All elements in canonical order (ascending integer key: the base-p
    /// digit string of the coefficient vector, least-significant first).
    pub fn elements(self) -> impl Iterator<Item = Fe> {
        let p = self.characteristic() as u64;
        let deg = self.degree();
        (0..self.order()).map(move |n| {
            let mut c = [0u8; 4];
            let mut rem = n;
            for slot in c.iter_mut().take(deg) {
                *slot = (rem % p) as u8;
                rem /= p;
            }
            Fe { field: self, c }
        })
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Build-time data of a field: model polynomial and generator label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub characteristic: u8,
    pub degree: usize,
    /// Defining polynomial of the canonical generator over the prime field,
    /// ascending coefficients.
    pub defining_poly: Vec<u8>,
    pub generator_label: &'static str,
    pub field: FieldId,
}

/// Look up the field with p^k elements.
///
/// Supported: (2,1), (3,1), (2,2), (3,2), (2,4). Anything else is an error —
/// including non-prime p.
pub fn build_field(p: u64, k: u32) -> Result<FieldId> {
    match (p, k) {
        (2, 1) => Ok(FieldId::F2),
        (3, 1) => Ok(FieldId::F3),
        (2, 2) => Ok(FieldId::F4),
        (3, 2) => Ok(FieldId::F9),
        (2, 4) => Ok(FieldId::F16),
        _ => Err(Error::UnsupportedField { p, k }),
    }
}

/// A field element: owning field tag plus coefficients over the prime field
/// in the tower basis. Mixing elements of different fields in arithmetic is a
/// programming error and panics; fallible conversions go through [`Fe::embed`]
/// and [`Fe::downcast`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fe {
    field: FieldId,
    c: [u8; 4],
}

// ---- prime-field and quadratic-step helpers (internal) ----

fn pf_add(p: u8, a: u8, b: u8) -> u8 {
    (a + b) % p
}

fn pf_sub(p: u8, a: u8, b: u8) -> u8 {
    (p + a - b) % p
}

fn pf_mul(p: u8, a: u8, b: u8) -> u8 {
    (a * b) % p
}

/// Multiply in F₄ = F₂[α]/(α²+α+1): α² = α+1.
fn f4_mul(a: [u8; 2], b: [u8; 2]) -> [u8; 2] {
    let hi = pf_mul(2, a[1], b[1]); // coefficient of α²
    [
        pf_add(2, pf_mul(2, a[0], b[0]), hi),
        pf_add(2, pf_add(2, pf_mul(2, a[0], b[1]), pf_mul(2, a[1], b[0])), hi),
    ]
}

/// Multiply in F₉ = F₃[β]/(β²+1): β² = −1 = 2.
fn f9_mul(a: [u8; 2], b: [u8; 2]) -> [u8; 2] {
    let hi = pf_mul(3, a[1], b[1]);
    [
        pf_add(3, pf_mul(3, a[0], b[0]), pf_mul(3, 2, hi)),
        pf_add(3, pf_mul(3, a[0], b[1]), pf_mul(3, a[1], b[0])),
    ]
}

/// Multiply in F₁₆ = F₄[γ]/(γ²+γ+α): γ² = γ+α. Operands are (lo, hi) pairs of
/// F₄ elements in the basis (1, α, γ, αγ).
fn f16_mul(a: [u8; 4], b: [u8; 4]) -> [u8; 4] {
    let (a0, a1) = ([a[0], a[1]], [a[2], a[3]]);
    let (b0, b1) = ([b[0], b[1]], [b[2], b[3]]);
    let f4_add = |x: [u8; 2], y: [u8; 2]| [pf_add(2, x[0], y[0]), pf_add(2, x[1], y[1])];
    let hi = f4_mul(a1, b1); // coefficient of γ²
    let alpha = [0, 1];
    let lo_part = f4_add(f4_mul(a0, b0), f4_mul(hi, alpha));
    let hi_part = f4_add(f4_add(f4_mul(a0, b1), f4_mul(a1, b0)), hi);
    [lo_part[0], lo_part[1], hi_part[0], hi_part[1]]
}

impl Fe {
    /// The zero element.
    pub fn zero(field: FieldId) -> Fe {
        Fe { field, c: [0; 4] }
    }

    /// The multiplicative identity.
    pub fn one(field: FieldId) -> Fe {
        Fe { field, c: [1, 0, 0, 0] }
    }

    /// The canonical generator of the top extension step: α for F₄, β for F₉,
    /// γ for F₁₆; 1 for the prime fields.
    pub fn generator(field: FieldId) -> Fe {
        let mut c = [0u8; 4];
        match field {
            FieldId::F2 | FieldId::F3 => c[0] = 1,
            FieldId::F4 | FieldId::F9 => c[1] = 1,
            FieldId::F16 => c[2] = 1,
        }
        Fe { field, c }
    }

    /// The integer n reduced into the prime subfield.
    pub fn from_int(field: FieldId, n: i64) -> Fe {
        let p = field.characteristic() as i64;
        let mut c = [0u8; 4];
        c[0] = n.rem_euclid(p) as u8;
        Fe { field, c }
    }

    /// Element from explicit tower-basis coefficients (length must be the
    /// field degree, entries reduced mod p).
    pub fn from_coeffs(field: FieldId, coeffs: &[u8]) -> Fe {
        assert_eq!(coeffs.len(), field.degree(), "coefficient count for {field}");
        let p = field.characteristic();
        let mut c = [0u8; 4];
        for (slot, &v) in c.iter_mut().zip(coeffs) {
            *slot = v % p;
        }
        Fe { field, c }
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    /// Coefficients over the prime field in the tower basis.
    pub fn coeffs(&self) -> &[u8] {
        &self.c[..self.field.degree()]
    }

    pub fn is_zero(&self) -> bool {
        self.c == [0; 4]
    }

    pub fn is_one(&self) -> bool {
        self.c == [1, 0, 0, 0]
    }

    /// Canonical integer key (base-p digits); fixes the element ordering used
    /// for deterministic choices such as "smallest generator".
    pub fn key(&self) -> u64 {
        let p = self.field.characteristic() as u64;
        self.coeffs()
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * p + d as u64)
    }

    fn assert_same_field(&self, rhs: &Fe, op: &'static str) {
        assert_eq!(
            self.field, rhs.field,
            "{op} mixes {} and {}",
            self.field, rhs.field
        );
    }

    pub fn add(&self, rhs: &Fe) -> Fe {
        self.assert_same_field(rhs, "add");
        let p = self.field.characteristic();
        let mut c = [0u8; 4];
        for (ci, (a, b)) in c.iter_mut().zip(self.c.iter().zip(rhs.c.iter())) {
            *ci = pf_add(p, *a, *b);
        }
        Fe { field: self.field, c }
    }

    pub fn sub(&self, rhs: &Fe) -> Fe {
        self.assert_same_field(rhs, "sub");
        let p = self.field.characteristic();
        let mut c = [0u8; 4];
        for (ci, (a, b)) in c.iter_mut().zip(self.c.iter().zip(rhs.c.iter())) {
            *ci = pf_sub(p, *a, *b);
        }
        Fe { field: self.field, c }
    }

    pub fn neg(&self) -> Fe {
        Fe::zero(self.field).sub(self)
    }

    pub fn mul(&self, rhs: &Fe) -> Fe {
        self.assert_same_field(rhs, "mul");
        let c = match self.field {
            FieldId::F2 | FieldId::F3 => {
                let p = self.field.characteristic();
                [pf_mul(p, self.c[0], rhs.c[0]), 0, 0, 0]
            }
            FieldId::F4 => {
                let r = f4_mul([self.c[0], self.c[1]], [rhs.c[0], rhs.c[1]]);
                [r[0], r[1], 0, 0]
            }
            FieldId::F9 => {
                let r = f9_mul([self.c[0], self.c[1]], [rhs.c[0], rhs.c[1]]);
                [r[0], r[1], 0, 0]
            }
            FieldId::F16 => f16_mul(self.c, rhs.c),
        };
        Fe { field: self.field, c }
    }

    /// Square-and-multiply power with nonnegative exponent.
    pub fn pow(&self, mut e: u64) -> Fe {
        let mut base = *self;
        let mut acc = Fe::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the Fermat power x^(order−2).
    pub fn inverse(&self) -> Result<Fe> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(self.field.name()));
        }
        Ok(self.pow(self.field.order() - 2))
    }

    /// Exact division; errors on a zero divisor.
    pub fn div(&self, rhs: &Fe) -> Result<Fe> {
        Ok(self.mul(&rhs.inverse()?))
    }

    /// The p-power Frobenius x ↦ x^p (a generator of the Galois group over
    /// the prime field).
    pub fn frobenius(&self) -> Fe {
        self.pow(self.field.characteristic() as u64)
    }

    /// The multiplicative order (0 stays 0 by convention of returning 1 for
    /// the identity only; calling this on zero is a programming error).
    pub fn multiplicative_order(&self) -> u64 {
        assert!(!self.is_zero(), "multiplicative_order of zero");
        let mut acc = *self;
        let mut n = 1;
        while !acc.is_one() {
            acc = acc.mul(self);
            n += 1;
        }
        n
    }

    /// Whether the element is a square in its field. In characteristic 2
    /// every element is a square (Frobenius is bijective); in odd
    /// characteristic the Euler criterion decides.
    pub fn is_square(&self) -> bool {
        if self.field.characteristic() == 2 || self.is_zero() {
            return true;
        }
        self.pow((self.field.order() - 1) / 2).is_one()
    }

    /// A square root, if one exists: the canonically smallest one (element
    /// key order). In characteristic 2 the root is unique.
    pub fn sqrt(&self) -> Result<Fe> {
        self.field
            .elements()
            .find(|e| e.mul(e) == *self)
            .ok_or_else(|| Error::NotASquare {
                element: self.to_string(),
                field: self.field.name(),
            })
    }

    /// Embed into a larger field along the tower F₂ ⊂ F₄ ⊂ F₁₆ or F₃ ⊂ F₉.
    /// The tower basis makes every supported embedding a coordinate inclusion.
    pub fn embed(&self, target: FieldId) -> Result<Fe> {
        if self.field == target {
            return Ok(*self);
        }
        let ok = matches!(
            (self.field, target),
            (FieldId::F2, FieldId::F4)
                | (FieldId::F2, FieldId::F16)
                | (FieldId::F4, FieldId::F16)
                | (FieldId::F3, FieldId::F9)
        );
        if !ok {
            return Err(Error::NoEmbedding(self.field.name(), target.name()));
        }
        Ok(Fe { field: target, c: self.c })
    }

    /// Project into a subfield, failing if the element does not lie in it.
    pub fn downcast(&self, target: FieldId) -> Result<Fe> {
        if self.field == target {
            return Ok(*self);
        }
        // An element lies in the subfield iff its coordinates above the
        // subfield's degree vanish (tower basis), which is equivalent to
        // being fixed by the subfield's Frobenius power.
        let ok = matches!(
            (self.field, target),
            (FieldId::F4, FieldId::F2)
                | (FieldId::F16, FieldId::F2)
                | (FieldId::F16, FieldId::F4)
                | (FieldId::F9, FieldId::F3)
        );
        if !ok {
            return Err(Error::NoEmbedding(self.field.name(), target.name()));
        }
        if self.c[target.degree()..] != [0; 4][target.degree()..] {
            return Err(Error::NotInSubfield {
                element: self.to_string(),
                from: self.field.name(),
                to: target.name(),
            });
        }
        Ok(Fe { field: target, c: self.c })
    }

    /// Relative trace to the prime field: x + x^p + … (degree terms).
    /// Used for the Artin–Schreier splitting criterion in characteristic 2.
    pub fn trace_to_prime(&self) -> Fe {
        let mut acc = *self;
        let mut term = *self;
        for _ in 1..self.field.degree() {
            term = term.frobenius();
            acc = acc.add(&term);
        }
        acc
    }
}

impl fmt::Display for Fe {
    /// Canonical coefficient-tuple rendering: prime fields print the digit,
    /// extensions print the ascending tower-basis tuple, e.g. α ∈ F₄ is
    /// `(0,1)` and γ ∈ F₁₆ is `(0,0,1,0)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeffs();
        if coeffs.len() == 1 {
            return write!(f, "{}", coeffs[0]);
        }
        write!(f, "(")?;
        for (i, d) in coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.field.name(), self)
    }
}

impl std::ops::Add for Fe {
    type Output = Fe;
    fn add(self, rhs: Fe) -> Fe {
        Fe::add(&self, &rhs)
    }
}

impl std::ops::Sub for Fe {
    type Output = Fe;
    fn sub(self, rhs: Fe) -> Fe {
        Fe::sub(&self, &rhs)
    }
}

impl std::ops::Mul for Fe {
    type Output = Fe;
    fn mul(self, rhs: Fe) -> Fe {
        Fe::mul(&self, &rhs)
    }
}

impl std::ops::Neg for Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        Fe::neg(&self)
    }
}
