//! Truncated Laurent series over a finite field, with honest precision.
//!
//! A series carries a concrete window [val, end): coefficients below `val`
//! are exactly zero by contract, coefficients in the window are stored, and
//! coefficients at `end` or beyond are *unknown* — reading one is a
//! [`crate::Error::PrecisionUnderflow`], never a silent zero. Window algebra:
//!
//! * add/sub: the result window is [min(vals), min(ends));
//! * mul: the valuation adds, the known length is the minimum of the two;
//! * invert: the valuation negates, the known length is preserved.
//!
//! Series are kept trimmed: the leading stored coefficient is nonzero, and a
//! series that is zero everywhere on its window is stored with an empty
//! coefficient list (it is "known zero below `end`"). Trimming raises `val`
//! and keeps `end`, so no knowledge is lost.

use crate::exact::field::{Fe, FieldId};
use crate::{Error, Result};
use std::fmt;

/// Laurent series with explicit known-coefficient window.
#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    field: FieldId,
    /// Exponent of the first stored coefficient; everything below is zero.
    val: i64,
    /// coeffs[i] is the coefficient of t^(val+i); leading entry nonzero.
    coeffs: Vec<Fe>,
}

impl Laurent {
    /// Build from explicit coefficients starting at exponent `val`;
    /// normalizes by trimming leading zeros (raising `val`).
    pub fn new(field: FieldId, val: i64, coeffs: Vec<Fe>) -> Laurent {
        let mut s = Laurent { field, val, coeffs };
        s.trim();
        s
    }

    /// The series known to be zero at every exponent below `end`.
    pub fn zero_below(field: FieldId, end: i64) -> Laurent {
        Laurent { field, val: end, coeffs: vec![] }
    }

    /// c·t^exp with `len` known coefficients (window [exp, exp+len)).
    pub fn monomial(field: FieldId, c: Fe, exp: i64, len: usize) -> Laurent {
        assert_eq!(c.field(), field);
        let mut coeffs = vec![Fe::zero(field); len];
        if len > 0 {
            coeffs[0] = c;
        }
        Laurent::new(field, exp, coeffs)
    }

    /// The constant 1 with `len` known coefficients.
    pub fn one(field: FieldId, len: usize) -> Laurent {
        Laurent::monomial(field, Fe::one(field), 0, len)
    }

    /// The uniformizer t with `len` known coefficients.
    pub fn t(field: FieldId, len: usize) -> Laurent {
        Laurent::monomial(field, Fe::one(field), 1, len)
    }

    fn trim(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(0) => {}
            Some(k) => {
                self.coeffs.drain(..k);
                self.val += k as i64;
            }
            None => {
                self.val += self.coeffs.len() as i64;
                self.coeffs.clear();
            }
        }
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    /// First exponent of the window (= the valuation when nonzero).
    pub fn window_start(&self) -> i64 {
        self.val
    }

    /// One past the last known exponent.
    pub fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    /// Valuation of the series, or None if it is zero on its whole window.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// Whether no nonzero coefficient is known.
    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading nonzero coefficient, if any.
    pub fn leading(&self) -> Option<Fe> {
        self.coeffs.first().copied()
    }

    /// Coefficient of t^exp: exact zero below the window, stored value inside
    /// it, and a PrecisionUnderflow error at or beyond `end`.
    pub fn coeff(&self, exp: i64) -> Result<Fe> {
        if exp < self.val {
            Ok(Fe::zero(self.field))
        } else if exp < self.end() {
            Ok(self.coeffs[(exp - self.val) as usize])
        } else {
            Err(Error::PrecisionUnderflow {
                exponent: exp,
                val: self.val,
                end: self.end(),
            })
        }
    }

    /// Coefficient lookup for exponents known to be below `end`.
    fn coeff_below_end(&self, exp: i64) -> Fe {
        debug_assert!(exp < self.end());
        if exp < self.val {
            Fe::zero(self.field)
        } else {
            self.coeffs[(exp - self.val) as usize]
        }
    }

    fn assert_same_field(&self, rhs: &Laurent, op: &'static str) {
        assert_eq!(
            self.field,
            rhs.field,
            "{op} mixes series over {} and {}",
            self.field,
            rhs.field
        );
    }

    pub fn add(&self, rhs: &Laurent) -> Laurent {
        self.assert_same_field(rhs, "add");
        let val = self.val.min(rhs.val);
        let end = self.end().min(rhs.end());
        let coeffs = (val..end)
            .map(|e| self.coeff_below_end(e).add(&rhs.coeff_below_end(e)))
            .collect();
        Laurent::new(self.field, val, coeffs)
    }

    pub fn sub(&self, rhs: &Laurent) -> Laurent {
        self.assert_same_field(rhs, "sub");
        let val = self.val.min(rhs.val);
        let end = self.end().min(rhs.end());
        let coeffs = (val..end)
            .map(|e| self.coeff_below_end(e).sub(&rhs.coeff_below_end(e)))
            .collect();
        Laurent::new(self.field, val, coeffs)
    }

    pub fn neg(&self) -> Laurent {
        Laurent::new(self.field, self.val, self.coeffs.iter().map(Fe::neg).collect())
    }

    pub fn mul(&self, rhs: &Laurent) -> Laurent {
        self.assert_same_field(rhs, "mul");
        let len = self.coeffs.len().min(rhs.coeffs.len());
        let val = self.val + rhs.val;
        let mut out = vec![Fe::zero(self.field); len];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = Fe::zero(self.field);
            for i in 0..=k {
                acc = acc.add(&self.coeffs[i].mul(&rhs.coeffs[k - i]));
            }
            *slot = acc;
        }
        Laurent::new(self.field, val, out)
    }

    /// Multiply by a constant.
    pub fn scale(&self, c: &Fe) -> Laurent {
        assert_eq!(c.field(), self.field);
        Laurent::new(self.field, self.val, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    /// Multiply by t^k (shift the window).
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent { field: self.field, val: self.val + k, coeffs: self.coeffs.clone() }
    }

    /// Add the constant c (at exponent zero; a no-op window-wise when the
    /// window ends at or below zero).
    pub fn add_scalar(&self, c: &Fe) -> Laurent {
        let len = self.end().max(0) as usize;
        self.add(&Laurent::monomial(self.field, *c, 0, len))
    }

    /// Multiplicative inverse. Requires a nonzero leading coefficient;
    /// the result has valuation −val and the same known length.
    pub fn invert(&self) -> Result<Laurent> {
        let lead = self.leading().ok_or(Error::ZeroSeries {
            val: self.val,
            end: self.end(),
        })?;
        let lead_inv = lead.inverse().expect("nonzero leading coefficient");
        let n = self.coeffs.len();
        let mut out = vec![Fe::zero(self.field); n];
        out[0] = lead_inv;
        for k in 1..n {
            let mut acc = Fe::zero(self.field);
            for i in 1..=k {
                acc = acc.add(&self.coeffs[i].mul(&out[k - i]));
            }
            out[k] = acc.mul(&lead_inv).neg();
        }
        Ok(Laurent::new(self.field, -self.val, out))
    }

    /// Exact division (mul by the inverse); window rules compose.
    pub fn div(&self, rhs: &Laurent) -> Result<Laurent> {
        Ok(self.mul(&rhs.invert()?))
    }

    /// Drop knowledge at and beyond `new_end` (useful to align windows).
    pub fn truncate_end(&self, new_end: i64) -> Laurent {
        if new_end >= self.end() {
            return self.clone();
        }
        let keep = (new_end - self.val).max(0) as usize;
        Laurent::new(self.field, self.val.min(new_end), self.coeffs[..keep].to_vec())
    }

    /// Whether the two series agree at every exponent where both are known
    /// (i.e. everywhere below the smaller `end`). Requires the overlap to be
    /// nonempty in the sense that the smaller end is positive knowledge.
    pub fn agrees_with(&self, rhs: &Laurent) -> bool {
        if self.field != rhs.field {
            return false;
        }
        let lo = self.val.min(rhs.val);
        let hi = self.end().min(rhs.end());
        (lo..hi).all(|e| self.coeff_below_end(e) == rhs.coeff_below_end(e))
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            let e = self.val + i as i64;
            if e == 0 {
                write!(f, "{c}")?;
            } else {
                if !c.is_one() {
                    write!(f, "{c}")?;
                }
                if e == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{e}")?;
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.end())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent[{}]({})", self.field.name(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe2(n: i64) -> Fe {
        Fe::from_int(FieldId::F2, n)
    }

    #[test]
    fn monomial_inversion() {
        // invert(t²) = t⁻² with the window length preserved.
        let t2 = Laurent::monomial(FieldId::F2, fe2(1), 2, 8);
        let inv = t2.invert().unwrap();
        assert_eq!(inv.valuation(), Some(-2));
        assert_eq!(inv.coeff(-2).unwrap(), fe2(1));
        assert_eq!(inv.end(), -2 + 8);
        // t² · t⁻² = 1.
        let prod = t2.mul(&inv);
        assert_eq!(prod.coeff(0).unwrap(), fe2(1));
        assert!((1..prod.end()).all(|e| prod.coeff(e).unwrap().is_zero()));
    }

    #[test]
    fn geometric_series_over_f2() {
        // invert(1 + t) = 1 + t + t² + … over F₂.
        let one_plus_t = Laurent::new(FieldId::F2, 0, vec![fe2(1), fe2(1), fe2(0), fe2(0), fe2(0), fe2(0)]);
        let inv = one_plus_t.invert().unwrap();
        for e in 0..inv.end() {
            assert_eq!(inv.coeff(e).unwrap(), fe2(1), "coefficient of t^{e}");
        }
    }

    #[test]
    fn underflow_is_an_error_and_below_window_is_zero() {
        let s = Laurent::monomial(FieldId::F3, Fe::from_int(FieldId::F3, 2), 1, 4);
        assert_eq!(s.coeff(-7).unwrap(), Fe::zero(FieldId::F3));
        assert_eq!(s.coeff(4).unwrap(), Fe::zero(FieldId::F3));
        assert!(matches!(
            s.coeff(5),
            Err(Error::PrecisionUnderflow { exponent: 5, val: 1, end: 5 })
        ));
    }

    #[test]
    fn zero_series_cannot_be_inverted() {
        let z = Laurent::zero_below(FieldId::F2, 10);
        assert!(matches!(z.invert(), Err(Error::ZeroSeries { .. })));
    }

    #[test]
    fn trim_raises_val_and_keeps_end() {
        let s = Laurent::new(
            FieldId::F2,
            -2,
            vec![fe2(0), fe2(0), fe2(1), fe2(1)],
        );
        assert_eq!(s.valuation(), Some(0));
        assert_eq!(s.end(), 2);
        // Cancellation keeps the end: (x) − (x) is known zero below end.
        let d = s.sub(&s);
        assert!(d.is_zero_on_window());
        assert_eq!(d.end(), 2);
        assert_eq!(d.coeff(1).unwrap(), fe2(0));
        assert!(d.coeff(2).is_err());
    }

    #[test]
    fn window_rules() {
        let a = Laurent::new(FieldId::F2, -1, vec![fe2(1); 6]); // [−1, 5)
        let b = Laurent::new(FieldId::F2, 2, vec![fe2(1); 2]); // [2, 4)
        assert_eq!(a.add(&b).end(), 4);
        assert_eq!(a.add(&b).window_start(), -1);
        let p = a.mul(&b);
        assert_eq!(p.valuation(), Some(1));
        assert_eq!(p.end(), 1 + 2);
    }

    #[test]
    fn add_scalar_reaches_exponent_zero() {
        let x = Laurent::monomial(FieldId::F4, Fe::one(FieldId::F4), -2, 8); // t⁻²
        let y = x.add_scalar(&Fe::generator(FieldId::F4));
        assert_eq!(y.coeff(-2).unwrap(), Fe::one(FieldId::F4));
        assert_eq!(y.coeff(0).unwrap(), Fe::generator(FieldId::F4));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn arb_fe4() -> impl Strategy<Value = Fe> {
        (0u8..2, 0u8..2).prop_map(|(a, b)| Fe::from_coeffs(FieldId::F4, &[a, b]))
    }

    fn arb_series() -> impl Strategy<Value = Laurent> {
        (-3i64..3, proptest::collection::vec(arb_fe4(), 4..10))
            .prop_map(|(v, c)| Laurent::new(FieldId::F4, v, c))
    }

    proptest! {
        /// (a·b)·a⁻¹ agrees with b on the joint window.
        #[test]
        fn mul_invert_roundtrip(a in arb_series(), b in arb_series()) {
            prop_assume!(!a.is_zero_on_window());
            let back = a.mul(&b).mul(&a.invert().unwrap());
            prop_assert!(back.agrees_with(&b));
        }

        /// Distributivity within windows.
        #[test]
        fn distributive(a in arb_series(), b in arb_series(), c in arb_series()) {
            let lhs = a.mul(&b.add(&c));
            let rhs = a.mul(&b).add(&a.mul(&c));
            prop_assert!(lhs.agrees_with(&rhs));
        }
    }
}
