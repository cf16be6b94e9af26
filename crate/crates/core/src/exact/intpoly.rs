//! Integer polynomials in the variable T, used for zeta numerators and the
//! L-quotients L_q, L̃_q (with the convention T = q^{−s}, P(0) = 1).
//!
//! Coefficients are arbitrary-precision integers stored ascending; the zero
//! polynomial is the empty coefficient list. The gcd is computed over Q via a
//! primitive pseudo-remainder sequence and returned as the primitive integer
//! polynomial with positive leading coefficient, so "gcd = 1" is a direct
//! machine certificate for "the two polynomials have no common zero".

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// An integer polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    /// Normalizing constructor: strips trailing zeros.
    pub fn new(mut c: Vec<BigInt>) -> IntPoly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn from_coeffs(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&n| BigInt::from(n)).collect())
    }

    pub fn zero() -> IntPoly {
        IntPoly { c: vec![] }
    }

    pub fn one() -> IntPoly {
        IntPoly::from_coeffs(&[1])
    }

    pub fn constant(n: i64) -> IntPoly {
        IntPoly::from_coeffs(&[n])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Coefficient of T^i (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Ascending coefficients as i64 (the polynomials in this crate are tiny;
    /// overflowing this conversion would be a bug).
    pub fn coeffs_i64(&self) -> Vec<i64> {
        self.c
            .iter()
            .map(|b| i64::try_from(b).expect("coefficient fits in i64"))
            .collect()
    }

    pub fn add(&self, rhs: &IntPoly) -> IntPoly {
        let n = self.c.len().max(rhs.c.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }

    pub fn sub(&self, rhs: &IntPoly) -> IntPoly {
        let n = self.c.len().max(rhs.c.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.c.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in rhs.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.c.iter().map(|x| x * k).collect())
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for coeff in self.c.iter().rev() {
            acc = acc * x + coeff;
        }
        acc
    }

    /// p(−T): negate the odd coefficients.
    pub fn compose_neg(&self) -> IntPoly {
        IntPoly::new(
            self.c
                .iter()
                .enumerate()
                .map(|(i, x)| if i % 2 == 1 { -x } else { x.clone() })
                .collect(),
        )
    }

    /// p(T^k): spread the coefficients k apart.
    pub fn inflate(&self, k: usize) -> IntPoly {
        assert!(k >= 1);
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); (self.c.len() - 1) * k + 1];
        for (i, x) in self.c.iter().enumerate() {
            out[i * k] = x.clone();
        }
        IntPoly::new(out)
    }

    /// Content: gcd of the coefficients, positive (zero for the zero
    /// polynomial).
    pub fn content(&self) -> BigInt {
        self.c
            .iter()
            .fold(BigInt::zero(), |acc, x| acc.gcd(&x.abs()))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut content = self.content();
        if self.leading().is_negative() {
            content = -content;
        }
        IntPoly::new(self.c.iter().map(|x| x / &content).collect())
    }

    /// Exact division over Q with an integrality check: errors unless the
    /// remainder is zero and the quotient has integer coefficients.
    pub fn exact_div(&self, den: &IntPoly) -> Result<IntPoly> {
        if den.is_zero() {
            return Err(Error::InexactDivision {
                num: self.to_string(),
                den: den.to_string(),
            });
        }
        let mut rem: Vec<BigRational> = self
            .c
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        let dd = den.degree().expect("nonzero divisor");
        let dlead = BigRational::from_integer(den.leading());
        let mut quot = vec![BigRational::zero(); self.c.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().expect("nonempty").clone() / dlead.clone();
            for i in 0..=dd {
                let sub = factor.clone() * BigRational::from_integer(den.coeff(i));
                rem[k + i] -= sub;
            }
            debug_assert!(rem.last().expect("nonempty").is_zero());
            rem.pop();
            quot[k] = factor;
        }
        let exact = rem.iter().all(Zero::is_zero) && quot.iter().all(|x| x.is_integer());
        if !exact {
            return Err(Error::InexactDivision {
                num: self.to_string(),
                den: den.to_string(),
            });
        }
        Ok(IntPoly::new(quot.into_iter().map(|x| x.to_integer()).collect()))
    }

    /// Check the functional equation of a genus-g zeta numerator:
    /// c_{2g−i} = q^{g−i}·c_i for 0 ≤ i ≤ g (with degree exactly 2g).
    pub fn functional_equation_holds(&self, genus: u32, q: u64) -> bool {
        let g = genus as usize;
        if self.degree() != Some(2 * g) {
            return genus == 0 && self.degree() == Some(0);
        }
        let q = BigInt::from(q);
        (0..=g).all(|i| self.coeff(2 * g - i) == self.coeff(i) * q.pow((g - i) as u32))
    }
}

/// Primitive gcd over the integers: the generator of the rational gcd, scaled
/// to primitive form with positive leading coefficient. Errors if both inputs
/// are zero.
pub fn poly_gcd(a: &IntPoly, b: &IntPoly) -> Result<IntPoly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::LinearSolve(
            "gcd of two zero polynomials is undefined".into(),
        ));
    }
    let mut f = a.primitive();
    let mut g = b.primitive();
    while !g.is_zero() {
        let r = pseudo_rem(&f, &g);
        f = g;
        g = r.primitive();
    }
    Ok(f.primitive())
}

/// Pseudo-remainder: lead(g)^(deg f − deg g + 1) · f reduced modulo g.
/// Stays in integer arithmetic; callers re-normalize to primitive parts.
fn pseudo_rem(f: &IntPoly, g: &IntPoly) -> IntPoly {
    let df = match f.degree() {
        Some(d) => d,
        None => return IntPoly::zero(),
    };
    let dg = g.degree().expect("nonzero divisor in pseudo_rem");
    if df < dg {
        return f.clone();
    }
    let lead = g.leading();
    let mut rem = f.scale(&lead.pow((df - dg + 1) as u32));
    while let Some(dr) = rem.degree() {
        if dr < dg {
            break;
        }
        // rem -= (lead(rem)/lead(g)) * T^(dr-dg) * g, exactly.
        let factor = rem.leading() / &lead;
        let mut shifted = vec![BigInt::zero(); dr - dg];
        shifted.extend(g.c.iter().map(|x| x * &factor));
        rem = rem.sub(&IntPoly::new(shifted));
    }
    rem
}

impl fmt::Display for IntPoly {
    /// Ascending-power rendering, e.g. `1 - 2T + 2T^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let mag = x.abs();
            if first {
                if x.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if x.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && i > 0;
            if !unit_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "T")?,
                _ => write!(f, "T^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl std::ops::Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::add(self, rhs)
    }
}

impl std::ops::Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(coeffs)
    }

    #[test]
    fn quotient_l_polynomial_pairs_are_coprime() {
        // gcd(L₂, L̃₂) with L₂ = 2T²+2T+1 and L̃₂ = 2T²+1.
        assert_eq!(poly_gcd(&p(&[1, 2, 2]), &p(&[1, 0, 2])).unwrap(), p(&[1]));
        // gcd(L₃, L̃₃) = gcd(3T²+3T+1, 3T²+T+1).
        assert_eq!(poly_gcd(&p(&[1, 3, 3]), &p(&[1, 1, 3])).unwrap(), p(&[1]));
        // gcd(L₄, L̃₄) = gcd(4T²+4T+1, 4T²+1).
        assert_eq!(poly_gcd(&p(&[1, 4, 4]), &p(&[1, 0, 4])).unwrap(), p(&[1]));
    }

    #[test]
    fn gcd_with_itself_is_the_primitive_part() {
        let f = p(&[2, 4, 6]);
        assert_eq!(poly_gcd(&f, &f).unwrap(), p(&[1, 2, 3]));
    }

    #[test]
    fn gcd_divides_both_inputs() {
        let cases = [
            (p(&[1, 2, 1]), p(&[1, 1])),          // (T+1)² and (T+1)
            (p(&[-1, 0, 1]), p(&[1, 2, 1])),      // (T−1)(T+1) and (T+1)²
            (p(&[2, 2]), p(&[4, 8, 4])),          // content handling
            (p(&[1, 0, -1, 0, 0, 7]), p(&[3, 5])), // coprime
        ];
        for (a, b) in cases {
            let g = poly_gcd(&a, &b).unwrap();
            assert!(a.exact_div(&g).is_ok() || check_rational_div(&a, &g));
            assert!(b.exact_div(&g).is_ok() || check_rational_div(&b, &g));
        }
    }

    /// A primitive gcd divides primitive inputs over Z, but a non-primitive
    /// input is only divisible over Q; accept that case explicitly.
    fn check_rational_div(num: &IntPoly, den: &IntPoly) -> bool {
        num.primitive().exact_div(&den.primitive()).is_ok()
    }

    #[test]
    fn gcd_of_two_zeros_is_an_error() {
        assert!(poly_gcd(&IntPoly::zero(), &IntPoly::zero()).is_err());
        assert_eq!(poly_gcd(&IntPoly::zero(), &p(&[0, 2])).unwrap(), p(&[0, 1]));
    }

    #[test]
    fn exact_division() {
        // (2T²−2T+1)(2T²+1) = 4T⁴−4T³+4T²−2T+1.
        let prod = p(&[1, -2, 4, -4, 4]);
        assert_eq!(prod.exact_div(&p(&[1, -2, 2])).unwrap(), p(&[1, 0, 2]));
        assert_eq!(prod.exact_div(&p(&[1, 0, 2])).unwrap(), p(&[1, -2, 2]));
        // Non-divisor → error with the operands in the message.
        assert!(matches!(
            prod.exact_div(&p(&[1, 1])),
            Err(Error::InexactDivision { .. })
        ));
        // Integer-quotient requirement: (2T+1)/2 is not integral.
        assert!(p(&[1, 2]).exact_div(&p(&[2])).is_err());
    }

    #[test]
    fn compose_and_inflate() {
        let f = p(&[1, -2, 2]); // 1 − 2T + 2T²
        assert_eq!(f.compose_neg(), p(&[1, 2, 2]));
        // P(T)·P(−T) = P₂(T²) pattern check at q=2:
        // (1−2T+2T²)(1+2T+2T²) = 1 + 0T + 0T² + 0T³ + 4T⁴.
        let prod = f.mul(&f.compose_neg());
        assert_eq!(prod, p(&[1, 0, 0, 0, 4]));
        assert_eq!(p(&[1, 0, 4]).inflate(2), p(&[1, 0, 0, 0, 4]));
    }

    #[test]
    fn functional_equation() {
        // Elliptic numerators qT² − aT + 1 satisfy genus-1 FE.
        assert!(p(&[1, -2, 2]).functional_equation_holds(1, 2));
        assert!(p(&[1, -4, 4]).functional_equation_holds(1, 4));
        // Genus-2 example: 9T⁴−6T³+3T²−2T+1 over q=3 (c₃ = q·c₁, c₄ = q²).
        assert!(p(&[1, -2, 3, -6, 9]).functional_equation_holds(2, 3));
        assert!(!p(&[1, -2, 3, -5, 9]).functional_equation_holds(2, 3));
        // Genus 0: the constant 1.
        assert!(IntPoly::one().functional_equation_holds(0, 2));
    }

    #[test]
    fn display_ascending() {
        assert_eq!(p(&[1, -2, 2]).to_string(), "1 - 2T + 2T^2");
        assert_eq!(p(&[1, 0, 2]).to_string(), "1 + 2T^2");
        assert_eq!(p(&[0, 1, 0, -1]).to_string(), "T - T^3");
        assert_eq!(IntPoly::zero().to_string(), "0");
        assert_eq!(p(&[-3]).to_string(), "-3");
    }

    #[test]
    fn eval() {
        // Class-number convention: P(1) for 2T²−2T+1 is 1.
        assert_eq!(p(&[1, -2, 2]).eval_int(&BigInt::from(1)), BigInt::from(1));
        assert_eq!(p(&[1, -4, 4]).eval_int(&BigInt::from(1)), BigInt::from(1));
    }
}
