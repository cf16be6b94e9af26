//! Local reduction at a degree-two place: the coset family of the Hecke
//! operator Φ_P, exact reduction of each coset matrix to a standard vertex
//! representative, and the resulting elimination of cusp forms.
//!
//! Everything happens inside GL₂ of the Laurent-series field k((t)) at the
//! place at infinity, where t = x/y is the local parameter. The ring of
//! functions regular away from infinity is spanned by the monomials x^i y^j
//! with j ≤ 1; their pole orders are 0, 2, 3, 4, … — every natural number
//! except 1. Left multiplication by unipotent matrices with such entries
//! and right multiplication by integral unimodular matrices are the two
//! legal move families; a reduction is accepted only if its recorded witness
//! chain, replayed from the original matrix, reproduces the claimed
//! standard representative exactly on the working window.

use crate::curve::{curve, Curve, CurveId, DegreeTwoPlace};
use crate::exact::field::{Fe, FieldId};
use crate::exact::laurent::Laurent;
use crate::exact::{rat, Rat};
use crate::graph::{QuotientGraph, VertexId};
use crate::hecke::{CuspData, FormVector};
use crate::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// A 2×2 matrix over the Laurent-series field.
#[derive(Clone, Debug)]
pub struct Matrix2 {
    pub a: Laurent,
    pub b: Laurent,
    pub c: Laurent,
    pub d: Laurent,
}

impl Matrix2 {
    pub fn new(a: Laurent, b: Laurent, c: Laurent, d: Laurent) -> Matrix2 {
        Matrix2 { a, b, c, d }
    }

    pub fn identity(field: FieldId, len: usize) -> Matrix2 {
        let one = Laurent::one(field, len);
        let end = one.end();
        Matrix2 {
            a: one.clone(),
            b: Laurent::zero_below(field, end),
            c: Laurent::zero_below(field, end),
            d: one,
        }
    }

    /// diag(s, s) — a central scalar.
    pub fn scalar(s: Laurent) -> Matrix2 {
        let z = Laurent::zero_below(s.field(), s.end());
        Matrix2 { a: s.clone(), b: z.clone(), c: z, d: s }
    }

    /// diag(a, d).
    pub fn diagonal(a: Laurent, d: Laurent) -> Matrix2 {
        let end = a.end().min(d.end());
        let z = Laurent::zero_below(a.field(), end);
        Matrix2 { a, b: z.clone(), c: z, d }
    }

    /// Upper unipotent (1, b; 0, 1).
    pub fn upper(b: Laurent, len: usize) -> Matrix2 {
        let f = b.field();
        let one = Laurent::one(f, len);
        Matrix2 {
            a: one.clone(),
            b,
            c: Laurent::zero_below(f, one.end()),
            d: one,
        }
    }

    /// The Weyl swap (0, 1; 1, 0).
    pub fn swap(field: FieldId, len: usize) -> Matrix2 {
        let one = Laurent::one(field, len);
        let z = Laurent::zero_below(field, one.end());
        Matrix2 { a: z.clone(), b: one.clone(), c: one, d: z }
    }

    pub fn mul_mat(&self, rhs: &Matrix2) -> Matrix2 {
        Matrix2 {
            a: self.a.mul(&rhs.a).add(&self.b.mul(&rhs.c)),
            b: self.a.mul(&rhs.b).add(&self.b.mul(&rhs.d)),
            c: self.c.mul(&rhs.a).add(&self.d.mul(&rhs.c)),
            d: self.c.mul(&rhs.b).add(&self.d.mul(&rhs.d)),
        }
    }

    pub fn det(&self) -> Laurent {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// Entrywise agreement below the common window ends.
    pub fn agrees_with(&self, rhs: &Matrix2) -> bool {
        self.a.agrees_with(&rhs.a)
            && self.b.agrees_with(&rhs.b)
            && self.c.agrees_with(&rhs.c)
            && self.d.agrees_with(&rhs.d)
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}

/// The exact local data of a curve at infinity: the coordinate expansions
/// and the degree-two places with their uniformizers.
#[derive(Clone, Debug)]
pub struct LocalData {
    pub curve: Curve,
    pub places: Vec<DegreeTwoPlace>,
    pub x: Laurent,
    pub y: Laurent,
    pub precision: usize,
}

impl LocalData {
    /// Expand the curve at infinity and certify, for every degree-two
    /// place: the curve equation vanishes on the whole window, the
    /// uniformizer x − ℓ has a double pole with unit cofactor, and
    /// y/(x − ℓ) opens as t⁻¹ + ℓ·t + ⋯ .
    pub fn new(id: CurveId, precision: usize) -> Result<LocalData> {
        let cv = curve(id);
        let f = cv.base;
        let (x, y) = cv.xy_series_at_infinity(precision)?;
        // Residual of y² + a₃y − x³ − a₄x − a₆ must vanish on the window.
        let residual = y
            .mul(&y)
            .add(&y.scale(&cv.a3))
            .sub(&x.mul(&x).mul(&x))
            .sub(&x.scale(&cv.a4))
            .sub(&Laurent::monomial(f, cv.a6, 0, precision));
        if !residual.is_zero_on_window() {
            return Err(Error::SingularModel { field: f.name() });
        }
        let places = cv.degree_two_places()?;
        for place in &places {
            let pi = uniformizer(&x, &place.ell);
            if pi.valuation() != Some(-2) {
                return Err(Error::PlaceCertificate {
                    curve: cv.id.label(),
                    reason: format!("uniformizer at ℓ = {} is not a double pole", place.ell),
                });
            }
            let unit = pi.shift(2);
            if unit.leading() != Some(Fe::one(f)) {
                return Err(Error::PlaceCertificate {
                    curve: cv.id.label(),
                    reason: "uniformizer cofactor is not a unit with leading 1".into(),
                });
            }
            let head = y.div(&pi)?;
            let want = [
                (-1, Fe::one(f)),
                (0, Fe::zero(f)),
                (1, place.ell),
            ];
            for (e, c) in want {
                if head.coeff(e)? != c {
                    return Err(Error::PlaceCertificate {
                        curve: cv.id.label(),
                        reason: format!(
                            "y/(x − ℓ) has coefficient {} at t^{e}, expected {c}",
                            head.coeff(e)?
                        ),
                    });
                }
            }
        }
        Ok(LocalData { curve: cv, places, x, y, precision })
    }

    pub fn field(&self) -> FieldId {
        self.curve.base
    }

    pub fn place(&self, index: usize) -> Result<&DegreeTwoPlace> {
        self.places
            .iter()
            .find(|p| p.index == index)
            .ok_or_else(|| Error::PlaceCertificate {
                curve: self.curve.id.label(),
                reason: format!("no degree-two place with index {index}"),
            })
    }

    /// The expansion of the uniformizer x − ℓ at the given place.
    pub fn pi(&self, index: usize) -> Result<Laurent> {
        Ok(uniformizer(&self.x, &self.place(index)?.ell))
    }
}

fn uniformizer(x: &Laurent, ell: &Fe) -> Laurent {
    x.add_scalar(&ell.neg())
}

/// One basis function of the ring of functions regular away from infinity.
#[derive(Clone, Debug)]
pub struct AFunction {
    pub label: String,
    /// Pole order at infinity (= −valuation).
    pub order: u64,
    pub series: Laurent,
}

/// The monomials x^i y^j with j ≤ 1 up to a pole-order bound, one for each
/// attainable order. Order 1 is the Weierstrass gap: no function has a
/// simple pole.
#[derive(Clone, Debug)]
pub struct AFunctionBasis {
    pub elements: Vec<AFunction>,
}

impl AFunctionBasis {
    pub fn new(data: &LocalData, max_order: u64) -> Result<AFunctionBasis> {
        let f = data.field();
        let mut elements = vec![AFunction {
            label: "1".into(),
            order: 0,
            series: Laurent::one(f, data.precision),
        }];
        let mut xpow = Laurent::one(f, data.precision);
        for i in 1.. {
            xpow = xpow.mul(&data.x);
            let ord_x = 2 * i;
            let ord_xy = 2 * i + 1; // x^{i−1}·y has order 2(i−1) + 3.
            if ord_x > max_order && ord_xy > max_order {
                break;
            }
            if ord_xy <= max_order {
                let prev = if i == 1 {
                    data.y.clone()
                } else {
                    elements
                        .iter()
                        .find(|e| e.order == 2 * (i - 1))
                        .expect("x-power recorded")
                        .series
                        .mul(&data.y)
                };
                elements.push(AFunction {
                    label: if i == 1 { "y".into() } else { format!("x^{}·y", i - 1) },
                    order: ord_xy,
                    series: prev,
                });
            }
            if ord_x <= max_order {
                elements.push(AFunction {
                    label: if i == 1 { "x".into() } else { format!("x^{i}") },
                    order: ord_x,
                    series: xpow.clone(),
                });
            }
        }
        elements.sort_by_key(|e| e.order);
        // Certify the gap structure and the normalization.
        for e in &elements {
            if e.series.valuation() != Some(-(e.order as i64)) {
                return Err(Error::PlaceCertificate {
                    curve: data.curve.id.label(),
                    reason: format!("{} does not have pole order {}", e.label, e.order),
                });
            }
            if e.series.leading() != Some(Fe::one(f)) {
                return Err(Error::PlaceCertificate {
                    curve: data.curve.id.label(),
                    reason: format!("{} is not normalized", e.label),
                });
            }
        }
        let orders: Vec<u64> = elements.iter().map(|e| e.order).collect();
        let expected: Vec<u64> = (0..=max_order).filter(|&o| o != 1).collect();
        if orders != expected {
            return Err(Error::PlaceCertificate {
                curve: data.curve.id.label(),
                reason: format!("pole orders {orders:?} are not 0, 2, 3, … (gap at 1)"),
            });
        }
        Ok(AFunctionBasis { elements })
    }

    fn with_order(&self, order: u64) -> Option<&AFunction> {
        self.elements.iter().find(|e| e.order == order)
    }
}

/// A standard double-coset representative: a cusp vertex
/// C(i) = diag(t^{−i}, 1) or a torus vertex
/// T(i) = (t², t⁻¹ + ℓ_i·t; 0, 1) attached to the i-th degree-two place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StandardClass {
    Cusp(usize),
    Torus(usize),
}

impl fmt::Display for StandardClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardClass::Cusp(i) => write!(f, "C({i})"),
            StandardClass::Torus(i) => write!(f, "T({i})"),
        }
    }
}

/// Which side of the matrix a witness move multiplies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One recorded move of the reduction: left moves are unipotent matrices
/// with entries regular away from infinity (or the Weyl swap, or a constant
/// diagonal); right moves are integral with unit determinant, or central
/// scalars.
#[derive(Clone, Debug)]
pub struct Move {
    pub side: Side,
    pub mat: Matrix2,
    pub note: String,
}

/// The verified outcome of one reduction.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub class: StandardClass,
    pub witness: Vec<Move>,
    /// The standard representative the witness chain reaches.
    pub representative: Matrix2,
}

/// The canonical matrix of a standard class.
pub fn canonical_representative(
    data: &LocalData,
    class: StandardClass,
) -> Result<Matrix2> {
    let f = data.field();
    let len = data.precision;
    let one = Fe::one(f);
    Ok(match class {
        StandardClass::Cusp(i) => Matrix2::diagonal(
            Laurent::monomial(f, one, -(i as i64), len),
            Laurent::one(f, len),
        ),
        StandardClass::Torus(i) => {
            let ell = data.place(i)?.ell;
            let u = Laurent::monomial(f, one, -1, len)
                .add(&Laurent::monomial(f, ell, 1, len));
            Matrix2 {
                a: Laurent::monomial(f, one, 2, len),
                b: u,
                c: Laurent::zero_below(f, len as i64),
                d: Laurent::one(f, len),
            }
        }
    })
}

/// Nonzero coefficients of a series on its window, ascending.
fn support(l: &Laurent) -> Vec<(i64, Fe)> {
    (l.window_start()..l.end())
        .filter_map(|e| {
            let c = l.coeff(e).expect("exponent inside window");
            if c.is_zero() {
                None
            } else {
                Some((e, c))
            }
        })
        .collect()
}

/// Reduce an upper-triangular matrix to a standard representative by legal
/// moves, recording the witness chain and replaying it before returning.
///
/// The algorithm: normalize the right column to (t^n, u; 0, 1) by central
/// and diagonal right moves; kill every exponent ≤ 0 of u except −1 with
/// left unipotent moves (the gap at pole order 1 protects t⁻¹); kill every
/// exponent ≥ n with a right integral unipotent move. If u is now zero the
/// class is C(|n|) (a Weyl swap and a central scalar flip n positive);
/// if n = 2 and u = c₋₁t⁻¹ + c₁t with c₋₁ ≠ 0, a constant diagonal pair
/// rescales u to t⁻¹ + (c₁/c₋₁)·t, which must match one of the degree-two
/// places. Everything else is outside the repertoire of this reducer.
pub fn reduce_to_standard(data: &LocalData, m: &Matrix2) -> Result<Reduction> {
    let f = data.field();
    let len = data.precision;
    let one_fe = Fe::one(f);
    if !m.c.is_zero_on_window() {
        return Err(Error::OutsideRepertoire(
            "matrix is not upper triangular".into(),
        ));
    }
    let mut moves: Vec<Move> = Vec::new();
    // Right central scalar: divide by the lower-right entry.
    let d_inv = m
        .d
        .invert()
        .map_err(|_| Error::OutsideRepertoire("singular lower-right entry".into()))?;
    if !m.d.agrees_with(&Laurent::one(f, len)) {
        moves.push(Move {
            side: Side::Right,
            mat: Matrix2::scalar(d_inv.clone()),
            note: "central scalar 1/d".into(),
        });
    }
    let a = m.a.mul(&d_inv);
    let mut u = m.b.mul(&d_inv);
    let Some(n) = a.valuation() else {
        return Err(Error::OutsideRepertoire(
            "upper-left entry vanishes on the window".into(),
        ));
    };
    // Right diagonal: strip the unit cofactor of the upper-left entry.
    let unit = a.shift(-n);
    if !unit.agrees_with(&Laurent::one(f, len)) {
        let w_inv = unit.invert()?;
        moves.push(Move {
            side: Side::Right,
            mat: Matrix2::diagonal(w_inv, Laurent::one(f, len)),
            note: "diagonal unit normalization".into(),
        });
    }
    // Left unipotent kills: exponents ≤ 0 except −1, ascending.
    let need_order = match u.valuation() {
        Some(v) if v < 0 => (-v) as u64,
        _ => 0,
    };
    let basis = AFunctionBasis::new(data, need_order.max(2))?;
    while let Some((e, c)) = support(&u)
        .into_iter()
        .find(|(e, _)| *e <= 0 && *e != -1)
    {
        let g = basis.with_order((-e) as u64).ok_or_else(|| {
            Error::OutsideRepertoire(format!("no regular function of pole order {}", -e))
        })?;
        let scaled = g.series.scale(&c);
        u = u.sub(&scaled);
        moves.push(Move {
            side: Side::Left,
            mat: Matrix2::upper(scaled.neg(), len),
            note: format!("subtract {}·{} (kills t^{e})", c, g.label),
        });
    }
    // Right integral kill: exponents ≥ n.
    let tail: Vec<(i64, Fe)> = support(&u).into_iter().filter(|(e, _)| *e >= n).collect();
    if !tail.is_empty() {
        let mut t_poly = Laurent::zero_below(f, u.end());
        for (e, c) in &tail {
            t_poly = t_poly.add(&Laurent::monomial(f, *c, *e, len));
        }
        let h = t_poly.shift(-n).neg();
        u = u.sub(&t_poly);
        moves.push(Move {
            side: Side::Right,
            mat: Matrix2::upper(h, len),
            note: format!("kill exponents ≥ {n}"),
        });
    }
    // Classify.
    let supp = support(&u);
    let class = if supp.is_empty() {
        if n > 0 {
            let w = Matrix2::swap(f, len);
            moves.push(Move { side: Side::Left, mat: w.clone(), note: "Weyl swap".into() });
            moves.push(Move { side: Side::Right, mat: w, note: "Weyl swap".into() });
            moves.push(Move {
                side: Side::Right,
                mat: Matrix2::scalar(Laurent::monomial(f, one_fe, -n, len)),
                note: format!("central scalar t^{}", -n),
            });
            StandardClass::Cusp(n as usize)
        } else {
            StandardClass::Cusp((-n) as usize)
        }
    } else if n == 2 && supp.iter().all(|(e, _)| *e == -1 || *e == 1) {
        let c_m1 = u.coeff(-1)?;
        if c_m1.is_zero() {
            return Err(Error::OutsideRepertoire(format!(
                "column (t^2, {u}) has no simple pole to anchor a torus class"
            )));
        }
        let d = c_m1.inverse()?;
        if !c_m1.is_one() {
            moves.push(Move {
                side: Side::Left,
                mat: Matrix2::diagonal(
                    Laurent::monomial(f, d, 0, len),
                    Laurent::one(f, len),
                ),
                note: format!("left constant diagonal {d}"),
            });
            moves.push(Move {
                side: Side::Right,
                mat: Matrix2::diagonal(
                    Laurent::monomial(f, c_m1, 0, len),
                    Laurent::one(f, len),
                ),
                note: format!("right constant diagonal {c_m1}"),
            });
            u = u.scale(&d);
        }
        let ell_hat = u.coeff(1)?;
        let place = data
            .places
            .iter()
            .find(|p| p.ell == ell_hat)
            .ok_or_else(|| {
                Error::OutsideRepertoire(format!(
                    "torus parameter {ell_hat} matches no degree-two place"
                ))
            })?;
        StandardClass::Torus(place.index)
    } else {
        return Err(Error::OutsideRepertoire(format!(
            "reduced column (t^{n}, {u}) is not a standard shape"
        )));
    };
    // Replay the witness chain on the original matrix and demand exact
    // agreement with the canonical representative.
    let mut replay = m.clone();
    for mv in &moves {
        replay = match mv.side {
            Side::Left => mv.mat.mul_mat(&replay),
            Side::Right => replay.mul_mat(&mv.mat),
        };
    }
    let rep = canonical_representative(data, class)?;
    if !replay.agrees_with(&rep) {
        return Err(Error::WitnessMismatch(format!(
            "chain for {class} replays to {replay}, not to {rep}"
        )));
    }
    Ok(Reduction { class, witness: moves, representative: rep })
}

/// One labeled coset of the degree-two Hecke operator.
#[derive(Clone, Debug)]
pub struct Coset {
    pub label: String,
    pub mat: Matrix2,
}

/// The q² + 1 coset representatives of Φ_P at the place with the given
/// index: diag(π, 1), then (1, b₀ + b₁y; 0, π) for all b₀, b₁ in the
/// constant field — b₀ + b₁·y runs over representatives of the residue
/// field of the place.
pub fn phi_p_cosets(data: &LocalData, place_index: usize) -> Result<Vec<Coset>> {
    let f = data.field();
    let len = data.precision;
    let pi = data.pi(place_index)?;
    let mut out = vec![Coset {
        label: "m∞ = diag(π, 1)".into(),
        mat: Matrix2::diagonal(pi.clone(), Laurent::one(f, len)),
    }];
    for b0 in f.elements() {
        for b1 in f.elements() {
            let b = Laurent::monomial(f, b0, 0, len).add(&data.y.scale(&b1));
            out.push(Coset {
                label: format!("m[{b0} + ({b1})·y]"),
                mat: Matrix2 {
                    a: Laurent::one(f, len),
                    b,
                    c: Laurent::zero_below(f, len as i64),
                    d: pi.clone(),
                },
            });
        }
    }
    Ok(out)
}

/// The fully reduced coset column of Φ_P at one place.
#[derive(Clone, Debug)]
pub struct PhiColumn {
    pub place_index: usize,
    /// (coset label, standard class) for every coset, in coset order.
    pub outcomes: Vec<(String, StandardClass)>,
    /// Aggregated multiplicities, ascending by class.
    pub tally: Vec<(StandardClass, u64)>,
}

pub fn phi_p_column(data: &LocalData, place_index: usize) -> Result<PhiColumn> {
    let cosets = phi_p_cosets(data, place_index)?;
    let q = data.curve.base.order();
    if cosets.len() as u64 != q * q + 1 {
        return Err(Error::TallyMismatch(format!(
            "{} cosets at a degree-two place of norm {}",
            cosets.len(),
            q * q
        )));
    }
    let mut outcomes = Vec::with_capacity(cosets.len());
    let mut tally: BTreeMap<StandardClass, u64> = BTreeMap::new();
    for coset in &cosets {
        let red = reduce_to_standard(data, &coset.mat)?;
        *tally.entry(red.class).or_insert(0) += 1;
        outcomes.push((coset.label.clone(), red.class));
    }
    let total: u64 = tally.values().sum();
    if total != q * q + 1 {
        return Err(Error::TallyMismatch(format!(
            "tally totals {total}, expected {}",
            q * q + 1
        )));
    }
    Ok(PhiColumn {
        place_index,
        outcomes,
        tally: tally.into_iter().collect(),
    })
}

/// One linear condition a Φ_P column imposes on the cusp subspace.
#[derive(Clone, Debug)]
pub struct CuspCondition {
    pub place_index: usize,
    /// The functional evaluated on each cusp basis vector.
    pub values: Vec<Rat>,
}

/// The outcome of imposing every degree-two-place column on the cusp
/// subspace.
#[derive(Clone, Debug)]
pub struct CuspElimination {
    pub dim_before: usize,
    pub conditions: Vec<CuspCondition>,
    pub rank: usize,
    pub dim_after: usize,
}

/// Evaluate a standard class against a form vector: torus classes read the
/// matching torus vertex, cusp classes read the matching ray vertex.
fn class_value(f: &FormVector, class: StandardClass) -> Result<Rat> {
    match class {
        StandardClass::Torus(i) => f.get(VertexId::T(i)),
        StandardClass::Cusp(i) => f.get(VertexId::C(i)),
    }
}

/// Impose the reduced Φ_P columns on the cusp subspace and compute what is
/// left. Each column gives the functional f ↦ Σ multiplicity · f(class).
pub fn eliminate_cusp_forms(
    _g: &QuotientGraph,
    cusp: &CuspData,
    columns: &[PhiColumn],
) -> Result<CuspElimination> {
    let dim_before = cusp.dim;
    let mut conditions = Vec::with_capacity(columns.len());
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(columns.len());
    for col in columns {
        let mut values = Vec::with_capacity(cusp.basis.len());
        for f in &cusp.basis {
            let mut acc = Rat::zero();
            for (class, mult) in &col.tally {
                acc += rat(*mult as i64) * class_value(f, *class)?;
            }
            values.push(acc);
        }
        rows.push(values.clone());
        conditions.push(CuspCondition { place_index: col.place_index, values });
    }
    let rank = if rows.is_empty() || dim_before == 0 {
        0
    } else {
        crate::hecke::rref(&mut rows).len()
    };
    Ok(CuspElimination { dim_before, conditions, rank, dim_after: dim_before - rank })
}
