//! The Hecke operator at infinity on truncated form vectors, the toroidal
//! linear system, its exact solution space, and the induced spectral
//! decomposition.
//!
//! A form vector assigns a rational value to every vertex of the quotient
//! graph up to a cusp depth N. The operator Φ sends f to the weighted sum of
//! its out-neighbours; because the out-star of c_N reaches c_{N+1}, one
//! application of Φ consumes one depth level — truncation is tracked, never
//! silently extended.
//!
//! The toroidal conditions are the linear functionals
//!   R_k(f) = Σ_{(v, m) ∈ orbit} m · (Φ^k f)(v),
//! computed by transpose iteration: R₀ is the orbit indicator and
//! R_{k+1}[w] = Σ_v R_k[v] · weight(v → w). The solution space of
//! R₀ = ⋯ = R_K = 0 is solved exactly over the rationals, restricted to the
//! coordinates the rows actually touch; the reduced rows express each cusp
//! coordinate C_k in the free coordinates (T₁..T_q, Z₀, Z₁), which yields
//! both the recursion table and the induced matrix of Φ on the solution
//! space. Everything read off the reduction is re-verified against the
//! graph-level operator before it is used.

use crate::exact::intpoly::IntPoly;
use crate::exact::{rat, Rat};
use crate::graph::{GraphKind, QuotientGraph, VertexId};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A function on the quotient-graph vertices up to a cusp depth, with exact
/// rational values.
#[derive(Clone, Debug, PartialEq)]
pub struct FormVector {
    kind: GraphKind,
    q: u64,
    depth: usize,
    values: Vec<Rat>,
}

/// Index of a vertex in the canonical coordinate order
/// (T₁..T_q, Z₀, Z₁, C₀..C_depth; the cusp ray alone for the projective
/// line).
fn coord_index(kind: GraphKind, q: u64, depth: usize, v: VertexId) -> Result<usize> {
    let bad = || Err(Error::UnknownVertex(v.to_string()));
    match (kind, v) {
        (GraphKind::Elliptic, VertexId::T(j)) if 1 <= j && j <= q as usize => Ok(j - 1),
        (GraphKind::Elliptic, VertexId::Z(i)) if i <= 1 => Ok(q as usize + i),
        (GraphKind::Elliptic, VertexId::C(i)) if i <= depth => Ok(q as usize + 2 + i),
        (GraphKind::ProjectiveLine, VertexId::C(i)) if i <= depth => Ok(i),
        (_, VertexId::C(i)) if i > depth => Err(Error::DepthExhausted { depth, needed: i }),
        _ => bad(),
    }
}

impl FormVector {
    pub fn zero(g: &QuotientGraph, depth: usize) -> FormVector {
        let width = g.vertices(depth).len();
        FormVector {
            kind: g.kind(),
            q: g.q(),
            depth,
            values: vec![Rat::zero(); width],
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Coordinates in canonical order.
    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn get(&self, v: VertexId) -> Result<Rat> {
        Ok(self.values[coord_index(self.kind, self.q, self.depth, v)?].clone())
    }

    pub fn set(&mut self, v: VertexId, value: Rat) -> Result<()> {
        let i = coord_index(self.kind, self.q, self.depth, v)?;
        self.values[i] = value;
        Ok(())
    }

    /// The vertices addressed by this vector, in coordinate order.
    pub fn vertices(&self, g: &QuotientGraph) -> Vec<VertexId> {
        g.vertices(self.depth)
    }

    pub fn scale(&self, c: &Rat) -> FormVector {
        FormVector {
            kind: self.kind,
            q: self.q,
            depth: self.depth,
            values: self.values.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Rat::is_zero)
    }
}

/// Apply the Hecke operator at infinity once: (Φf)(v) = Σ weight(v→w)·f(w).
/// The result is one cusp level shorter than the input.
pub fn apply_phi_infty(g: &QuotientGraph, f: &FormVector) -> Result<FormVector> {
    if g.kind() != f.kind || g.q() != f.q {
        return Err(Error::InvalidGraph(
            "form vector does not belong to this quotient graph".into(),
        ));
    }
    if f.depth == 0 {
        return Err(Error::DepthExhausted { depth: 0, needed: 1 });
    }
    let out_depth = f.depth - 1;
    let mut out = FormVector::zero(g, out_depth);
    for v in g.vertices(out_depth) {
        let mut acc = Rat::zero();
        for a in g.out_arcs(v)? {
            acc += f.get(a.dst)? * rat(a.weight as i64);
        }
        out.set(v, acc)?;
    }
    Ok(out)
}

/// One toroidal condition R_k as an integer row over the depth-N layout.
#[derive(Clone, Debug)]
pub struct ToroidalRow {
    pub k: usize,
    pub coeffs: Vec<BigInt>,
    /// Where this row came from, for reports.
    pub provenance: String,
}

/// The stacked toroidal conditions R₀, …, R_K on depth-N form vectors.
#[derive(Clone, Debug)]
pub struct ToroidalSystem {
    pub kind: GraphKind,
    pub q: u64,
    pub depth: usize,
    pub rows: Vec<ToroidalRow>,
}

/// Build the rows by transpose iteration. `iterations` is the largest row
/// index K; row k is supported within cusp index k, so K may not exceed the
/// depth.
pub fn toroidal_rows(g: &QuotientGraph, depth: usize, iterations: usize) -> Result<ToroidalSystem> {
    if iterations > depth {
        return Err(Error::DepthExhausted { depth, needed: iterations });
    }
    let verts = g.vertices(depth);
    let width = verts.len();
    let idx = |v: VertexId| coord_index(g.kind(), g.q(), depth, v);
    let orbit = g.torus_orbit();
    let orbit_desc: Vec<String> = orbit.iter().map(|(v, m)| format!("{m}·f({v})")).collect();
    let mut current = vec![BigInt::zero(); width];
    for (v, m) in &orbit {
        current[idx(*v)?] = BigInt::from(*m);
    }
    let mut rows = Vec::with_capacity(iterations + 1);
    for k in 0..=iterations {
        rows.push(ToroidalRow {
            k,
            coeffs: current.clone(),
            provenance: format!(
                "R_{k}(f) = {} with f replaced by its {k}-fold Hecke transform",
                orbit_desc.join(" + ")
            ),
        });
        if k == iterations {
            break;
        }
        let mut next = vec![BigInt::zero(); width];
        for (vi, v) in verts.iter().enumerate() {
            if current[vi].is_zero() {
                continue;
            }
            for a in g.out_arcs(*v)? {
                let dst = idx(a.dst)?;
                next[dst] += &current[vi] * BigInt::from(a.weight);
            }
        }
        current = next;
    }
    Ok(ToroidalSystem { kind: g.kind(), q: g.q(), depth, rows })
}

/// Evaluate one toroidal row on a form vector of the same depth.
pub fn evaluate_row(sys: &ToroidalSystem, k: usize, f: &FormVector) -> Result<Rat> {
    if f.depth != sys.depth || f.kind != sys.kind {
        return Err(Error::LinearSolve(
            "form vector does not match the system layout".into(),
        ));
    }
    let row = sys
        .rows
        .iter()
        .find(|r| r.k == k)
        .ok_or_else(|| Error::LinearSolve(format!("no row {k} in the system")))?;
    let mut acc = Rat::zero();
    for (c, v) in row.coeffs.iter().zip(&f.values) {
        if !c.is_zero() {
            acc += Rat::from_integer(c.clone()) * v;
        }
    }
    Ok(acc)
}

/// One reduced row: the pivot coordinate expressed in the free coordinates,
/// pivot = Σ coeff · vertex.
#[derive(Clone, Debug)]
pub struct RrefRow {
    pub pivot: VertexId,
    pub combo: Vec<(VertexId, Rat)>,
}

/// Exact solution of the homogeneous toroidal system, restricted to the
/// coordinates the rows actually touch. Untouched coordinates are reported,
/// not constrained.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub touched: Vec<VertexId>,
    pub rank: usize,
    pub dim: usize,
    pub pivots: Vec<VertexId>,
    pub kernel: Vec<FormVector>,
    pub rows_rref: Vec<RrefRow>,
}

/// Reduced row echelon form over the rationals; returns pivot column indices.
pub(crate) fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, pv) in row.iter_mut().zip(pivot_row.iter()) {
                    let delta = &factor * pv;
                    *x = &*x - &delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn solve_space(g: &QuotientGraph, sys: &ToroidalSystem) -> Result<SolveOutcome> {
    let verts = g.vertices(sys.depth);
    // Columns some row actually touches, in coordinate order.
    let touched_idx: Vec<usize> = (0..verts.len())
        .filter(|&i| sys.rows.iter().any(|r| !r.coeffs[i].is_zero()))
        .collect();
    let touched: Vec<VertexId> = touched_idx.iter().map(|&i| verts[i]).collect();
    // Elimination order: cusp coordinates first, so the reduction expresses
    // each C_k in the remaining (free) coordinates.
    let mut order: Vec<usize> = touched_idx.clone();
    order.sort_by_key(|&i| match verts[i] {
        VertexId::C(k) => (0, k),
        VertexId::T(j) => (1, j),
        VertexId::Z(z) => (2, z),
    });
    let col_vertex: Vec<VertexId> = order.iter().map(|&i| verts[i]).collect();
    let mut m: Vec<Vec<Rat>> = sys
        .rows
        .iter()
        .map(|r| {
            order
                .iter()
                .map(|&i| Rat::from_integer(r.coeffs[i].clone()))
                .collect()
        })
        .collect();
    let pivot_cols = rref(&mut m);
    let rank = pivot_cols.len();
    let dim = touched.len() - rank;
    let pivots: Vec<VertexId> = pivot_cols.iter().map(|&c| col_vertex[c]).collect();
    let free_cols: Vec<usize> =
        (0..col_vertex.len()).filter(|c| !pivot_cols.contains(c)).collect();
    // Kernel basis: one vector per free column.
    let mut kernel = Vec::with_capacity(dim);
    for &fc in &free_cols {
        let mut f = FormVector::zero(g, sys.depth);
        f.set(col_vertex[fc], Rat::one())?;
        for (row, &pc) in m.iter().zip(&pivot_cols) {
            let coeff = &row[fc];
            if !coeff.is_zero() {
                f.set(col_vertex[pc], -coeff.clone())?;
            }
        }
        kernel.push(f);
    }
    // Reduced rows as pivot = Σ (−coeff)·free-vertex.
    let rows_rref = m
        .iter()
        .zip(&pivot_cols)
        .map(|(row, &pc)| RrefRow {
            pivot: col_vertex[pc],
            combo: free_cols
                .iter()
                .filter(|&&fc| !row[fc].is_zero())
                .map(|&fc| (col_vertex[fc], -row[fc].clone()))
                .collect(),
        })
        .collect();
    // Paranoia: every row annihilates every kernel vector.
    for f in &kernel {
        for r in &sys.rows {
            debug_assert!(evaluate_row(sys, r.k, f)?.is_zero());
        }
    }
    Ok(SolveOutcome { touched, rank, dim, pivots, kernel, rows_rref })
}

/// Coefficients of one eliminated cusp coordinate:
/// C_k = tau·(T₁+⋯+T_q) + z0·Z₀ + z1·Z₁.
#[derive(Clone, Debug, PartialEq)]
pub struct RecEntry {
    pub k: usize,
    pub tau: Rat,
    pub z0: Rat,
    pub z1: Rat,
}

/// The recursion table C₀, C₁, …, C_K in the free coordinates, read off the
/// reduced rows (for the projective line every entry is zero: the rows pin
/// each cusp coordinate to 0).
#[derive(Clone, Debug)]
pub struct RecursionTable {
    pub q: u64,
    pub entries: Vec<RecEntry>,
}

pub fn recursion_coefficients(out: &SolveOutcome) -> Result<RecursionTable> {
    let mut entries = Vec::with_capacity(out.rows_rref.len());
    let mut q_torus = 0usize;
    for row in &out.rows_rref {
        let VertexId::C(k) = row.pivot else {
            return Err(Error::LinearSolve(format!(
                "pivot {} is not a cusp coordinate",
                row.pivot
            )));
        };
        let mut tau: Option<Rat> = None;
        let mut z0 = Rat::zero();
        let mut z1 = Rat::zero();
        for (v, c) in &row.combo {
            match v {
                VertexId::T(_) => {
                    q_torus = q_torus.max(1);
                    match &tau {
                        None => tau = Some(c.clone()),
                        Some(t) if t == c => {}
                        Some(t) => {
                            return Err(Error::LinearSolve(format!(
                                "torus coefficients differ in C_{k}: {t} vs {c}"
                            )));
                        }
                    }
                }
                VertexId::Z(0) => z0 = c.clone(),
                VertexId::Z(1) => z1 = c.clone(),
                other => {
                    return Err(Error::LinearSolve(format!(
                        "cusp coordinate C_{k} depends on uneliminated {other}"
                    )));
                }
            }
        }
        entries.push(RecEntry {
            k,
            tau: tau.unwrap_or_else(Rat::zero),
            z0,
            z1,
        });
    }
    entries.sort_by_key(|e| e.k);
    for (i, e) in entries.iter().enumerate() {
        if e.k != i {
            return Err(Error::LinearSolve(format!(
                "recursion table has a gap at C_{i}"
            )));
        }
    }
    Ok(RecursionTable { q: out_q(out), entries })
}

fn out_q(out: &SolveOutcome) -> u64 {
    out.touched
        .iter()
        .filter(|v| matches!(v, VertexId::T(_)))
        .count() as u64
}

impl RecursionTable {
    /// The coefficient triple for C_k.
    pub fn entry(&self, k: usize) -> Result<&RecEntry> {
        self.entries
            .get(k)
            .ok_or(Error::DepthExhausted { depth: self.entries.len(), needed: k + 1 })
    }
}

/// Check the derived second-order recurrences between consecutive table
/// entries (valid from k = 2 on, with the separate derived step from k = 1):
/// violations are returned as data. Even k: the next odd coefficient obeys
/// ν_{k+1} = λ_k·ν₁ + λ_k·q + μ_k·q(q+1) − q·ν_{k−1}; odd k ≥ 3:
/// λ_{k+1} = ν_k − q·λ_{k−1} and μ_{k+1} = ν_k − q·μ_{k−1}, where λ, μ, ν
/// are the Z₀-, τ- and Z₁-coefficients.
pub fn recursion_consistency(table: &RecursionTable) -> Vec<String> {
    let mut bad = Vec::new();
    let q = rat(table.q as i64);
    let entry = |k: usize| table.entries.get(k);
    // Parity: even entries have no Z₁ part, odd entries nothing else.
    for e in &table.entries {
        if e.k % 2 == 0 && !e.z1.is_zero() {
            bad.push(format!("C_{} has an unexpected Z1 part {}", e.k, e.z1));
        }
        if e.k % 2 == 1 && (!e.tau.is_zero() || !e.z0.is_zero()) {
            bad.push(format!(
                "C_{} has unexpected even-type parts ({}, {})",
                e.k, e.tau, e.z0
            ));
        }
    }
    let (Some(e0), Some(e1)) = (entry(0), entry(1)) else {
        return bad;
    };
    let nu1 = e1.z1.clone();
    // Anchors: C₀ = −2τ and C₁ = ν₁·Z₁ with ν₁ = −2q.
    if e0.tau != rat(-2) || !e0.z0.is_zero() {
        bad.push(format!("C_0 is {}τ + {}Z0, expected −2τ", e0.tau, e0.z0));
    }
    if nu1 != -(&q + &q) {
        bad.push(format!("C_1 is {nu1}·Z1, expected −2q·Z1"));
    }
    // Derived k = 1 step: C₂ = (ν₁ + 2)τ + (ν₁ − (q−1))Z₀.
    if let Some(e2) = entry(2) {
        let want_tau = &nu1 + rat(2);
        let want_z0 = &nu1 - (&q - rat(1));
        if e2.tau != want_tau || e2.z0 != want_z0 {
            bad.push(format!(
                "C_2 is {}τ + {}Z0, expected {}τ + {}Z0",
                e2.tau, e2.z0, want_tau, want_z0
            ));
        }
    }
    for k in 2..table.entries.len().saturating_sub(1) {
        let (ek, ek1) = (entry(k).unwrap(), entry(k + 1).unwrap());
        let ekm1 = entry(k - 1).unwrap();
        if k % 2 == 0 {
            // λ_k = Z₀-coeff, μ_k = τ-coeff of the even entry.
            let want = &ek.z0 * &nu1
                + &ek.z0 * &q
                + &ek.tau * &q * (&q + rat(1))
                - &q * &ekm1.z1;
            if ek1.z1 != want {
                bad.push(format!(
                    "C_{} has Z1-coefficient {}, recurrence expects {}",
                    k + 1,
                    ek1.z1,
                    want
                ));
            }
        } else {
            let want_z0 = &ek.z1 - &q * &ekm1.z0;
            let want_tau = &ek.z1 - &q * &ekm1.tau;
            if ek1.z0 != want_z0 || ek1.tau != want_tau {
                bad.push(format!(
                    "C_{} is {}τ + {}Z0, recurrence expects {}τ + {}Z0",
                    k + 1,
                    ek1.tau,
                    ek1.z0,
                    want_tau,
                    want_z0
                ));
            }
        }
    }
    bad
}

/// Materialize a solution-space element from its free coordinates
/// (T₁..T_q, Z₀, Z₁) to a full depth-`depth` form vector using the
/// recursion table.
pub fn materialize(
    g: &QuotientGraph,
    depth: usize,
    table: &RecursionTable,
    torus: &[Rat],
    z0: &Rat,
    z1: &Rat,
) -> Result<FormVector> {
    if g.kind() != GraphKind::Elliptic {
        return Err(Error::InvalidGraph(
            "materialize needs the elliptic layout".into(),
        ));
    }
    if torus.len() as u64 != g.q() {
        return Err(Error::LinearSolve(format!(
            "expected {} torus coordinates, got {}",
            g.q(),
            torus.len()
        )));
    }
    let mut f = FormVector::zero(g, depth);
    let mut tau = Rat::zero();
    for (j, t) in torus.iter().enumerate() {
        f.set(VertexId::T(j + 1), t.clone())?;
        tau += t;
    }
    f.set(VertexId::Z(0), z0.clone())?;
    f.set(VertexId::Z(1), z1.clone())?;
    for k in 0..=depth {
        let e = table.entry(k)?;
        let val = &e.tau * &tau + &e.z0 * z0 + &e.z1 * z1;
        f.set(VertexId::C(k), val)?;
    }
    Ok(f)
}

/// One eigenvalue of the induced operator with its spaces.
#[derive(Clone, Debug)]
pub struct EigenSpace {
    pub lambda: i64,
    pub algebraic: usize,
    pub geometric: usize,
    /// Basis in the free coordinates (T₁..T_q, Z₀, Z₁), primitive integer
    /// normalized, first nonzero coordinate positive.
    pub free_basis: Vec<Vec<Rat>>,
    /// The same basis materialized to full depth.
    pub materialized: Vec<FormVector>,
}

/// The induced action of Φ on the toroidal solution space, together with
/// its exact spectral decomposition.
#[derive(Clone, Debug)]
pub struct EigenData {
    /// Free coordinates, in order.
    pub free: Vec<VertexId>,
    /// Induced matrix: row i gives (Φf)(free\[i\]) in the free coordinates.
    pub matrix: Vec<Vec<i64>>,
    /// Characteristic polynomial det(λI − M), ascending coefficients.
    pub charpoly: IntPoly,
    /// Eigenvalues ascending, geometric = algebraic everywhere.
    pub spaces: Vec<EigenSpace>,
    /// The recursion table used to materialize solutions.
    pub table: RecursionTable,
    /// Solution-space dimension (= q + 2).
    pub dim: usize,
}

/// Primitive integer normalization: clear denominators, divide by the
/// content, make the first nonzero entry positive.
fn normalize_primitive(v: &[Rat]) -> Vec<Rat> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rat::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    let sign = ints
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| if x.is_negative() { -BigInt::one() } else { BigInt::one() })
        .unwrap_or_else(BigInt::one);
    let scale = gcd * sign;
    ints.iter()
        .map(|x| Rat::from_integer(x / &scale))
        .collect()
}

/// Determinant of a small polynomial matrix by cofactor expansion.
fn det_poly(m: &[Vec<IntPoly>]) -> IntPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = IntPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<IntPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&det_poly(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Factor a monic integer polynomial into linear factors over the integers,
/// returning (root, multiplicity) pairs sorted ascending. Errors if any
/// irreducible factor of degree ≥ 1 remains.
fn integer_roots(p: &IntPoly) -> Result<Vec<(i64, usize)>> {
    let mut p = p.clone();
    let mut roots: Vec<(i64, usize)> = Vec::new();
    let add_root = |roots: &mut Vec<(i64, usize)>, r: i64| {
        if let Some(e) = roots.iter_mut().find(|(x, _)| *x == r) {
            e.1 += 1;
        } else {
            roots.push((r, 1));
        }
    };
    while p.degree().unwrap_or(0) > 0 {
        let coeffs = p.coeffs_i64();
        // Strip a zero root.
        if coeffs[0] == 0 {
            p = p.exact_div(&IntPoly::from_coeffs(&[0, 1]))?;
            add_root(&mut roots, 0);
            continue;
        }
        let c0 = coeffs[0].unsigned_abs();
        let mut found = None;
        'outer: for d in 1..=c0 {
            if !c0.is_multiple_of(d) {
                continue;
            }
            for r in [d as i64, -(d as i64)] {
                if p.eval_int(&BigInt::from(r)).is_zero() {
                    found = Some(r);
                    break 'outer;
                }
            }
        }
        let Some(r) = found else {
            return Err(Error::Spectral(format!(
                "characteristic factor {p} has no integer root"
            )));
        };
        p = p.exact_div(&IntPoly::from_coeffs(&[-r, 1]))?;
        add_root(&mut roots, r);
    }
    roots.sort_by_key(|(r, _)| *r);
    Ok(roots)
}

/// Decompose the induced action of Φ on the toroidal solution space of the
/// elliptic quotient at the given depth. The induced matrix is read off the
/// recursion table and then verified against the graph-level operator on
/// the full kernel basis before any spectral data is computed.
pub fn eigen_decompose(g: &QuotientGraph, depth: usize) -> Result<EigenData> {
    if g.kind() != GraphKind::Elliptic {
        return Err(Error::Spectral(
            "the projective-line system has no free coordinates".into(),
        ));
    }
    if depth < 3 {
        return Err(Error::DepthExhausted { depth, needed: 3 });
    }
    let q = g.q();
    let n = q as usize + 2;
    let sys = toroidal_rows(g, depth, depth)?;
    let out = solve_space(g, &sys)?;
    if out.dim != n {
        return Err(Error::Spectral(format!(
            "solution space has dimension {}, expected {n}",
            out.dim
        )));
    }
    let table = recursion_coefficients(&out)?;
    let free: Vec<VertexId> = (1..=q as usize)
        .map(VertexId::T)
        .chain([VertexId::Z(0), VertexId::Z(1)])
        .collect();
    // Induced matrix from the eliminated system:
    //   (Φf)(T_j) = (q+1)·Z₁,
    //   (Φf)(Z₀)  = q·Z₁ + C₁ = (q + ν₁)·Z₁,
    //   (Φf)(Z₁)  = T₁ + ⋯ + T_q + Z₀.
    let nu1 = &table.entry(1)?.z1;
    let nu1_int = if nu1.is_integer() {
        nu1.to_integer().to_i64().ok_or_else(|| {
            Error::Spectral("recursion coefficient out of range".into())
        })?
    } else {
        return Err(Error::Spectral(format!(
            "C_1 coefficient {nu1} is not an integer"
        )));
    };
    let qi = q as i64;
    let z0_row = qi + nu1_int;
    let mut matrix = vec![vec![0i64; n]; n];
    for row in matrix.iter_mut().take(q as usize) {
        row[n - 1] = qi + 1; // T_j ← (q+1)·Z₁
    }
    matrix[q as usize][n - 1] = z0_row; // Z₀ ← (q+ν₁)·Z₁
    for entry in matrix[q as usize + 1].iter_mut().take(q as usize) {
        *entry = 1; // Z₁ ← τ
    }
    matrix[q as usize + 1][q as usize] = 1; // Z₁ ← Z₀
    // Honest verification: on every kernel basis vector, the graph-level Φ
    // must (a) stay inside the solution space and (b) agree with the
    // materialization of M applied to the free coordinates.
    let check_sys = toroidal_rows(g, depth - 1, depth - 1)?;
    for f in &out.kernel {
        let phi_f = apply_phi_infty(g, f)?;
        for r in &check_sys.rows {
            let val = evaluate_row(&check_sys, r.k, &phi_f)?;
            if !val.is_zero() {
                return Err(Error::Spectral(format!(
                    "Φ left the solution space: row {} evaluates to {val}",
                    r.k
                )));
            }
        }
        let f_free: Vec<Rat> = free.iter().map(|v| f.get(*v)).collect::<Result<_>>()?;
        let m_free: Vec<Rat> = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&f_free)
                    .map(|(c, x)| rat(*c) * x)
                    .fold(Rat::zero(), |a, b| a + b)
            })
            .collect();
        let predicted = materialize(
            g,
            depth - 1,
            &table,
            &m_free[..q as usize],
            &m_free[q as usize],
            &m_free[q as usize + 1],
        )?;
        if predicted != phi_f {
            return Err(Error::Spectral(
                "induced matrix disagrees with the graph-level operator".into(),
            ));
        }
    }
    // Characteristic polynomial det(λI − M), exactly.
    let lam_minus: Vec<Vec<IntPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        IntPoly::from_coeffs(&[-matrix[i][j], 1])
                    } else {
                        IntPoly::from_coeffs(&[-matrix[i][j]])
                    }
                })
                .collect()
        })
        .collect();
    let charpoly = det_poly(&lam_minus);
    let roots = integer_roots(&charpoly)?;
    let mut spaces = Vec::new();
    let mut total_geometric = 0usize;
    for (lambda, algebraic) in roots {
        // Kernel of (M − λI).
        let mut m: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| rat(matrix[i][j] - if i == j { lambda } else { 0 }))
                    .collect()
            })
            .collect();
        let pivot_cols = rref(&mut m);
        let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
        let mut free_basis = Vec::new();
        for &fc in &free_cols {
            let mut v = vec![Rat::zero(); n];
            v[fc] = Rat::one();
            for (row, &pc) in m.iter().zip(&pivot_cols) {
                if !row[fc].is_zero() {
                    v[pc] = -row[fc].clone();
                }
            }
            free_basis.push(normalize_primitive(&v));
        }
        let geometric = free_basis.len();
        total_geometric += geometric;
        if geometric != algebraic {
            return Err(Error::Spectral(format!(
                "eigenvalue {lambda}: geometric multiplicity {geometric} \
                 differs from algebraic {algebraic}"
            )));
        }
        let materialized = free_basis
            .iter()
            .map(|v| {
                materialize(
                    g,
                    depth,
                    &table,
                    &v[..q as usize],
                    &v[q as usize],
                    &v[q as usize + 1],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        spaces.push(EigenSpace { lambda, algebraic, geometric, free_basis, materialized });
    }
    if total_geometric != n {
        return Err(Error::Spectral(format!(
            "eigenspace dimensions sum to {total_geometric}, expected {n}"
        )));
    }
    Ok(EigenData { free, matrix, charpoly, spaces, table, dim: out.dim })
}

/// The cusp subspace: solution-space elements supported on the torus
/// vertices with zero total mass. The basis vectors e_j − e_q are verified
/// to be annihilated by Φ and by every toroidal row.
#[derive(Clone, Debug)]
pub struct CuspData {
    pub dim: usize,
    pub basis: Vec<FormVector>,
}

pub fn cusp_subspace(g: &QuotientGraph, depth: usize) -> Result<CuspData> {
    if g.kind() != GraphKind::Elliptic {
        return Ok(CuspData { dim: 0, basis: vec![] });
    }
    if depth < 2 {
        return Err(Error::DepthExhausted { depth, needed: 2 });
    }
    let q = g.q() as usize;
    let sys = toroidal_rows(g, depth, depth)?;
    let mut basis = Vec::with_capacity(q - 1);
    for j in 1..q {
        let mut f = FormVector::zero(g, depth);
        f.set(VertexId::T(j), Rat::one())?;
        f.set(VertexId::T(q), -Rat::one())?;
        // Verified toroidal: every row vanishes on it.
        for r in &sys.rows {
            let val = evaluate_row(&sys, r.k, &f)?;
            if !val.is_zero() {
                return Err(Error::LinearSolve(format!(
                    "cusp candidate t{j} − t{q} fails row {}: {val}",
                    r.k
                )));
            }
        }
        // Verified cuspidal: Φ annihilates it.
        let phi = apply_phi_infty(g, &f)?;
        if !phi.is_zero() {
            return Err(Error::Spectral(format!(
                "cusp candidate t{j} − t{q} is not Φ-null"
            )));
        }
        basis.push(f);
    }
    Ok(CuspData { dim: q - 1, basis })
}

/// The two residue vectors of the Eisenstein family at its poles: the
/// constant vector (eigenvalue q+1) and the alternating vector
/// (eigenvalue −(q+1)). Neither satisfies the toroidal conditions; both
/// leave the residual 1 + 2q on row zero of the elliptic system.
pub fn residue_vectors(g: &QuotientGraph, depth: usize) -> Result<(FormVector, FormVector)> {
    let mut plus = FormVector::zero(g, depth);
    let mut minus = FormVector::zero(g, depth);
    for v in g.vertices(depth) {
        let sign = match v {
            VertexId::T(_) => 1,
            VertexId::Z(0) => 1,
            VertexId::Z(1) => -1,
            VertexId::Z(_) => unreachable!("validated layout"),
            VertexId::C(i) => {
                if i % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        };
        plus.set(v, Rat::one())?;
        minus.set(v, rat(sign))?;
    }
    Ok((plus, minus))
}
