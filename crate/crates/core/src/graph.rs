//! Weighted quotient graphs of the (q+1)-regular tree: the vertex star of
//! each orbit, the cusp ray, and structural validation.
//!
//! Two shapes are supported. For the projective line the quotient is a
//! single cusp ray c₀ — c₁ — c₂ — ⋯. For the elliptic models the core adds
//! the torus vertices t₁, …, t_q and the two bridge vertices z₀, z₁ in front
//! of the ray. Arc weights are out-multiplicities: `weight(v → w)` counts
//! the tree edges at a lift of v that map onto the edge v — w, so every
//! out-star sums to q+1. The weights are data; `validate` checks every
//! structural consequence rather than trusting them.

use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// A vertex orbit of the quotient graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum VertexId {
    /// Torus vertex t_j, j = 1..q (elliptic shape only).
    T(usize),
    /// Bridge vertex z₀ or z₁ (elliptic shape only).
    Z(usize),
    /// Cusp-ray vertex c_i, i ≥ 0.
    C(usize),
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::T(j) => write!(f, "t{j}"),
            VertexId::Z(i) => write!(f, "z{i}"),
            VertexId::C(i) => write!(f, "c{i}"),
        }
    }
}

/// A weighted directed arc of the quotient graph.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Arc {
    pub src: VertexId,
    pub dst: VertexId,
    pub weight: u64,
}

impl Arc {
    fn new(src: VertexId, dst: VertexId, weight: u64) -> Arc {
        Arc { src, dst, weight }
    }
}

/// Which quotient is being modelled.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GraphKind {
    ProjectiveLine,
    Elliptic,
}

impl GraphKind {
    pub const fn label(self) -> &'static str {
        match self {
            GraphKind::ProjectiveLine => "projective-line",
            GraphKind::Elliptic => "elliptic",
        }
    }
}

/// A quotient graph for one base-field size. Vertices are addressed by
/// [`VertexId`]; the cusp ray is infinite and generated by a uniform rule
/// from [`QuotientGraph::ray_start`] onwards.
#[derive(Clone, Copy, Debug)]
pub struct QuotientGraph {
    q: u64,
    kind: GraphKind,
}

/// The cusp ray of the projective line over F_q.
pub fn graph_p1(q: u64) -> Result<QuotientGraph> {
    check_q(q)?;
    Ok(QuotientGraph { q, kind: GraphKind::ProjectiveLine })
}

/// The quotient graph of one of the elliptic models (q ∈ {2, 3, 4}).
pub fn graph_elliptic(q: u64) -> Result<QuotientGraph> {
    check_q(q)?;
    Ok(QuotientGraph { q, kind: GraphKind::Elliptic })
}

fn check_q(q: u64) -> Result<()> {
    if matches!(q, 2..=4) {
        Ok(())
    } else {
        Err(Error::UnsupportedField { p: q, k: 1 })
    }
}

/// Outcome of the structural validation: every violated invariant is
/// reported as data.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub checked_vertices: usize,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Serialize)]
pub struct GraphJson {
    pub q: u64,
    pub kind: &'static str,
    pub vertices: Vec<String>,
    pub arcs: Vec<ArcJson>,
    pub ray: RayJson,
}

#[derive(Serialize)]
pub struct ArcJson {
    pub src: String,
    pub dst: String,
    pub weight: u64,
}

#[derive(Serialize)]
pub struct RayJson {
    /// Index from which the uniform ray rule applies.
    pub start: usize,
    /// Human-readable statement of the rule.
    pub rule: String,
}

impl QuotientGraph {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// First ray index governed by the uniform rule
    /// c_i → q·c_{i−1} + 1·c_{i+1}.
    pub fn ray_start(&self) -> usize {
        match self.kind {
            GraphKind::ProjectiveLine => 1,
            GraphKind::Elliptic => 2,
        }
    }

    /// All vertices with cusp index ≤ depth, in canonical order
    /// (t₁..t_q, z₀, z₁, c₀..c_depth for the elliptic shape).
    pub fn vertices(&self, depth: usize) -> Vec<VertexId> {
        let mut v = Vec::new();
        if self.kind == GraphKind::Elliptic {
            v.extend((1..=self.q as usize).map(VertexId::T));
            v.push(VertexId::Z(0));
            v.push(VertexId::Z(1));
        }
        v.extend((0..=depth).map(VertexId::C));
        v
    }

    /// The out-star of a vertex, in a stable documented order. Errors on a
    /// vertex that does not exist in this graph shape.
    pub fn out_arcs(&self, v: VertexId) -> Result<Vec<Arc>> {
        let q = self.q;
        let bad = || Err(Error::UnknownVertex(v.to_string()));
        match (self.kind, v) {
            (GraphKind::ProjectiveLine, VertexId::C(0)) => {
                Ok(vec![Arc::new(v, VertexId::C(1), q + 1)])
            }
            (GraphKind::ProjectiveLine, VertexId::C(i)) => Ok(vec![
                Arc::new(v, VertexId::C(i - 1), q),
                Arc::new(v, VertexId::C(i + 1), 1),
            ]),
            (GraphKind::ProjectiveLine, _) => bad(),
            (GraphKind::Elliptic, VertexId::T(j)) if 1 <= j && j <= q as usize => {
                Ok(vec![Arc::new(v, VertexId::Z(1), q + 1)])
            }
            (GraphKind::Elliptic, VertexId::Z(0)) => Ok(vec![
                Arc::new(v, VertexId::Z(1), q),
                Arc::new(v, VertexId::C(1), 1),
            ]),
            (GraphKind::Elliptic, VertexId::Z(1)) => {
                let mut arcs: Vec<Arc> = (1..=q as usize)
                    .map(|j| Arc::new(v, VertexId::T(j), 1))
                    .collect();
                arcs.push(Arc::new(v, VertexId::Z(0), 1));
                Ok(arcs)
            }
            (GraphKind::Elliptic, VertexId::C(0)) => {
                Ok(vec![Arc::new(v, VertexId::C(1), q + 1)])
            }
            (GraphKind::Elliptic, VertexId::C(1)) => Ok(vec![
                Arc::new(v, VertexId::C(0), 1),
                Arc::new(v, VertexId::Z(0), q - 1),
                Arc::new(v, VertexId::C(2), 1),
            ]),
            (GraphKind::Elliptic, VertexId::C(i)) => Ok(vec![
                Arc::new(v, VertexId::C(i - 1), q),
                Arc::new(v, VertexId::C(i + 1), 1),
            ]),
            (GraphKind::Elliptic, _) => bad(),
        }
    }

    /// All out-arcs of the vertices with cusp index ≤ depth.
    pub fn arcs(&self, depth: usize) -> Result<Vec<Arc>> {
        let mut out = Vec::new();
        for v in self.vertices(depth) {
            out.extend(self.out_arcs(v)?);
        }
        Ok(out)
    }

    /// The vertex orbit of the torus term, with orbit multiplicities: the
    /// cusp origin with weight 1, plus (elliptic shape) each torus vertex
    /// with weight 2.
    pub fn torus_orbit(&self) -> Vec<(VertexId, u64)> {
        let mut orbit = vec![(VertexId::C(0), 1)];
        if self.kind == GraphKind::Elliptic {
            orbit.extend((1..=self.q as usize).map(|j| (VertexId::T(j), 2)));
        }
        orbit
    }

    /// Check every structural invariant on the vertices with cusp index
    /// ≤ depth: out-sums equal q+1, weights lie in [1, q+1], no self-loops
    /// or duplicate arcs, adjacency is symmetric, and the graph is
    /// connected. Violations are returned as data, not panics.
    pub fn validate(&self, depth: usize) -> Result<ValidationReport> {
        let mut violations = Vec::new();
        let verts = self.vertices(depth);
        let vert_set: BTreeSet<VertexId> = verts.iter().copied().collect();
        for &v in &verts {
            let arcs = self.out_arcs(v)?;
            let total: u64 = arcs.iter().map(|a| a.weight).sum();
            if total != self.q + 1 {
                violations.push(format!("out-sum of {v} is {total}, expected {}", self.q + 1));
            }
            let mut seen = BTreeSet::new();
            for a in &arcs {
                if a.weight == 0 || a.weight > self.q + 1 {
                    violations.push(format!("arc {v}→{} has weight {}", a.dst, a.weight));
                }
                if a.dst == v {
                    violations.push(format!("self-loop at {v}"));
                }
                if !seen.insert(a.dst) {
                    violations.push(format!("duplicate arc {v}→{}", a.dst));
                }
                // Symmetry: geometric adjacency must run both ways.
                if vert_set.contains(&a.dst) {
                    let back = self.out_arcs(a.dst)?;
                    if !back.iter().any(|b| b.dst == v) {
                        violations.push(format!("arc {v}→{} has no reverse arc", a.dst));
                    }
                }
            }
        }
        // Connectivity from the cusp origin, undirected.
        let mut reached = BTreeSet::new();
        let mut frontier = vec![VertexId::C(0)];
        reached.insert(VertexId::C(0));
        while let Some(v) = frontier.pop() {
            for a in self.out_arcs(v)? {
                if vert_set.contains(&a.dst) && reached.insert(a.dst) {
                    frontier.push(a.dst);
                }
            }
        }
        for &v in &verts {
            if !reached.contains(&v) {
                violations.push(format!("{v} unreachable from c0"));
            }
        }
        Ok(ValidationReport { checked_vertices: verts.len(), violations })
    }

    /// GraphViz rendering of the core and the first `ray_len` ray vertices.
    pub fn to_dot(&self, ray_len: usize) -> Result<String> {
        let depth = self.ray_start() + ray_len.max(1);
        let verts = self.vertices(depth);
        let mut s = String::from("digraph quotient {\n  rankdir=LR;\n  node [shape=circle];\n");
        for v in &verts {
            s.push_str(&format!("  {v};\n"));
        }
        for a in self.arcs(depth)? {
            if a.dst > VertexId::C(depth) {
                continue; // truncated ray continuation
            }
            s.push_str(&format!("  {} -> {} [label=\"{}\"];\n", a.src, a.dst, a.weight));
        }
        s.push_str(&format!(
            "  // ray continues: c_i -> c_(i-1) weight {}, c_i -> c_(i+1) weight 1 for i >= {}\n",
            self.q,
            self.ray_start()
        ));
        s.push_str("}\n");
        Ok(s)
    }

    /// Serializable description of the graph up to a cusp depth.
    pub fn to_json(&self, depth: usize) -> Result<GraphJson> {
        let verts = self.vertices(depth);
        let arcs = self
            .arcs(depth)?
            .into_iter()
            .filter(|a| a.dst <= VertexId::C(depth))
            .map(|a| ArcJson {
                src: a.src.to_string(),
                dst: a.dst.to_string(),
                weight: a.weight,
            })
            .collect();
        Ok(GraphJson {
            q: self.q,
            kind: self.kind.label(),
            vertices: verts.iter().map(|v| v.to_string()).collect(),
            arcs,
            ray: RayJson {
                start: self.ray_start(),
                rule: format!(
                    "c_i -> {}*c_(i-1) + 1*c_(i+1) for i >= {}",
                    self.q,
                    self.ray_start()
                ),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc_triples(g: &QuotientGraph, depth: usize) -> Vec<(String, String, u64)> {
        g.arcs(depth)
            .unwrap()
            .into_iter()
            .map(|a| (a.src.to_string(), a.dst.to_string(), a.weight))
            .collect()
    }

    #[test]
    fn elliptic_q2_arc_fingerprint() {
        let g = graph_elliptic(2).unwrap();
        let got = arc_triples(&g, 3);
        let want: Vec<(String, String, u64)> = [
            ("t1", "z1", 3),
            ("t2", "z1", 3),
            ("z0", "z1", 2),
            ("z0", "c1", 1),
            ("z1", "t1", 1),
            ("z1", "t2", 1),
            ("z1", "z0", 1),
            ("c0", "c1", 3),
            ("c1", "c0", 1),
            ("c1", "z0", 1),
            ("c1", "c2", 1),
            ("c2", "c1", 2),
            ("c2", "c3", 1),
            ("c3", "c2", 2),
            ("c3", "c4", 1),
        ]
        .iter()
        .map(|(s, d, w)| (s.to_string(), d.to_string(), *w))
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn projective_line_arc_fingerprint() {
        let g = graph_p1(2).unwrap();
        let got = arc_triples(&g, 2);
        let want: Vec<(String, String, u64)> = [
            ("c0", "c1", 3),
            ("c1", "c0", 2),
            ("c1", "c2", 1),
            ("c2", "c1", 2),
            ("c2", "c3", 1),
        ]
        .iter()
        .map(|(s, d, w)| (s.to_string(), d.to_string(), *w))
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn validation_is_clean_for_all_supported_sizes() {
        for q in [2, 3, 4] {
            for g in [graph_elliptic(q).unwrap(), graph_p1(q).unwrap()] {
                let report = g.validate(32).unwrap();
                assert!(
                    report.is_ok(),
                    "q={q} {}: {:?}",
                    g.kind().label(),
                    report.violations
                );
                assert_eq!(
                    report.checked_vertices,
                    33 + if g.kind() == GraphKind::Elliptic { q as usize + 2 } else { 0 }
                );
            }
        }
        assert!(graph_elliptic(5).is_err());
    }

    #[test]
    fn unknown_vertices_error() {
        let g = graph_elliptic(3).unwrap();
        for v in [VertexId::T(0), VertexId::T(4), VertexId::Z(2)] {
            assert!(matches!(g.out_arcs(v), Err(Error::UnknownVertex(_))), "{v}");
        }
        let p = graph_p1(3).unwrap();
        assert!(matches!(p.out_arcs(VertexId::T(1)), Err(Error::UnknownVertex(_))));
        assert!(matches!(p.out_arcs(VertexId::Z(0)), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn torus_orbit_masses() {
        let g = graph_elliptic(4).unwrap();
        let orbit = g.torus_orbit();
        assert_eq!(orbit.len(), 5);
        assert_eq!(orbit[0], (VertexId::C(0), 1));
        let total: u64 = orbit.iter().map(|(_, m)| m).sum();
        assert_eq!(total, 9); // 2q + 1
        let p = graph_p1(2).unwrap();
        assert_eq!(p.torus_orbit(), vec![(VertexId::C(0), 1)]);
    }

    #[test]
    fn dot_and_json_exports() {
        let g = graph_elliptic(2).unwrap();
        let dot = g.to_dot(6).unwrap();
        assert!(dot.starts_with("digraph quotient {"));
        for name in ["t1", "t2", "z0", "z1", "c0", "c7"] {
            assert!(dot.contains(name), "missing {name} in dot output");
        }
        let json = g.to_json(4).unwrap();
        assert_eq!(json.q, 2);
        assert_eq!(json.kind, "elliptic");
        assert_eq!(json.vertices.len(), 2 + 2 + 5);
        assert_eq!(json.ray.start, 2);
        // Arcs are closed under the vertex set in the JSON view.
        for a in &json.arcs {
            assert!(json.vertices.contains(&a.src));
            assert!(json.vertices.contains(&a.dst));
        }
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains("\"weight\":3"));
    }
}
