//! Labeled hypergraphs with distinguished vertices, and the elementary
//! graphs whose Wick contractions the power-counting checkers consume.
//!
//! Vertices are dense indices `0..n`, with `0` the marked base vertex.
//! Two-edges are directed pairs with an exact label `(a_e, r_e)`;
//! hyperedges are vertex sets of size at least three carrying the label
//! `(|e| |s| / 2, 0)`.

use crate::homogeneity::{Homogeneity, Rat};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (graph has {1} vertices)")]
    VertexRange(usize, usize),
    #[error("marked vertex 0 must belong to the distinguished set")]
    MarkedNotDistinguished,
    #[error("2-edge endpoints must differ, got a loop at {0}")]
    SelfLoop(usize),
    #[error("hyperedge must have at least 3 vertices, got {0}")]
    SmallHyperedge(usize),
    #[error("hyperedges must be pairwise disjoint")]
    HyperedgeOverlap,
    #[error("hyperedge meets the distinguished set")]
    HyperedgeMeetsStar,
    #[error("hyperedge label must be (|e||s|/2, 0), got ({0}, {1})")]
    HyperedgeLabel(Homogeneity, i64),
    #[error("2-edge ({0},{1}) meets the hyperedge union in more than one vertex")]
    EdgeMeetsHyperTwice(usize, usize),
    #[error("2-edge ({0},{1}) touching a hyperedge must have r <= 0 and meet it at its source")]
    EdgeMeetsHyperBadly(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("elementary graph needs distinguished set {{0, v*}}, got {0} vertices")]
    BadStarSet(usize),
    #[error("special vertex v* = {0} must be internal")]
    SpecialNotInternal(usize),
    #[error("expected exactly one distinguished edge between 0 and v*, found {0}")]
    DistinguishedEdgeCount(usize),
    #[error("external vertex {0} has degree {1}, expected 1")]
    ExternalDegree(usize, usize),
    #[error("internal vertex {0} has degree {1}, expected at least 2")]
    InternalDegree(usize, usize),
    #[error("external edge ({0},{1}) must carry a = |s|")]
    ExternalEdgeLabel(usize, usize),
    #[error("2-edge ({0},{1}) must have a < 2|s|")]
    EdgeDegreeTooHigh(usize, usize),
    #[error("vertex count {0} exceeds the exhaustive-checker cap of {1}")]
    TooManyVertices(usize, usize),
    #[error("invalid JSON graph: {0}")]
    Json(String),
    #[error("invalid contraction partition: {0}")]
    BadPartition(String),
    #[error("vertices must enumerate 0..n-1 exactly")]
    VerticesNotDense,
}

/// Exact edge decoration: singularity degree `a` and renormalization
/// order `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeLabel {
    pub a: Homogeneity,
    pub r: i64,
}

impl EdgeLabel {
    pub fn new(a: Homogeneity, r: i64) -> Self {
        EdgeLabel { a, r }
    }

    pub fn rational(num: i64, den: i64, r: i64) -> Self {
        EdgeLabel {
            a: Homogeneity::frac(num, den),
            r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge2 {
    pub from: usize,
    pub to: usize,
    pub label: EdgeLabel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperEdge {
    pub vertices: BTreeSet<usize>,
    pub label: EdgeLabel,
}

/// A finite labeled graph with directed 2-edges and hyperedges, a
/// distinguished vertex set containing the marked vertex 0, and a
/// parabolic scaling norm |s|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledHypergraph {
    pub s: i64,
    pub n_vertices: usize,
    pub vstar: BTreeSet<usize>,
    pub edges2: Vec<Edge2>,
    pub hyper: Vec<HyperEdge>,
}

impl LabeledHypergraph {
    pub fn new(s: i64, n_vertices: usize, vstar: impl IntoIterator<Item = usize>) -> Self {
        LabeledHypergraph {
            s,
            n_vertices,
            vstar: vstar.into_iter().collect(),
            edges2: Vec::new(),
            hyper: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, label: EdgeLabel) {
        self.edges2.push(Edge2 { from, to, label });
    }

    pub fn add_hyperedge(&mut self, vertices: impl IntoIterator<Item = usize>) {
        let vertices: BTreeSet<usize> = vertices.into_iter().collect();
        let a = Homogeneity::frac(vertices.len() as i64 * self.s, 2);
        self.hyper.push(HyperEdge {
            vertices,
            label: EdgeLabel::new(a, 0),
        });
    }

    pub fn add_hyperedge_labeled(
        &mut self,
        vertices: impl IntoIterator<Item = usize>,
        label: EdgeLabel,
    ) {
        self.hyper.push(HyperEdge {
            vertices: vertices.into_iter().collect(),
            label,
        });
    }

    /// The minimal label a hyperedge of the given size can carry.
    pub fn hyper_label(&self, size: usize) -> EdgeLabel {
        EdgeLabel::new(Homogeneity::frac(size as i64 * self.s, 2), 0)
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n_vertices {
            return Err(GraphError::VertexRange(v, self.n_vertices));
        }
        Ok(())
    }

    /// Structural invariants of the hypergraph layer.
    pub fn validate(&self) -> Result<(), GraphError> {
        if !self.vstar.contains(&0) {
            return Err(GraphError::MarkedNotDistinguished);
        }
        for &v in &self.vstar {
            self.check_vertex(v)?;
        }
        let mut hyper_union: BTreeSet<usize> = BTreeSet::new();
        for h in &self.hyper {
            if h.vertices.len() < 3 {
                return Err(GraphError::SmallHyperedge(h.vertices.len()));
            }
            for &v in &h.vertices {
                self.check_vertex(v)?;
                if !hyper_union.insert(v) {
                    return Err(GraphError::HyperedgeOverlap);
                }
                if self.vstar.contains(&v) {
                    return Err(GraphError::HyperedgeMeetsStar);
                }
            }
            // The rational part of the degree is pinned to |e| |s| / 2;
            // a nonnegative symbolic surplus is allowed, r must be 0.
            let pinned = Rat::new(h.vertices.len() as i64 * self.s, 2);
            if h.label.a.c != pinned || h.label.a.q < Rat::from_integer(0) || h.label.r != 0 {
                return Err(GraphError::HyperedgeLabel(h.label.a, h.label.r));
            }
        }
        for e in &self.edges2 {
            self.check_vertex(e.from)?;
            self.check_vertex(e.to)?;
            if e.from == e.to {
                return Err(GraphError::SelfLoop(e.from));
            }
            let touches = [e.from, e.to]
                .iter()
                .filter(|v| hyper_union.contains(v))
                .count();
            if touches > 1 {
                return Err(GraphError::EdgeMeetsHyperTwice(e.from, e.to));
            }
            if touches == 1 {
                let meets_at_source = hyper_union.contains(&e.from);
                if e.label.r > 0 || !meets_at_source {
                    return Err(GraphError::EdgeMeetsHyperBadly(e.from, e.to));
                }
            }
        }
        Ok(())
    }

    /// Undirected adjacency including hyperedges as cliques.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for e in &self.edges2 {
            adj[e.from].push(e.to);
            adj[e.to].push(e.from);
        }
        for h in &self.hyper {
            let vs: Vec<usize> = h.vertices.iter().copied().collect();
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    adj[vs[i]].push(vs[j]);
                    adj[vs[j]].push(vs[i]);
                }
            }
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Degree counting both 2-edge incidences and hyperedge memberships.
    pub fn degree(&self, v: usize) -> usize {
        let d2 = self
            .edges2
            .iter()
            .filter(|e| e.from == v || e.to == v)
            .count();
        let dh = self.hyper.iter().filter(|h| h.vertices.contains(&v)).count();
        d2 + dh
    }

    /// The overall scaling exponent `|s| |V \ V*| - sum_e a_e`.
    pub fn alpha_exponent(&self) -> Homogeneity {
        let free = (self.n_vertices - self.vstar.len()) as i64;
        let mut alpha = Homogeneity::int(self.s * free);
        for e in &self.edges2 {
            alpha -= e.label.a;
        }
        for h in &self.hyper {
            alpha -= h.label.a;
        }
        alpha
    }
}

/// An elementary graph: a labeled hypergraph with `H* = {0, v*}`, a
/// partition of the nonzero vertices into internal and external ones,
/// and the structural constraints of the contraction machinery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryGraph {
    pub graph: LabeledHypergraph,
    pub v_star: usize,
    pub h_ex: BTreeSet<usize>,
}

impl ElementaryGraph {
    pub fn new(graph: LabeledHypergraph, v_star: usize, h_ex: impl IntoIterator<Item = usize>) -> Self {
        ElementaryGraph {
            graph,
            v_star,
            h_ex: h_ex.into_iter().collect(),
        }
    }

    pub fn h_in(&self) -> BTreeSet<usize> {
        (1..self.graph.n_vertices)
            .filter(|v| !self.h_ex.contains(v))
            .collect()
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let g = &self.graph;
        g.validate()?;
        if g.vstar.len() != 2 || !g.vstar.contains(&self.v_star) || self.v_star == 0 {
            return Err(GraphError::BadStarSet(g.vstar.len()));
        }
        if self.h_ex.contains(&self.v_star) {
            return Err(GraphError::SpecialNotInternal(self.v_star));
        }
        for &v in &self.h_ex {
            g.check_vertex(v)?;
        }
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let distinguished = g
            .edges2
            .iter()
            .filter(|e| {
                (e.from == 0 && e.to == self.v_star) || (e.from == self.v_star && e.to == 0)
            })
            .count();
        if distinguished != 1 {
            return Err(GraphError::DistinguishedEdgeCount(distinguished));
        }
        for v in 1..g.n_vertices {
            let d = g.degree(v);
            if self.h_ex.contains(&v) {
                if d != 1 {
                    return Err(GraphError::ExternalDegree(v, d));
                }
            } else if d < 2 {
                return Err(GraphError::InternalDegree(v, d));
            }
        }
        let s_hom = Homogeneity::int(g.s);
        let two_s = Homogeneity::int(2 * g.s);
        for e in &g.edges2 {
            let external = self.h_ex.contains(&e.from) || self.h_ex.contains(&e.to);
            if external && e.label.a != s_hom {
                return Err(GraphError::ExternalEdgeLabel(e.from, e.to));
            }
            if e.label.a >= two_s {
                return Err(GraphError::EdgeDegreeTooHigh(e.from, e.to));
            }
        }
        for h in &g.hyper {
            if h.vertices.iter().any(|v| self.h_ex.contains(v)) {
                // an external vertex inside a hyperedge would have degree
                // >= 1 from the hyperedge alone; membership plus its one
                // edge would violate deg = 1 unless it had no 2-edge, in
                // which case i(v) is undefined. Disallow.
                return Err(GraphError::ExternalDegree(
                    *h.vertices.iter().find(|v| self.h_ex.contains(v)).unwrap(),
                    2,
                ));
            }
        }
        Ok(())
    }

    /// The internal vertex an external vertex hangs from.
    pub fn attachment(&self, v: usize) -> Option<usize> {
        if !self.h_ex.contains(&v) {
            return None;
        }
        self.graph.edges2.iter().find_map(|e| {
            if e.from == v {
                Some(e.to)
            } else if e.to == v {
                Some(e.from)
            } else {
                None
            }
        })
    }
}

/// Merge two internal edges carrying the hyperedge-style label
/// `a = |e| |s| / 2` with `r <= 0` into a single hyperedge over their
/// union. Edges are referenced by position in a combined list: 2-edges
/// first, then hyperedges.
pub fn merge_hyperedges(
    h: &ElementaryGraph,
    e1: usize,
    e2: usize,
) -> Result<ElementaryGraph, GraphError> {
    let g = &h.graph;
    let n2 = g.edges2.len();
    let vertex_set = |idx: usize| -> Option<(BTreeSet<usize>, EdgeLabel)> {
        if idx < n2 {
            let e = &g.edges2[idx];
            Some(([e.from, e.to].into_iter().collect(), e.label))
        } else {
            g.hyper
                .get(idx - n2)
                .map(|he| (he.vertices.clone(), he.label))
        }
    };
    let (v1, l1) = vertex_set(e1).ok_or(GraphError::VertexRange(e1, n2 + g.hyper.len()))?;
    let (v2, l2) = vertex_set(e2).ok_or(GraphError::VertexRange(e2, n2 + g.hyper.len()))?;
    if e1 == e2 || v1.intersection(&v2).next().is_some() {
        return Err(GraphError::HyperedgeOverlap);
    }
    for (vs, l) in [(&v1, l1), (&v2, l2)] {
        let half = Rat::new(vs.len() as i64 * g.s, 2);
        if l.a.c != half || l.a.q < Rat::from_integer(0) || l.r > 0 {
            return Err(GraphError::HyperedgeLabel(l.a, l.r));
        }
        // internal edges only: away from externals and the marked pair,
        // since the union becomes a hyperedge and those may not meet V*
        if vs.iter().any(|v| h.h_ex.contains(v)) {
            return Err(GraphError::ExternalEdgeLabel(0, 0));
        }
        if vs.iter().any(|v| g.vstar.contains(v)) {
            return Err(GraphError::HyperedgeMeetsStar);
        }
    }
    let union: BTreeSet<usize> = v1.union(&v2).copied().collect();
    let mut out = h.clone();
    // remove in descending index order so positions stay valid
    let (hi, lo) = if e1 > e2 { (e1, e2) } else { (e2, e1) };
    for idx in [hi, lo] {
        if idx < n2 {
            out.graph.edges2.remove(idx);
        } else {
            out.graph.hyper.remove(idx - n2);
        }
    }
    // Degrees add under merging, so a symbolic surplus on either edge
    // carries over to the union.
    let label = EdgeLabel::new(l1.a + l2.a, 0);
    out.graph.hyper.push(HyperEdge {
        vertices: union,
        label,
    });
    Ok(out)
}

// ---------------------------------------------------------------------
// JSON form
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    from: usize,
    to: usize,
    a: [i64; 4],
    r: i64,
}

#[derive(Serialize, Deserialize)]
struct HyperJson {
    vertices: Vec<usize>,
    a: [i64; 4],
    r: i64,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    s: i64,
    vertices: Vec<usize>,
    vstar: Vec<usize>,
    edges2: Vec<EdgeJson>,
    #[serde(rename = "edgesH", default)]
    edges_h: Vec<HyperJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hex: Option<Vec<usize>>,
}

fn hom_to_quad(h: Homogeneity) -> [i64; 4] {
    [*h.c.numer(), *h.c.denom(), *h.q.numer(), *h.q.denom()]
}

fn quad_to_hom(q: [i64; 4]) -> Result<Homogeneity, GraphError> {
    if q[1] == 0 || q[3] == 0 {
        return Err(GraphError::Json("zero denominator in label".into()));
    }
    Ok(Homogeneity::new(Rat::new(q[0], q[1]), Rat::new(q[2], q[3])))
}

impl LabeledHypergraph {
    fn to_json_struct(&self, hex: Option<&BTreeSet<usize>>) -> GraphJson {
        GraphJson {
            s: self.s,
            vertices: (0..self.n_vertices).collect(),
            vstar: self.vstar.iter().copied().collect(),
            edges2: self
                .edges2
                .iter()
                .map(|e| EdgeJson {
                    from: e.from,
                    to: e.to,
                    a: hom_to_quad(e.label.a),
                    r: e.label.r,
                })
                .collect(),
            edges_h: self
                .hyper
                .iter()
                .map(|h| HyperJson {
                    vertices: h.vertices.iter().copied().collect(),
                    a: hom_to_quad(h.label.a),
                    r: h.label.r,
                })
                .collect(),
            hex: hex.map(|s| s.iter().copied().collect()),
        }
    }

    fn from_json_struct(j: &GraphJson) -> Result<Self, GraphError> {
        let n = j.vertices.len();
        let mut sorted = j.vertices.clone();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(GraphError::VerticesNotDense);
        }
        let mut g = LabeledHypergraph::new(j.s, n, j.vstar.iter().copied());
        for e in &j.edges2 {
            g.add_edge(e.from, e.to, EdgeLabel::new(quad_to_hom(e.a)?, e.r));
        }
        for h in &j.edges_h {
            g.hyper.push(HyperEdge {
                vertices: h.vertices.iter().copied().collect(),
                label: EdgeLabel::new(quad_to_hom(h.a)?, h.r),
            });
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_struct(None)).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let j: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Self::from_json_struct(&j)
    }
}

impl ElementaryGraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.graph.to_json_struct(Some(&self.h_ex)))
            .expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let j: GraphJson =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let graph = LabeledHypergraph::from_json_struct(&j)?;
        let hex = j
            .hex
            .clone()
            .ok_or_else(|| GraphError::Json("missing 'hex' for elementary graph".into()))?;
        let v_star = *graph
            .vstar
            .iter()
            .find(|&&v| v != 0)
            .ok_or_else(|| GraphError::Json("vstar must contain a nonzero vertex".into()))?;
        Ok(ElementaryGraph::new(graph, v_star, hex))
    }

    /// Whether serialized text describes an elementary graph (has `hex`).
    pub fn json_is_elementary(text: &str) -> bool {
        serde_json::from_str::<GraphJson>(text)
            .map(|j| j.hex.is_some())
            .unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> LabeledHypergraph {
        let mut g = LabeledHypergraph::new(3, 2, [0, 1]);
        g.add_edge(1, 0, EdgeLabel::rational(1, 1, 0));
        g
    }

    #[test]
    fn alpha_small_cases() {
        let g = tiny();
        assert_eq!(g.alpha_exponent(), Homogeneity::int(-1));

        let mut edgeless = LabeledHypergraph::new(3, 4, [0]);
        assert_eq!(edgeless.alpha_exponent(), Homogeneity::int(9));
        edgeless.add_hyperedge([1, 2, 3]);
        assert_eq!(
            edgeless.alpha_exponent(),
            Homogeneity::int(9) - Homogeneity::frac(9, 2)
        );
    }

    #[test]
    fn validation_catches_structural_breaks() {
        let mut g = tiny();
        g.vstar.remove(&0);
        assert_eq!(g.validate(), Err(GraphError::MarkedNotDistinguished));

        let mut g = LabeledHypergraph::new(3, 5, [0]);
        g.add_hyperedge([1, 2]);
        assert_eq!(g.validate(), Err(GraphError::SmallHyperedge(2)));

        let mut g = LabeledHypergraph::new(3, 6, [0]);
        g.add_hyperedge([1, 2, 3]);
        g.add_hyperedge([3, 4, 5]);
        assert_eq!(g.validate(), Err(GraphError::HyperedgeOverlap));

        // 2-edge with both feet in the hyperedge union
        let mut g = LabeledHypergraph::new(3, 5, [0]);
        g.add_hyperedge([1, 2, 3]);
        g.add_edge(1, 2, EdgeLabel::rational(3, 1, -1));
        assert_eq!(g.validate(), Err(GraphError::EdgeMeetsHyperTwice(1, 2)));

        // r > 0 against a hyperedge
        let mut g = LabeledHypergraph::new(3, 5, [0]);
        g.add_hyperedge([1, 2, 3]);
        g.add_edge(1, 4, EdgeLabel::rational(1, 1, 1));
        assert_eq!(g.validate(), Err(GraphError::EdgeMeetsHyperBadly(1, 4)));

        // meeting at the target rather than the source
        let mut g = LabeledHypergraph::new(3, 5, [0]);
        g.add_hyperedge([1, 2, 3]);
        g.add_edge(4, 1, EdgeLabel::rational(3, 1, -1));
        assert_eq!(g.validate(), Err(GraphError::EdgeMeetsHyperBadly(4, 1)));
    }

    #[test]
    fn hyperedge_label_is_forced() {
        let mut g = LabeledHypergraph::new(3, 4, [0]);
        g.hyper.push(HyperEdge {
            vertices: [1, 2, 3].into_iter().collect(),
            label: EdgeLabel::rational(4, 1, 0),
        });
        assert!(matches!(g.validate(), Err(GraphError::HyperedgeLabel(_, _))));
        g.hyper[0].label = g.hyper_label(3);
        assert_eq!(g.hyper[0].label.a, Homogeneity::frac(9, 2));
        assert!(g.validate().is_ok());

        // a symbolic surplus is fine, a deficit or r != 0 is not
        g.hyper[0].label.a = Homogeneity::new(Rat::new(9, 2), Rat::new(3, 1));
        assert!(g.validate().is_ok());
        g.hyper[0].label.a = Homogeneity::new(Rat::new(9, 2), Rat::new(-1, 1));
        assert!(matches!(g.validate(), Err(GraphError::HyperedgeLabel(_, _))));
        g.hyper[0].label = EdgeLabel::new(Homogeneity::frac(9, 2), -1);
        assert!(matches!(g.validate(), Err(GraphError::HyperedgeLabel(_, _))));
    }

    fn two_leg() -> ElementaryGraph {
        // 0 <- v* <- w, with external noises u1 -> v*, u2 -> w
        let mut g = LabeledHypergraph::new(3, 5, [0, 1]);
        g.add_edge(1, 0, EdgeLabel::rational(0, 1, 0));
        g.add_edge(2, 1, EdgeLabel::rational(1, 1, 1));
        g.add_edge(3, 1, EdgeLabel::rational(3, 1, -1));
        g.add_edge(4, 2, EdgeLabel::rational(3, 1, -1));
        ElementaryGraph::new(g, 1, [3, 4])
    }

    #[test]
    fn elementary_validation() {
        let h = two_leg();
        assert_eq!(h.validate(), Ok(()));
        assert_eq!(h.h_in(), [1, 2].into_iter().collect());
        assert_eq!(h.attachment(3), Some(1));
        assert_eq!(h.attachment(4), Some(2));
        assert_eq!(h.attachment(1), None);

        let mut broken = two_leg();
        broken.graph.add_edge(4, 1, EdgeLabel::rational(3, 1, 0));
        assert_eq!(broken.validate(), Err(GraphError::ExternalDegree(4, 2)));

        let mut broken = two_leg();
        broken.graph.edges2[3].label = EdgeLabel::rational(1, 1, 0);
        assert_eq!(broken.validate(), Err(GraphError::ExternalEdgeLabel(4, 2)));

        let mut broken = two_leg();
        broken.graph.edges2[1].label = EdgeLabel::rational(6, 1, 0);
        assert_eq!(broken.validate(), Err(GraphError::EdgeDegreeTooHigh(2, 1)));

        let mut broken = two_leg();
        broken.graph.edges2.remove(0);
        assert_eq!(broken.validate(), Err(GraphError::Disconnected));

        // rerouting the base edge keeps the graph connected but leaves
        // no distinguished edge between 0 and v*
        let mut broken = two_leg();
        broken.graph.edges2[0].from = 2;
        assert_eq!(broken.validate(), Err(GraphError::DistinguishedEdgeCount(0)));
    }

    #[test]
    fn merge_two_contraction_edges() {
        // tree vertices 0, 1 = v*, 2 with noise feet 3..6 hanging off
        // them; two disjoint internal (3,-1) pair edges between the feet
        // merge into a 4-hyperedge with a = 6.
        let mut g = LabeledHypergraph::new(3, 7, [0, 1]);
        g.add_edge(1, 0, EdgeLabel::rational(0, 1, 0));
        g.add_edge(2, 0, EdgeLabel::rational(1, 1, 0));
        g.add_edge(3, 1, EdgeLabel::rational(3, 1, -1));
        g.add_edge(4, 2, EdgeLabel::rational(3, 1, -1));
        g.add_edge(5, 1, EdgeLabel::rational(3, 1, -1));
        g.add_edge(6, 2, EdgeLabel::rational(3, 1, -1));
        g.add_edge(3, 4, EdgeLabel::rational(3, 1, -1));
        g.add_edge(5, 6, EdgeLabel::rational(3, 1, -1));
        let h = ElementaryGraph::new(g, 1, []);
        assert_eq!(h.validate(), Ok(()));

        let merged = merge_hyperedges(&h, 6, 7).unwrap();
        assert_eq!(merged.graph.n_vertices, 7);
        assert_eq!(merged.graph.edges2.len(), 6);
        assert_eq!(merged.graph.hyper.len(), 1);
        let he = &merged.graph.hyper[0];
        assert_eq!(he.vertices, [3, 4, 5, 6].into_iter().collect());
        assert_eq!(he.label.a, Homogeneity::int(6));
        assert_eq!(he.label.r, 0);
        assert_eq!(merged.validate(), Ok(()));

        // label precondition: a kernel edge is not mergeable
        assert!(matches!(
            merge_hyperedges(&h, 1, 6),
            Err(GraphError::HyperedgeLabel(_, _))
        ));

        // merging a pair edge with an unrelated noise leg leaves the
        // other leg of the pair with both ends in the union
        let crossed = merge_hyperedges(&h, 6, 5).unwrap();
        assert!(matches!(
            crossed.validate(),
            Err(GraphError::EdgeMeetsHyperTwice(4, 2))
        ));
    }

    #[test]
    fn json_round_trip() {
        let h = two_leg();
        let text = h.to_json();
        assert!(ElementaryGraph::json_is_elementary(&text));
        let back = ElementaryGraph::from_json(&text).unwrap();
        assert_eq!(back, h);

        let g = tiny();
        let text = g.to_json();
        assert!(!ElementaryGraph::json_is_elementary(&text));
        let back = LabeledHypergraph::from_json(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_rejects_bad_input() {
        assert!(LabeledHypergraph::from_json("{").is_err());
        let missing = r#"{"s":3,"vertices":[0,2],"vstar":[0],"edges2":[]}"#;
        assert_eq!(
            LabeledHypergraph::from_json(missing),
            Err(GraphError::VerticesNotDense)
        );
    }
}
