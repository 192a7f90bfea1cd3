//! Curated elementary-graph library: the moment-expansion graphs for each
//! negative-homogeneity symbol, plus the constant diagrams defining the
//! renormalization constants.
//!
//! Graphs are entered as data, not derived from the symbols. Cumulants of
//! order n >= 2 spanning tree vertices are encoded with n fresh corner
//! vertices, a hyperedge over the corners labeled (n|s|/2 + nk, 0), and one
//! (|s|, -1) edge from each corner to its tree vertex. Second-order
//! self-contractions between two tree vertices collapse to a single
//! (|s| + 2k, -1) edge between them.
//!
//! The symbolic part `k` records that correlation kernels decay one order
//! faster than the scaling dictates: the mollification parameter trades a
//! small positive power against the exponential tails, so every bound on a
//! cumulant factor survives a `k`-bump of its degree. Kernel and mollifier
//! edges carry no such slack and keep plain rational labels.

use std::collections::BTreeMap;

use crate::graphs::{EdgeLabel, ElementaryGraph, LabeledHypergraph};
use crate::homogeneity::Homogeneity;

/// Role of a 2-edge in a library graph. The checker only sees the label;
/// the kind tells numerical evaluators which kernel to attach.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// Test function `phi^lambda`, label (0, 0).
    Test,
    /// Test function multiplied by the space coordinate, label (0, 0).
    /// Costs one extra power of `lambda` in the bound.
    TestX,
    /// Truncated heat kernel K, label (1, 0).
    Kernel,
    /// K with one subtracted Taylor term at the base point, label (1, 1).
    Kernel1,
    /// K with two subtracted Taylor terms, label (1, 2).
    Kernel2,
    /// Spatial derivative of K, label (2, 0).
    KernelPrime,
    /// Mollifier / Dirac edge, label (|s|, -1).
    Delta,
    /// Pair correlation between two tree vertices, drawn as a single
    /// edge. Carries the full weight of an order-2 block plus its
    /// symbolic surplus: label (|s| + 2k, -1).
    Cumulant2,
    /// Composite kernel z -> int K(m-z) K(-m) c3(z,m,0) dm minus its
    /// constant times delta, label (7/2 + 3k, -1).
    BigK,
    /// Composite kernel z -> int K(-z) K(-r) c3(z,r,0) dr minus its
    /// constant times delta, label (7/2 + 3k, -1).
    BigK1,
    /// Composite kernel z -> int K(z-l) K(-z) c3(l,z,0) dl minus its
    /// constant times delta, label (7/2 + 3k, -1).
    BigK2,
}

impl EdgeKind {
    pub fn label(self) -> EdgeLabel {
        match self {
            EdgeKind::Test | EdgeKind::TestX => EdgeLabel::rational(0, 1, 0),
            EdgeKind::Kernel => EdgeLabel::rational(1, 1, 0),
            EdgeKind::Kernel1 => EdgeLabel::rational(1, 1, 1),
            EdgeKind::Kernel2 => EdgeLabel::rational(1, 1, 2),
            EdgeKind::KernelPrime => EdgeLabel::rational(2, 1, 0),
            EdgeKind::Delta => EdgeLabel::rational(3, 1, -1),
            EdgeKind::Cumulant2 => EdgeLabel::new(Homogeneity::with_kappa(3, 1, 2, 1), -1),
            EdgeKind::BigK | EdgeKind::BigK1 | EdgeKind::BigK2 => {
                EdgeLabel::new(Homogeneity::with_kappa(7, 2, 3, 1), -1)
            }
        }
    }
}

/// One named graph from a symbol's moment expansion.
#[derive(Clone, Debug)]
pub struct LibraryGraph {
    pub name: String,
    pub symbol: &'static str,
    /// Signed integer weight the graph carries in the expansion.
    pub coefficient: i64,
    pub graph: ElementaryGraph,
    /// Kernel role of each entry of `graph.graph.edges2`, in order.
    pub kinds: Vec<EdgeKind>,
}

struct Builder {
    names: Vec<&'static str>,
    edges: Vec<(usize, usize, EdgeKind)>,
    cumulants: Vec<Vec<usize>>,
    externals: Vec<usize>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            names: vec!["0"],
            edges: Vec::new(),
            cumulants: Vec::new(),
            externals: Vec::new(),
        }
    }

    fn vertex(&mut self, name: &'static str) -> usize {
        if let Some(i) = self.names.iter().position(|n| *n == name) {
            i
        } else {
            self.names.push(name);
            self.names.len() - 1
        }
    }

    fn edge(&mut self, kind: EdgeKind, from: &'static str, to: &'static str) -> &mut Self {
        let f = self.vertex(from);
        let t = self.vertex(to);
        self.edges.push((f, t, kind));
        self
    }

    /// External noise vertex hanging from `attach` by a (|s|, -1) edge.
    fn ext(&mut self, name: &'static str, attach: &'static str) -> &mut Self {
        let v = self.vertex(name);
        let a = self.vertex(attach);
        self.externals.push(v);
        self.edges.push((v, a, EdgeKind::Delta));
        self
    }

    /// Order-n cumulant over tree vertices: n corners, one hyperedge,
    /// one (|s|, -1) edge from each corner to its target.
    fn cumulant(&mut self, targets: &[&'static str]) -> &mut Self {
        let ids: Vec<usize> = targets.iter().map(|t| self.vertex(t)).collect();
        self.cumulants.push(ids);
        self
    }

    fn finish(&mut self, symbol: &'static str, index: usize, coefficient: i64) -> LibraryGraph {
        let mut n = self.names.len();
        let mut edges = self.edges.clone();
        let mut corner_blocks: Vec<Vec<usize>> = Vec::new();
        for block in &self.cumulants {
            let corners: Vec<usize> = (0..block.len()).map(|i| n + i).collect();
            n += block.len();
            for (&corner, &target) in corners.iter().zip(block) {
                edges.push((corner, target, EdgeKind::Delta));
            }
            corner_blocks.push(corners);
        }
        let v_star = 1;
        let mut g = LabeledHypergraph::new(3, n, [0, v_star]);
        let mut kinds = Vec::with_capacity(edges.len());
        for (from, to, kind) in edges {
            g.add_edge(from, to, kind.label());
            kinds.push(kind);
        }
        for corners in corner_blocks {
            let n_c = corners.len() as i64;
            let a = Homogeneity::with_kappa(3 * n_c, 2, n_c, 1);
            g.add_hyperedge_labeled(corners, EdgeLabel::new(a, 0));
        }
        LibraryGraph {
            name: format!("{symbol}-{index}"),
            symbol,
            coefficient,
            graph: ElementaryGraph::new(g, v_star, self.externals.clone()),
            kinds,
        }
    }
}

fn xi_graphs() -> Vec<LibraryGraph> {
    let mut b = Builder::new();
    b.edge(EdgeKind::Test, "v", "0").ext("w", "v");
    vec![b.finish("Xi", 1, 1)]
}

/// The two graphs left after cancelling the first-order constant: the
/// uncontracted term with two noise legs, and the contracted remainder
/// where the subtracted kernel part pairs with the plain kernel. The
/// polynomial-dressed symbols reuse the same shapes with the test
/// function replaced by its coordinate-weighted version.
fn xi2_graphs(symbol: &'static str, test: EdgeKind) -> Vec<LibraryGraph> {
    let mut g1 = Builder::new();
    g1.edge(test, "left", "0")
        .edge(EdgeKind::Kernel1, "left1", "left")
        .ext("var1", "left")
        .ext("var2", "left1");

    let mut g2 = Builder::new();
    g2.edge(test, "left", "0")
        .edge(EdgeKind::Kernel, "right", "0")
        .edge(EdgeKind::Cumulant2, "left", "right");

    vec![g1.finish(symbol, 1, 1), g2.finish(symbol, 2, -1)]
}

fn xi3_graphs() -> Vec<LibraryGraph> {
    let mut t1 = Builder::new();
    t1.edge(EdgeKind::Test, "left", "0")
        .edge(EdgeKind::Kernel, "left1", "0")
        .edge(EdgeKind::Kernel, "left2", "left1")
        .cumulant(&["left2", "left", "left1"]);

    let mut t2 = Builder::new();
    t2.edge(EdgeKind::Test, "left", "0")
        .edge(EdgeKind::Kernel1, "left1", "left")
        .edge(EdgeKind::Kernel, "left2", "0")
        .cumulant(&["left2", "left", "left1"]);

    vec![t1.finish("Xi3", 1, 1), t2.finish("Xi3", 2, 1)]
}

fn xi3b_graphs() -> Vec<LibraryGraph> {
    let mut s1 = Builder::new();
    s1.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "left", "root2")
        .edge(EdgeKind::Kernel, "right", "0")
        .cumulant(&["right", "left", "root2"]);

    let mut s2 = Builder::new();
    s2.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "left", "0")
        .edge(EdgeKind::Kernel, "right", "0")
        .cumulant(&["right", "left", "root2"]);

    vec![s1.finish("Xi3b", 1, 1), s2.finish("Xi3b", 2, 1)]
}

fn xi4_graphs() -> Vec<LibraryGraph> {
    let mut out = Vec::new();

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "left", "0")
        .edge(EdgeKind::Kernel2, "left1", "left")
        .edge(EdgeKind::Kernel, "left2", "0")
        .edge(EdgeKind::Kernel, "left3", "left2")
        .ext("var1", "left")
        .cumulant(&["left3", "left1", "left2"]);
    out.push(g.finish("Xi4", 1, 1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "left", "0")
        .edge(EdgeKind::Kernel2, "left1", "left")
        .edge(EdgeKind::Kernel1, "left2", "left1")
        .edge(EdgeKind::Kernel, "left3", "0")
        .ext("var1", "left")
        .cumulant(&["left3", "left1", "left2"]);
    out.push(g.finish("Xi4", 2, 1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "left", "0")
        .edge(EdgeKind::Kernel2, "left1", "left")
        .edge(EdgeKind::Kernel1, "left2", "left1")
        .edge(EdgeKind::Kernel1, "left3", "left2")
        .ext("var2", "left1")
        .cumulant(&["left3", "left", "left2"]);
    out.push(g.finish("Xi4", 3, 1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "left", "0")
        .edge(EdgeKind::Kernel2, "left1", "left")
        .edge(EdgeKind::Kernel1, "left2", "left1")
        .edge(EdgeKind::Kernel1, "left3", "left2")
        .ext("var3", "left2")
        .cumulant(&["left3", "left", "left1"]);
    out.push(g.finish("Xi4", 4, 1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "left", "0")
        .edge(EdgeKind::BigK, "left2", "left")
        .edge(EdgeKind::Kernel1, "left3", "left2")
        .ext("var4", "left3");
    out.push(g.finish("Xi4", 5, 1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "left", "0")
        .edge(EdgeKind::Kernel2, "left1", "left")
        .edge(EdgeKind::Kernel, "left2", "0")
        .edge(EdgeKind::Kernel1, "left3", "left2")
        .ext("var4", "left3")
        .cumulant(&["left2", "left", "left1"]);
    out.push(g.finish("Xi4", 6, 1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "left", "0")
        .edge(EdgeKind::Kernel, "left1", "0")
        .edge(EdgeKind::Kernel1, "left2", "left1")
        .edge(EdgeKind::Kernel1, "left3", "left2")
        .ext("var4", "left3")
        .cumulant(&["left2", "left", "left1"]);
    out.push(g.finish("Xi4", 7, 1));

    let mut g = Builder::new();
    g.edge(EdgeKind::TestX, "left", "0")
        .edge(EdgeKind::KernelPrime, "left1", "0")
        .edge(EdgeKind::Kernel1, "left2", "left1")
        .edge(EdgeKind::Kernel1, "left3", "left2")
        .ext("var4", "left3")
        .cumulant(&["left2", "left", "left1"]);
    out.push(g.finish("Xi4", 8, -1));

    out
}

fn xi4e_graphs() -> Vec<LibraryGraph> {
    let mut out = Vec::new();

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel1, "left", "root2")
        .edge(EdgeKind::Kernel1, "right", "root2")
        .edge(EdgeKind::Kernel1, "top", "left")
        .ext("var", "root2")
        .cumulant(&["left", "right", "top"]);
    out.push(g.finish("Xi4e", 1, 1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "left", "root2")
        .edge(EdgeKind::Kernel1, "right", "root2")
        .edge(EdgeKind::Kernel, "top", "0")
        .ext("var", "right")
        .cumulant(&["left", "root2", "top"]);
    out.push(g.finish("Xi4e", 2, -1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "left", "0")
        .edge(EdgeKind::Kernel1, "right", "root2")
        .edge(EdgeKind::Kernel1, "top", "left")
        .ext("var", "right")
        .cumulant(&["left", "root2", "top"]);
    out.push(g.finish("Xi4e", 3, -1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel1, "left", "root2")
        .edge(EdgeKind::Kernel1, "right", "root2")
        .edge(EdgeKind::Kernel1, "top", "left")
        .ext("var", "left")
        .cumulant(&["root2", "right", "top"]);
    out.push(g.finish("Xi4e", 4, 1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "left", "0")
        .edge(EdgeKind::Kernel1, "right", "root2")
        .edge(EdgeKind::Kernel1, "top", "left")
        .ext("var", "top")
        .cumulant(&["left", "right", "root2"]);
    out.push(g.finish("Xi4e", 5, -1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "left", "root2")
        .edge(EdgeKind::Kernel, "right", "0")
        .edge(EdgeKind::Kernel1, "top", "left")
        .ext("var", "top")
        .cumulant(&["left", "right", "root2"]);
    out.push(g.finish("Xi4e", 6, -1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel1, "top", "left")
        .edge(EdgeKind::BigK1, "left", "root2")
        .ext("v", "top");
    out.push(g.finish("Xi4e", 7, 1));

    out
}

fn xi4b_graphs() -> Vec<LibraryGraph> {
    let mut out = Vec::new();

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel1, "left", "root2")
        .edge(EdgeKind::Kernel1, "right", "root2")
        .edge(EdgeKind::Kernel1, "middle", "root2")
        .ext("var", "root2")
        .cumulant(&["left", "right", "middle"]);
    out.push(g.finish("Xi4b", 1, 1));

    // In graphs 2 and 3 the leg carrying the noise variable keeps the
    // once-subtracted kernel from the uncontracted factor; only the two
    // legs feeding the third-order block expand into plain kernels.
    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "left", "root2")
        .edge(EdgeKind::Kernel1, "right", "root2")
        .edge(EdgeKind::Kernel, "m", "0")
        .ext("var", "right")
        .cumulant(&["left", "m", "root2"]);
    out.push(g.finish("Xi4b", 2, -6));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "left", "0")
        .edge(EdgeKind::Kernel1, "right", "root2")
        .edge(EdgeKind::Kernel, "m", "0")
        .ext("var", "right")
        .cumulant(&["left", "m", "root2"]);
    out.push(g.finish("Xi4b", 3, 3));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "left", "root2")
        .edge(EdgeKind::Kernel, "right", "0")
        .edge(EdgeKind::Kernel, "middle", "root2")
        .cumulant(&["left", "right", "middle", "root2"]);
    out.push(g.finish("Xi4b", 4, -3));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "left", "root2")
        .edge(EdgeKind::Kernel, "right", "0")
        .edge(EdgeKind::Kernel, "middle", "0")
        .cumulant(&["left", "right", "middle", "root2"]);
    out.push(g.finish("Xi4b", 5, 3));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "left", "0")
        .edge(EdgeKind::Kernel, "right", "0")
        .edge(EdgeKind::Kernel, "middle", "0")
        .cumulant(&["left", "right", "middle", "root2"]);
    out.push(g.finish("Xi4b", 6, -1));

    out
}

fn xi4c_graphs() -> Vec<LibraryGraph> {
    let mut out = Vec::new();

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel1, "left", "mid")
        .edge(EdgeKind::BigK2, "mid", "root2")
        .ext("varl", "left");
    out.push(g.finish("Xi4c", 1, 2));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel2, "middle", "root2")
        .edge(EdgeKind::Kernel1, "left", "middle")
        .edge(EdgeKind::Kernel, "top", "0")
        .ext("varl", "left")
        .cumulant(&["middle", "top", "root2"]);
    out.push(g.finish("Xi4c", 2, -2));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "middle", "0")
        .edge(EdgeKind::Kernel1, "left", "middle")
        .edge(EdgeKind::Kernel, "top", "middle")
        .ext("varl", "left")
        .cumulant(&["middle", "top", "root2"]);
    out.push(g.finish("Xi4c", 3, -2));

    let mut g = Builder::new();
    g.edge(EdgeKind::TestX, "root2", "0")
        .edge(EdgeKind::KernelPrime, "middle", "0")
        .edge(EdgeKind::Kernel1, "left", "middle")
        .edge(EdgeKind::Kernel, "top", "middle")
        .ext("varl", "left")
        .cumulant(&["middle", "top", "root2"]);
    out.push(g.finish("Xi4c", 4, -2));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel2, "middle", "root2")
        .edge(EdgeKind::Kernel1, "right", "middle")
        .edge(EdgeKind::Kernel1, "top", "middle")
        .ext("varl", "middle")
        .cumulant(&["right", "top", "root2"]);
    out.push(g.finish("Xi4c", 5, 1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel2, "middle", "root2")
        .edge(EdgeKind::Kernel, "left", "0")
        .edge(EdgeKind::Kernel, "right", "middle")
        .ext("varr", "root2")
        .cumulant(&["right", "left", "middle"]);
    out.push(g.finish("Xi4c", 6, -2));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel2, "middle", "root2")
        .edge(EdgeKind::Kernel, "left", "0")
        .edge(EdgeKind::Kernel, "right", "0")
        .ext("varr", "root2")
        .cumulant(&["right", "left", "middle"]);
    out.push(g.finish("Xi4c", 7, 1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "middle", "root2")
        .edge(EdgeKind::Kernel, "one", "0")
        .edge(EdgeKind::Kernel, "top", "0")
        .cumulant(&["root2", "top", "middle", "one"]);
    out.push(g.finish("Xi4c", 8, 1));

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "middle", "root2")
        .edge(EdgeKind::Kernel, "one", "middle")
        .edge(EdgeKind::Kernel, "top", "0")
        .cumulant(&["one", "top", "middle", "root2"]);
    out.push(g.finish("Xi4c", 9, -2));

    out
}

/// Two further fourth-cumulant graphs whose bound is obtained by splitting
/// the hyperedge into two pair edges and merging back, rather than checked
/// directly.
pub fn split_checked_graphs() -> Vec<LibraryGraph> {
    let mut out = Vec::new();

    let mut g = Builder::new();
    g.edge(EdgeKind::Test, "root2", "0")
        .edge(EdgeKind::Kernel, "middle", "0")
        .edge(EdgeKind::Kernel1, "one", "middle")
        .edge(EdgeKind::Kernel1, "top", "middle")
        .cumulant(&["one", "top", "middle", "root2"]);
    let mut lg = g.finish("Xi4c", 1, -1);
    lg.name = "Xi4c-split-1".into();
    out.push(lg);

    let mut g = Builder::new();
    g.edge(EdgeKind::TestX, "root2", "0")
        .edge(EdgeKind::KernelPrime, "middle", "0")
        .edge(EdgeKind::Kernel1, "one", "middle")
        .edge(EdgeKind::Kernel1, "top", "middle")
        .cumulant(&["one", "top", "middle", "root2"]);
    let mut lg = g.finish("Xi4c", 2, -1);
    lg.name = "Xi4c-split-2".into();
    out.push(lg);

    out
}

/// All moment-expansion graphs, keyed by symbol name.
pub fn builtin_graph_library() -> BTreeMap<&'static str, Vec<LibraryGraph>> {
    let mut map = BTreeMap::new();
    map.insert("Xi", xi_graphs());
    map.insert("Xi2", xi2_graphs("Xi2", EdgeKind::Test));
    map.insert("Xi2X", xi2_graphs("Xi2X", EdgeKind::TestX));
    map.insert("XXi2", xi2_graphs("XXi2", EdgeKind::TestX));
    map.insert("Xi3", xi3_graphs());
    map.insert("Xi3b", xi3b_graphs());
    map.insert("Xi4", xi4_graphs());
    map.insert("Xi4e", xi4e_graphs());
    map.insert("Xi4b", xi4b_graphs());
    map.insert("Xi4c", xi4c_graphs());
    map
}

/// Look up one symbol's graphs.
pub fn library(symbol: &str) -> Vec<LibraryGraph> {
    builtin_graph_library().remove(symbol).unwrap_or_default()
}

/// Replace a 4-vertex hyperedge by two disjoint pair edges over its
/// corners, one variant per pairing. Each pair edge takes half of the
/// block's degree, (|s| + 2k, -1), so merging the two reconstructs the
/// original label exactly. Returns the split graph together with the
/// combined-index positions of the two new edges, ready to hand to
/// `merge_hyperedges`.
pub fn split_variants(g: &ElementaryGraph) -> Vec<(ElementaryGraph, usize, usize)> {
    let mut out = Vec::new();
    for (hi, h) in g.graph.hyper.iter().enumerate() {
        if h.vertices.len() != 4 {
            continue;
        }
        let vs: Vec<usize> = h.vertices.iter().copied().collect();
        let pairings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
        for pairing in pairings {
            let mut split = g.clone();
            split.graph.hyper.remove(hi);
            let e1 = split.graph.edges2.len();
            for (x, y) in pairing {
                split
                    .graph
                    .add_edge(vs[x], vs[y], EdgeKind::Cumulant2.label());
            }
            out.push((split, e1, e1 + 1));
        }
    }
    out
}

/// Kernel shape of a constant-diagram edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramKernel {
    /// Full heat kernel P.
    Heat,
    /// P times the second cumulant minus the first-order constant times a
    /// Dirac delta; integrates to zero against constants.
    HeatCorrected,
}

/// A renormalization-constant diagram: vertex 0 pinned at the origin, all
/// other vertices integrated over space-time. A directed edge (f, t) stands
/// for the kernel evaluated at x_t - x_f. Cumulant blocks list vertex sets;
/// endpoints of HeatCorrected edges carry their own implicit pair cumulant.
#[derive(Clone, Debug)]
pub struct ConstantDiagram {
    pub name: &'static str,
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize, DiagramKernel)>,
    pub cumulants: Vec<Vec<usize>>,
}

/// The diagrams defining every renormalization constant: the three
/// first-group constants and the eight fourth-order ones.
pub fn constant_diagrams() -> Vec<ConstantDiagram> {
    use DiagramKernel::{Heat, HeatCorrected};
    vec![
        ConstantDiagram {
            name: "C_Xi2",
            n_vertices: 2,
            edges: vec![(1, 0, Heat)],
            cumulants: vec![vec![1, 0]],
        },
        ConstantDiagram {
            name: "C_Xi3",
            n_vertices: 3,
            edges: vec![(1, 2, Heat), (2, 0, Heat)],
            cumulants: vec![vec![1, 2, 0]],
        },
        ConstantDiagram {
            name: "C_Xi3b",
            n_vertices: 3,
            edges: vec![(1, 0, Heat), (2, 0, Heat)],
            cumulants: vec![vec![1, 2, 0]],
        },
        // vertices: 1 = upper left, 2 = upper right, 3 = lower left
        ConstantDiagram {
            name: "C1_Xi4",
            n_vertices: 4,
            edges: vec![(1, 2, Heat), (2, 3, Heat), (3, 0, Heat)],
            cumulants: vec![vec![1, 3], vec![2, 0]],
        },
        ConstantDiagram {
            name: "C2_Xi4",
            n_vertices: 4,
            edges: vec![(2, 1, Heat), (1, 3, HeatCorrected), (3, 0, Heat)],
            cumulants: vec![vec![2, 0]],
        },
        ConstantDiagram {
            name: "C3_Xi4",
            n_vertices: 4,
            edges: vec![(3, 1, Heat), (1, 2, Heat), (2, 0, Heat)],
            cumulants: vec![vec![1, 2, 3, 0]],
        },
        ConstantDiagram {
            name: "C1_Xi4e",
            n_vertices: 4,
            edges: vec![(1, 2, Heat), (2, 3, Heat), (0, 3, Heat)],
            cumulants: vec![vec![1, 3], vec![2, 0]],
        },
        ConstantDiagram {
            name: "C2_Xi4e",
            n_vertices: 4,
            edges: vec![(2, 1, Heat), (1, 3, HeatCorrected), (0, 3, Heat)],
            cumulants: vec![vec![2, 0]],
        },
        // vertices: 1 = upper left, 2 = lower left, 3 = lower right
        ConstantDiagram {
            name: "C3_Xi4e",
            n_vertices: 4,
            edges: vec![(2, 1, Heat), (1, 0, Heat), (3, 0, Heat)],
            cumulants: vec![vec![1, 2, 3, 0]],
        },
        ConstantDiagram {
            name: "C_Xi4b",
            n_vertices: 4,
            edges: vec![(2, 0, Heat), (1, 0, Heat), (3, 0, Heat)],
            cumulants: vec![vec![1, 2, 3, 0]],
        },
        ConstantDiagram {
            name: "C_Xi4c",
            n_vertices: 4,
            edges: vec![(0, 2, Heat), (1, 0, Heat), (3, 0, Heat)],
            cumulants: vec![vec![1, 2, 3, 0]],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_symbol_counts_match_the_expansions() {
        let lib = builtin_graph_library();
        let expected = [
            ("Xi", 1),
            ("Xi2", 2),
            ("Xi2X", 2),
            ("XXi2", 2),
            ("Xi3", 2),
            ("Xi3b", 2),
            ("Xi4", 8),
            ("Xi4e", 7),
            ("Xi4b", 6),
            ("Xi4c", 9),
        ];
        assert_eq!(lib.len(), expected.len());
        for (symbol, count) in expected {
            assert_eq!(lib[symbol].len(), count, "graph count for {symbol}");
        }
    }

    #[test]
    fn every_graph_is_a_valid_elementary_graph() {
        for (symbol, graphs) in builtin_graph_library() {
            for g in graphs {
                g.graph
                    .validate()
                    .unwrap_or_else(|e| panic!("{symbol} graph {} invalid: {e}", g.name));
                assert_eq!(g.kinds.len(), g.graph.graph.edges2.len());
            }
        }
        for g in split_checked_graphs() {
            g.graph
                .validate()
                .unwrap_or_else(|e| panic!("split graph {} invalid: {e}", g.name));
        }
    }

    #[test]
    fn kinds_agree_with_labels() {
        for graphs in builtin_graph_library().into_values() {
            for g in graphs {
                for (edge, kind) in g.graph.graph.edges2.iter().zip(&g.kinds) {
                    assert_eq!(edge.label, kind.label(), "edge label mismatch in {}", g.name);
                }
            }
        }
    }

    #[test]
    fn external_attachments_are_defined() {
        for graphs in builtin_graph_library().into_values() {
            for g in graphs {
                for &v in &g.graph.h_ex {
                    assert!(g.graph.attachment(v).is_some(), "{}: vertex {v}", g.name);
                }
            }
        }
    }

    #[test]
    fn split_variants_round_trip_through_merge() {
        use crate::graphs::merge_hyperedges;
        let lib = builtin_graph_library();
        let four: Vec<&LibraryGraph> = lib
            .values()
            .flatten()
            .filter(|g| g.graph.graph.hyper.iter().any(|h| h.vertices.len() == 4))
            .collect();
        assert_eq!(four.len(), 5);
        for g in four {
            let variants = split_variants(&g.graph);
            assert_eq!(variants.len(), 3);
            for (split, e1, e2) in variants {
                split.validate().expect("split variant validates");
                let merged = merge_hyperedges(&split, e1, e2).expect("merge succeeds");
                assert_eq!(merged, g.graph, "round trip for {}", g.name);
            }
        }
    }

    #[test]
    fn eleven_constant_diagrams_with_consistent_blocks() {
        let diagrams = constant_diagrams();
        assert_eq!(diagrams.len(), 11);
        for d in diagrams {
            let mut seen = vec![false; d.n_vertices];
            for block in &d.cumulants {
                assert!(block.len() >= 2);
                for &v in block {
                    assert!(v < d.n_vertices);
                    assert!(!seen[v], "{}: vertex {v} in two blocks", d.name);
                    seen[v] = true;
                }
            }
            for (f, t, k) in &d.edges {
                assert!(*f < d.n_vertices && *t < d.n_vertices);
                if *k == DiagramKernel::HeatCorrected {
                    for v in [*f, *t] {
                        assert!(!seen[v], "{}: corrected edge endpoint {v} in a block", d.name);
                        seen[v] = true;
                    }
                }
            }
            assert!(seen.iter().all(|s| *s), "{}: uncovered vertex", d.name);
        }
    }
}
