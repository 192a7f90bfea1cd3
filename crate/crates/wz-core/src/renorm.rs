//! Renormalization maps `L^(1..7)` on the 16-symbol sector, the group
//! elements `M = Id - sum ell_i L^(i)`, and the static right-hand-side
//! coefficient table tying symbols to powers of `G` and its derivatives.
//!
//! Each `L^(i)` erases one occurrence of a fixed noise pattern: a small
//! rooted tree of `Xi`-vertices connected by integration edges. An
//! occurrence is a set of integration edges of the symbol spanning a
//! subtree isomorphic to the pattern such that every spanned vertex
//! carries `Xi` and every interior spanned vertex is matched exactly
//! (all its children used, no polynomial decoration). The spanned
//! vertices lose their `Xi` and collapse to a single vertex, which
//! inherits the unmatched children and polynomial decorations; terms
//! where an integration argument degenerates to a pure polynomial
//! vanish.

use crate::homogeneity::Rat;
use crate::symbols::{MultiIndex, Symbol, SymbolSpan, Term};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenormError {
    #[error("renormalization map index {0} out of range 1..=7")]
    BadIndex(usize),
    #[error("symbol {0} outside the 16-symbol renormalization sector")]
    OutsideSector(String),
}

/// The noise patterns, as rooted trees. `chain(n)` is a path of n
/// vertices; `star(n)` is a root with n leaf children.
#[derive(Clone, Debug)]
struct Pattern {
    children: Vec<Pattern>,
}

impl Pattern {
    fn leaf() -> Pattern {
        Pattern { children: vec![] }
    }

    fn node(children: Vec<Pattern>) -> Pattern {
        Pattern { children }
    }

    fn chain(n: usize) -> Pattern {
        assert!(n >= 1);
        let mut p = Pattern::leaf();
        for _ in 1..n {
            p = Pattern::node(vec![p]);
        }
        p
    }

    fn star(n: usize) -> Pattern {
        Pattern::node((0..n).map(|_| Pattern::leaf()).collect())
    }

    /// Canonical encoding up to rooted-tree isomorphism.
    fn canon(&self) -> String {
        let mut kids: Vec<String> = self.children.iter().map(|c| c.canon()).collect();
        kids.sort();
        format!("({})", kids.join(""))
    }
}

fn pattern(i: usize) -> Option<Pattern> {
    Some(match i {
        1 => Pattern::chain(2),
        2 => Pattern::chain(3),
        3 => Pattern::star(2),
        4 => Pattern::chain(4),
        5 => Pattern::node(vec![Pattern::leaf(), Pattern::chain(2)]),
        6 => Pattern::star(3),
        7 => Pattern::node(vec![Pattern::star(2)]),
        _ => return None,
    })
}

/// Flat view of a term: vertex array with parent links.
struct Arena {
    xi: Vec<bool>,
    k: Vec<MultiIndex>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl Arena {
    fn from_term(t: &Term) -> Arena {
        let mut a = Arena {
            xi: vec![],
            k: vec![],
            parent: vec![],
            children: vec![],
        };
        a.push(t, None);
        a
    }

    fn push(&mut self, t: &Term, parent: Option<usize>) -> usize {
        let id = self.xi.len();
        self.xi.push(t.xi);
        self.k.push(t.k);
        self.parent.push(parent);
        self.children.push(vec![]);
        if let Some(p) = parent {
            self.children[p].push(id);
        }
        for c in &t.args {
            self.push(c, Some(id));
        }
        id
    }

    fn len(&self) -> usize {
        self.xi.len()
    }

    /// Canonical rooted-tree shape of the subtree spanned by an edge set,
    /// or None if the edges do not span a single subtree.
    fn spanned_shape(&self, edges: &BTreeSet<(usize, usize)>) -> Option<(usize, String)> {
        let verts: BTreeSet<usize> = edges.iter().flat_map(|&(p, c)| [p, c]).collect();
        let roots: Vec<usize> = verts
            .iter()
            .copied()
            .filter(|&v| !edges.iter().any(|&(_, c)| c == v))
            .collect();
        let [root] = roots[..] else { return None };
        // connectivity: every non-root spanned vertex must be reachable
        let mut seen = BTreeSet::from([root]);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &(p, c) in edges.iter() {
                if p == v && seen.insert(c) {
                    stack.push(c);
                }
            }
        }
        if seen != verts {
            return None;
        }
        fn enc(a: &Arena, v: usize, edges: &BTreeSet<(usize, usize)>) -> String {
            let mut kids: Vec<String> = a.children[v]
                .iter()
                .filter(|&&c| edges.contains(&(v, c)))
                .map(|&c| enc(a, c, edges))
                .collect();
            kids.sort();
            format!("({})", kids.join(""))
        }
        Some((root, enc(self, root, edges)))
    }

    /// Rebuild the symbol after collapsing the matched subtree into its
    /// root. Returns Zero when an integration argument degenerates.
    fn contract(&self, edges: &BTreeSet<(usize, usize)>, matched_root: usize) -> Symbol {
        let matched: BTreeSet<usize> = edges.iter().flat_map(|&(p, c)| [p, c]).collect();
        self.rebuild(0, edges, &matched, matched_root)
    }

    fn rebuild(
        &self,
        v: usize,
        edges: &BTreeSet<(usize, usize)>,
        matched: &BTreeSet<usize>,
        matched_root: usize,
    ) -> Symbol {
        // Gather the vertex group collapsing onto `v`: just v itself, or
        // the whole matched set when v is the matched root.
        let group: Vec<usize> = if v == matched_root {
            matched.iter().copied().collect()
        } else {
            vec![v]
        };
        let mut k = MultiIndex::ZERO;
        let mut xi = false;
        let mut out = Vec::new();
        for &g in &group {
            k = k.add(&self.k[g]);
            xi |= self.xi[g] && !matched.contains(&g);
            for &c in &self.children[g] {
                if edges.contains(&(g, c)) {
                    continue;
                }
                let sub = self.rebuild(c, edges, matched, matched_root);
                let integrated = sub.integral();
                if integrated.is_zero() {
                    return Symbol::Zero;
                }
                let Symbol::Term(ts) = integrated else {
                    unreachable!()
                };
                out.push(ts.args.into_iter().next().unwrap());
            }
        }
        out.sort();
        Symbol::Term(Term { k, xi, args: out })
    }
}

/// Erase every occurrence of the pattern in `sym`; symbols without an
/// occurrence map to zero.
fn erase_occurrences(pat: &Pattern, sym: &Symbol) -> SymbolSpan {
    let Symbol::Term(t) = sym else {
        return SymbolSpan::zero();
    };
    let arena = Arena::from_term(t);
    let want = pat.canon();
    let all_edges: Vec<(usize, usize)> = (0..arena.len())
        .flat_map(|p| arena.children[p].iter().map(move |&c| (p, c)))
        .collect();
    let n_edges = pattern_edge_count(pat);
    let mut out = SymbolSpan::zero();
    for subset in subsets_of_size(&all_edges, n_edges) {
        let edges: BTreeSet<(usize, usize)> = subset.into_iter().collect();
        let Some((root, shape)) = arena.spanned_shape(&edges) else {
            continue;
        };
        if shape != want {
            continue;
        }
        let verts: BTreeSet<usize> = edges.iter().flat_map(|&(p, c)| [p, c]).collect();
        if !verts.iter().all(|&v| arena.xi[v]) {
            continue;
        }
        // interior vertices must be matched exactly
        let interior_ok = verts.iter().all(|&v| {
            let has_matched_child = arena.children[v].iter().any(|&c| edges.contains(&(v, c)));
            let is_interior = v != root && has_matched_child;
            if !is_interior {
                return true;
            }
            arena.k[v].is_zero()
                && arena.children[v].iter().all(|&c| edges.contains(&(v, c)))
        });
        if !interior_ok {
            continue;
        }
        out.add(arena.contract(&edges, root), Rat::from_integer(1));
    }
    out
}

fn pattern_edge_count(p: &Pattern) -> usize {
    p.children
        .iter()
        .map(|c| 1 + pattern_edge_count(c))
        .sum()
}

fn subsets_of_size<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let n = items.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i].clone()).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The 16-element sector the renormalization group acts on.
pub fn sector() -> Vec<(&'static str, Symbol)> {
    crate::symbols::names::core_set()
}

pub fn in_sector(sym: &Symbol) -> bool {
    sector().iter().any(|(_, s)| s == sym)
        || matches!(sym.as_term(), Some(t) if t.is_poly())
}

/// Apply `L^(i)`. Defined on the 16-symbol sector plus pure polynomials
/// (where every map vanishes); anything else is a domain error.
pub fn apply_l(i: usize, sym: &Symbol) -> Result<SymbolSpan, RenormError> {
    let pat = pattern(i).ok_or(RenormError::BadIndex(i))?;
    if !in_sector(sym) {
        return Err(RenormError::OutsideSector(sym.to_string()));
    }
    Ok(erase_occurrences(&pat, sym))
}

/// A renormalization group element `M = Id - sum_i ell_i L^(i)`; the sum
/// form is exact because the maps annihilate each other's images.
#[derive(Clone, Debug)]
pub struct RenormMap {
    pub ell: [Rat; 7],
}

impl RenormMap {
    pub fn new(ell: [Rat; 7]) -> Self {
        RenormMap { ell }
    }

    pub fn apply(&self, sym: &Symbol) -> Result<SymbolSpan, RenormError> {
        let mut out = SymbolSpan::single(sym.clone());
        for i in 1..=7 {
            let li = apply_l(i, sym)?;
            out.add_span(&li, -self.ell[i - 1]);
        }
        Ok(out)
    }

    /// For each sector symbol, the coefficient of the unit symbol in its
    /// image: the constant produced when the symbol renormalizes.
    pub fn counterterm_table(&self) -> Vec<(&'static str, Rat)> {
        sector()
            .iter()
            .map(|(name, sym)| {
                let image = self.apply(sym).expect("sector symbol");
                (*name, image.coeff(&Symbol::one()) - unit_part(sym))
            })
            .collect()
    }
}

fn unit_part(sym: &Symbol) -> Rat {
    use num_traits::Zero;
    if sym.is_one() {
        Rat::from_integer(1)
    } else {
        Rat::zero()
    }
}

/// Multiplicity of `u'` and of each derivative of `G` in the coefficient a
/// symbol carries in the expanded right-hand side, with a rational
/// prefactor: `prefactor * G^g * G'^g1 * G''^g2 * G'''^g3 * (u')^du`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhsCoefficient {
    pub prefactor: Rat,
    pub g: u32,
    pub g1: u32,
    pub g2: u32,
    pub g3: u32,
    pub du: u32,
}

impl RhsCoefficient {
    fn new(prefactor: Rat, g: u32, g1: u32, g2: u32, g3: u32, du: u32) -> Self {
        RhsCoefficient {
            prefactor,
            g,
            g1,
            g2,
            g3,
            du,
        }
    }

    /// Evaluate at a point given `G` and derivative values and `u'`.
    pub fn eval(&self, gv: [f64; 4], du: f64) -> f64 {
        crate::homogeneity::rat_f64(self.prefactor)
            * gv[0].powi(self.g as i32)
            * gv[1].powi(self.g1 as i32)
            * gv[2].powi(self.g2 as i32)
            * gv[3].powi(self.g3 as i32)
            * du.powi(self.du as i32)
    }
}

/// The static coefficient table of the noise-sector symbols in the
/// expanded right-hand side of the equation.
pub fn rhs_coefficient_table() -> Vec<(&'static str, Symbol, RhsCoefficient)> {
    use crate::symbols::names;
    let one = Rat::from_integer(1);
    let half = Rat::new(1, 2);
    let sixth = Rat::new(1, 6);
    vec![
        ("Xi", names::xi(), RhsCoefficient::new(one, 1, 0, 0, 0, 0)),
        ("Xi2", names::xi2(), RhsCoefficient::new(one, 1, 1, 0, 0, 0)),
        ("Xi3", names::xi3(), RhsCoefficient::new(one, 1, 2, 0, 0, 0)),
        ("XiX", names::xi_x(), RhsCoefficient::new(one, 0, 1, 0, 0, 1)),
        (
            "Xi3b",
            names::xi3b(),
            RhsCoefficient::new(half, 2, 0, 1, 0, 0),
        ),
        (
            "Xi4b",
            names::xi4b(),
            RhsCoefficient::new(sixth, 3, 0, 0, 1, 0),
        ),
        ("Xi4", names::xi4(), RhsCoefficient::new(one, 1, 3, 0, 0, 0)),
        (
            "Xi4c",
            names::xi4c(),
            RhsCoefficient::new(half, 2, 1, 1, 0, 0),
        ),
        (
            "Xi4e",
            names::xi4e(),
            RhsCoefficient::new(one, 2, 1, 1, 0, 0),
        ),
        (
            "Xi2X",
            names::xi2x(),
            RhsCoefficient::new(one, 0, 2, 0, 0, 1),
        ),
        (
            "XXi2",
            names::x_xi2(),
            RhsCoefficient::new(one, 1, 0, 1, 0, 1),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::names;

    fn span(entries: &[(i64, Symbol)]) -> SymbolSpan {
        let mut s = SymbolSpan::zero();
        for (c, sym) in entries {
            s.add(sym.clone(), Rat::from_integer(*c));
        }
        s
    }

    /// The tabulated images of the seven maps: every nonzero entry on the
    /// 16-symbol sector.
    fn expected_table() -> Vec<(usize, Symbol, SymbolSpan)> {
        vec![
            (1, names::xi2(), span(&[(1, Symbol::one())])),
            (1, names::xi3(), span(&[(1, names::i_xi())])),
            (1, names::xi3b(), span(&[(2, names::i_xi())])),
            (
                1,
                names::xi4(),
                span(&[(1, names::i_xi2()), (1, names::xi22())]),
            ),
            (1, names::xi4b(), span(&[(3, names::i_xi_sq())])),
            (
                1,
                names::xi4c(),
                span(&[(1, names::i_xi_sq()), (2, names::xi22())]),
            ),
            (
                1,
                names::xi4e(),
                span(&[(1, names::i_xi2()), (1, names::i_xi_sq())]),
            ),
            (1, names::xi2x(), span(&[(1, Symbol::x1())])),
            (1, names::x_xi2(), span(&[(1, Symbol::x1())])),
            (2, names::xi3(), span(&[(1, Symbol::one())])),
            (2, names::xi4(), span(&[(1, names::i_xi())])),
            (2, names::xi4e(), span(&[(1, names::i_xi())])),
            (3, names::xi3b(), span(&[(1, Symbol::one())])),
            (3, names::xi4b(), span(&[(3, names::i_xi())])),
            (3, names::xi4e(), span(&[(1, names::i_xi())])),
            (4, names::xi4(), span(&[(1, Symbol::one())])),
            (5, names::xi4e(), span(&[(1, Symbol::one())])),
            (6, names::xi4b(), span(&[(1, Symbol::one())])),
            (7, names::xi4c(), span(&[(1, Symbol::one())])),
        ]
    }

    #[test]
    fn tabulated_images_reproduced_exactly() {
        let table = expected_table();
        for i in 1..=7 {
            for (name, sym) in sector() {
                let got = apply_l(i, &sym).unwrap();
                let want = table
                    .iter()
                    .find(|(j, s, _)| *j == i && *s == sym)
                    .map(|(_, _, w)| w.clone())
                    .unwrap_or_else(SymbolSpan::zero);
                assert_eq!(got, want, "L^({i}) on {name}");
            }
        }
    }

    #[test]
    fn nilpotency_on_sector() {
        for i in 1..=7 {
            for j in 1..=7 {
                for (name, sym) in sector() {
                    let inner = apply_l(j, &sym).unwrap();
                    for (out_sym, _) in inner.iter() {
                        let outer = apply_l(i, &out_sym).unwrap();
                        assert!(
                            outer.is_zero(),
                            "L^({i}) L^({j}) {name} produced {outer}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn images_raise_homogeneity() {
        for i in 1..=7 {
            for (name, sym) in sector() {
                let h = sym.homogeneity().unwrap();
                for (out_sym, _) in apply_l(i, &sym).unwrap().iter() {
                    let hh = out_sym.homogeneity().unwrap();
                    assert!(
                        hh > h,
                        "L^({i}) {name}: image {out_sym} has {hh} <= {h}"
                    );
                }
            }
        }
    }

    #[test]
    fn domain_checked() {
        assert!(apply_l(1, &Symbol::x0()).is_ok(), "polynomials allowed");
        let outside = crate::symbols::parse_symbol("Xi I(Xi I(Xi) I(Xi) I(Xi))").unwrap();
        assert_eq!(
            apply_l(1, &outside),
            Err(RenormError::OutsideSector(outside.to_string()))
        );
        assert_eq!(apply_l(0, &names::xi2()), Err(RenormError::BadIndex(0)));
        assert_eq!(apply_l(8, &names::xi2()), Err(RenormError::BadIndex(8)));
    }

    #[test]
    fn counterterms_pick_out_one_ell_each() {
        let ell: [Rat; 7] = std::array::from_fn(|i| Rat::from_integer(i as i64 + 10));
        let m = RenormMap::new(ell);
        let expected = [
            ("Xi2", 0usize),
            ("Xi3", 1),
            ("Xi3b", 2),
            ("Xi4", 3),
            ("Xi4e", 4),
            ("Xi4b", 5),
            ("Xi4c", 6),
        ];
        let table = m.counterterm_table();
        for (name, ct) in &table {
            match expected.iter().find(|(n, _)| n == name) {
                Some((_, idx)) => assert_eq!(*ct, -ell[*idx], "counterterm of {name}"),
                None => assert_eq!(
                    *ct,
                    Rat::from_integer(0),
                    "counterterm of {name} should vanish"
                ),
            }
        }
    }

    #[test]
    fn renorm_map_fixes_unit() {
        let m = RenormMap::new(std::array::from_fn(|i| Rat::from_integer(i as i64 + 1)));
        let img = m.apply(&Symbol::one()).unwrap();
        assert_eq!(img, SymbolSpan::single(Symbol::one()));
    }

    #[test]
    fn rhs_table_contents() {
        let table = rhs_coefficient_table();
        assert_eq!(table.len(), 11);
        let find = |n: &str| {
            table
                .iter()
                .find(|(name, _, _)| *name == n)
                .map(|(_, _, c)| c.clone())
                .unwrap()
        };
        assert_eq!(
            find("Xi3"),
            RhsCoefficient::new(Rat::from_integer(1), 1, 2, 0, 0, 0)
        );
        assert_eq!(find("Xi3b"), RhsCoefficient::new(Rat::new(1, 2), 2, 0, 1, 0, 0));
        assert_eq!(
            find("Xi"),
            RhsCoefficient::new(Rat::from_integer(1), 1, 0, 0, 0, 0)
        );
        // the two second-derivative quartic terms differ only in prefactor
        assert_eq!(find("Xi4c").g, find("Xi4e").g);
        assert_eq!(find("Xi4c").prefactor, Rat::new(1, 2));
        assert_eq!(find("Xi4e").prefactor, Rat::from_integer(1));
    }

    #[test]
    fn rhs_eval() {
        let c = RhsCoefficient::new(Rat::new(1, 2), 2, 0, 1, 0, 0);
        let v = c.eval([3.0, 10.0, 5.0, 7.0], 11.0);
        assert!((v - 0.5 * 9.0 * 5.0).abs() < 1e-12);
    }
}
