//! Gluing p copies of an elementary graph at the base vertex and
//! contracting their noise legs along a partition, in both the plain
//! and the reduced form.
//!
//! Copy `i` of nonzero vertex `v` gets the glued index `i*(n-1) + v`;
//! the base vertex keeps index 0 in every copy.

use crate::graphs::{EdgeLabel, ElementaryGraph, GraphError, HyperEdge, LabeledHypergraph};
use crate::homogeneity::{Homogeneity, Rat};
use std::collections::BTreeSet;

/// One element of the disjoint union of noise-leg copies.
pub type Leg = (usize, usize); // (copy, external vertex)

/// A partition of the p-fold disjoint union of the external vertices in
/// which every block draws from at least two distinct copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionPartition {
    pub blocks: Vec<Vec<Leg>>,
}

impl ContractionPartition {
    pub fn new(mut blocks: Vec<Vec<Leg>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        ContractionPartition { blocks }
    }

    /// Exact cover of `h_ex x {0..p}` with every block meeting two copies.
    pub fn validate(&self, h_ex: &BTreeSet<usize>, p: usize) -> Result<(), GraphError> {
        if p < 2 {
            return Err(GraphError::BadPartition(format!(
                "need at least 2 copies, got {p}"
            )));
        }
        let mut seen: BTreeSet<Leg> = BTreeSet::new();
        for block in &self.blocks {
            let copies: BTreeSet<usize> = block.iter().map(|&(c, _)| c).collect();
            if copies.len() < 2 {
                return Err(GraphError::BadPartition(
                    "block confined to a single copy".into(),
                ));
            }
            for &(c, v) in block {
                if c >= p || !h_ex.contains(&v) {
                    return Err(GraphError::BadPartition(format!(
                        "leg ({c}, {v}) outside the disjoint union"
                    )));
                }
                if !seen.insert((c, v)) {
                    return Err(GraphError::BadPartition(format!(
                        "leg ({c}, {v}) appears twice"
                    )));
                }
            }
        }
        if seen.len() != h_ex.len() * p {
            return Err(GraphError::BadPartition(format!(
                "covers {} of {} legs",
                seen.len(),
                h_ex.len() * p
            )));
        }
        Ok(())
    }
}

/// Every admissible partition, by restricted-growth enumeration of all
/// partitions followed by the two-copy filter.
pub fn enumerate_wick_partitions(h_ex: &BTreeSet<usize>, p: usize) -> Vec<ContractionPartition> {
    assert!(p >= 2, "need at least 2 copies");
    let legs: Vec<Leg> = (0..p)
        .flat_map(|c| h_ex.iter().map(move |&v| (c, v)))
        .collect();
    let m = legs.len();
    if m == 0 {
        return vec![ContractionPartition::new(Vec::new())];
    }
    let mut out = Vec::new();
    let mut assignment = vec![0usize; m];
    loop {
        let n_blocks = assignment.iter().copied().max().unwrap() + 1;
        let mut blocks: Vec<Vec<Leg>> = vec![Vec::new(); n_blocks];
        for (i, &b) in assignment.iter().enumerate() {
            blocks[b].push(legs[i]);
        }
        let admissible = blocks.iter().all(|b| {
            let copies: BTreeSet<usize> = b.iter().map(|&(c, _)| c).collect();
            copies.len() >= 2
        });
        if admissible {
            out.push(ContractionPartition::new(blocks));
        }
        // next restricted-growth string: a[i] <= max(a[..i]) + 1
        let mut i = m - 1;
        loop {
            if i == 0 {
                return out;
            }
            let cap = assignment[..i].iter().copied().max().unwrap() + 1;
            if assignment[i] < cap {
                assignment[i] += 1;
                for a in assignment[i + 1..].iter_mut() {
                    *a = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Glued index of copy `copy` of vertex `v` in a graph with `n` vertices.
pub fn glued_index(copy: usize, v: usize, n: usize) -> usize {
    if v == 0 {
        0
    } else {
        copy * (n - 1) + v
    }
}

/// Result of a p-fold contraction: the labeled graph, and when reduced
/// the retraction sending every glued vertex to its image.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: LabeledHypergraph,
    pub retraction: Option<Vec<usize>>,
}

/// Bad chains of the plain contraction: for every pair block {u, v},
/// all subsets of {u, v, i(u), i(v)} of cardinality above two, in glued
/// indices.
pub fn bad_chains(
    h: &ElementaryGraph,
    p: usize,
    pi: &ContractionPartition,
) -> Result<Vec<Vec<usize>>, GraphError> {
    pi.validate(&h.h_ex, p)?;
    let n = h.graph.n_vertices;
    let mut out = Vec::new();
    for block in &pi.blocks {
        if block.len() != 2 {
            continue;
        }
        let quad: Vec<usize> = block
            .iter()
            .flat_map(|&(c, v)| {
                let i_v = h.attachment(v).expect("external vertex has an attachment");
                [glued_index(c, v, n), glued_index(c, i_v, n)]
            })
            .collect();
        for mask in 0u32..16 {
            if mask.count_ones() <= 2 {
                continue;
            }
            let mut subset: Vec<usize> = (0..4)
                .filter(|&j| mask >> j & 1 == 1)
                .map(|j| quad[j])
                .collect();
            subset.sort_unstable();
            out.push(subset);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Glue p copies of an elementary graph at 0 and contract the noise
/// legs along the partition. Pair blocks become (|s|, -1) 2-edges and
/// larger blocks become hyperedges; with `reduce` set, the pair-block
/// vertices are integrated out and replaced by a single (|s|, -1) edge
/// between their attachment points.
pub fn wick_contract(
    h: &ElementaryGraph,
    p: usize,
    pi: &ContractionPartition,
    reduce: bool,
) -> Result<Contraction, GraphError> {
    h.validate()?;
    pi.validate(&h.h_ex, p)?;
    let n = h.graph.n_vertices;
    let s = h.graph.s;
    let glued_n = 1 + p * (n - 1);

    let mut vstar: BTreeSet<usize> = BTreeSet::new();
    vstar.insert(0);
    for c in 0..p {
        vstar.insert(glued_index(c, h.v_star, n));
    }

    let mut g = LabeledHypergraph::new(s, glued_n, vstar.iter().copied());
    for c in 0..p {
        for e in &h.graph.edges2 {
            g.add_edge(
                glued_index(c, e.from, n),
                glued_index(c, e.to, n),
                e.label,
            );
        }
        for hy in &h.graph.hyper {
            g.hyper.push(HyperEdge {
                vertices: hy
                    .vertices
                    .iter()
                    .map(|&v| glued_index(c, v, n))
                    .collect(),
                label: hy.label,
            });
        }
    }
    let pair_label = EdgeLabel::new(Homogeneity::int(s), -1);
    for block in &pi.blocks {
        let glued: Vec<usize> = block
            .iter()
            .map(|&(c, v)| glued_index(c, v, n))
            .collect();
        if glued.len() == 2 {
            let (lo, hi) = (glued[0].min(glued[1]), glued[0].max(glued[1]));
            g.add_edge(lo, hi, pair_label);
        } else {
            g.add_hyperedge(glued.iter().copied());
        }
    }

    if !reduce {
        return Ok(Contraction {
            graph: g,
            retraction: None,
        });
    }

    // integrate out the pair-block vertices
    let mut removed: BTreeSet<usize> = BTreeSet::new();
    let mut pair_edges: Vec<(usize, usize)> = Vec::new();
    for block in &pi.blocks {
        if block.len() != 2 {
            continue;
        }
        let mut ends = Vec::with_capacity(2);
        for &(c, v) in block {
            removed.insert(glued_index(c, v, n));
            let i_v = h.attachment(v).expect("external vertex has an attachment");
            ends.push(glued_index(c, i_v, n));
        }
        pair_edges.push((ends[0].min(ends[1]), ends[0].max(ends[1])));
    }

    let mut new_index = vec![usize::MAX; glued_n];
    let mut kept = 0usize;
    for v in 0..glued_n {
        if !removed.contains(&v) {
            new_index[v] = kept;
            kept += 1;
        }
    }

    let mut reduced = LabeledHypergraph::new(
        s,
        kept,
        vstar.iter().map(|&v| new_index[v]),
    );
    for c in 0..p {
        for e in &h.graph.edges2 {
            let from = glued_index(c, e.from, n);
            let to = glued_index(c, e.to, n);
            if !removed.contains(&from) && !removed.contains(&to) {
                reduced.add_edge(new_index[from], new_index[to], e.label);
            }
        }
        for hy in &h.graph.hyper {
            reduced.hyper.push(HyperEdge {
                vertices: hy
                    .vertices
                    .iter()
                    .map(|&v| new_index[glued_index(c, v, n)])
                    .collect(),
                label: hy.label,
            });
        }
    }
    for block in &pi.blocks {
        if block.len() > 2 {
            reduced.add_hyperedge(
                block
                    .iter()
                    .map(|&(c, v)| new_index[glued_index(c, v, n)]),
            );
        }
    }
    for &(lo, hi) in &pair_edges {
        reduced.add_edge(new_index[lo], new_index[hi], pair_label);
    }

    // retraction: removed vertices land on their attachment points
    let mut retraction = vec![usize::MAX; glued_n];
    for v in 0..glued_n {
        retraction[v] = new_index[v];
    }
    for block in &pi.blocks {
        if block.len() != 2 {
            continue;
        }
        for &(c, v) in block {
            let i_v = h.attachment(v).expect("external vertex has an attachment");
            retraction[glued_index(c, v, n)] = new_index[glued_index(c, i_v, n)];
        }
    }

    Ok(Contraction {
        graph: reduced,
        retraction: Some(retraction),
    })
}

/// A collapsible chain: the index of the middle pair edge, the indices
/// of the two Dirac legs, and the outer attachment vertices.
struct Chain {
    mid: usize,
    legs: [usize; 2],
    drop: [usize; 2],
    attach: [usize; 2],
}

fn find_chain(g: &LabeledHypergraph) -> Option<Chain> {
    let delta = EdgeLabel::new(Homogeneity::int(g.s), -1);
    let in_hyper = |v: usize| g.hyper.iter().any(|h| h.vertices.contains(&v));
    'mids: for (mid, e) in g.edges2.iter().enumerate() {
        if e.label.r >= 0 || e.label.a.c != Rat::from_integer(g.s) {
            continue;
        }
        let mut legs = [usize::MAX; 2];
        let mut attach = [usize::MAX; 2];
        for (side, &u) in [e.from, e.to].iter().enumerate() {
            if g.vstar.contains(&u) || in_hyper(u) {
                continue 'mids;
            }
            let incident: Vec<usize> = g
                .edges2
                .iter()
                .enumerate()
                .filter(|(i, d)| *i != mid && (d.from == u || d.to == u))
                .map(|(i, _)| i)
                .collect();
            if incident.len() != 1 {
                continue 'mids;
            }
            let d = &g.edges2[incident[0]];
            if d.label != delta {
                continue 'mids;
            }
            legs[side] = incident[0];
            attach[side] = if d.from == u { d.to } else { d.from };
        }
        let ends = [e.from, e.to];
        if attach[0] == attach[1] || ends.contains(&attach[0]) || ends.contains(&attach[1]) {
            continue;
        }
        return Some(Chain {
            mid,
            legs,
            drop: ends,
            attach,
        });
    }
    None
}

/// Integrate out the chains a pair contraction threads through noise
/// legs: an internal edge u - v whose rational degree is exactly |s|
/// with r < 0, where u and v lie outside the distinguished set and all
/// hyperedges and each carries exactly one further edge, a Dirac leg to
/// a third vertex. The chain collapses to a single edge between the two
/// attachment points keeping the middle label, which is the exact
/// effect of integrating the two Dirac weights. Runs to a fixed point
/// and compacts vertex indices.
///
/// Returns the rewritten graph and the map from old to new vertex
/// indices, with `usize::MAX` marking integrated-out vertices.
pub fn normalize_bad_chains(g: &LabeledHypergraph) -> (LabeledHypergraph, Vec<usize>) {
    let mut cur = g.clone();
    let mut map: Vec<usize> = (0..g.n_vertices).collect();
    while let Some(chain) = find_chain(&cur) {
        let label = cur.edges2[chain.mid].label;
        let mut doomed = [chain.mid, chain.legs[0], chain.legs[1]];
        doomed.sort_unstable();
        for idx in doomed.iter().rev() {
            cur.edges2.remove(*idx);
        }
        cur.add_edge(
            chain.attach[0].min(chain.attach[1]),
            chain.attach[0].max(chain.attach[1]),
            label,
        );

        let mut remap = vec![usize::MAX; cur.n_vertices];
        let mut kept = 0usize;
        for v in 0..cur.n_vertices {
            if !chain.drop.contains(&v) {
                remap[v] = kept;
                kept += 1;
            }
        }
        let mut next =
            LabeledHypergraph::new(cur.s, kept, cur.vstar.iter().map(|&v| remap[v]));
        for e in &cur.edges2 {
            next.add_edge(remap[e.from], remap[e.to], e.label);
        }
        for h in &cur.hyper {
            next.hyper.push(HyperEdge {
                vertices: h.vertices.iter().map(|&v| remap[v]).collect(),
                label: h.label,
            });
        }
        for m in map.iter_mut() {
            if *m != usize::MAX {
                *m = remap[*m];
            }
        }
        cur = next;
    }
    (cur, map)
}
