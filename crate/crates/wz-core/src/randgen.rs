//! Seeded random graphs for stress-testing the subset checkers.
//!
//! The generators build small valid graphs by construction: a spanning
//! skeleton keeps everything connected, external vertices hang by a single
//! delta-labeled edge, and cumulant corners are added last so that no stray
//! edge can touch a hyperedge anywhere but at its own source.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graphs::{EdgeLabel, ElementaryGraph, LabeledHypergraph};
use crate::homogeneity::Homogeneity;

pub struct GraphGen {
    rng: ChaCha8Rng,
}

impl GraphGen {
    pub fn new(seed: u64) -> Self {
        GraphGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Draw an internal edge label from the pool of kernel-type degrees
    /// that occur in practice: plain and once/twice subtracted kernels,
    /// a derivative kernel, a delta, a pair cumulant and a renormalized
    /// composite. Heavier labels make some draws fail the power-counting
    /// checks, which is what the implication tests need.
    fn internal_label(&mut self) -> EdgeLabel {
        match self.rng.gen_range(0..8) {
            0 | 1 => EdgeLabel::rational(1, 1, 0),
            2 => EdgeLabel::rational(1, 1, 1),
            3 => EdgeLabel::rational(1, 1, 2),
            4 => EdgeLabel::rational(2, 1, 0),
            5 => EdgeLabel::rational(3, 1, -1),
            6 => EdgeLabel::new(Homogeneity::with_kappa(3, 1, 2, 1), -1),
            _ => EdgeLabel::new(Homogeneity::with_kappa(7, 2, 3, 1), -1),
        }
    }

    /// Kernel-only pool for skeleton edges.
    fn kernel_label(&mut self) -> EdgeLabel {
        match self.rng.gen_range(0..6) {
            0 | 1 | 2 => EdgeLabel::rational(1, 1, 0),
            3 => EdgeLabel::rational(1, 1, 1),
            4 => EdgeLabel::rational(1, 1, 2),
            _ => EdgeLabel::rational(2, 1, 0),
        }
    }

    /// Labels safe on the one edge leaving a hyperedge corner (`r <= 0`).
    fn corner_label(&mut self) -> EdgeLabel {
        match self.rng.gen_range(0..3) {
            0 => EdgeLabel::rational(1, 1, 0),
            1 => EdgeLabel::rational(3, 1, -1),
            _ => EdgeLabel::new(Homogeneity::with_kappa(3, 1, 2, 1), -1),
        }
    }

    pub fn elementary(&mut self) -> ElementaryGraph {
        self.build_elementary(false)
    }

    /// A random elementary graph without external vertices.
    pub fn elementary_no_ex(&mut self) -> ElementaryGraph {
        self.build_elementary(true)
    }

    fn build_elementary(&mut self, no_ex: bool) -> ElementaryGraph {
        // extra internal vertices beyond {0, v*}; without externals the
        // marked vertex needs an internal neighbor besides 0, so force one
        let k = if no_ex {
            self.rng.gen_range(1..=3)
        } else {
            self.rng.gen_range(0..=3)
        };
        let internals_end = 2 + k;

        // Each nonzero internal vertex draws the noise attachment it would
        // get from one occurrence of the driving field: a delta edge to an
        // external vertex, one half of a pair-cumulant edge, or nothing at
        // all. Undecorated vertices keep some draws below the anchored
        // lower bound, which the implication tests rely on.
        let mut ex_targets: Vec<usize> = Vec::new();
        let mut pair_pool: Vec<usize> = Vec::new();
        for v in 1..internals_end {
            let roll = self.rng.gen_range(0..100);
            if no_ex {
                if roll < 45 {
                    pair_pool.push(v);
                }
            } else if roll < 45 {
                ex_targets.push(v);
            } else if roll < 70 {
                pair_pool.push(v);
            }
        }
        pair_pool.shuffle(&mut self.rng);
        if pair_pool.len() % 2 == 1 {
            let v = pair_pool.pop().unwrap();
            if !no_ex {
                ex_targets.push(v);
            }
        }
        if !no_ex && k == 0 && ex_targets.is_empty() {
            // the marked vertex must reach degree two somehow
            ex_targets.push(1);
        }

        let corners = if self.rng.gen_bool(0.4) {
            self.rng.gen_range(3..=4)
        } else {
            0
        };
        let m = ex_targets.len();
        let ex_start = internals_end;
        let c_start = ex_start + m;
        let n = c_start + corners;

        let mut g = LabeledHypergraph::new(3, n, [0, 1]);
        g.add_edge(1, 0, EdgeLabel::rational(0, 1, 0));
        for v in 2..internals_end {
            let t = self.rng.gen_range(0..v);
            let label = self.kernel_label();
            g.add_edge(v, t, label);
        }
        if k > 0 {
            for _ in 0..self.rng.gen_range(0..=2) {
                // any internal pair except a second copy of {0, v*}
                let (u, t) = loop {
                    let u = self.rng.gen_range(0..internals_end);
                    let t = self.rng.gen_range(0..internals_end);
                    if u != t && u.min(t) + u.max(t) != 1 {
                        break (u, t);
                    }
                };
                let label = self.kernel_label();
                g.add_edge(u, t, label);
            }
        }
        for pair in pair_pool.chunks_exact(2) {
            let label = EdgeLabel::new(Homogeneity::with_kappa(3, 1, 2, 1), -1);
            g.add_edge(pair[0], pair[1], label);
        }
        for (i, &t) in ex_targets.iter().enumerate() {
            g.add_edge(ex_start + i, t, EdgeLabel::rational(3, 1, -1));
        }
        if corners > 0 {
            g.add_hyperedge(c_start..n);
            for v in c_start..n {
                let t = self.rng.gen_range(1..internals_end);
                let label = self.corner_label();
                g.add_edge(v, t, label);
            }
        }
        // internal vertices need degree two; hang one more edge where short
        for v in 1..internals_end {
            while g.degree(v) < 2 {
                let t = loop {
                    let t = self.rng.gen_range(0..internals_end);
                    if t != v && t + v != 1 {
                        break t;
                    }
                };
                let label = self.kernel_label();
                g.add_edge(v, t, label);
            }
        }

        let h = ElementaryGraph::new(g, 1, ex_start..c_start);
        debug_assert!(h.validate().is_ok(), "generator broke validity");
        h
    }

    /// A random connected labeled hypergraph. Labels are unconstrained
    /// beyond graph validity, so these draws exercise label-independent
    /// identities rather than the power-counting checks themselves.
    pub fn hypergraph(&mut self) -> LabeledHypergraph {
        let corners = if self.rng.gen_bool(0.4) {
            self.rng.gen_range(3..=4)
        } else {
            0
        };
        let base = self.rng.gen_range(2..=5);
        let n = base + corners;
        let star: Vec<usize> = if self.rng.gen_bool(0.5) {
            vec![0, 1]
        } else {
            vec![0]
        };
        let mut g = LabeledHypergraph::new(3, n, star);
        for v in 1..base {
            let t = self.rng.gen_range(0..v);
            let label = self.internal_label();
            g.add_edge(v, t, label);
        }
        for _ in 0..self.rng.gen_range(0..=2) {
            let u = self.rng.gen_range(0..base);
            let t = self.rng.gen_range(0..base);
            if u != t {
                let label = self.internal_label();
                g.add_edge(u, t, label);
            }
        }
        if corners > 0 {
            if self.rng.gen_bool(0.5) {
                g.add_hyperedge(base..n);
            } else {
                // cumulant-type corner blocks may carry a symbolic surplus
                let nc = corners as i64;
                let a = Homogeneity::with_kappa(3 * nc, 2, nc, 1);
                g.add_hyperedge_labeled(base..n, EdgeLabel::new(a, 0));
            }
            for v in base..n {
                let t = self.rng.gen_range(0..base);
                let label = self.corner_label();
                g.add_edge(v, t, label);
            }
        }
        debug_assert!(g.validate().is_ok(), "generator broke validity");
        debug_assert!(g.is_connected(), "generator broke connectivity");
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_valid_and_deterministic() {
        let mut a = GraphGen::new(7);
        let mut b = GraphGen::new(7);
        for _ in 0..200 {
            let ga = a.elementary();
            let gb = b.elementary();
            ga.validate().unwrap();
            assert_eq!(ga.to_json(), gb.to_json());
        }
    }

    #[test]
    fn seeds_change_the_stream() {
        let mut a = GraphGen::new(1);
        let mut b = GraphGen::new(2);
        let differs = (0..20).any(|_| a.elementary().to_json() != b.elementary().to_json());
        assert!(differs);
    }

    #[test]
    fn no_external_draws_have_empty_boundary() {
        let mut gen = GraphGen::new(11);
        for _ in 0..100 {
            let h = gen.elementary_no_ex();
            h.validate().unwrap();
            assert!(h.h_ex.is_empty());
        }
    }

    #[test]
    fn hypergraph_draws_are_valid_and_connected() {
        let mut gen = GraphGen::new(23);
        for _ in 0..200 {
            let g = gen.hypergraph();
            g.validate().unwrap();
            assert!(g.is_connected());
        }
    }

    #[test]
    fn elementary_draws_cover_pass_and_fail() {
        use crate::check::check_elementary;
        let mut gen = GraphGen::new(5);
        let mut pass = 0usize;
        let mut fail = 0usize;
        for _ in 0..100 {
            let h = gen.elementary();
            if check_elementary(&h).unwrap().pass {
                pass += 1;
            } else {
                fail += 1;
            }
        }
        assert!(pass >= 10, "only {pass} passing draws");
        assert!(fail >= 10, "only {fail} failing draws");
    }
}
