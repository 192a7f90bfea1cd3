//! Exhaustive power-counting checkers: the four label inequalities in
//! both the general (big) and the elementary form, evaluated exactly
//! over every required vertex subset.
//!
//! All quantities `c + q*kappa` are cleared to integer pairs by a common
//! denominator, and the subset sweep runs in Gray-code order so each
//! step updates the three running sums by one vertex flip. Subsets are
//! NOT pruned by connectivity: a disconnected subset can violate the
//! interior bound even when all its connected pieces pass (parallel
//! contraction edges), so the sweep must see everything.

use crate::graphs::{ElementaryGraph, GraphError, LabeledHypergraph};
use crate::homogeneity::{Homogeneity, Rat};
use num_integer::Integer;
use rayon::prelude::*;
use std::collections::BTreeSet;

/// Which assumption family to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Big,
    Elementary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub item: u8,
    /// Offending vertex subset (the set called V-bar; item 3 subsets
    /// include vertex 0).
    pub subset: Vec<usize>,
    pub lhs: Homogeneity,
    pub rhs: Homogeneity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
    /// Total number of violating (item, subset) pairs, even when the
    /// retained list is capped.
    pub total_violations: u64,
    pub subsets_checked: u64,
}

pub const MAX_VERTICES: usize = 30;
const VIOLATION_CAP: usize = 64;

/// Integer pair standing for `(c + q*kappa) * scale`.
type Scaled = (i64, i64);

#[derive(Clone)]
struct ScaledEdge {
    from: usize,
    to: usize,
    a: Scaled,
    r: i64,
    r_pos: bool,
}

#[derive(Clone)]
struct ScaledHyper {
    vertices: Vec<usize>,
    a: Scaled,
}

/// External/internal weights for the right-hand sides; `None` in big mode.
#[derive(Clone)]
struct EleData {
    is_ex: Vec<bool>,
}

struct Problem {
    n: usize,
    s: i64,
    scale: i64,
    edges: Vec<ScaledEdge>,
    hyper: Vec<ScaledHyper>,
    in_star: Vec<bool>,
    ele: Option<EleData>,
    /// Bitmasks over nonzero vertices exempt from the interior bound.
    exempt_item2: BTreeSet<u64>,
}

fn lcm64(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

fn scale_for(g: &LabeledHypergraph) -> i64 {
    let mut l = 2i64; // halves appear in the elementary right-hand sides
    for e in &g.edges2 {
        l = lcm64(l, *e.label.a.c.denom());
        l = lcm64(l, *e.label.a.q.denom());
    }
    for h in &g.hyper {
        l = lcm64(l, *h.label.a.c.denom());
        l = lcm64(l, *h.label.a.q.denom());
    }
    l
}

fn scaled(h: Homogeneity, scale: i64) -> Scaled {
    let c = h.c * Rat::from_integer(scale);
    let q = h.q * Rat::from_integer(scale);
    debug_assert!(c.is_integer() && q.is_integer());
    (c.to_integer(), q.to_integer())
}

fn unscaled(v: Scaled, scale: i64) -> Homogeneity {
    Homogeneity::new(Rat::new(v.0, scale), Rat::new(v.1, scale))
}

fn add(a: Scaled, b: Scaled) -> Scaled {
    (a.0 + b.0, a.1 + b.1)
}

fn sub(a: Scaled, b: Scaled) -> Scaled {
    (a.0 - b.0, a.1 - b.1)
}

const ZERO: Scaled = (0, 0);

impl Problem {
    fn build(
        g: &LabeledHypergraph,
        ele: Option<&ElementaryGraph>,
        exempt_item2: BTreeSet<u64>,
    ) -> Result<Problem, GraphError> {
        g.validate()?;
        if let Some(h) = ele {
            h.validate()?;
        }
        if g.n_vertices > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(g.n_vertices, MAX_VERTICES));
        }
        let scale = scale_for(g);
        let edges = g
            .edges2
            .iter()
            .map(|e| ScaledEdge {
                from: e.from,
                to: e.to,
                a: scaled(e.label.a, scale),
                r: e.label.r * scale,
                r_pos: e.label.r > 0,
            })
            .collect();
        let hyper = g
            .hyper
            .iter()
            .map(|h| ScaledHyper {
                vertices: h.vertices.iter().copied().collect(),
                a: scaled(h.label.a, scale),
            })
            .collect();
        let mut in_star = vec![false; g.n_vertices];
        for &v in &g.vstar {
            in_star[v] = true;
        }
        let ele_data = ele.map(|h| {
            let mut is_ex = vec![false; g.n_vertices];
            for &v in &h.h_ex {
                is_ex[v] = true;
            }
            EleData { is_ex }
        });
        Ok(Problem {
            n: g.n_vertices,
            s: g.s,
            scale,
            edges,
            hyper,
            in_star,
            ele: ele_data,
            exempt_item2,
        })
    }
}

/// Running state of the Gray-code sweep over subsets S of the nonzero
/// vertices. The three accumulators are the left-hand sides of the
/// interior bound (over S), the base-point bound (over S + {0}) and
/// the anchored bound (over S), updated per vertex flip.
struct Sweep<'a> {
    p: &'a Problem,
    in_s: Vec<bool>,
    /// membership count of each 2-edge endpoint pair: (from in S+{0}, to in S+{0})
    c2: Scaled,
    c3: Scaled,
    c4: Scaled,
    hyper_cnt: Vec<usize>,
    mask: u64,
    size: usize,
    star_hits: usize,
    in_hits: usize,
    ex_hits: usize,
    incident_edges: Vec<Vec<usize>>,
    incident_hyper: Vec<Vec<usize>>,
}

impl<'a> Sweep<'a> {
    fn new(p: &'a Problem) -> Sweep<'a> {
        let mut incident_edges = vec![Vec::new(); p.n];
        for (i, e) in p.edges.iter().enumerate() {
            incident_edges[e.from].push(i);
            if e.to != e.from {
                incident_edges[e.to].push(i);
            }
        }
        let mut incident_hyper = vec![Vec::new(); p.n];
        for (i, h) in p.hyper.iter().enumerate() {
            for &v in &h.vertices {
                incident_hyper[v].push(i);
            }
        }
        let mut sweep = Sweep {
            p,
            in_s: vec![false; p.n],
            c2: ZERO,
            c3: ZERO,
            c4: ZERO,
            hyper_cnt: vec![0; p.hyper.len()],
            mask: 0,
            size: 0,
            star_hits: 0,
            in_hits: 0,
            ex_hits: 0,
            incident_edges,
            incident_hyper,
        };
        // the marked vertex is permanently inside the item-3 set
        sweep.c3 = sweep.recompute_c3();
        sweep
    }

    fn recompute_c3(&self) -> Scaled {
        let mut acc = ZERO;
        for e in self.p.edges.iter() {
            acc = add(acc, self.edge_c3(e));
        }
        acc
    }

    fn m3(&self, v: usize) -> bool {
        v == 0 || self.in_s[v]
    }

    fn edge_c2(&self, e: &ScaledEdge) -> Scaled {
        if e.from != 0 && e.to != 0 && self.in_s[e.from] && self.in_s[e.to] {
            e.a
        } else {
            ZERO
        }
    }

    fn edge_c3(&self, e: &ScaledEdge) -> Scaled {
        let mm = self.m3(e.from);
        let mp = self.m3(e.to);
        if mm && mp {
            e.a
        } else if e.r_pos && mm && !mp {
            (e.a.0 + e.r - self.p.scale, e.a.1)
        } else if e.r_pos && !mm && mp {
            (-e.r, 0)
        } else {
            ZERO
        }
    }

    fn edge_c4(&self, e: &ScaledEdge) -> Scaled {
        let mm = e.from != 0 && self.in_s[e.from];
        let mp = e.to != 0 && self.in_s[e.to];
        if !mm && !mp {
            ZERO
        } else if mm && mp {
            e.a
        } else if mm {
            // e meets S exactly at its source
            if e.r_pos {
                (e.a.0 + e.r, e.a.1)
            } else {
                e.a
            }
        } else {
            // e meets S exactly at its target
            if e.r_pos {
                (self.p.scale - e.r, 0)
            } else {
                e.a
            }
        }
    }

    /// Flip vertex v (nonzero) in or out of S.
    fn flip(&mut self, v: usize) {
        debug_assert!(v != 0);
        for &i in &self.incident_edges[v] {
            let e = &self.p.edges[i];
            self.c2 = sub(self.c2, self.edge_c2(e));
            self.c3 = sub(self.c3, self.edge_c3(e));
            self.c4 = sub(self.c4, self.edge_c4(e));
        }
        for &i in &self.incident_hyper[v] {
            let h = &self.p.hyper[i];
            let cnt = self.hyper_cnt[i];
            if cnt == h.vertices.len() {
                self.c2 = sub(self.c2, h.a);
                self.c3 = sub(self.c3, h.a);
            }
            if cnt >= 1 {
                self.c4 = sub(self.c4, h.a);
            }
        }

        let entering = !self.in_s[v];
        self.in_s[v] = entering;
        self.mask ^= 1 << (v - 1);
        let delta: isize = if entering { 1 } else { -1 };
        self.size = (self.size as isize + delta) as usize;
        if self.p.in_star[v] {
            self.star_hits = (self.star_hits as isize + delta) as usize;
        }
        if let Some(ele) = &self.p.ele {
            if ele.is_ex[v] {
                self.ex_hits = (self.ex_hits as isize + delta) as usize;
            } else {
                self.in_hits = (self.in_hits as isize + delta) as usize;
            }
        }
        for &i in &self.incident_hyper[v] {
            self.hyper_cnt[i] = (self.hyper_cnt[i] as isize + delta) as usize;
        }

        for &i in &self.incident_edges[v] {
            let e = &self.p.edges[i];
            self.c2 = add(self.c2, self.edge_c2(e));
            self.c3 = add(self.c3, self.edge_c3(e));
            self.c4 = add(self.c4, self.edge_c4(e));
        }
        for &i in &self.incident_hyper[v] {
            let h = &self.p.hyper[i];
            let cnt = self.hyper_cnt[i];
            if cnt == h.vertices.len() {
                self.c2 = add(self.c2, h.a);
                self.c3 = add(self.c3, h.a);
            }
            if cnt >= 1 {
                self.c4 = add(self.c4, h.a);
            }
        }
    }

    /// Right-hand sides for the current subset, scaled. Halves are exact
    /// because the scale is even.
    fn rhs2(&self) -> Scaled {
        let s = self.p.s * self.p.scale;
        match &self.p.ele {
            None => (s * (self.size as i64 - 1), 0),
            Some(_) => {
                let ex = self.ex_hits as i64;
                let inn = self.in_hits as i64;
                let empty_ex = if self.ex_hits == 0 { 1 } else { 0 };
                (s * inn + s * (ex - 1 - empty_ex) / 2, 0)
            }
        }
    }

    fn rhs3(&self) -> Scaled {
        let s = self.p.s * self.p.scale;
        match &self.p.ele {
            None => (s * self.size as i64, 0),
            Some(_) => (s * self.in_hits as i64 + s * self.ex_hits as i64 / 2, 0),
        }
    }

    fn rhs4(&self) -> Scaled {
        self.rhs3()
    }

    fn subset_vec(&self, with_zero: bool) -> Vec<usize> {
        let mut out: Vec<usize> = if with_zero { vec![0] } else { vec![] };
        out.extend((1..self.p.n).filter(|&v| self.in_s[v]));
        out
    }

    /// Evaluate all applicable items at the current subset.
    fn evaluate(&self, out: &mut Vec<Violation>, total: &mut u64) {
        let scale = self.p.scale;
        if self.size >= 3
            && (self.p.exempt_item2.is_empty() || !self.p.exempt_item2.contains(&self.mask))
        {
            let rhs = self.rhs2();
            if self.c2 >= rhs {
                *total += 1;
                if out.len() < VIOLATION_CAP {
                    out.push(Violation {
                        item: 2,
                        subset: self.subset_vec(false),
                        lhs: unscaled(self.c2, scale),
                        rhs: unscaled(rhs, scale),
                    });
                }
            }
        }
        if self.size >= 1 {
            let rhs = self.rhs3();
            if self.c3 >= rhs {
                *total += 1;
                if out.len() < VIOLATION_CAP {
                    out.push(Violation {
                        item: 3,
                        subset: self.subset_vec(true),
                        lhs: unscaled(self.c3, scale),
                        rhs: unscaled(rhs, scale),
                    });
                }
            }
            if self.star_hits == 0 {
                let rhs = self.rhs4();
                if self.c4 <= rhs {
                    *total += 1;
                    if out.len() < VIOLATION_CAP {
                        out.push(Violation {
                            item: 4,
                            subset: self.subset_vec(false),
                            lhs: unscaled(self.c4, scale),
                            rhs: unscaled(rhs, scale),
                        });
                    }
                }
            }
        }
    }
}

fn item1_violations(p: &Problem, out: &mut Vec<Violation>, total: &mut u64) {
    let s_scaled = (p.s * p.scale, 0);
    for e in &p.edges {
        let r_minus = (-e.r).max(0);
        let lhs = (e.a.0 - r_minus, e.a.1);
        if lhs >= s_scaled {
            *total += 1;
            if out.len() < VIOLATION_CAP {
                out.push(Violation {
                    item: 1,
                    subset: vec![e.from, e.to],
                    lhs: unscaled(lhs, p.scale),
                    rhs: unscaled(s_scaled, p.scale),
                });
            }
        }
    }
}

/// Sweep the subset lattice over the block of free vertices given a fixed
/// prefix already applied to `sweep`.
fn sweep_block(
    sweep: &mut Sweep,
    free: &[usize],
    out: &mut Vec<Violation>,
    total: &mut u64,
) -> u64 {
    let mut checked = 1u64;
    sweep.evaluate(out, total);
    let steps = 1u64 << free.len();
    for counter in 1..steps {
        let bit = counter.trailing_zeros() as usize;
        sweep.flip(free[bit]);
        sweep.evaluate(out, total);
        checked += 1;
    }
    // restore: a full Gray cycle ends at a nonzero state
    for (bit, &v) in free.iter().enumerate() {
        let parity = gray_bit(steps - 1, bit);
        if parity {
            sweep.flip(v);
        }
    }
    checked
}

fn gray_bit(counter: u64, bit: usize) -> bool {
    let gray = counter ^ (counter >> 1);
    (gray >> bit) & 1 == 1
}

fn run_check(p: &Problem) -> CheckReport {
    let mut violations = Vec::new();
    let mut total = 0u64;
    item1_violations(p, &mut violations, &mut total);

    let nonzero: Vec<usize> = (1..p.n).collect();
    let mut subsets_checked = 0u64;

    const PAR_THRESHOLD: usize = 18;
    if nonzero.len() <= PAR_THRESHOLD {
        let mut sweep = Sweep::new(p);
        subsets_checked += sweep_block(&mut sweep, &nonzero, &mut violations, &mut total);
    } else {
        let free = &nonzero[..PAR_THRESHOLD];
        let fixed = &nonzero[PAR_THRESHOLD..];
        let prefixes = 1u64 << fixed.len();
        let results: Vec<(Vec<Violation>, u64, u64)> = (0..prefixes)
            .into_par_iter()
            .map(|prefix| {
                let mut sweep = Sweep::new(p);
                for (bit, &v) in fixed.iter().enumerate() {
                    if (prefix >> bit) & 1 == 1 {
                        sweep.flip(v);
                    }
                }
                let mut vio = Vec::new();
                let mut tot = 0u64;
                let checked = sweep_block(&mut sweep, free, &mut vio, &mut tot);
                (vio, tot, checked)
            })
            .collect();
        for (vio, tot, checked) in results {
            total += tot;
            subsets_checked += checked;
            for v in vio {
                if violations.len() < VIOLATION_CAP {
                    violations.push(v);
                }
            }
        }
    }

    violations.sort_by(|a, b| (a.item, &a.subset).cmp(&(b.item, &b.subset)));
    violations.dedup();
    CheckReport {
        pass: total == 0,
        violations,
        total_violations: total,
        subsets_checked,
    }
}

/// Evaluate the general (big) assumption on a labeled hypergraph.
pub fn check_big(g: &LabeledHypergraph) -> Result<CheckReport, GraphError> {
    let p = Problem::build(g, None, BTreeSet::new())?;
    Ok(run_check(&p))
}

/// Evaluate the general assumption with the interior bound waived on the
/// given exempt subsets (each a sorted list of nonzero vertices). Used
/// for the non-reduced contraction whose pair blocks form bad chains.
pub fn check_big_exempt(
    g: &LabeledHypergraph,
    exempt: &[Vec<usize>],
) -> Result<CheckReport, GraphError> {
    let masks = exempt
        .iter()
        .map(|subset| {
            let mut m = 0u64;
            for &v in subset {
                assert!(v != 0, "exempt subsets exclude the marked vertex");
                m |= 1 << (v - 1);
            }
            m
        })
        .collect();
    let p = Problem::build(g, None, masks)?;
    Ok(run_check(&p))
}

/// Evaluate the elementary assumption on an elementary graph.
pub fn check_elementary(h: &ElementaryGraph) -> Result<CheckReport, GraphError> {
    let p = Problem::build(&h.graph, Some(h), BTreeSet::new())?;
    Ok(run_check(&p))
}

/// Dispatch on mode; elementary mode requires the elementary structure.
pub fn check_assumption(
    g: &LabeledHypergraph,
    ele: Option<&ElementaryGraph>,
    mode: CheckMode,
) -> Result<CheckReport, GraphError> {
    match (mode, ele) {
        (CheckMode::Big, _) => check_big(g),
        (CheckMode::Elementary, Some(h)) => check_elementary(h),
        (CheckMode::Elementary, None) => Err(GraphError::Json(
            "elementary mode requires external-vertex data".into(),
        )),
    }
}
