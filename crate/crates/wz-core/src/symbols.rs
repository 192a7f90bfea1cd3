//! The symbol algebra: decorated rooted trees generated by `Xi`, `X^k` and
//! the integration operator `I(.)`, together with homogeneity assignment and
//! generation of the finite symbol set below a cutoff.
//!
//! Canonical form: a term is a polynomial decoration `X0^a X1^b`, an optional
//! noise factor `Xi`, and a sorted multiset of `I(...)` children. Products of
//! two noise-carrying terms do not exist in this structure and are rejected.

use crate::homogeneity::{Homogeneity, Rat};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("product would contain Xi^2")]
    XiSquared,
    #[error("the zero symbol has no homogeneity")]
    ZeroHomogeneity,
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },
}

/// Space-time multi-index `(k0, k1)` with parabolic degree `2*k0 + k1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MultiIndex {
    pub k0: u32,
    pub k1: u32,
}

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex { k0: 0, k1: 0 };

    pub fn new(k0: u32, k1: u32) -> Self {
        MultiIndex { k0, k1 }
    }

    /// Parabolic degree `|k|_s = 2 k0 + k1`.
    pub fn scaled_degree(&self) -> u32 {
        2 * self.k0 + self.k1
    }

    pub fn is_zero(&self) -> bool {
        self.k0 == 0 && self.k1 == 0
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex::new(self.k0 + other.k0, self.k1 + other.k1)
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &MultiIndex) -> bool {
        self.k0 <= other.k0 && self.k1 <= other.k1
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex::new(self.k0 - other.k0, self.k1 - other.k1)
    }

    /// `k! = k0! * k1!` as an exact rational.
    pub fn factorial(&self) -> Rat {
        let f = |n: u32| (1..=n as i64).product::<i64>().max(1);
        Rat::from_integer(f(self.k0) * f(self.k1))
    }

    /// All multi-indices with scaled degree < `bound`.
    pub fn below_degree(bound: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for k0 in 0..=(bound / 2) {
            for k1 in 0.. {
                let k = MultiIndex::new(k0, k1);
                if k.scaled_degree() >= bound {
                    break;
                }
                out.push(k);
            }
        }
        out
    }
}

/// A nonzero symbol in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub k: MultiIndex,
    pub xi: bool,
    /// Arguments of the `I(...)` factors, kept sorted.
    pub args: Vec<Term>,
}

/// A symbol: zero or a canonical term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Zero,
    Term(Term),
}

impl Term {
    fn one() -> Term {
        Term {
            k: MultiIndex::ZERO,
            xi: false,
            args: Vec::new(),
        }
    }

    /// Pure polynomial `X^k` (including `1`).
    pub fn is_poly(&self) -> bool {
        !self.xi && self.args.is_empty()
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut h = Homogeneity::int(self.k.scaled_degree() as i64);
        if self.xi {
            h += Homogeneity::with_kappa(-3, 2, -1, 1);
        }
        for a in &self.args {
            h += a.homogeneity() + Homogeneity::int(2);
        }
        h
    }

    pub fn product(&self, other: &Term) -> Result<Term, AlgebraError> {
        if self.xi && other.xi {
            return Err(AlgebraError::XiSquared);
        }
        let mut args = self.args.clone();
        args.extend(other.args.iter().cloned());
        args.sort();
        Ok(Term {
            k: self.k.add(&other.k),
            xi: self.xi || other.xi,
            args,
        })
    }
}

impl Symbol {
    pub fn zero() -> Symbol {
        Symbol::Zero
    }

    pub fn one() -> Symbol {
        Symbol::Term(Term::one())
    }

    pub fn xi() -> Symbol {
        Symbol::Term(Term {
            k: MultiIndex::ZERO,
            xi: true,
            args: Vec::new(),
        })
    }

    pub fn x_pow(k: MultiIndex) -> Symbol {
        Symbol::Term(Term {
            k,
            xi: false,
            args: Vec::new(),
        })
    }

    pub fn x0() -> Symbol {
        Symbol::x_pow(MultiIndex::new(1, 0))
    }

    pub fn x1() -> Symbol {
        Symbol::x_pow(MultiIndex::new(0, 1))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Symbol::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Symbol::Term(t) if t.is_poly() && t.k.is_zero())
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Symbol::Zero => None,
            Symbol::Term(t) => Some(t),
        }
    }

    /// The integration operator. `I` of zero or of a pure polynomial is zero.
    pub fn integral(&self) -> Symbol {
        match self {
            Symbol::Zero => Symbol::Zero,
            Symbol::Term(t) if t.is_poly() => Symbol::Zero,
            Symbol::Term(t) => Symbol::Term(Term {
                k: MultiIndex::ZERO,
                xi: false,
                args: vec![t.clone()],
            }),
        }
    }

    /// Product of two symbols; rejects products carrying `Xi` twice.
    pub fn product(&self, other: &Symbol) -> Result<Symbol, AlgebraError> {
        match (self, other) {
            (Symbol::Zero, _) | (_, Symbol::Zero) => Ok(Symbol::Zero),
            (Symbol::Term(a), Symbol::Term(b)) => Ok(Symbol::Term(a.product(b)?)),
        }
    }

    pub fn homogeneity(&self) -> Result<Homogeneity, AlgebraError> {
        match self {
            Symbol::Zero => Err(AlgebraError::ZeroHomogeneity),
            Symbol::Term(t) => Ok(t.homogeneity()),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Zero => write!(f, "0"),
            Symbol::Term(t) => {
                let mut parts: Vec<String> = Vec::new();
                if t.k.k0 > 0 {
                    parts.push(if t.k.k0 == 1 {
                        "X0".into()
                    } else {
                        format!("X0^{}", t.k.k0)
                    });
                }
                if t.k.k1 > 0 {
                    parts.push(if t.k.k1 == 1 {
                        "X1".into()
                    } else {
                        format!("X1^{}", t.k.k1)
                    });
                }
                if t.xi {
                    parts.push("Xi".into());
                }
                for a in &t.args {
                    parts.push(format!("I({})", Symbol::Term(a.clone())));
                }
                if parts.is_empty() {
                    write!(f, "1")
                } else {
                    write!(f, "{}", parts.join(" "))
                }
            }
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parse the compact grammar: `0`, `1`, `Xi`, `X0`, `X1`, `X0^a`, `X1^b`,
/// `I(...)`, with juxtaposition (whitespace) for products.
pub fn parse_symbol(input: &str) -> Result<Symbol, AlgebraError> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let s = p.parse_product()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(s)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse {
            at: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn parse_product(&mut self) -> Result<Symbol, AlgebraError> {
        let mut acc: Option<Symbol> = None;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(b')') => break,
                _ => {}
            }
            let factor = self.parse_factor()?;
            acc = Some(match acc {
                None => factor,
                Some(a) => a.product(&factor)?,
            });
        }
        acc.ok_or_else(|| self.err("expected a symbol"))
    }

    fn parse_factor(&mut self) -> Result<Symbol, AlgebraError> {
        if self.eat("0") {
            return Ok(Symbol::Zero);
        }
        if self.eat("1") {
            return Ok(Symbol::one());
        }
        if self.eat("Xi") {
            return Ok(Symbol::xi());
        }
        if self.eat("X0") {
            return Ok(Symbol::x_pow(MultiIndex::new(self.parse_power()?, 0)));
        }
        if self.eat("X1") {
            return Ok(Symbol::x_pow(MultiIndex::new(0, self.parse_power()?)));
        }
        if self.eat("I(") {
            let inner = self.parse_product()?;
            self.skip_ws();
            if !self.eat(")") {
                return Err(self.err("expected ')'"));
            }
            return Ok(inner.integral());
        }
        Err(self.err("expected one of 0, 1, Xi, X0, X1, I("))
    }

    fn parse_power(&mut self) -> Result<u32, AlgebraError> {
        if !self.eat("^") {
            return Ok(1);
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected exponent"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("exponent overflow"))
    }
}

/// The symbol set below `cutoff`: the closure U of {1, X0, X1} under
/// products, `I(.)` and `I(Xi .)`, together with `Xi*U`, pruned at the
/// cutoff. Every element of U has nonnegative homogeneity and each
/// production strictly increases it, so saturation terminates.
pub fn generate_w(cutoff: Homogeneity) -> BTreeSet<Symbol> {
    assert!(
        cutoff >= Homogeneity::zero(),
        "cutoff must be nonnegative, got {cutoff}"
    );
    // Elements of U are only useful if they can still appear in W either
    // directly or multiplied by Xi, whose homogeneity is -3/2 - kappa.
    let u_cutoff = cutoff + Homogeneity::with_kappa(3, 2, 1, 1);
    let xi_hom = Homogeneity::with_kappa(-3, 2, -1, 1);
    let two = Homogeneity::int(2);

    // Worklist closure with the homogeneity carried alongside each term,
    // so candidates are rejected on exponent arithmetic alone before any
    // tree is built.
    let mut elems: Vec<(Term, Homogeneity)> = Vec::new();
    let mut seen: BTreeSet<Term> = BTreeSet::new();
    let mut frontier: Vec<usize> = Vec::new();
    let push = |elems: &mut Vec<(Term, Homogeneity)>,
                    seen: &mut BTreeSet<Term>,
                    frontier: &mut Vec<usize>,
                    t: Term,
                    h: Homogeneity| {
        if seen.insert(t.clone()) {
            frontier.push(elems.len());
            elems.push((t, h));
        }
    };
    for gen in [Symbol::one(), Symbol::x0(), Symbol::x1()] {
        let t = gen.as_term().unwrap().clone();
        let h = t.homogeneity();
        push(&mut elems, &mut seen, &mut frontier, t, h);
    }

    while let Some(idx) = frontier.pop() {
        let (t, h) = elems[idx].clone();
        // I(t): vanishes on pure polynomials
        if !t.is_poly() && h + two <= u_cutoff {
            let it = Term {
                k: MultiIndex::ZERO,
                xi: false,
                args: vec![t.clone()],
            };
            push(&mut elems, &mut seen, &mut frontier, it, h + two);
        }
        // I(Xi t)
        let hxi = h + xi_hom + two;
        if hxi <= u_cutoff {
            let mut inner = t.clone();
            inner.xi = true;
            let it = Term {
                k: MultiIndex::ZERO,
                xi: false,
                args: vec![inner],
            };
            push(&mut elems, &mut seen, &mut frontier, it, hxi);
        }
        // products with everything already present (including itself)
        for j in 0..elems.len() {
            let (s, hs) = elems[j].clone();
            let hp = h + hs;
            if hp > u_cutoff {
                continue;
            }
            let p = t.product(&s).expect("U carries no Xi");
            push(&mut elems, &mut seen, &mut frontier, p, hp);
        }
    }

    let mut w = BTreeSet::new();
    for (t, h) in &elems {
        if *h <= cutoff {
            w.insert(Symbol::Term(t.clone()));
        }
        if *h + xi_hom <= cutoff {
            let mut xit = t.clone();
            xit.xi = true;
            w.insert(Symbol::Term(xit));
        }
    }
    w
}

/// Cutoff used by the model structure: 5/2.
pub fn standard_cutoff() -> Homogeneity {
    Homogeneity::frac(5, 2)
}

/// An exact linear combination of nonzero symbols.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SymbolSpan {
    terms: BTreeMap<Term, Rat>,
}

impl SymbolSpan {
    pub fn zero() -> Self {
        SymbolSpan::default()
    }

    pub fn single(sym: Symbol) -> Self {
        let mut s = SymbolSpan::zero();
        s.add(sym, Rat::from_integer(1));
        s
    }

    /// Add `coeff * sym`; adding the zero symbol or a zero coefficient is a
    /// no-op, and cancellations remove the entry.
    pub fn add(&mut self, sym: Symbol, coeff: Rat) {
        use num_traits::Zero;
        let Symbol::Term(t) = sym else { return };
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(t.clone()).or_insert_with(Rat::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn add_span(&mut self, other: &SymbolSpan, factor: Rat) {
        for (t, c) in &other.terms {
            self.add(Symbol::Term(t.clone()), c * factor);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, sym: &Symbol) -> Rat {
        use num_traits::Zero;
        match sym.as_term() {
            None => Rat::zero(),
            Some(t) => self.terms.get(t).cloned().unwrap_or_else(Rat::zero),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, &Rat)> {
        self.terms.iter().map(|(t, c)| (Symbol::Term(t.clone()), c))
    }
}

impl fmt::Display for SymbolSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                if *c == Rat::from_integer(1) {
                    format!("{}", Symbol::Term(t.clone()))
                } else {
                    format!("{} {}", c, Symbol::Term(t.clone()))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SymbolSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The named symbols that drive the expansion, in a fixed order: the eleven
/// negative-homogeneity symbols first, then the nonnegative remainder.
pub mod names {
    use super::{parse_symbol, Symbol};

    macro_rules! named {
        ($($fn_name:ident => $text:expr;)*) => {
            $(pub fn $fn_name() -> Symbol {
                parse_symbol($text).expect("fixed grammar")
            })*
        };
    }

    named! {
        xi => "Xi";
        xi2 => "Xi I(Xi)";
        xi3 => "Xi I(Xi I(Xi))";
        xi3b => "Xi I(Xi) I(Xi)";
        xi_x => "X1 Xi";
        xi4 => "Xi I(Xi I(Xi I(Xi)))";
        xi4b => "Xi I(Xi) I(Xi) I(Xi)";
        xi4c => "Xi I(Xi I(Xi) I(Xi))";
        xi4e => "Xi I(Xi) I(Xi I(Xi))";
        xi2x => "Xi I(X1 Xi)";
        x_xi2 => "X1 Xi I(Xi)";
        one => "1";
        i_xi => "I(Xi)";
        i_xi_sq => "I(Xi) I(Xi)";
        i_xi2 => "I(Xi I(Xi))";
        xi22 => "Xi I(I(Xi))";
    }

    /// The eleven symbols of negative homogeneity, most negative first.
    pub fn negative() -> Vec<(&'static str, Symbol)> {
        vec![
            ("Xi", xi()),
            ("Xi2", xi2()),
            ("Xi3", xi3()),
            ("Xi3b", xi3b()),
            ("XiX", xi_x()),
            ("Xi4", xi4()),
            ("Xi4b", xi4b()),
            ("Xi4c", xi4c()),
            ("Xi4e", xi4e()),
            ("Xi2X", xi2x()),
            ("XXi2", x_xi2()),
        ]
    }

    /// The sixteen symbols appearing in the fixed-point expansion.
    pub fn core_set() -> Vec<(&'static str, Symbol)> {
        let mut v = negative();
        v.extend([
            ("1", one()),
            ("IXi", i_xi()),
            ("IXi^2", i_xi_sq()),
            ("IXi2", i_xi2()),
            ("Xi22", xi22()),
        ]);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Symbol {
        parse_symbol(text).unwrap()
    }

    #[test]
    fn canonical_product_is_order_free() {
        let a = s("Xi I(Xi)").product(&s("I(Xi I(Xi))")).unwrap();
        let b = s("I(Xi I(Xi))").product(&s("Xi I(Xi)")).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "Xi I(Xi) I(Xi I(Xi))");
    }

    #[test]
    fn xi_squared_rejected() {
        assert_eq!(
            Symbol::xi().product(&s("Xi I(Xi)")),
            Err(AlgebraError::XiSquared)
        );
    }

    #[test]
    fn integral_of_polynomial_vanishes() {
        assert!(Symbol::one().integral().is_zero());
        assert!(Symbol::x1().integral().is_zero());
        assert!(s("X0^2 X1").integral().is_zero());
        assert!(!s("Xi").integral().is_zero());
        assert!(Symbol::Zero.integral().is_zero());
    }

    #[test]
    fn homogeneity_base_cases() {
        assert_eq!(
            s("Xi").homogeneity().unwrap(),
            Homogeneity::with_kappa(-3, 2, -1, 1)
        );
        assert_eq!(s("1").homogeneity().unwrap(), Homogeneity::zero());
        assert_eq!(s("X0").homogeneity().unwrap(), Homogeneity::int(2));
        assert_eq!(s("X1").homogeneity().unwrap(), Homogeneity::int(1));
        assert_eq!(
            Symbol::Zero.homogeneity(),
            Err(AlgebraError::ZeroHomogeneity)
        );
    }

    #[test]
    fn parse_round_trip() {
        for text in [
            "Xi",
            "1",
            "Xi I(Xi)",
            "Xi I(Xi I(Xi))",
            "Xi I(Xi) I(Xi)",
            "X1 Xi I(Xi)",
            "Xi I(Xi X1)",
            "X0^2 X1^3",
            "I(Xi I(Xi) I(Xi))",
        ] {
            let sym = s(text);
            assert_eq!(s(&sym.to_string()), sym, "round trip through {text}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_symbol("Xj").is_err());
        assert!(parse_symbol("I(Xi").is_err());
        assert!(parse_symbol("Xi)").is_err());
        assert!(parse_symbol("").is_err());
    }

    #[test]
    fn below_degree_enumeration() {
        let ks = MultiIndex::below_degree(3);
        // (0,0), (0,1), (0,2), (1,0)
        assert_eq!(ks.len(), 4);
        assert!(ks.iter().all(|k| k.scaled_degree() < 3));
    }
}
