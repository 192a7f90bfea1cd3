//! Structure-group coproduct on the symbol algebra.
//!
//! The right factor lives in the algebra generated by `X0`, `X1` and the
//! truncated integrals `J_k(tau)`, so a tensor is stored as a linear
//! combination of pairs (symbol, plus-monomial) with rational coefficients.
//!
//! Recursion:
//!   D(1)     = 1 (x) 1
//!   D(Xi)    = Xi (x) 1
//!   D(X_i)   = X_i (x) 1 + 1 (x) X_i
//!   D(t*s)   = D(t) * D(s) factorwise
//!   D(I(t))  = (I (x) id) D(t)
//!              + sum_{l,k} (X^l / l!) (x) (X^k / k!) J_{l+k}(t)
//! where `J_m(t)` is dropped unless `|m|_s < |t| + 2`.

use crate::homogeneity::{rat_f64, Homogeneity, Rat};
use crate::symbols::{AlgebraError, MultiIndex, Symbol, Term};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// A monomial in the plus-algebra: a polynomial part `X^k` and a sorted
/// multiset of truncated integrals `J_{m}(tau)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PlusMonomial {
    pub xk: MultiIndex,
    pub js: Vec<(MultiIndex, Term)>,
}

impl PlusMonomial {
    pub fn one() -> Self {
        PlusMonomial::default()
    }

    pub fn x_pow(k: MultiIndex) -> Self {
        PlusMonomial {
            xk: k,
            js: Vec::new(),
        }
    }

    pub fn j(m: MultiIndex, tau: Term) -> Self {
        PlusMonomial {
            xk: MultiIndex::ZERO,
            js: vec![(m, tau)],
        }
    }

    pub fn is_one(&self) -> bool {
        self.xk.is_zero() && self.js.is_empty()
    }

    fn product(&self, other: &PlusMonomial) -> PlusMonomial {
        let mut js = self.js.clone();
        js.extend(other.js.iter().cloned());
        js.sort();
        PlusMonomial {
            xk: self.xk.add(&other.xk),
            js,
        }
    }
}

impl fmt::Display for PlusMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.xk.k0 > 0 {
            parts.push(if self.xk.k0 == 1 {
                "X0".to_string()
            } else {
                format!("X0^{}", self.xk.k0)
            });
        }
        if self.xk.k1 > 0 {
            parts.push(if self.xk.k1 == 1 {
                "X1".to_string()
            } else {
                format!("X1^{}", self.xk.k1)
            });
        }
        for (m, t) in &self.js {
            if m.is_zero() {
                parts.push(format!("J({})", Symbol::Term(t.clone())));
            } else {
                parts.push(format!(
                    "J[{},{}]({})",
                    m.k0,
                    m.k1,
                    Symbol::Term(t.clone())
                ));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl fmt::Debug for PlusMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Linear combination of left (x) right basis tensors with rational
/// coefficients. Zero coefficients and the zero symbol are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    terms: BTreeMap<(Term, PlusMonomial), Rat>,
}

impl TensorElement {
    pub fn zero() -> Self {
        TensorElement::default()
    }

    pub fn basis(left: Symbol, right: PlusMonomial) -> Self {
        let mut t = TensorElement::zero();
        t.add_term(left, right, Rat::from_integer(1));
        t
    }

    pub fn add_term(&mut self, left: Symbol, right: PlusMonomial, coeff: Rat) {
        let Symbol::Term(lt) = left else { return };
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry((lt, right)).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, &PlusMonomial, &Rat)> {
        self.terms.iter().map(|((t, p), c)| (t, p, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, left: &Symbol, right: &PlusMonomial) -> Rat {
        match left.as_term() {
            None => Rat::zero(),
            Some(t) => self
                .terms
                .get(&(t.clone(), right.clone()))
                .cloned()
                .unwrap_or_else(Rat::zero),
        }
    }

    /// Componentwise product, used for the multiplicativity of the coproduct.
    /// Fails if two `Xi`-carrying left factors meet.
    pub fn product(&self, other: &TensorElement) -> Result<TensorElement, AlgebraError> {
        let mut out = TensorElement::zero();
        for ((lt, lp), lc) in &self.terms {
            for ((rt, rp), rc) in &other.terms {
                let left = lt.product(rt).map(Symbol::Term)?;
                out.add_term(left, lp.product(rp), lc * rc);
            }
        }
        Ok(out)
    }

    /// Apply `I (x) id`, dropping terms where the integral vanishes.
    fn integrate_left(&self) -> TensorElement {
        let mut out = TensorElement::zero();
        for ((t, p), c) in &self.terms {
            let it = Symbol::Term(t.clone()).integral();
            out.add_term(it, p.clone(), c.clone());
        }
        out
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((t, p), c)| format!("{} * {} (x) {}", c, Symbol::Term(t.clone()), p))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Whether the truncated integral `J_k(tau)` survives: `|k|_s < |tau| + 2`.
pub fn j_survives(k: &MultiIndex, tau: &Term) -> bool {
    Homogeneity::int(k.scaled_degree() as i64) < tau.homogeneity() + Homogeneity::int(2)
}

/// The structure-group coproduct.
pub fn coproduct(sym: &Symbol) -> Result<TensorElement, AlgebraError> {
    let Symbol::Term(t) = sym else {
        return Ok(TensorElement::zero());
    };
    coproduct_term(t)
}

fn coproduct_term(t: &Term) -> Result<TensorElement, AlgebraError> {
    // Split off the polynomial decoration, the noise flag and each integral
    // factor, then multiply their coproducts.
    let mut acc = TensorElement::basis(Symbol::one(), PlusMonomial::one());
    for _ in 0..t.k.k0 {
        acc = acc.product(&coproduct_x(MultiIndex::new(1, 0)))?;
    }
    for _ in 0..t.k.k1 {
        acc = acc.product(&coproduct_x(MultiIndex::new(0, 1)))?;
    }
    if t.xi {
        acc = acc.product(&TensorElement::basis(Symbol::xi(), PlusMonomial::one()))?;
    }
    for arg in &t.args {
        acc = acc.product(&coproduct_integral(arg)?)?;
    }
    Ok(acc)
}

fn coproduct_x(k: MultiIndex) -> TensorElement {
    let mut t = TensorElement::basis(Symbol::x_pow(k), PlusMonomial::one());
    t.add_term(
        Symbol::one(),
        PlusMonomial::x_pow(k),
        Rat::from_integer(1),
    );
    t
}

fn coproduct_integral(arg: &Term) -> Result<TensorElement, AlgebraError> {
    let inner = coproduct_term(arg)?;
    let mut out = inner.integrate_left();
    // sum over l, k with J_{l+k}(arg) surviving the truncation
    let bound = arg.homogeneity() + Homogeneity::int(2);
    let max_deg = degree_bound(&bound);
    for l in MultiIndex::below_degree(max_deg) {
        for k in MultiIndex::below_degree(max_deg - l.scaled_degree()) {
            let m = l.add(&k);
            if !j_survives(&m, arg) {
                continue;
            }
            let coeff = (l.factorial() * k.factorial()).recip();
            let mut right = PlusMonomial::x_pow(k);
            right.js.push((m, arg.clone()));
            out.add_term(Symbol::x_pow(l), right, coeff);
        }
    }
    Ok(out)
}

/// Smallest integer strictly above every scaled degree admissible under
/// `deg < bound` (with the kappa part breaking exact ties).
fn degree_bound(bound: &Homogeneity) -> u32 {
    let mut d = 0u32;
    while Homogeneity::int(d as i64) < *bound {
        d += 1;
        if d > 16 {
            break;
        }
    }
    d
}

/// Counit: keep only tensors whose right factor is the empty monomial.
pub fn counit_right(t: &TensorElement) -> BTreeMap<Term, Rat> {
    let mut out = BTreeMap::new();
    for (term, plus, coeff) in t.iter() {
        if plus.is_one() {
            *out.entry(term.clone()).or_insert_with(Rat::zero) += coeff.clone();
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Evaluate the kappa-dependent truncation at the standard regime: the
/// surviving `J_k` set for each symbol in the sector below the cutoff.
pub fn plus_generators(w: &[Symbol]) -> Vec<(MultiIndex, Term)> {
    let mut out = Vec::new();
    for sym in w {
        let Symbol::Term(t) = sym else { continue };
        if t.is_poly() {
            continue;
        }
        let bound = t.homogeneity() + Homogeneity::int(2);
        for k in MultiIndex::below_degree(degree_bound(&bound)) {
            if j_survives(&k, t) {
                out.push((k, t.clone()));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Evaluate a plus-monomial when every `J` generator is sent to zero and
/// `X^k` to the point `x`: used in spot checks of the counit property.
pub fn evaluate_plus_trivial(p: &PlusMonomial, x: (f64, f64)) -> f64 {
    if !p.js.is_empty() {
        return 0.0;
    }
    x.0.powi(p.xk.k0 as i32) * x.1.powi(p.xk.k1 as i32)
}

/// For tests: the rational coefficient in front of `left (x) right`.
pub fn rat_to_f64(r: &Rat) -> f64 {
    rat_f64(*r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::names;

    fn cop(s: &Symbol) -> TensorElement {
        coproduct(s).unwrap()
    }

    #[test]
    fn primitive_cases() {
        let one = cop(&Symbol::one());
        assert_eq!(one.len(), 1);
        assert_eq!(
            one.coeff(&Symbol::one(), &PlusMonomial::one()),
            Rat::from_integer(1)
        );

        let xi = cop(&Symbol::xi());
        assert_eq!(xi.len(), 1);
        assert_eq!(
            xi.coeff(&Symbol::xi(), &PlusMonomial::one()),
            Rat::from_integer(1)
        );

        let x1 = cop(&Symbol::x1());
        assert_eq!(x1.len(), 2);
        assert_eq!(
            x1.coeff(&Symbol::x1(), &PlusMonomial::one()),
            Rat::from_integer(1)
        );
        assert_eq!(
            x1.coeff(
                &Symbol::one(),
                &PlusMonomial::x_pow(MultiIndex::new(0, 1))
            ),
            Rat::from_integer(1)
        );
    }

    #[test]
    fn integral_of_xi() {
        // D I(Xi) = I(Xi) (x) 1 + 1 (x) J_0(Xi); |Xi| + 2 = 1/2 - kappa
        // admits only |k|_s = 0.
        let ixi = names::i_xi();
        let d = cop(&ixi);
        assert_eq!(d.len(), 2, "{d:?}");
        assert_eq!(
            d.coeff(&ixi, &PlusMonomial::one()),
            Rat::from_integer(1)
        );
        let j0 = PlusMonomial::j(
            MultiIndex::ZERO,
            Symbol::xi().as_term().unwrap().clone(),
        );
        assert_eq!(d.coeff(&Symbol::one(), &j0), Rat::from_integer(1));
    }

    #[test]
    fn truncation_thresholds() {
        let xi = Symbol::xi().as_term().unwrap().clone();
        assert!(j_survives(&MultiIndex::ZERO, &xi));
        assert!(!j_survives(&MultiIndex::new(0, 1), &xi));

        // |I(Xi)| + 2 = 5/2 - kappa: degrees 0, 1, 2 survive.
        let ixi = names::i_xi().as_term().unwrap().clone();
        assert!(j_survives(&MultiIndex::new(0, 2), &ixi));
        assert!(j_survives(&MultiIndex::new(1, 0), &ixi));
        assert!(!j_survives(&MultiIndex::new(1, 1), &ixi));
    }

    #[test]
    fn counit_recovers_identity() {
        for (_, sym) in names::core_set() {
            let d = cop(&sym);
            let projected = counit_right(&d);
            let t = sym.as_term().unwrap();
            assert_eq!(projected.len(), 1, "counit of {sym}");
            assert_eq!(projected.get(t), Some(&Rat::from_integer(1)));
        }
    }

    #[test]
    fn multiplicativity_on_xi2() {
        let xi2 = names::xi2();
        let direct = cop(&xi2);
        let viaprod = cop(&Symbol::xi())
            .product(&cop(&names::i_xi()))
            .unwrap();
        assert_eq!(direct, viaprod);
        // Xi I(Xi) (x) 1 + Xi (x) J_0(Xi)
        assert_eq!(direct.len(), 2);
        let j0 = PlusMonomial::j(
            MultiIndex::ZERO,
            Symbol::xi().as_term().unwrap().clone(),
        );
        assert_eq!(direct.coeff(&Symbol::xi(), &j0), Rat::from_integer(1));
    }

    #[test]
    fn polynomial_binomial_structure() {
        // D(X1^2) = X1^2 (x) 1 + 2 X1 (x) X1 + 1 (x) X1^2
        let x1sq = Symbol::x1().product(&Symbol::x1()).unwrap();
        let d = cop(&x1sq);
        assert_eq!(d.len(), 3);
        assert_eq!(
            d.coeff(&Symbol::x1(), &PlusMonomial::x_pow(MultiIndex::new(0, 1))),
            Rat::from_integer(2)
        );
    }

    #[test]
    fn factorial_weights_in_plus_part() {
        // For I(Xi I(Xi)): |arg| = -1 - 2 kappa, bound 1 - 2 kappa, so
        // |l + k|_s = 0 only. For I(I(Xi)): |arg| = 1/2 - kappa, bound
        // 5/2 - kappa, degrees up to 2; the l = k = X1 term carries 1/(1! 1!).
        let iixi = Symbol::xi().integral().integral();
        let arg = names::i_xi().as_term().unwrap().clone();
        let d = coproduct(&iixi).unwrap();
        let mut right = PlusMonomial::x_pow(MultiIndex::new(0, 1));
        right.js.push((MultiIndex::new(0, 2), arg));
        assert_eq!(d.coeff(&Symbol::x1(), &right), Rat::from_integer(1));
    }
}
