//! Exact scaling exponents of the form `c + q*kappa`.
//!
//! `kappa` is an arbitrarily small positive parameter that is never given a
//! numeric value; exponents are compared lexicographically in (c, q), which
//! is the correct order for all sufficiently small `kappa > 0`.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

pub type Rat = Ratio<i64>;

/// Exponent `c + q*kappa` with exact rational parts.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Homogeneity {
    pub c: Rat,
    pub q: Rat,
}

impl Homogeneity {
    pub const fn new(c: Rat, q: Rat) -> Self {
        Homogeneity { c, q }
    }

    /// Kappa-free exponent.
    pub fn rational(c: Rat) -> Self {
        Homogeneity { c, q: Rat::zero() }
    }

    /// Shorthand for `n/d` without a kappa part.
    pub fn frac(n: i64, d: i64) -> Self {
        Homogeneity::rational(Rat::new(n, d))
    }

    /// Shorthand for an integer without a kappa part.
    pub fn int(n: i64) -> Self {
        Homogeneity::rational(Rat::from_integer(n))
    }

    /// `n/d + (qn/qd)*kappa`.
    pub fn with_kappa(n: i64, d: i64, qn: i64, qd: i64) -> Self {
        Homogeneity {
            c: Rat::new(n, d),
            q: Rat::new(qn, qd),
        }
    }

    pub fn zero() -> Self {
        Homogeneity::int(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.q.is_zero()
    }

    /// Strictly negative for all small `kappa > 0`.
    pub fn is_negative(&self) -> bool {
        *self < Homogeneity::zero()
    }

    pub fn scale(&self, f: Rat) -> Self {
        Homogeneity {
            c: self.c * f,
            q: self.q * f,
        }
    }

    /// Value at a concrete kappa, for display/numeric export only.
    pub fn eval(&self, kappa: f64) -> f64 {
        rat_f64(self.c) + rat_f64(self.q) * kappa
    }
}

pub fn rat_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl PartialOrd for Homogeneity {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Homogeneity {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.c, self.q).cmp(&(other.c, other.q))
    }
}

impl Add for Homogeneity {
    type Output = Homogeneity;
    fn add(self, rhs: Self) -> Self {
        Homogeneity {
            c: self.c + rhs.c,
            q: self.q + rhs.q,
        }
    }
}

impl AddAssign for Homogeneity {
    fn add_assign(&mut self, rhs: Self) {
        self.c += rhs.c;
        self.q += rhs.q;
    }
}

impl Sub for Homogeneity {
    type Output = Homogeneity;
    fn sub(self, rhs: Self) -> Self {
        Homogeneity {
            c: self.c - rhs.c,
            q: self.q - rhs.q,
        }
    }
}

impl SubAssign for Homogeneity {
    fn sub_assign(&mut self, rhs: Self) {
        self.c -= rhs.c;
        self.q -= rhs.q;
    }
}

impl Neg for Homogeneity {
    type Output = Homogeneity;
    fn neg(self) -> Self {
        Homogeneity {
            c: -self.c,
            q: -self.q,
        }
    }
}

impl Mul<i64> for Homogeneity {
    type Output = Homogeneity;
    fn mul(self, rhs: i64) -> Self {
        self.scale(Rat::from_integer(rhs))
    }
}

impl fmt::Display for Homogeneity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return write!(f, "{}", self.c);
        }
        if self.c.is_zero() {
            return write!(f, "{}k", self.q);
        }
        if self.q.is_negative() {
            write!(f, "{}{}k", self.c, self.q)
        } else {
            write!(f, "{}+{}k", self.c, self.q)
        }
    }
}

impl fmt::Debug for Homogeneity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_order() {
        let a = Homogeneity::with_kappa(5, 2, -5, 1); // 5/2 - 5k
        let b = Homogeneity::frac(5, 2); // 5/2
        assert!(a < b);
        assert!(a <= b);
        let c = Homogeneity::with_kappa(-3, 2, -1, 1); // -3/2 - k
        assert!(c < Homogeneity::zero());
        assert!(c.is_negative());
        assert!(!b.is_negative());
    }

    #[test]
    fn arithmetic() {
        let xi = Homogeneity::with_kappa(-3, 2, -1, 1);
        let two = Homogeneity::int(2);
        let i_xi = xi + two; // 1/2 - k
        assert_eq!(i_xi, Homogeneity::with_kappa(1, 2, -1, 1));
        assert_eq!(xi + i_xi, Homogeneity::with_kappa(-1, 1, -2, 1));
        assert_eq!(-(xi - xi), Homogeneity::zero());
    }

    #[test]
    fn display() {
        assert_eq!(Homogeneity::with_kappa(-3, 2, -1, 1).to_string(), "-3/2-1k");
        assert_eq!(Homogeneity::int(3).to_string(), "3");
        assert_eq!(Homogeneity::with_kappa(0, 1, -4, 1).to_string(), "-4k");
    }

    #[test]
    fn eval_at_kappa() {
        let h = Homogeneity::with_kappa(-1, 1, -2, 1);
        assert!((h.eval(0.01) + 1.02).abs() < 1e-12);
    }
}
