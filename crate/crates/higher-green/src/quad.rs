//! Real or imaginary quadratic extensions Q(sqrt d) for squarefree d.

use std::fmt;

use rug::{Integer, Rational};

use crate::ring::squarefree_split;

/// x + y sqrt(d), d a squarefree nonzero integer tag.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadExt {
    pub x: Rational,
    pub y: Rational,
    pub d: Integer,
}

impl QuadExt {
    pub fn new(x: Rational, y: Rational, d: Integer) -> Self {
        QuadExt { x, y, d }
    }

    pub fn from_rat(x: Rational, d: Integer) -> Self {
        QuadExt::new(x, Rational::new(), d)
    }

    /// sqrt(r) as an element of the appropriate Q(sqrt d):
    /// factor r = s^2 d with d squarefree, giving s*sqrt(d).
    pub fn sqrt_of_rational(r: &Rational) -> Self {
        let (s, d) = squarefree_split(r);
        if d == 1 {
            QuadExt::from_rat(s, Integer::from(1))
        } else {
            QuadExt::new(Rational::new(), s, d)
        }
    }

    pub fn conj(&self) -> Self {
        QuadExt::new(self.x.clone(), Rational::from(-&self.y), self.d.clone())
    }

    /// x^2 - d y^2.
    pub fn norm(&self) -> Rational {
        Rational::from(&self.x * &self.x)
            - Rational::from(&self.y * &self.y) * Rational::from(&self.d)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.d, rhs.d, "mismatched radicands");
        QuadExt::new(
            Rational::from(&self.x + &rhs.x),
            Rational::from(&self.y + &rhs.y),
            self.d.clone(),
        )
    }

    pub fn neg(&self) -> Self {
        QuadExt::new(
            Rational::from(-&self.x),
            Rational::from(-&self.y),
            self.d.clone(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.d, rhs.d, "mismatched radicands");
        let d = Rational::from(&self.d);
        QuadExt::new(
            Rational::from(&self.x * &rhs.x) + Rational::from(&self.y * &rhs.y) * &d,
            Rational::from(&self.x * &rhs.y) + Rational::from(&self.y * &rhs.x),
            self.d.clone(),
        )
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n == 0 {
            return None;
        }
        let ninv = Rational::from(n.recip_ref());
        let c = self.conj();
        Some(QuadExt::new(
            Rational::from(&c.x * &ninv),
            Rational::from(&c.y * &ninv),
            self.d.clone(),
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.y == 0 || self.d == 1 {
            let mut v = self.x.clone();
            if self.d == 1 {
                v += &self.y;
            }
            Some(v)
        } else {
            None
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y == 0 {
            write!(f, "{}", self.x)
        } else if self.x == 0 {
            write!(f, "{}*sqrt({})", self.y, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.x, self.y, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn arithmetic_and_norm() {
        // (1 + sqrt 2)(1 - sqrt 2) = -1
        let d = Integer::from(2);
        let a = QuadExt::new(rat(1, 1), rat(1, 1), d.clone());
        assert_eq!(a.norm(), rat(-1, 1));
        assert_eq!(a.mul(&a.conj()).as_rational().unwrap(), rat(-1, 1));
        let ai = a.inv().unwrap();
        assert!(a.mul(&ai).sub(&QuadExt::from_rat(rat(1, 1), d)).is_zero());
    }

    #[test]
    fn sqrt_normalization() {
        // sqrt(-98) = 7 sqrt(-2)
        let s = QuadExt::sqrt_of_rational(&rat(-98, 1));
        assert_eq!(s.d, Integer::from(-2));
        assert_eq!(s.y, rat(7, 1));
        assert_eq!(s.mul(&s).as_rational().unwrap(), rat(-98, 1));
    }
}
