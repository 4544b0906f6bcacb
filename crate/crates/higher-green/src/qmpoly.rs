//! Polynomials in the Eisenstein symbols E2, E4, E6 over Q(i), graded by
//! weight 2, 4, 6, together with formal ratios of them.

use std::collections::BTreeMap;
use std::fmt;

use crate::ring::{GaussRat, Ring};

/// Exponents of E2^p E4^q E6^r.
type QExpo = (u32, u32, u32);

#[derive(Clone, PartialEq)]
pub struct QMPoly {
    terms: BTreeMap<QExpo, GaussRat>,
}

fn qweight(e: &QExpo) -> i64 {
    2 * e.0 as i64 + 4 * e.1 as i64 + 6 * e.2 as i64
}

impl QMPoly {
    pub fn zero() -> Self {
        QMPoly {
            terms: BTreeMap::new(),
        }
    }
    pub fn one() -> Self {
        Self::constant(GaussRat::one())
    }
    pub fn constant(c: GaussRat) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert((0, 0, 0), c);
        }
        QMPoly { terms: t }
    }
    pub fn e2() -> Self {
        Self::mono(GaussRat::one(), 1, 0, 0)
    }
    pub fn e4() -> Self {
        Self::mono(GaussRat::one(), 0, 1, 0)
    }
    pub fn e6() -> Self {
        Self::mono(GaussRat::one(), 0, 0, 1)
    }
    pub fn mono(c: GaussRat, p: u32, q: u32, r: u32) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert((p, q, r), c);
        }
        QMPoly { terms: t }
    }

    fn insert_add(&mut self, e: QExpo, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.add_ref(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }
    pub fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }
    pub fn neg_ref(&self) -> Self {
        QMPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.neg_ref()))
                .collect(),
        }
    }
    pub fn mul_ref(&self, rhs: &Self) -> Self {
        let mut out = QMPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.insert_add((e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2), c1.mul_ref(c2));
            }
        }
        out
    }
    pub fn scale(&self, c: &GaussRat) -> Self {
        QMPoly {
            terms: self
                .terms
                .iter()
                .filter_map(|(e, v)| {
                    let p = v.mul_ref(c);
                    if p.is_zero() {
                        None
                    } else {
                        Some((*e, p))
                    }
                })
                .collect(),
        }
    }
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = QMPoly::one();
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn weight(&self) -> Option<i64> {
        let mut it = self.terms.keys();
        let w = qweight(it.next()?);
        for e in it {
            if qweight(e) != w {
                return None;
            }
        }
        Some(w)
    }
    pub fn uses_e2(&self) -> bool {
        self.terms.keys().any(|e| e.0 > 0)
    }

    /// Serre derivation: E4 -> -E6/3, E6 -> -E4^2/2 (E2-free input).
    pub fn serre_derivative(&self) -> Self {
        assert!(!self.uses_e2(), "serre derivative of an E2 polynomial");
        let mut out = QMPoly::zero();
        for (&(_, q, r), c) in &self.terms {
            if q > 0 {
                // q E4^{q-1} E6^r * (-E6/3)
                out.insert_add(
                    (0, q - 1, r + 1),
                    c.mul_rat_i64(-(q as i64), 3),
                );
            }
            if r > 0 {
                // r E4^q E6^{r-1} * (-E4^2/2)
                out.insert_add(
                    (0, q + 2, r - 1),
                    c.mul_rat_i64(-(r as i64), 2),
                );
            }
        }
        out
    }
}

impl fmt::Debug for QMPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QMPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(p, q, r), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            if p > 0 {
                write!(f, "*E2^{}", p)?;
            }
            if q > 0 {
                write!(f, "*E4^{}", q)?;
            }
            if r > 0 {
                write!(f, "*E6^{}", r)?;
            }
        }
        Ok(())
    }
}

/// A formal ratio of quasi-modular polynomials scaled by pi^k i^m.
///
/// Equality of two ratios is decided by cross multiplication, exactly.
#[derive(Clone, Debug)]
pub struct QmRatio {
    pub num: QMPoly,
    pub den: QMPoly,
    /// power of pi carried along symbolically
    pub pi_power: i32,
}

impl QmRatio {
    pub fn new(num: QMPoly, den: QMPoly, pi_power: i32) -> Self {
        QmRatio {
            num,
            den,
            pi_power,
        }
    }

    pub fn equivalent(&self, rhs: &QmRatio) -> bool {
        self.pi_power == rhs.pi_power
            && self.num.mul_ref(&rhs.den) == rhs.num.mul_ref(&self.den)
    }
}

impl fmt::Display for QmRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pi_power != 0 {
            write!(f, "pi^{} * ", self.pi_power)?;
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
