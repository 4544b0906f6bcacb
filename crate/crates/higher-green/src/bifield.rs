//! The biquadratic field Q(mu, i) with mu^2 + mu + 2 = 0, and one quadratic
//! tower level above it for intersection points.
//!
//! Note sqrt(-7) = 2 mu + 1, so Q(mu) = Q(sqrt(-7)).

use std::fmt;

use rug::Rational;

use crate::ring::{GaussRat, Ring};

/// Element x0 + x1 mu + x2 i + x3 i mu of Q(mu, i).
#[derive(Clone, PartialEq, Eq)]
pub struct BiField {
    pub c: [Rational; 4],
}

impl BiField {
    pub fn new(c0: Rational, c1: Rational, c2: Rational, c3: Rational) -> Self {
        BiField {
            c: [c0, c1, c2, c3],
        }
    }

    pub fn from_rat(r: Rational) -> Self {
        BiField::new(r, Rational::new(), Rational::new(), Rational::new())
    }

    pub fn from_gauss(g: &GaussRat) -> Self {
        BiField::new(g.re.clone(), Rational::new(), g.im.clone(), Rational::new())
    }

    pub fn mu() -> Self {
        BiField::new(
            Rational::new(),
            Rational::from(1),
            Rational::new(),
            Rational::new(),
        )
    }

    pub fn i() -> Self {
        BiField::new(
            Rational::new(),
            Rational::new(),
            Rational::from(1),
            Rational::new(),
        )
    }

    /// sqrt(-7) = 2 mu + 1.
    pub fn sqrt_minus7() -> Self {
        BiField::new(
            Rational::from(1),
            Rational::from(2),
            Rational::new(),
            Rational::new(),
        )
    }

    /// Conjugation mu -> -1 - mu (fixes i).
    pub fn conj_mu(&self) -> Self {
        // (x0 + x1 mu) -> x0 - x1 - x1 mu, same on the i-part
        BiField::new(
            Rational::from(&self.c[0] - &self.c[1]),
            Rational::from(-&self.c[1]),
            Rational::from(&self.c[2] - &self.c[3]),
            Rational::from(-&self.c[3]),
        )
    }

    /// Conjugation i -> -i (fixes mu).
    pub fn conj_i(&self) -> Self {
        BiField::new(
            self.c[0].clone(),
            self.c[1].clone(),
            Rational::from(-&self.c[2]),
            Rational::from(-&self.c[3]),
        )
    }

    /// Norm down to Q: product over the four Galois conjugates.
    pub fn norm_to_q(&self) -> Rational {
        let p = self
            .mul_ref(&self.conj_mu())
            .mul_ref(&self.conj_i())
            .mul_ref(&self.conj_mu().conj_i());
        debug_assert!(p.c[1] == 0 && p.c[2] == 0 && p.c[3] == 0);
        p.c[0].clone()
    }

    /// The Gaussian part when the element lies in Q(i).
    pub fn as_gauss(&self) -> Option<GaussRat> {
        if self.c[1] == 0 && self.c[3] == 0 {
            Some(GaussRat::new(self.c[0].clone(), self.c[2].clone()))
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.c[1] == 0 && self.c[2] == 0 && self.c[3] == 0 {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = BiField::one();
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// Numerical embedding with mu = (-1 + i sqrt 7)/2, i = i, at precision p.
    pub fn embed(&self, prec: u32) -> (rug::Float, rug::Float) {
        use rug::Float;
        let sqrt7 = Float::with_val(prec, 7).sqrt();
        let half = Float::with_val(prec, &sqrt7 / 2u32);
        // mu = -1/2 + (sqrt7/2) i ; i mu = -sqrt7/2 - i/2
        let re = Float::with_val(prec, &self.c[0])
            + Float::with_val(prec, &self.c[1]) * Float::with_val(prec, -0.5)
            + Float::with_val(prec, &self.c[3]) * Float::with_val(prec, -&half);
        let im = Float::with_val(prec, &self.c[1]) * &half
            + Float::with_val(prec, &self.c[2])
            + Float::with_val(prec, &self.c[3]) * Float::with_val(prec, -0.5);
        (re, im)
    }
}

impl Ring for BiField {
    fn zero() -> Self {
        BiField::from_rat(Rational::new())
    }
    fn one() -> Self {
        BiField::from_rat(Rational::from(1))
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        BiField::new(
            Rational::from(&self.c[0] + &rhs.c[0]),
            Rational::from(&self.c[1] + &rhs.c[1]),
            Rational::from(&self.c[2] + &rhs.c[2]),
            Rational::from(&self.c[3] + &rhs.c[3]),
        )
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        // basis 1, mu, i, i mu with mu^2 = -mu - 2 and i^2 = -1
        let x = &self.c;
        let y = &rhs.c;
        let m = |a: usize, b: usize| Rational::from(&x[a] * &y[b]);
        // (x0 + x1 m)(y0 + y1 m) = x0y0 - 2 x1y1 + (x0y1 + x1y0 - x1y1) m
        // split into the four products of (x0+x1m + i(x2+x3m))(...)
        // real-mu block times real-mu block:
        let rr0 = m(0, 0) - Rational::from(2) * m(1, 1);
        let rr1 = m(0, 1) + m(1, 0) - m(1, 1);
        // imag blocks multiply to -1 times mu-product:
        let ii0 = m(2, 2) - Rational::from(2) * m(3, 3);
        let ii1 = m(2, 3) + m(3, 2) - m(3, 3);
        // cross terms carry i:
        let ri0 = m(0, 2) - Rational::from(2) * m(1, 3);
        let ri1 = m(0, 3) + m(1, 2) - m(1, 3);
        let ir0 = m(2, 0) - Rational::from(2) * m(3, 1);
        let ir1 = m(2, 1) + m(3, 0) - m(3, 1);
        BiField::new(rr0 - ii0, rr1 - ii1, ri0 + ir0, ri1 + ir1)
    }
    fn neg_ref(&self) -> Self {
        BiField::new(
            Rational::from(-&self.c[0]),
            Rational::from(-&self.c[1]),
            Rational::from(-&self.c[2]),
            Rational::from(-&self.c[3]),
        )
    }
    fn inv_ref(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // x^{-1} = (product of the three other conjugates) / Norm(x)
        let n = self.norm_to_q();
        debug_assert!(n != 0);
        let ninv = Rational::from(n.recip_ref());
        let cof = self
            .conj_mu()
            .mul_ref(&self.conj_i())
            .mul_ref(&self.conj_mu().conj_i());
        Some(BiField::new(
            Rational::from(&cof.c[0] * &ninv),
            Rational::from(&cof.c[1] * &ninv),
            Rational::from(&cof.c[2] * &ninv),
            Rational::from(&cof.c[3] * &ninv),
        ))
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| *x == 0)
    }
    fn from_i64(v: i64) -> Self {
        BiField::from_rat(Rational::from(v))
    }
}

impl fmt::Debug for BiField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for BiField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "mu", "i", "i*mu"];
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            if first {
                if names[k].is_empty() {
                    write!(f, "{}", c)?;
                } else if *c == 1 {
                    write!(f, "{}", names[k])?;
                } else if *c == -1 {
                    write!(f, "-{}", names[k])?;
                } else {
                    write!(f, "{}*{}", c, names[k])?;
                }
                first = false;
            } else if names[k].is_empty() {
                write!(f, " + {}", c)?;
            } else if *c == 1 {
                write!(f, " + {}", names[k])?;
            } else if *c == -1 {
                write!(f, " - {}", names[k])?;
            } else if *c > 0 {
                write!(f, " + {}*{}", c, names[k])?;
            } else {
                write!(f, " - {}*{}", Rational::from(-c), names[k])?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Element lo + hi*t of the quadratic extension Q(mu,i)[t]/(t^2 + p t + q).
#[derive(Clone, PartialEq, Debug)]
pub struct TowerElem {
    pub lo: BiField,
    pub hi: BiField,
    /// (p, q) with t^2 + p t + q = 0
    pub minpoly: (BiField, BiField),
}

impl TowerElem {
    pub fn new(lo: BiField, hi: BiField, minpoly: (BiField, BiField)) -> Self {
        TowerElem { lo, hi, minpoly }
    }

    pub fn from_base(x: BiField, minpoly: (BiField, BiField)) -> Self {
        TowerElem::new(x, BiField::zero(), minpoly)
    }

    /// The generator t itself.
    pub fn gen(minpoly: (BiField, BiField)) -> Self {
        TowerElem::new(BiField::zero(), BiField::one(), minpoly)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert!(self.minpoly == rhs.minpoly);
        TowerElem::new(
            self.lo.add_ref(&rhs.lo),
            self.hi.add_ref(&rhs.hi),
            self.minpoly.clone(),
        )
    }

    pub fn neg(&self) -> Self {
        TowerElem::new(self.lo.neg_ref(), self.hi.neg_ref(), self.minpoly.clone())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert!(self.minpoly == rhs.minpoly);
        let (p, q) = &self.minpoly;
        // (a + b t)(c + d t) = ac + (ad + bc) t + bd t^2, t^2 = -p t - q
        let ac = self.lo.mul_ref(&rhs.lo);
        let ad_bc = self.lo.mul_ref(&rhs.hi).add_ref(&self.hi.mul_ref(&rhs.lo));
        let bd = self.hi.mul_ref(&rhs.hi);
        TowerElem::new(
            ac.sub_ref(&bd.mul_ref(q)),
            ad_bc.sub_ref(&bd.mul_ref(p)),
            self.minpoly.clone(),
        )
    }

    pub fn scale(&self, c: &BiField) -> Self {
        TowerElem::new(
            self.lo.mul_ref(c),
            self.hi.mul_ref(c),
            self.minpoly.clone(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    /// Conjugate over the base: t -> -p - t.
    pub fn conj(&self) -> Self {
        let (p, _) = &self.minpoly;
        TowerElem::new(
            self.lo.sub_ref(&self.hi.mul_ref(p)),
            self.hi.neg_ref(),
            self.minpoly.clone(),
        )
    }

    pub fn inv(&self) -> Option<Self> {
        let n = field_norm(self);
        let ninv = n.inv_ref()?;
        Some(self.conj().scale(&ninv))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = TowerElem::from_base(BiField::one(), self.minpoly.clone());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Norm of lo + hi*t down to Q(mu,i): lo^2 - lo*hi*p + hi^2*q.
pub fn field_norm(x: &TowerElem) -> BiField {
    let (p, q) = &x.minpoly;
    x.lo.mul_ref(&x.lo)
        .sub_ref(&x.lo.mul_ref(&x.hi).mul_ref(p))
        .add_ref(&x.hi.mul_ref(&x.hi).mul_ref(q))
}
