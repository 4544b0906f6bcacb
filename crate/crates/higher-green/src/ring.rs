//! Coefficient-ring contract shared by the Laurent kernel and the polynomial
//! types, plus the two base scalars: arbitrary-size rationals and the
//! Gaussian rationals Q(i).

use std::fmt;

use rug::{Integer, Rational};

/// Commutative ring operations, by reference.
///
/// One Laurent/polynomial kernel serves Q[a,b], Q(i)[a,b], the monomial
/// fraction field and the biquadratic field, so everything coefficient-like
/// implements this.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse; `None` when the element is not a unit.
    fn inv_ref(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }
    fn mul_i64(&self, k: i64) -> Self {
        self.mul_ref(&Self::from_i64(k))
    }
    /// Multiply by the rational k/m.
    fn mul_rat_i64(&self, k: i64, m: i64) -> Self {
        let minv = Self::from_i64(m)
            .inv_ref()
            .expect("division by zero denominator");
        self.mul_i64(k).mul_ref(&minv)
    }
}

/// Rings where square roots can sometimes be extracted exactly
/// (needed by the Laurent `sqrt`, possibly after i-extension).
pub trait SqrtRing: Ring {
    fn sqrt_ref(&self) -> Option<Self>;
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

pub fn rat_i(n: i64) -> Rational {
    Rational::from(n)
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if *r < 0 {
        return None;
    }
    let num = r.numer();
    let den = r.denom();
    if !num.is_perfect_square() || !den.is_perfect_square() {
        return None;
    }
    let sn = Integer::from(num.sqrt_ref());
    let sd = Integer::from(den.sqrt_ref());
    Some(Rational::from((sn, sd)))
}

/// Write r = s^2 * d with d squarefree (up to the factor bound); returns (s, d).
///
/// Used to normalize sqrt(b) for concrete curve parameters, e.g.
/// sqrt(-98) = 7*sqrt(-2).
pub fn squarefree_split(r: &Rational) -> (Rational, Integer) {
    assert!(!r.is_zero(), "squarefree_split of zero");
    // r = num/den = num*den / den^2
    let m = Integer::from(r.numer() * r.denom());
    let den = Integer::from(r.denom());
    let sign = if m < 0 { -1i32 } else { 1 };
    let mut m_abs = m.clone().abs();
    let mut square = Integer::from(1);
    let mut p = Integer::from(2);
    // trial division is fine here: inputs are small curve coefficients
    while Integer::from(&p * &p) <= m_abs {
        let psq = Integer::from(&p * &p);
        while m_abs.is_divisible(&psq) {
            m_abs /= &psq;
            square *= &p;
        }
        p += 1;
    }
    let d = if sign < 0 {
        -m_abs
    } else {
        m_abs
    };
    (Rational::from((square, den)), d)
}

impl Ring for Rational {
    fn zero() -> Self {
        Rational::new()
    }
    fn one() -> Self {
        Rational::from(1)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        Rational::from(self + rhs)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Rational::from(self * rhs)
    }
    fn neg_ref(&self) -> Self {
        Rational::from(-self)
    }
    fn inv_ref(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational::from(self.recip_ref()))
        }
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn from_i64(v: i64) -> Self {
        Rational::from(v)
    }
}

impl SqrtRing for Rational {
    fn sqrt_ref(&self) -> Option<Self> {
        rational_sqrt(self)
    }
}

/// Element of Q(i), stored as re + im*i.
#[derive(Clone, PartialEq, Eq)]
pub struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRat { re, im }
    }
    pub fn from_rat(re: Rational) -> Self {
        GaussRat {
            re,
            im: Rational::new(),
        }
    }
    pub fn i() -> Self {
        GaussRat {
            re: Rational::new(),
            im: Rational::from(1),
        }
    }
    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: Rational::from(-&self.im),
        }
    }
    /// re^2 + im^2.
    pub fn norm(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }
    pub fn is_rational(&self) -> bool {
        self.im == 0
    }
    pub fn mul_i(&self) -> Self {
        GaussRat {
            re: Rational::from(-&self.im),
            im: self.re.clone(),
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else if self.re == 0 {
            if self.im == 1 {
                write!(f, "i")
            } else if self.im == -1 {
                write!(f, "-i")
            } else {
                write!(f, "{}*i", self.im)
            }
        } else if self.im > 0 {
            write!(f, "{}+{}*i", self.re, self.im)
        } else {
            write!(f, "{}{}*i", self.re, self.im)
        }
    }
}

impl Ring for GaussRat {
    fn zero() -> Self {
        GaussRat::from_rat(Rational::new())
    }
    fn one() -> Self {
        GaussRat::from_rat(Rational::from(1))
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        GaussRat {
            re: Rational::from(&self.re + &rhs.re),
            im: Rational::from(&self.im + &rhs.im),
        }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let re = Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re);
        GaussRat { re, im }
    }
    fn neg_ref(&self) -> Self {
        GaussRat {
            re: Rational::from(-&self.re),
            im: Rational::from(-&self.im),
        }
    }
    fn inv_ref(&self) -> Option<Self> {
        let n = self.norm();
        if n == 0 {
            return None;
        }
        let ninv = Rational::from(n.recip_ref());
        Some(GaussRat {
            re: Rational::from(&self.re * &ninv),
            im: -Rational::from(&self.im * &ninv),
        })
    }
    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }
    fn from_i64(v: i64) -> Self {
        GaussRat::from_rat(Rational::from(v))
    }
}

impl SqrtRing for GaussRat {
    fn sqrt_ref(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        if self.im == 0 {
            if self.re > 0 {
                return rational_sqrt(&self.re).map(GaussRat::from_rat);
            }
            let neg = Rational::from(-&self.re);
            return rational_sqrt(&neg)
                .map(|s| GaussRat::new(Rational::new(), s));
        }
        // general case: |z| must be a rational square
        let n = rational_sqrt(&self.norm())?;
        let half = rat(1, 2);
        let xx = Rational::from(&self.re + &n) * &half;
        let x = rational_sqrt(&xx)?;
        if x == 0 {
            return None;
        }
        let y = Rational::from(&self.im / &x) * half;
        Some(GaussRat::new(x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt_exact() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_sqrt(&rat(-1, 1)), None);
    }

    #[test]
    fn squarefree_split_examples() {
        let (s, d) = squarefree_split(&rat_i(-98));
        assert_eq!(s, rat_i(7));
        assert_eq!(d, Integer::from(-2));
        let (s, d) = squarefree_split(&rat(9, 4));
        assert_eq!(s, rat(3, 2));
        assert_eq!(d, Integer::from(1));
    }

    #[test]
    fn gauss_field_ops() {
        let z = GaussRat::new(rat(3, 5), rat(-2, 7));
        let w = z.inv_ref().unwrap();
        assert_eq!(z.mul_ref(&w), GaussRat::one());
        assert_eq!(GaussRat::i().mul_ref(&GaussRat::i()), GaussRat::one().neg_ref());
    }

    #[test]
    fn gauss_sqrt() {
        assert_eq!(
            GaussRat::from_rat(rat_i(-1)).sqrt_ref(),
            Some(GaussRat::i())
        );
        // (1+i)^2 = 2i
        let two_i = GaussRat::new(rat_i(0), rat_i(2));
        let s = two_i.sqrt_ref().unwrap();
        assert_eq!(s.mul_ref(&s), two_i);
    }
}
