//! The graded coefficient ring k[a,b] (weights 4 and 6) with an optional
//! adjoined quasi-modular symbol of weight 2, and the fraction ring with
//! monomial denominators that the branch computations live in.

use std::collections::BTreeMap;
use std::fmt;

use crate::ring::{Ring, SqrtRing};

/// Exponents of a^m b^n e2^p.
pub type Expo = (u32, u32, u32);

/// Polynomial in a, b (and the weight-2 symbol e2) over a scalar ring.
///
/// The G_m grading gives a weight 4, b weight 6, e2 weight 2.
#[derive(Clone, PartialEq)]
pub struct WPoly<C: Ring> {
    terms: BTreeMap<Expo, C>,
}

pub fn mono_weight(e: &Expo) -> i64 {
    4 * e.0 as i64 + 6 * e.1 as i64 + 2 * e.2 as i64
}

impl<C: Ring> WPoly<C> {
    pub fn new() -> Self {
        WPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(c: C) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert((0, 0, 0), c);
        }
        WPoly { terms: t }
    }

    pub fn mono(c: C, m: u32, n: u32) -> Self {
        Self::mono3(c, m, n, 0)
    }

    pub fn mono3(c: C, m: u32, n: u32, p: u32) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert((m, n, p), c);
        }
        WPoly { terms: t }
    }

    pub fn gen_a() -> Self {
        Self::mono(C::one(), 1, 0)
    }

    pub fn gen_b() -> Self {
        Self::mono(C::one(), 0, 1)
    }

    pub fn gen_e2() -> Self {
        Self::mono3(C::one(), 0, 0, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Expo) -> C {
        self.terms.get(&e).cloned().unwrap_or_else(C::zero)
    }

    fn insert_add(&mut self, e: Expo, c: C) {
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

    /// Weight when homogeneous (zero counts as homogeneous of any weight).
    pub fn weight(&self) -> Option<i64> {
        let mut it = self.terms.keys();
        let w = mono_weight(it.next()?);
        for e in it {
            if mono_weight(e) != w {
                return None;
            }
        }
        Some(w)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.is_empty() || self.weight().is_some()
    }

    pub fn uses_e2(&self) -> bool {
        self.terms.keys().any(|e| e.2 > 0)
    }

    /// True when the polynomial is a single monomial.
    pub fn as_monomial(&self) -> Option<(Expo, C)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((*e, c.clone()))
        } else {
            None
        }
    }

    /// Euler derivation: multiply every monomial by its weight.
    pub fn delta_e(&self) -> Self {
        let mut out = WPoly::new();
        for (e, c) in &self.terms {
            out.insert_add(*e, c.mul_i64(mono_weight(e)));
        }
        out
    }

    /// Serre derivation on k[a,b]: a -> 6b, b -> -4a^2/3.
    ///
    /// The adjoined symbol e2 is outside its domain.
    pub fn delta_s(&self) -> Self {
        assert!(
            !self.uses_e2(),
            "serre derivative applied to a polynomial containing the e2 symbol"
        );
        let mut out = WPoly::new();
        for (&(m, n, _), c) in &self.terms {
            if m > 0 {
                // m a^{m-1} b^n * 6b
                out.insert_add((m - 1, n + 1, 0), c.mul_i64(6 * m as i64));
            }
            if n > 0 {
                // n a^m b^{n-1} * (-4/3) a^2
                out.insert_add((m + 2, n - 1, 0), c.mul_rat_i64(-4 * n as i64, 3));
            }
        }
        out
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> WPoly<D> {
        let mut out = WPoly::new();
        for (e, c) in &self.terms {
            out.insert_add(*e, f(c));
        }
        out
    }

    /// Evaluate at scalar values of a, b, e2.
    pub fn eval(&self, a: &C, b: &C, e2: &C) -> C {
        let mut acc = C::zero();
        for (&(m, n, p), c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..m {
                t = t.mul_ref(a);
            }
            for _ in 0..n {
                t = t.mul_ref(b);
            }
            for _ in 0..p {
                t = t.mul_ref(e2);
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    /// Divide exactly by a^m b^n when possible.
    fn div_mono(&self, m: u32, n: u32) -> Option<Self> {
        let mut out = WPoly::new();
        for (&(em, en, ep), c) in &self.terms {
            if em < m || en < n {
                return None;
            }
            out.insert_add((em - m, en - n, ep), c.clone());
        }
        Some(out)
    }

    /// Largest a^m b^n dividing every term.
    fn mono_content(&self) -> (u32, u32) {
        let mut m = u32::MAX;
        let mut n = u32::MAX;
        for e in self.terms.keys() {
            m = m.min(e.0);
            n = n.min(e.1);
            if m == 0 && n == 0 {
                break;
            }
        }
        if self.terms.is_empty() {
            (0, 0)
        } else {
            (m, n)
        }
    }
}

impl<C: Ring> Default for WPoly<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Ring> Ring for WPoly<C> {
    fn zero() -> Self {
        WPoly::new()
    }
    fn one() -> Self {
        WPoly::scalar(C::one())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut out = WPoly::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.insert_add(
                    (e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2),
                    c1.mul_ref(c2),
                );
            }
        }
        out
    }
    fn neg_ref(&self) -> Self {
        let mut out = WPoly::new();
        for (e, c) in &self.terms {
            out.insert_add(*e, c.neg_ref());
        }
        out
    }
    fn inv_ref(&self) -> Option<Self> {
        // only scalar constants are units in the polynomial ring
        let ((m, n, p), c) = self.as_monomial()?;
        if m != 0 || n != 0 || p != 0 {
            return None;
        }
        Some(WPoly::scalar(c.inv_ref()?))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_i64(v: i64) -> Self {
        WPoly::scalar(C::from_i64(v))
    }
}

impl<C: Ring> SqrtRing for WPoly<C>
where
    C: SqrtRing,
{
    fn sqrt_ref(&self) -> Option<Self> {
        let ((m, n, p), c) = self.as_monomial()?;
        if m % 2 != 0 || n % 2 != 0 || p % 2 != 0 {
            return None;
        }
        Some(WPoly::mono3(c.sqrt_ref()?, m / 2, n / 2, p / 2))
    }
}

impl<C: Ring> fmt::Debug for WPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<C: Ring> fmt::Display for WPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(m, n, p), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:?})", c)?;
            if m > 0 {
                write!(f, "*a^{}", m)?;
            }
            if n > 0 {
                write!(f, "*b^{}", n)?;
            }
            if p > 0 {
                write!(f, "*E2^{}", p)?;
            }
        }
        Ok(())
    }
}

/// Fraction num / (a^p b^q) over a scalar field C.
///
/// Closed under ring operations and under the derivations delta_e, delta_s;
/// inversion is defined exactly when the numerator is a monomial, which is
/// all the computations here ever need.
#[derive(Clone, PartialEq)]
pub struct MonoFrac<C: Ring> {
    num: WPoly<C>,
    den_a: u32,
    den_b: u32,
}

impl<C: Ring> MonoFrac<C> {
    pub fn from_poly(p: WPoly<C>) -> Self {
        MonoFrac {
            num: p,
            den_a: 0,
            den_b: 0,
        }
    }

    pub fn new(num: WPoly<C>, den_a: u32, den_b: u32) -> Self {
        let mut f = MonoFrac { num, den_a, den_b };
        f.reduce();
        f
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den_a = 0;
            self.den_b = 0;
            return;
        }
        let (m, n) = self.num.mono_content();
        let da = m.min(self.den_a);
        let db = n.min(self.den_b);
        if da > 0 || db > 0 {
            self.num = self.num.div_mono(da, db).expect("content divides");
            self.den_a -= da;
            self.den_b -= db;
        }
    }

    pub fn numerator(&self) -> &WPoly<C> {
        &self.num
    }

    pub fn denominator(&self) -> (u32, u32) {
        (self.den_a, self.den_b)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den_a == 0 && self.den_b == 0
    }

    pub fn weight(&self) -> Option<i64> {
        Some(self.num.weight()? - 4 * self.den_a as i64 - 6 * self.den_b as i64)
    }

    pub fn delta_e(&self) -> Self {
        // d(n/m) = (de n)/m - n (de m)/m^2, and de of a monomial is its weight
        let wden = 4 * self.den_a as i64 + 6 * self.den_b as i64;
        let t = self.num.delta_e().add_ref(&self.num.mul_i64(-wden));
        MonoFrac::new(t, self.den_a, self.den_b)
    }

    pub fn delta_s(&self) -> Self {
        // quotient rule against the monomial denominator d = a^p b^q:
        // ds d = 6p a^{p-1} b^{q+1} - (4q/3) a^{p+2} b^{q-1}
        let p = self.den_a;
        let q = self.den_b;
        let mut t = self.num.delta_s().mul_ref(&WPoly::mono(C::one(), p, q));
        if p > 0 {
            let piece = self
                .num
                .mul_ref(&WPoly::mono(C::from_i64(6 * p as i64), p - 1, q + 1));
            t = t.sub_ref(&piece);
        }
        if q > 0 {
            let piece = self
                .num
                .mul_ref(&WPoly::mono(C::from_i64(4 * q as i64), p + 2, q - 1))
                .map(|c| c.mul_rat_i64(1, 3));
            t = t.add_ref(&piece);
        }
        MonoFrac::new(t, 2 * p, 2 * q)
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> MonoFrac<D> {
        MonoFrac::new(self.num.map(f), self.den_a, self.den_b)
    }

    /// Evaluate at scalar a, b.
    pub fn eval(&self, a: &C, b: &C) -> Option<C> {
        let mut den = C::one();
        for _ in 0..self.den_a {
            den = den.mul_ref(a);
        }
        for _ in 0..self.den_b {
            den = den.mul_ref(b);
        }
        Some(self.num.eval(a, b, &C::zero()).mul_ref(&den.inv_ref()?))
    }
}

impl<C: Ring> Ring for MonoFrac<C> {
    fn zero() -> Self {
        MonoFrac::from_poly(WPoly::zero())
    }
    fn one() -> Self {
        MonoFrac::from_poly(WPoly::one())
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        let da = self.den_a.max(rhs.den_a);
        let db = self.den_b.max(rhs.den_b);
        let lift_l = self
            .num
            .mul_ref(&WPoly::mono(C::one(), da - self.den_a, db - self.den_b));
        let lift_r = rhs
            .num
            .mul_ref(&WPoly::mono(C::one(), da - rhs.den_a, db - rhs.den_b));
        MonoFrac::new(lift_l.add_ref(&lift_r), da, db)
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        MonoFrac::new(
            self.num.mul_ref(&rhs.num),
            self.den_a + rhs.den_a,
            self.den_b + rhs.den_b,
        )
    }
    fn neg_ref(&self) -> Self {
        MonoFrac {
            num: self.num.neg_ref(),
            den_a: self.den_a,
            den_b: self.den_b,
        }
    }
    fn inv_ref(&self) -> Option<Self> {
        let ((m, n, p), c) = self.num.as_monomial()?;
        if p != 0 {
            return None;
        }
        let cinv = c.inv_ref()?;
        Some(MonoFrac::new(
            WPoly::mono(cinv, self.den_a, self.den_b),
            m,
            n,
        ))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        MonoFrac::from_poly(WPoly::from_i64(v))
    }
}

impl<C: Ring> SqrtRing for MonoFrac<C>
where
    C: SqrtRing,
{
    fn sqrt_ref(&self) -> Option<Self> {
        if !self.den_a.is_multiple_of(2) || !self.den_b.is_multiple_of(2) {
            return None;
        }
        Some(MonoFrac::new(
            self.num.sqrt_ref()?,
            self.den_a / 2,
            self.den_b / 2,
        ))
    }
}

impl<C: Ring> fmt::Debug for MonoFrac<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / (", self.num)?;
            if self.den_a > 0 {
                write!(f, "a^{}", self.den_a)?;
            }
            if self.den_b > 0 {
                write!(f, "b^{}", self.den_b)?;
            }
            write!(f, ")")
        }
    }
}

impl<C: Ring> fmt::Display for MonoFrac<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}
