//! Truncated Laurent series over a generic coefficient ring.
//!
//! A series stores a window of known coefficients together with a truncation
//! certificate: every exponent below `cut` is known (zero if outside the
//! stored window), everything at or above it is unknown. Reading past the
//! certificate is an error, never garbage.

use std::fmt;

use thiserror::Error;

use crate::ring::{Ring, SqrtRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("leading coefficient is not invertible")]
    NonInvertibleLead,
    #[error("square root of a series of odd order")]
    OddOrderSqrt,
    #[error("leading coefficient has no square root in the coefficient ring")]
    NonSquareLead,
    #[error("composition requires ord(g) >= 1")]
    CompositionOrderViolation,
    #[error("requested coefficient of z^{0} lies beyond the truncation certificate z^{1}")]
    TruncationExhausted(i64, i64),
}

pub type LResult<T> = Result<T, LaurentError>;

/// Validity certificate: `Exact` series terminate (all terms shown are all
/// there are); `At(t)` means coefficients of z^k for k >= t are unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cut {
    Exact,
    At(i64),
}

impl Cut {
    pub fn min(self, other: Cut) -> Cut {
        match (self, other) {
            (Cut::Exact, c) | (c, Cut::Exact) => c,
            (Cut::At(a), Cut::At(b)) => Cut::At(a.min(b)),
        }
    }
    pub fn shift(self, k: i64) -> Cut {
        match self {
            Cut::Exact => Cut::Exact,
            Cut::At(t) => Cut::At(t + k),
        }
    }
    pub fn covers(self, k: i64) -> bool {
        match self {
            Cut::Exact => true,
            Cut::At(t) => k < t,
        }
    }
    pub fn bound(self) -> Option<i64> {
        match self {
            Cut::Exact => None,
            Cut::At(t) => Some(t),
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct Laurent<C: Ring> {
    ord: i64,
    coeffs: Vec<C>,
    cut: Cut,
}

impl<C: Ring> Laurent<C> {
    /// Build from a coefficient window starting at exponent `ord`.
    pub fn new(ord: i64, coeffs: Vec<C>, cut: Cut) -> Self {
        let mut s = Laurent { ord, coeffs, cut };
        s.normalize();
        s
    }

    pub fn zero_exact() -> Self {
        Laurent {
            ord: 0,
            coeffs: vec![],
            cut: Cut::Exact,
        }
    }

    /// The zero-so-far series 0 + O(z^t).
    pub fn zero_to(t: i64) -> Self {
        Laurent {
            ord: 0,
            coeffs: vec![],
            cut: Cut::At(t),
        }
    }

    pub fn constant(c: C) -> Self {
        Laurent::new(0, vec![c], Cut::Exact)
    }

    pub fn one() -> Self {
        Laurent::constant(C::one())
    }

    /// The monomial c * z^k.
    pub fn monomial(c: C, k: i64) -> Self {
        Laurent::new(k, vec![c], Cut::Exact)
    }

    /// z itself.
    pub fn var() -> Self {
        Laurent::monomial(C::one(), 1)
    }

    fn normalize(&mut self) {
        while let Some(first) = self.coeffs.first() {
            if first.is_zero() {
                self.coeffs.remove(0);
                self.ord += 1;
            } else {
                break;
            }
        }
        while let Some(last) = self.coeffs.last() {
            if last.is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        if let Cut::At(t) = self.cut {
            // drop any window content at or past the certificate
            while !self.coeffs.is_empty() && self.ord + self.coeffs.len() as i64 > t {
                self.coeffs.pop();
            }
            while let Some(last) = self.coeffs.last() {
                if last.is_zero() {
                    self.coeffs.pop();
                } else {
                    break;
                }
            }
        }
        if self.coeffs.is_empty() {
            self.ord = 0;
        }
    }

    pub fn cut(&self) -> Cut {
        self.cut
    }

    /// True if no nonzero coefficient is known.
    pub fn is_zero_sofar(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Identically zero (exact).
    pub fn is_zero_exact(&self) -> bool {
        self.coeffs.is_empty() && self.cut == Cut::Exact
    }

    /// Order of the lowest known nonzero term. Zero-so-far series have none.
    pub fn ord(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.ord)
        }
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.first()
    }

    /// Coefficient of z^k, when the certificate covers it.
    pub fn coeff(&self, k: i64) -> LResult<C> {
        if !self.cut.covers(k) {
            return Err(LaurentError::TruncationExhausted(
                k,
                self.cut.bound().unwrap_or(i64::MAX),
            ));
        }
        let idx = k - self.ord;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            Ok(C::zero())
        } else {
            Ok(self.coeffs[idx as usize].clone())
        }
    }

    /// Coefficient of z^-1.
    pub fn residue(&self) -> LResult<C> {
        self.coeff(-1)
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Laurent<D> {
        Laurent::new(self.ord, self.coeffs.iter().map(f).collect(), self.cut)
    }

    pub fn iter_known(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.ord + i as i64, c))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let cut = self.cut.min(rhs.cut);
        if self.coeffs.is_empty() && rhs.coeffs.is_empty() {
            return Laurent {
                ord: 0,
                coeffs: vec![],
                cut,
            };
        }
        let lo = match (self.ord(), rhs.ord()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!(),
        };
        let hi = (self.ord + self.coeffs.len() as i64).max(rhs.ord + rhs.coeffs.len() as i64);
        let hi = match cut {
            Cut::Exact => hi,
            Cut::At(t) => hi.min(t),
        };
        let mut out = Vec::with_capacity((hi - lo).max(0) as usize);
        for k in lo..hi {
            let a = self.coeff_unchecked(k);
            let b = rhs.coeff_unchecked(k);
            out.push(a.add_ref(&b));
        }
        Laurent::new(lo, out, cut)
    }

    fn coeff_unchecked(&self, k: i64) -> C {
        let idx = k - self.ord;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            C::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn neg(&self) -> Self {
        Laurent {
            ord: self.ord,
            coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect(),
            cut: self.cut,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        Laurent::new(
            self.ord,
            self.coeffs.iter().map(|x| x.mul_ref(c)).collect(),
            self.cut,
        )
    }

    pub fn shift(&self, k: i64) -> Self {
        Laurent {
            ord: self.ord + k,
            coeffs: self.coeffs.clone(),
            cut: self.cut.shift(k),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        // three pollution sources: tail*known, known*tail, tail*tail
        let cut = {
            let c1 = match (self.cut, rhs.ord()) {
                (Cut::At(t), Some(o)) => Cut::At(t + o),
                _ => Cut::Exact,
            };
            let c2 = match (rhs.cut, self.ord()) {
                (Cut::At(t), Some(o)) => Cut::At(t + o),
                _ => Cut::Exact,
            };
            let c3 = match (self.cut, rhs.cut) {
                (Cut::At(a), Cut::At(b)) => Cut::At(a + b),
                _ => Cut::Exact,
            };
            c1.min(c2).min(c3)
        };
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Laurent {
                ord: 0,
                coeffs: vec![],
                cut,
            };
        }
        let lo = self.ord + rhs.ord;
        let full_len = self.coeffs.len() + rhs.coeffs.len() - 1;
        let len = match cut {
            Cut::Exact => full_len as i64,
            Cut::At(t) => (t - lo).clamp(0, full_len as i64),
        } as usize;
        let mut out = vec![C::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Laurent::new(lo, out, cut)
    }

    /// Multiplicative inverse. `order_if_exact` caps the expansion length for
    /// exact (terminating) inputs, whose inverses are generally infinite.
    pub fn inv(&self, order_if_exact: i64) -> LResult<Self> {
        let d = self.ord().ok_or(LaurentError::NonInvertibleLead)?;
        let lead = self.coeffs[0].inv_ref().ok_or(LaurentError::NonInvertibleLead)?;
        // f = c z^d (1 + u); 1/f = c^{-1} z^{-d} (1 - u + u^2 - ...)
        let unit_cut = match self.cut {
            Cut::Exact => Cut::At(order_if_exact.max(1)),
            Cut::At(t) => Cut::At(t - d),
        };
        let n = match unit_cut {
            Cut::At(t) => t.max(1),
            Cut::Exact => unreachable!(),
        };
        // u has ord >= 1 after normalizing by the leading term
        let mut u = vec![C::zero(); n as usize];
        for (k, c) in self.iter_known() {
            let e = k - d;
            if e >= 1 && e < n {
                u[e as usize] = c.mul_ref(&lead);
            }
        }
        // recurrence: (1+u) * w = 1
        let mut w = vec![C::zero(); n as usize];
        w[0] = C::one();
        for k in 1..n as usize {
            let mut acc = C::zero();
            for j in 1..=k {
                if !u[j].is_zero() {
                    acc = acc.add_ref(&u[j].mul_ref(&w[k - j]));
                }
            }
            w[k] = acc.neg_ref();
        }
        let coeffs: Vec<C> = w.into_iter().map(|c| c.mul_ref(&lead)).collect();
        let cut = if self.cut == Cut::Exact && self.coeffs.len() == 1 {
            Cut::Exact
        } else {
            Cut::At(n - d)
        };
        Ok(Laurent::new(-d, coeffs, cut))
    }

    /// Formal derivative d/dz.
    pub fn derive(&self) -> Self {
        let coeffs: Vec<C> = self
            .iter_known()
            .map(|(k, c)| c.mul_i64(k))
            .collect();
        Laurent::new(self.ord - 1, coeffs, self.cut.shift(-1))
    }

    /// Composition f(g). Requires ord(g) >= 1.
    pub fn compose(&self, g: &Self, order_if_exact: i64) -> LResult<Self> {
        let go = g.ord().ok_or(LaurentError::CompositionOrderViolation)?;
        if go < 1 {
            return Err(LaurentError::CompositionOrderViolation);
        }
        let fo = self.ord().unwrap_or(0);
        // error from g's tail enters at g_cut + (k-1)*go, minimized at k = fo;
        // error from f's tail enters at f_cut * go
        let cut = match (self.cut, g.cut) {
            (Cut::Exact, Cut::Exact) => {
                if fo >= 0 {
                    Cut::Exact
                } else {
                    Cut::At(order_if_exact)
                }
            }
            (fc, gc) => {
                let a = match fc {
                    Cut::Exact => Cut::Exact,
                    Cut::At(t) => Cut::At(t * go),
                };
                let b = match gc {
                    Cut::Exact => Cut::Exact,
                    Cut::At(t) => Cut::At(t + (fo - 1) * go),
                };
                a.min(b).min(Cut::At(order_if_exact.max(1)))
            }
        };
        let n = match cut {
            Cut::Exact => (self.ord + self.coeffs.len() as i64).max(1) * go + 1,
            Cut::At(t) => t,
        };
        let trim = |s: Laurent<C>| -> Laurent<C> {
            match cut {
                Cut::Exact => s,
                Cut::At(_) => s.trim_to(n),
            }
        };
        let mut result = Laurent {
            ord: 0,
            coeffs: vec![],
            cut,
        };
        // regular part: Horner over all exponents down to 0
        let mut reg = Laurent::zero_exact();
        let top = self.ord + self.coeffs.len() as i64;
        if top > 0 {
            for k in (0..top).rev() {
                reg = trim(reg.mul(g));
                let c = self.coeff_unchecked(k);
                if !c.is_zero() {
                    reg = reg.add(&Laurent::constant(c));
                }
            }
        }
        result = result.add(&reg);
        // principal part via powers of 1/g
        if self.ord < 0 {
            let depth = -self.ord;
            let gi = g.inv(n + depth * go + 2 * go + 2)?;
            let mut pw = gi.clone();
            for k in 1..=depth {
                let c = self.coeff_unchecked(-k);
                if !c.is_zero() {
                    result = result.add(&pw.scale(&c));
                }
                if k < depth {
                    pw = pw.mul(&gi);
                }
            }
        }
        result.cut = result.cut.min(cut);
        result.normalize();
        Ok(result)
    }

    fn trim_to(mut self, n: i64) -> Self {
        if let Cut::At(t) = self.cut {
            if t <= n {
                return self;
            }
        }
        self.cut = self.cut.min(Cut::At(n));
        self.normalize();
        self
    }

    /// Compositional inverse for series of order 1, by Newton iteration.
    pub fn revert(&self, order: i64) -> LResult<Self> {
        if self.ord() != Some(1) {
            return Err(LaurentError::CompositionOrderViolation);
        }
        let lead_inv = self.coeffs[0].inv_ref().ok_or(LaurentError::NonInvertibleLead)?;
        let deriv = self.derive();
        // Newton: correct mod z^m becomes correct mod z^{2m-1}
        let mut g = Laurent::monomial(lead_inv, 1).trim_to(2);
        let mut known = 2i64;
        while known < order {
            known = (2 * known - 1).min(order);
            g.cut = Cut::At(known);
            g.normalize();
            let fg = self.compose(&g, known + 4)?.trim_to(known);
            let err = fg.sub(&Laurent::var()).trim_to(known);
            if err.is_zero_sofar() {
                continue;
            }
            let dfg = deriv.compose(&g, known + 4)?;
            let corr = err.mul(&dfg.inv(known + 4)?).trim_to(known);
            g = g.sub(&corr);
        }
        g.cut = Cut::At(order);
        g.normalize();
        Ok(g)
    }
}

impl<C: SqrtRing> Laurent<C> {
    /// Square root of a series of even order; returns the branch whose
    /// leading coefficient is `sqrt_ref` of the input's (the +i branch for
    /// leading coefficient -1). The caller picks a branch by negating.
    pub fn sqrt(&self, order_if_exact: i64) -> LResult<Self> {
        let d = self.ord().ok_or(LaurentError::NonInvertibleLead)?;
        if d % 2 != 0 {
            return Err(LaurentError::OddOrderSqrt);
        }
        let lead = &self.coeffs[0];
        let slead = lead.sqrt_ref().ok_or(LaurentError::NonSquareLead)?;
        let lead_inv = lead.inv_ref().ok_or(LaurentError::NonInvertibleLead)?;
        let unit_cut = match self.cut {
            Cut::Exact => order_if_exact.max(1),
            Cut::At(t) => t - d,
        };
        let n = unit_cut.max(1);
        // u = f / (lead z^d) - 1, then solve s^2 = 1 + u coefficient-wise
        let mut u = vec![C::zero(); n as usize];
        for (k, c) in self.iter_known() {
            let e = k - d;
            if e >= 1 && e < n {
                u[e as usize] = c.mul_ref(&lead_inv);
            }
        }
        let half = C::from_i64(2).inv_ref().expect("2 must be invertible");
        let mut s = vec![C::zero(); n as usize];
        s[0] = C::one();
        for k in 1..n as usize {
            let mut acc = u[k].clone();
            for j in 1..k {
                acc = acc.sub_ref(&s[j].mul_ref(&s[k - j]));
            }
            s[k] = acc.mul_ref(&half);
        }
        let coeffs = s.into_iter().map(|c| c.mul_ref(&slead)).collect();
        Ok(Laurent::new(d / 2, coeffs, Cut::At(n + d / 2)))
    }
}

impl<C: Ring> fmt::Debug for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (k, c) in self.iter_known() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({:?})*z^{}", c, k)?;
            }
        }
        match self.cut {
            Cut::Exact => Ok(()),
            Cut::At(t) => write!(f, " + O(z^{})", t),
        }
    }
}
