//! High-precision evaluation of level-one Eisenstein series, the j-invariant,
//! the weight-4 form attached to the point i, and the (a, b) <-> tau bridge.

use rug::ops::Pow;
use rug::{Float, Rational};
use thiserror::Error;

use crate::hp::{pi, HPComplex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModularError {
    #[error("point is not in the upper half plane")]
    NotInUpperHalfPlane,
    #[error("evaluation point is in the orbit of i, where the form has its pole")]
    PoleAtI,
    #[error("requested precision is unreachable at this height")]
    PrecisionUnreachable,
    #[error("degenerate curve: discriminant vanishes")]
    DegenerateCurve,
}

/// Element of PSL2(Z) acting by Mobius transformations.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Gamma2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Gamma2 {
    pub const IDENTITY: Gamma2 = Gamma2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    pub const S: Gamma2 = Gamma2 {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };

    pub fn t_power(n: i64) -> Gamma2 {
        Gamma2 {
            a: 1,
            b: n,
            c: 0,
            d: 1,
        }
    }

    pub fn compose(&self, rhs: &Gamma2) -> Gamma2 {
        Gamma2 {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
        .normalized()
    }

    pub fn inverse(&self) -> Gamma2 {
        Gamma2 {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .normalized()
    }

    /// Fix the PSL2 sign: c > 0, or c = 0 and d > 0.
    fn normalized(self) -> Gamma2 {
        if self.c < 0 || (self.c == 0 && self.d < 0) {
            Gamma2 {
                a: -self.a,
                b: -self.b,
                c: -self.c,
                d: -self.d,
            }
        } else {
            self
        }
    }

    pub fn apply(&self, z: &HPComplex) -> HPComplex {
        let p = z.prec();
        let num = z.scale_i64(self.a).add(&HPComplex::from_i64(p, self.b));
        let den = z.scale_i64(self.c).add(&HPComplex::from_i64(p, self.d));
        num.div(&den)
    }

    /// c z + d.
    pub fn cocycle(&self, z: &HPComplex) -> HPComplex {
        let p = z.prec();
        z.scale_i64(self.c).add(&HPComplex::from_i64(p, self.d))
    }
}

impl std::fmt::Display for Gamma2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

/// Reduce tau into the standard fundamental domain |Re| <= 1/2, |tau| >= 1.
/// Returns (tau', gamma) with gamma tau = tau'.
pub fn reduce_fundamental(tau: &HPComplex) -> Result<(HPComplex, Gamma2), ModularError> {
    if !(tau.im.clone() > 0) {
        return Err(ModularError::NotInUpperHalfPlane);
    }
    let mut z = tau.clone();
    let mut g = Gamma2::IDENTITY;
    for _ in 0..10_000 {
        // shift Re into [-1/2, 1/2); floor keeps the boundary stable
        let n = Float::with_val(z.prec(), &z.re + Rational::from((1, 2)))
            .floor()
            .to_f64() as i64;
        if n != 0 {
            z = z.sub(&HPComplex::from_i64(z.prec(), n));
            g = Gamma2::t_power(-n).compose(&g);
        }
        if z.norm_sqr() < 1 {
            z = z.recip().neg();
            g = Gamma2::S.compose(&g);
        } else {
            return Ok((z, g));
        }
    }
    Err(ModularError::PrecisionUnreachable)
}

/// sum of d^k over divisors d of n.
fn sigma(n: u64, k: u32) -> rug::Integer {
    let mut s = rug::Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += rug::Integer::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += rug::Integer::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// q = exp(2 pi i tau).
fn nome(tau: &HPComplex, prec: u32) -> HPComplex {
    let two_pi = Float::with_val(prec, 2 * pi(prec));
    let t = HPComplex::new(
        Float::with_val(prec, &tau.re),
        Float::with_val(prec, &tau.im),
    );
    t.mul_i().scale(&two_pi).exp()
}

/// All three Eisenstein values at a point of the fundamental domain.
fn eis_raw(tau: &HPComplex, prec: u32) -> (HPComplex, HPComplex, HPComplex) {
    let q = nome(tau, prec);
    let cutoff = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 8));
    let mut e2 = HPComplex::one(prec);
    let mut e4 = HPComplex::one(prec);
    let mut e6 = HPComplex::one(prec);
    let mut qn = HPComplex::one(prec);
    let mut n = 1u64;
    loop {
        qn = qn.mul(&q);
        let s1 = sigma(n, 1);
        let s3 = sigma(n, 3);
        let s5 = sigma(n, 5);
        e2 = e2.add(&qn.scale(&Float::with_val(prec, -24 * s1)));
        e4 = e4.add(&qn.scale(&Float::with_val(prec, 240 * s3)));
        e6 = e6.add(&qn.scale(&Float::with_val(prec, -504 * s5)));
        // |q^n| n^6 dominates every remaining term coefficient
        let bound = qn.abs() * Float::with_val(prec, n.pow(6));
        if bound < cutoff {
            break;
        }
        n += 1;
        if n > 4_000_000 {
            break;
        }
    }
    (e2, e4, e6)
}

/// Reduced evaluation of (E2, E4, E6) at arbitrary tau with the modular and
/// quasi-modular transformation laws.
pub fn eis_all(tau: &HPComplex, prec: u32) -> Result<(HPComplex, HPComplex, HPComplex), ModularError> {
    let (z, g) = reduce_fundamental(tau)?;
    let (e2r, e4r, e6r) = eis_raw(&z, prec);
    if g == Gamma2::IDENTITY {
        return Ok((e2r, e4r, e6r));
    }
    let j = g.cocycle(tau); // c tau + d, with gamma tau = z
    let j2 = j.mul(&j);
    let j4 = j2.mul(&j2);
    let e4 = e4r.div(&j4);
    let e6 = e6r.div(&j4.mul(&j2));
    // E2(tau) = E2(z)/(c tau + d)^2 - 12 c / (2 pi i (c tau + d))
    let mut e2 = e2r.div(&j2);
    if g.c != 0 {
        let two_pi_i = crate::hp::two_pi_i(prec);
        let corr = HPComplex::from_i64(prec, 12 * g.c).div(&two_pi_i.mul(&j));
        e2 = e2.sub(&corr);
    }
    Ok((e2, e4, e6))
}

/// Eisenstein series of weight 2, 4 or 6.
pub fn eisenstein(k: u32, tau: &HPComplex, prec: u32) -> Result<HPComplex, ModularError> {
    let (e2, e4, e6) = eis_all(tau, prec)?;
    match k {
        2 => Ok(e2),
        4 => Ok(e4),
        6 => Ok(e6),
        _ => panic!("eisenstein weight must be 2, 4 or 6"),
    }
}

/// j(tau) = 1728 E4^3 / (E4^3 - E6^2).
pub fn j_invariant(tau: &HPComplex, prec: u32) -> Result<HPComplex, ModularError> {
    let (_, e4, e6) = eis_all(tau, prec)?;
    let e43 = e4.powi(3);
    let disc = e43.sub(&e6.mul(&e6));
    Ok(e43.scale_i64(1728).div(&disc))
}

/// j from curve coefficients: -2^12 3^3 a^3 / Delta, Delta = -16(4a^3+27b^2).
pub fn j_from_ab(a: &Rational, b: &Rational) -> Result<Rational, ModularError> {
    let a3 = Rational::from(a * a) * a;
    let b2 = Rational::from(b * b);
    let delta = (Rational::from(4) * &a3 + Rational::from(27) * b2) * Rational::from(-16);
    if delta == 0 {
        return Err(ModularError::DegenerateCurve);
    }
    Ok(Rational::from(-4096 * 27) * a3 / delta)
}

/// Numeric j from complex curve coefficients.
pub fn j_from_ab_numeric(a: &HPComplex, b: &HPComplex) -> Result<HPComplex, ModularError> {
    let a3 = a.powi(3);
    let b2 = b.mul(b);
    let delta = a3.scale_i64(4).add(&b2.scale_i64(27)).scale_i64(-16);
    if delta.abs().is_zero() {
        return Err(ModularError::DegenerateCurve);
    }
    Ok(a3.scale_i64(-4096 * 27).div(&delta))
}

/// The weight-4 meromorphic form with double pole at the orbit of i:
/// -864 (2 pi i)^2 E4/(j - 1728) = 2 pi^2 E4 (E4^3 - E6^2)/E6^2.
pub fn g_target(tau: &HPComplex, prec: u32) -> Result<HPComplex, ModularError> {
    let (z, _) = reduce_fundamental(tau)?;
    // the orbit of i touches the fundamental domain only at i itself
    let dist = z.sub(&HPComplex::i(prec)).abs();
    if dist < Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2)) {
        return Err(ModularError::PoleAtI);
    }
    let (_, e4, e6) = eis_all(tau, prec)?;
    let disc = e4.powi(3).sub(&e6.mul(&e6));
    let pp = pi(prec);
    let two_pi2 = Float::with_val(prec, &pp * &pp) * 2u32;
    Ok(e4.mul(&disc).div(&e6.mul(&e6)).scale(&two_pi2))
}

/// Weierstrass coefficients of the curve with periods (1, tau):
/// a = -pi^4 E4(tau)/3, b = -2 pi^6 E6(tau)/27.
pub fn curve_from_tau(tau: &HPComplex, prec: u32) -> Result<(HPComplex, HPComplex), ModularError> {
    let (_, e4, e6) = eis_all(tau, prec)?;
    let p = pi(prec);
    let p2 = Float::with_val(prec, &p * &p);
    let p4 = Float::with_val(prec, &p2 * &p2);
    let p6 = Float::with_val(prec, &p4 * &p2);
    let a = e4.scale(&p4).scale_i64(-1).scale(&Float::with_val(prec, Rational::from((1, 3))));
    let b = e6.scale(&p6).scale(&Float::with_val(prec, Rational::from((-2, 27))));
    Ok((a, b))
}
