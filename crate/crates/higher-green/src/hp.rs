//! Arbitrary-precision complex arithmetic over MPFR floats. Precision is a
//! construction-time parameter of every value, never ambient state.

use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

#[derive(Clone, PartialEq)]
pub struct HPComplex {
    pub re: Float,
    pub im: Float,
}

impl HPComplex {
    pub fn new(re: Float, im: Float) -> Self {
        HPComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        HPComplex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        HPComplex::new(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn i(prec: u32) -> Self {
        HPComplex::new(Float::new(prec), Float::with_val(prec, 1))
    }

    pub fn from_i64(prec: u32, v: i64) -> Self {
        HPComplex::new(Float::with_val(prec, v), Float::new(prec))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        HPComplex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_rationals(prec: u32, re: &Rational, im: &Rational) -> Self {
        HPComplex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn real(prec: u32, v: &Float) -> Self {
        HPComplex::new(Float::with_val(prec, v), Float::new(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        HPComplex::new(
            Float::with_val(p, &self.re + &rhs.re),
            Float::with_val(p, &self.im + &rhs.im),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        HPComplex::new(
            Float::with_val(p, &self.re - &rhs.re),
            Float::with_val(p, &self.im - &rhs.im),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.prec().max(rhs.prec());
        let re = Float::with_val(p, &self.re * &rhs.re) - Float::with_val(p, &self.im * &rhs.im);
        let im = Float::with_val(p, &self.re * &rhs.im) + Float::with_val(p, &self.im * &rhs.re);
        HPComplex::new(re, im)
    }

    pub fn neg(&self) -> Self {
        let p = self.prec();
        HPComplex::new(Float::with_val(p, -&self.re), Float::with_val(p, -&self.im))
    }

    pub fn conj(&self) -> Self {
        let p = self.prec();
        HPComplex::new(self.re.clone(), Float::with_val(p, -&self.im))
    }

    pub fn scale(&self, f: &Float) -> Self {
        let p = self.prec();
        HPComplex::new(
            Float::with_val(p, &self.re * f),
            Float::with_val(p, &self.im * f),
        )
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        let p = self.prec();
        HPComplex::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    pub fn mul_i(&self) -> Self {
        let p = self.prec();
        HPComplex::new(Float::with_val(p, -&self.im), self.re.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().hypot(&self.im))
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        let p = self.prec();
        let im = Float::with_val(p, &self.im / &n);
        HPComplex::new(Float::with_val(p, &self.re / &n), -im)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.recip())
    }

    pub fn powi(&self, k: i64) -> Self {
        let p = self.prec();
        let mut acc = HPComplex::one(p);
        let base = if k >= 0 { self.clone() } else { self.recip() };
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Principal logarithm: ln|z| + i arg(z), arg in (-pi, pi].
    pub fn ln(&self) -> Self {
        let p = self.prec();
        let r = self.abs().ln();
        let theta = Float::with_val(p, self.im.clone().atan2(&self.re));
        HPComplex::new(r, theta)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        HPComplex::new(Float::with_val(p, &r * &c), Float::with_val(p, &r * &s))
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_f64s(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// 2 pi i at the given precision.
pub fn two_pi_i(prec: u32) -> HPComplex {
    HPComplex::new(Float::new(prec), Float::with_val(prec, 2 * pi(prec)))
}

pub fn float_pow_i(f: &Float, k: i64, prec: u32) -> Float {
    Float::with_val(prec, f.pow(k as i32))
}

impl fmt::Debug for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}
