//! Gauss hypergeometric series and Legendre functions of the second kind.

use rug::Float;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("hypergeometric series requires |x| < 1, got {0}")]
    NonConvergent(f64),
    #[error("legendre function needs t > 1, got {0}")]
    DomainError(f64),
}

/// F(a, b; c; x) = sum (a)_n (b)_n / (c)_n x^n / n!, |x| < 1.
pub fn gauss_2f1(a: &Float, b: &Float, c: &Float, x: &Float, prec: u32) -> Result<Float, SpecialError> {
    if !(x.clone().abs() < 1) {
        return Err(SpecialError::NonConvergent(x.to_f64()));
    }
    let mut sum = Float::with_val(prec, 1);
    let mut term = Float::with_val(prec, 1);
    let cutoff = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 8));
    let mut n = 0u64;
    loop {
        // term *= (a+n)(b+n) / ((c+n)(n+1)) * x
        let an = Float::with_val(prec, a + n);
        let bn = Float::with_val(prec, b + n);
        let cn = Float::with_val(prec, c + n);
        if cn.is_zero() {
            return Err(SpecialError::NonConvergent(x.to_f64()));
        }
        term = term * an * bn / cn / Float::with_val(prec, n + 1) * x;
        sum += &term;
        n += 1;
        if term.clone().abs() < cutoff && n > 4 {
            break;
        }
        if n > 10_000_000 {
            return Err(SpecialError::NonConvergent(x.to_f64()));
        }
    }
    Ok(sum)
}

/// Legendre's function of the second kind with integer index k-1 >= 1,
/// through the hypergeometric expansion
/// Q_{k-1}(t) = 2^{k-1} (k-1)!^2/(2k-1)! (t+1)^{-k} F(k, k; 2k; 2/(1+t)).
pub fn legendre_q(k_minus_1: u32, t: &Float, prec: u32) -> Result<Float, SpecialError> {
    assert!(k_minus_1 >= 1);
    if !(t.clone() > 1) {
        return Err(SpecialError::DomainError(t.to_f64()));
    }
    let k = (k_minus_1 + 1) as i64;
    let x = Float::with_val(prec, 2) / Float::with_val(prec, t + 1i32);
    let f = gauss_2f1(
        &Float::with_val(prec, k),
        &Float::with_val(prec, k),
        &Float::with_val(prec, 2 * k),
        &x,
        prec,
    )?;
    // 2^{k-1} (k-1)!^2 / (2k-1)!
    let mut c = Float::with_val(prec, 1);
    for j in 1..k {
        c *= j;
    }
    c = c.clone() * c; // (k-1)!^2
    for _ in 1..k {
        c *= 2;
    }
    let mut fact = Float::with_val(prec, 1);
    for j in 1..=(2 * k - 1) {
        fact *= j;
    }
    c /= fact;
    let tp1 = Float::with_val(prec, t + 1i32);
    let mut pw = Float::with_val(prec, 1);
    for _ in 0..k {
        pw *= &tp1;
    }
    Ok(c * f / pw)
}

/// Closed form for k = 2: Q_1(t) = (t/2) ln((t+1)/(t-1)) - 1.
pub fn legendre_q1_closed(t: &Float, prec: u32) -> Result<Float, SpecialError> {
    if !(t.clone() > 1) {
        return Err(SpecialError::DomainError(t.to_f64()));
    }
    let num = Float::with_val(prec, t + 1i32);
    let den = Float::with_val(prec, t - 1i32);
    let l = Float::with_val(prec, num / den).ln();
    Ok(Float::with_val(prec, t * l) / 2 - 1u32)
}
