//! High-precision Eisenstein series, the j-invariant bridge between curve
//! coefficients and points of the upper half plane, and the weight-4 form
//! with its double pole at i.
//!
//!     cargo run --example eisenstein_bridge

use higher_green::green::CMPoint;
use higher_green::hp::HPComplex;
use higher_green::modular::{
    curve_from_tau, eisenstein, g_target, j_from_ab, j_invariant, reduce_fundamental,
};
use rug::Rational;

fn main() {
    let prec = 256;
    let i = HPComplex::i(prec);
    let tau7 = CMPoint::tau7().tau(prec);

    println!("E2(i) = {:?}   (exactly 3/pi = {:.15})", eisenstein(2, &i, prec).unwrap(),
        3.0 / std::f64::consts::PI);
    println!("E6(i) = {:?}", eisenstein(6, &i, prec).unwrap());

    println!("\nj(i)    = {:?}", j_invariant(&i, prec).unwrap());
    println!("j(tau7) = {:?}", j_invariant(&tau7, prec).unwrap());
    println!(
        "j(-35, -98) = {} (exact)",
        j_from_ab(&Rational::from(-35), &Rational::from(-98)).unwrap()
    );

    let (a, b) = curve_from_tau(&tau7, prec).unwrap();
    println!("\ncurve with periods (1, tau7): a = {:?}, b = {:?}", a, b);

    let z = HPComplex::from_f64(prec, 3.17, 0.04);
    let (zr, g) = reduce_fundamental(&z).unwrap();
    println!("\nreduce {:?} -> {:?} by {}", z, zr, g);

    let g7 = g_target(&tau7, prec).unwrap();
    println!("\ng(tau7) = {:?}  (the weight-4 form with pole at i)", g7);
    println!("g at i: {:?}", g_target(&i, prec).err().unwrap());
}
