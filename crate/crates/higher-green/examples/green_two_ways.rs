//! The headline number three ways: the closed form (8/sqrt 7) log(8-3 sqrt 7),
//! the Poincare series over the modular group, and the Eichler lift whose
//! scaled value lands on 8 log(8 - 3 sqrt 7) modulo pi i.
//!
//!     cargo run --release --example green_two_ways

use higher_green::eichler::{eichler_lift, PathPolicy};
use higher_green::green::{global_green, tau7_closed_form, CMPoint};
use higher_green::hp::HPComplex;
use rug::Float;

fn main() {
    let prec = 256;
    let z = CMPoint::tau7();
    let tau = z.tau(prec);
    let i = HPComplex::i(prec);

    let closed = tau7_closed_form(prec);
    println!("closed form  (8/sqrt7) log(8-3 sqrt7) = {:.*}", 30, closed.to_f64());

    let sum = global_green(2, &tau, &i, 90, prec).unwrap();
    println!(
        "poincare sum ({} terms)  = {:.*}   [tail bound {:.2e}]",
        sum.terms,
        30,
        sum.value.to_f64(),
        sum.tail.to_f64()
    );
    println!(
        "  |poincare - closed| = {:.2e}",
        (sum.value.clone() - &closed).abs().to_f64()
    );

    let lift = eichler_lift(&z, prec, &PathPolicy::default()).unwrap();
    println!("eichler lift hat G       = {:?}", lift.value);
    println!("  defined modulo {}", lift.modulus);
    println!(
        "  2 Re hat G - closed = {:.2e}",
        (2.0 * lift.value.re.to_f64() - closed.to_f64()).abs()
    );
    let scaled = lift.value.scale(&Float::with_val(prec, 28).sqrt());
    let s7 = Float::with_val(prec, 7).sqrt();
    let target = (Float::with_val(prec, 8) - s7 * 3u32).ln() * 8u32;
    println!(
        "  sqrt(28) hat G = {:.12} + {:.12} i, target 8 log(8-3 sqrt7) = {:.12}",
        scaled.re.to_f64(),
        scaled.im.to_f64(),
        target.to_f64()
    );
    println!(
        "  residual: re {:.2e}, im/pi = {:.6} (an integer, so 0 mod pi i)",
        (scaled.re.clone() - &target).abs().to_f64(),
        scaled.im.to_f64() / std::f64::consts::PI
    );
}
