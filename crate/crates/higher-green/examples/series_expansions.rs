//! Expands the basic series on the Weierstrass family at infinity and prints
//! the leading terms: x, y, the integrated v0, the formal-group pair t(z),
//! z(t), and the chart function u(t).
//!
//!     cargo run --example series_expansions

use higher_green::weierstrass::{expand_basic, BasicSeries};
use higher_green::Ring;

fn show(name: &str, s: &higher_green::weierstrass::WSeries, upto: i64) {
    print!("{:7} = ", name);
    let mut first = true;
    for (k, c) in s.series.iter_known() {
        if c.is_zero() || k > upto {
            continue;
        }
        if !first {
            print!(" + ");
        }
        first = false;
        print!("({}) z^{}", c, k);
    }
    println!(" + ...");
}

fn main() {
    let n = 12;
    for (name, series) in [
        ("x", BasicSeries::X),
        ("y", BasicSeries::Y),
        ("v0", BasicSeries::V0),
        ("t(z)", BasicSeries::T),
        ("z(t)", BasicSeries::ZOfT),
        ("u(t)", BasicSeries::U),
    ] {
        show(name, &expand_basic(series, n), 9);
    }

    // the curve equation holds coefficient-wise
    let x = expand_basic(BasicSeries::X, 20).series;
    let y = expand_basic(BasicSeries::Y, 20).series;
    let lhs = y.mul(&y);
    let rhs = x
        .mul(&x)
        .mul(&x)
        .add(&x.scale(&higher_green::weierstrass::RPoly::gen_a()))
        .add(&higher_green::Laurent::constant(
            higher_green::weierstrass::RPoly::gen_b(),
        ));
    println!(
        "\ny^2 - x^3 - a x - b = {} (to order 20)",
        if lhs.sub(&rhs).is_zero_sofar() { "0" } else { "nonzero!" }
    );
}
