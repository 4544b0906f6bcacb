//! Integral group homology of the modular group on quadratic polynomials:
//! the Smith normal form of the boundary matrix gives H_0 = Z/2, and the
//! parabolic cohomology with Q/Z coefficients is trivial.
//!
//!     cargo run --example torsion_constants

use higher_green::cohomology::{
    act_gen, h0_coinvariants, h1_parabolic_order, torsion_constants, Gen, IntV2,
};

fn main() {
    // the two anchor boundary values
    let v = IntV2(1, 1, 1);
    println!("S(X^2+X+1) - (X^2+X+1) = {:?}", act_gen(Gen::S, &v).sub(&v));
    let v = IntV2(0, 0, 1);
    println!("T X^2 - X^2            = {:?}", act_gen(Gen::T, &v).sub(&v));

    let rep = h0_coinvariants();
    println!("\nboundary matrix [Sv-v | Tv-v] on basis 1, X, X^2:");
    for row in &rep.boundary {
        println!("  {:?}", row);
    }
    println!("Smith normal form diagonal: {:?}", rep.invariant_factors);
    println!("H_0(PSL2(Z), V_2) = Z/{}", rep.h0_order);
    println!("H^1_par(PSL2(Z), V_2 tensor Q/Z) has order {}", h1_parabolic_order());
    let (n_a, n_b, n) = torsion_constants();
    println!("N_A = {}, N_B = {}, N = {}", n_a, n_b, n);
}
