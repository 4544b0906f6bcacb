//! Exact intersection numbers of the higher cycle (W: x1 + x2 = 0,
//! f = y1 - i y2) on the curve y^2 = x^3 - 35x - 98 with complex
//! multiplication by (-1 + sqrt(-7))/2. The combined cycle gives the unit
//! u^8 with u^2 = i(8 - 3 sqrt 7).
//!
//!     cargo run --example tau7_intersection

use higher_green::cycles::{
    cycle_class_coeffs, intersect_basic, intersect_cycle, intersect_graph, tau7_unit, AlgCycle,
    BasicCycle, CurveParams, Endomorphism,
};
use higher_green::Ring;

fn main() {
    let curve = CurveParams::tau7();
    let endo = Endomorphism::tau7_builtin();
    println!("curve: {}", curve);
    println!("endomorphism degree {} with pairing {:?}", endo.degree, endo.pairing);

    let z1 = intersect_basic(BasicCycle::Z1, &curve).unwrap();
    let z2 = intersect_basic(BasicCycle::Z2, &curve).unwrap();
    let de = intersect_basic(BasicCycle::DiagE, &curve).unwrap();
    let gr = intersect_graph(&endo, &curve).unwrap();
    println!("W . Z1      = {}", z1);
    println!("W . Z2      = {}", z2);
    println!("W . Delta_E = {}", de);
    println!("W . Gamma   = {}", gr);

    let (c1, c2, c3, c4) = cycle_class_coeffs(&endo).unwrap();
    println!("[Gamma] = {} [Z1] + {} [Z2] + {} [Delta] + ({}) Q_tau", c1, c2, c3, c4);

    let total = intersect_cycle(&AlgCycle::z_tau7(), &curve).unwrap();
    let u = tau7_unit();
    println!("W . (2 Gamma - 5 Z1 - 3 Z2 + Delta) = {}", total);
    println!("u   = {}", u);
    println!("u^2 = {}  (this is i(8 - 3 sqrt 7))", u.mul_ref(&u));
    println!("u^8 = {}", u.pow(8));
    println!("total equals u^8: {}", total == u.pow(8));
    println!("Norm(u) over Q = {}", u.norm_to_q());
}
