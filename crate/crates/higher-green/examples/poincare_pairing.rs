//! Builds the hyperform representatives of the two second-kind classes on
//! the cover {U0, U1, U_int}, takes their exterior product on E x E, and
//! evaluates the Poincare pairing as a diagonal residue trace. Also checks
//! the Gauss-Manin derivative table.
//!
//!     cargo run --example poincare_pairing

use higher_green::hyperform::{
    gauss_manin_check, hproduct, make_omega_eta, poincare_pairing, trace_diagonal,
};

fn main() {
    let n = 20;
    let (omega, eta) = make_omega_eta(n);
    println!("omega_int = 0 (the class sits in F^1): {}", omega.comp_int.is_zero_exact());
    println!(
        "eta_0 d_s part = x v0 + y, pole cancelled (ord {})",
        eta.comp0.ds.ord().unwrap()
    );

    for (name, f, g) in [
        ("omega x eta", &omega, &eta),
        ("eta x omega", &eta, &omega),
        ("omega x omega", &omega, &omega),
        ("eta x eta", &eta, &eta),
    ] {
        let tr = trace_diagonal(&hproduct(f, g), n).unwrap();
        println!("Tr_diag({}) = {:?}", name, tr);
    }
    let p = poincare_pairing(&omega, &eta, n).unwrap();
    println!("<omega, eta> = {}", p);

    println!("\nGauss-Manin table, modulo the declared O(z^(N-1)) tails:");
    for id in gauss_manin_check(n).identities {
        println!(
            "  [{}] {}",
            if id.passed { "ok" } else { "BAD" },
            id.name
        );
    }
}
