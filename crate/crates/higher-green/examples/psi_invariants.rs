//! Expands the two branches of the curve x1 + x2 = 0 through infinity,
//! evaluates the residue functional Psi_1 on the standard hyperforms, and
//! applies the canonical third-order operator whose scalar part transports
//! to the weight-4 form -1728 pi E4/(j - 1728).
//!
//!     cargo run --example psi_invariants

use higher_green::branch::{build_branches, dlog_f, psi1};
use higher_green::dmodule::eval_b;
use higher_green::hyperform::{hproduct, make_omega_eta};

fn main() {
    let n = 20;
    let branches = build_branches(n);
    println!(
        "branch 1: f = ({:?}) z^-3 + ..., branch 2: f = ({:?}) z^3 + ...",
        branches.0.f.coeff(-3).unwrap(),
        branches.1.f.coeff(3).unwrap()
    );
    let dl = dlog_f(&branches.1, 14).unwrap();
    println!(
        "df/f on branch 2: d_e constant {:?}, d_s constant {:?}",
        dl.de.coeff(0).unwrap(),
        dl.ds.coeff(0).unwrap()
    );

    let (omega, eta) = make_omega_eta(n);
    let theta0 = hproduct(&omega, &omega);
    let theta1 = hproduct(&eta, &omega).add(&hproduct(&omega, &eta));
    let theta2 = hproduct(&eta, &eta);
    for (name, theta) in [("theta0", &theta0), ("theta1", &theta1), ("theta2", &theta2)] {
        let (de, ds) = psi1(theta, &branches).unwrap();
        println!("Psi1({}) = ({:?}) d_e + ({:?}) d_s", name, de, ds);
    }

    let ev = eval_b();
    println!("\ncanonical operator ds'^3 - (4a/3) ds' - 4b applied to theta0:");
    println!("  scalar part   {:?}", ev.scalar_part);
    println!("  multiplier    {}", ev.multiplier);
    println!("  as a modular form: {}", ev.modform);
    println!(
        "  equals -1728 pi E4/(j - 1728): {}",
        ev.modform.equivalent(&ev.modform_j)
    );
}
