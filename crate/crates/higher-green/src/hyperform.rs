//! Hyperform representatives of the two second-kind cohomology classes on
//! the cover {U0, U1, U_int} of the Weierstrass family, their exterior
//! products on E x E, and the diagonal residue trace.
//!
//! Two-variable products are never materialized: every consumer receives
//! one-variable Laurent data after substituting z1 = z and z2 = z2(z) for
//! the relevant flag, so the whole calculus stays inside the single-variable
//! kernel.

use crate::laurent::{Cut, LResult, Laurent};
use crate::ring::{GaussRat, Ring};
use crate::weierstrass::{self, BasicSeries};
use crate::wpoly::{MonoFrac, WPoly};

/// Branch coefficient ring: Q(i)-polynomials in a, b with monomial
/// denominators.
pub type BC = MonoFrac<GaussRat>;
pub type BSeries = Laurent<BC>;

pub fn bc_from_rat_poly(p: &WPoly<rug::Rational>) -> BC {
    MonoFrac::from_poly(p.map(|q| GaussRat::from_rat(q.clone())))
}

pub fn bseries(s: &weierstrass::RSeries) -> BSeries {
    s.map(bc_from_rat_poly)
}

pub fn bc_i() -> BC {
    MonoFrac::from_poly(WPoly::scalar(GaussRat::i()))
}

pub fn bc_a() -> BC {
    MonoFrac::from_poly(WPoly::gen_a())
}

pub fn bc_b() -> BC {
    MonoFrac::from_poly(WPoly::gen_b())
}

/// Relative 1-form P dz + Q d_e + R d_s with branch coefficients.
#[derive(Clone, Debug)]
pub struct BForm {
    pub dz: BSeries,
    pub de: BSeries,
    pub ds: BSeries,
}

impl BForm {
    pub fn zero_to(n: i64) -> Self {
        BForm {
            dz: Laurent::zero_to(n),
            de: Laurent::zero_to(n),
            ds: Laurent::zero_to(n),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        BForm {
            dz: self.dz.add(&rhs.dz),
            de: self.de.add(&rhs.de),
            ds: self.ds.add(&rhs.ds),
        }
    }

    pub fn neg(&self) -> Self {
        BForm {
            dz: self.dz.neg(),
            de: self.de.neg(),
            ds: self.ds.neg(),
        }
    }

    pub fn scale_series(&self, s: &BSeries) -> Self {
        BForm {
            dz: self.dz.mul(s),
            de: self.de.mul(s),
            ds: self.ds.mul(s),
        }
    }

    /// Pull back through z = sub(w). The substitution series depends on the
    /// base too, so dz = sub' dw + delta_e(sub) d_e + delta_s(sub) d_s.
    pub fn substitute(&self, sub: &BSeries, n: i64) -> Self {
        let p = self.dz.compose(sub, n).expect("substitution order");
        BForm {
            dz: p.mul(&sub.derive()),
            de: p
                .mul(&series_delta_e(sub))
                .add(&self.de.compose(sub, n).expect("substitution order")),
            ds: p
                .mul(&series_delta_s(sub))
                .add(&self.ds.compose(sub, n).expect("substitution order")),
        }
    }
}

/// Degree-1 hyperform: forms on U0 and U1, a function on U_int.
#[derive(Clone, Debug)]
pub struct Hyperform1 {
    pub comp0: BForm,
    pub comp1: BForm,
    pub comp_int: BSeries,
}

/// The representatives of the two second-kind classes, expanded to order n.
pub fn make_omega_eta(n: i64) -> (Hyperform1, Hyperform1) {
    assert!(n >= 16, "representatives need order at least 16");
    let x = bseries(&weierstrass::expand_basic(BasicSeries::X, n + 4).series);
    let y = bseries(&weierstrass::expand_basic(BasicSeries::Y, n + 4).series);
    let v0 = bseries(&weierstrass::expand_basic(BasicSeries::V0, n + 4).series);
    let z: BSeries = Laurent::var();
    let one: BSeries = Laurent::one();

    let omega = Hyperform1 {
        comp0: BForm {
            dz: one.clone(),
            de: z.clone(),
            ds: v0.clone().trim(n),
        },
        comp1: BForm {
            dz: one,
            de: z.clone().trim_keep(n),
            ds: Laurent::zero_to(n),
        },
        comp_int: Laurent::zero_exact(),
    };

    // eta_0 = x dz + x z d_e + (x v0 + y) d_s; the d_s part has no pole
    let xv0_y = x.mul(&v0).add(&y);
    debug_assert!(xv0_y.ord().is_none_or(|o| o >= 1));
    let a_third = bc_a().mul_rat_i64(-1, 3);
    let eta = Hyperform1 {
        comp0: BForm {
            dz: x.clone().trim(n),
            de: x.mul(&z).trim(n),
            ds: xv0_y.trim(n),
        },
        comp1: BForm {
            dz: Laurent::zero_to(n),
            de: Laurent::zero_to(n),
            ds: Laurent::monomial(a_third, 1).trim_keep(n),
        },
        comp_int: v0.trim(n),
    };
    (omega, eta)
}

trait Trim {
    fn trim(self, n: i64) -> Self;
    /// Keep the known coefficients but stamp an O(z^n) certificate.
    fn trim_keep(self, n: i64) -> Self;
}

impl Trim for BSeries {
    fn trim(self, n: i64) -> Self {
        let cut = self.cut().min(Cut::At(n));
        let ord = self.ord().unwrap_or(0);
        let coeffs: Vec<BC> = self
            .iter_known()
            .filter(|(k, _)| cut.covers(*k))
            .map(|(_, c)| c.clone())
            .collect();
        Laurent::new(ord, coeffs, cut)
    }
    fn trim_keep(self, n: i64) -> Self {
        let ord = self.ord().unwrap_or(0);
        let coeffs: Vec<BC> = self.iter_known().map(|(_, c)| c.clone()).collect();
        Laurent::new(ord, coeffs, Cut::At(n))
    }
}

/// Formal sum of exterior products of degree-1 hyperforms.
#[derive(Clone, Debug)]
pub struct Hyperform2 {
    pub terms: Vec<(BC, Hyperform1, Hyperform1)>,
}

/// Exterior product with the hypercover sign rule
/// (f x g)_{a x a'} = (-1)^{dim a (deg g - dim a')} f_a x g_{a'}.
pub fn hproduct(f: &Hyperform1, g: &Hyperform1) -> Hyperform2 {
    Hyperform2 {
        terms: vec![(BC::one(), f.clone(), g.clone())],
    }
}

impl Hyperform2 {
    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Hyperform2 { terms }
    }

    pub fn scale(&self, c: &BC) -> Self {
        Hyperform2 {
            terms: self
                .terms
                .iter()
                .map(|(k, f, g)| (k.mul_ref(c), f.clone(), g.clone()))
                .collect(),
        }
    }

    /// Component on the cell (U0, U_int) restricted along z2 = sub(z):
    /// sum of c * f.comp0(z) * g.comp_int(sub(z)). Sign +1 by the rule.
    pub fn comp_0int(&self, sub: &BSeries, n: i64) -> BForm {
        let mut acc = BForm::zero_to(n);
        for (c, f, g) in &self.terms {
            if g.comp_int.is_zero_exact() {
                continue;
            }
            let gi = g.comp_int.compose(sub, n).expect("ord(sub) >= 1");
            let term = f.comp0.scale_series(&gi.scale(c));
            acc = acc.add(&term);
        }
        acc
    }

    /// Component on the cell (U_int, U1) restricted along z2 = sub(z):
    /// sign -1 from dim a = 1, deg g - dim a' = 1.
    pub fn comp_int1(&self, sub: &BSeries, n: i64) -> BForm {
        let mut acc = BForm::zero_to(n);
        for (c, f, g) in &self.terms {
            if f.comp_int.is_zero_exact() {
                continue;
            }
            let g1 = g.comp1.substitute(sub, n);
            let term = g1.scale_series(&f.comp_int.scale(&c.neg_ref()));
            acc = acc.add(&term);
        }
        acc
    }

    /// Component on one flag cell.
    pub fn component(&self, cell: FlagCell, sub: &BSeries, n: i64) -> BForm {
        match cell {
            FlagCell::ZeroInt => self.comp_0int(sub, n),
            FlagCell::IntOne => self.comp_int1(sub, n),
        }
    }

    /// Restriction summed over a flag list.
    pub fn restricted_sum_flags(&self, flags: &[FlagCell], sub: &BSeries, n: i64) -> BForm {
        let mut acc = BForm::zero_to(n);
        for cell in flags {
            acc = acc.add(&self.component(*cell, sub, n));
        }
        acc
    }

    /// The summed restriction used by every residue consumer, over the
    /// standard flag list.
    pub fn restricted_sum(&self, sub: &BSeries, n: i64) -> BForm {
        self.restricted_sum_flags(STANDARD_FLAGS, sub, n)
    }
}

/// The residue cell a flag reads on the product cover: for a flag taking
/// the residue in the first factor the remaining factor sits in its small
/// chart (the (int, 1) cell); for a flag residing in the second factor the
/// first stays generic (the (0, int) cell).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FlagCell {
    ZeroInt,
    IntOne,
}

/// Both relevant curves (the diagonal and the cycle through infinity)
/// contribute exactly one flag through the point at infinity per factor;
/// callers with other curves can supply their own list.
pub const STANDARD_FLAGS: &[FlagCell] = &[FlagCell::ZeroInt, FlagCell::IntOne];

/// A scalar reported as (power of 2 pi i) * value.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingValue {
    pub two_pi_i_power: i32,
    pub value: GaussRat,
}

impl std::fmt::Display for PairingValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.two_pi_i_power {
            0 => write!(f, "{}", self.value),
            1 => write!(f, "(2*pi*i) * {}", self.value),
            p => write!(f, "(2*pi*i)^{} * {}", p, self.value),
        }
    }
}

/// Residue trace along the given flags of the diagonal through the point
/// at infinity: the sum of dz-part residues of the restricted components.
pub fn trace_diagonal_flags(h: &Hyperform2, flags: &[FlagCell], n: i64) -> LResult<BC> {
    let diag: BSeries = Laurent::var();
    let mut acc = BC::zero();
    for cell in flags {
        acc = acc.add_ref(&h.component(*cell, &diag, n).dz.residue()?);
    }
    Ok(acc)
}

/// Residue trace over the standard flag list.
pub fn trace_diagonal(h: &Hyperform2, n: i64) -> LResult<BC> {
    trace_diagonal_flags(h, STANDARD_FLAGS, n)
}

/// The Poincare pairing <f, g> = 2 pi i * Tr_diag(f x g).
pub fn poincare_pairing(f: &Hyperform1, g: &Hyperform1, n: i64) -> LResult<PairingValue> {
    let tr = trace_diagonal(&hproduct(f, g), n)?;
    let value = tr
        .numerator()
        .coeff((0, 0, 0));
    debug_assert!(tr.is_polynomial());
    debug_assert!(tr.numerator().num_terms() <= 1);
    Ok(PairingValue {
        two_pi_i_power: 1,
        value,
    })
}

/// Coefficient-wise Euler derivation (the fiber coordinate held fixed).
pub fn series_delta_e(s: &BSeries) -> BSeries {
    s.map(|c| c.delta_e())
}

/// Coefficient-wise Serre derivation (the fiber coordinate held fixed).
pub fn series_delta_s(s: &BSeries) -> BSeries {
    s.map(|c| c.delta_s())
}

/// 2-form A d_e^dz + B d_s^dz + C d_e^d_s.
struct Two {
    a: BSeries,
    b: BSeries,
}

/// Exterior differential of a 1-form, keeping only the d_e^dz and d_s^dz
/// parts (everything is checked modulo d_e^d_s).
fn d_of_form(f: &BForm) -> Two {
    Two {
        a: series_delta_e(&f.dz).sub(&f.de.derive()),
        b: series_delta_s(&f.dz).sub(&f.ds.derive()),
    }
}

/// d_e ^ form, modulo d_e^d_s.
fn de_wedge(f: &BForm) -> Two {
    Two {
        a: f.dz.clone(),
        b: Laurent::zero_exact(),
    }
}

/// d_s ^ form, modulo d_e^d_s.
fn ds_wedge(f: &BForm) -> Two {
    Two {
        a: Laurent::zero_exact(),
        b: f.dz.clone(),
    }
}

/// Differential of a U_int function as a 1-form.
fn d_of_function(g: &BSeries) -> BForm {
    BForm {
        dz: g.derive(),
        de: series_delta_e(g),
        ds: series_delta_s(g),
    }
}

#[derive(Debug, Clone)]
pub struct GmIdentity {
    pub name: &'static str,
    pub passed: bool,
    pub first_failure: Option<(String, i64)>,
}

#[derive(Debug, Clone)]
pub struct GmReport {
    pub identities: Vec<GmIdentity>,
}

impl GmReport {
    pub fn pass(&self) -> bool {
        self.identities.iter().all(|i| i.passed)
    }
}

fn check_two_zero(name: &'static str, t: &Two, min_cover: i64, report: &mut Vec<GmIdentity>) {
    let mut failure = None;
    for (label, s) in [("d_e^dz", &t.a), ("d_s^dz", &t.b)] {
        assert!(
            s.cut().covers(min_cover - 1),
            "{}: certificate below declared tail",
            name
        );
        if let Some((k, _)) = s.iter_known().find(|(_, c)| !c.is_zero()) {
            failure = Some((label.to_string(), k));
            break;
        }
    }
    report.push(GmIdentity {
        name,
        passed: failure.is_none(),
        first_failure: failure,
    });
}

fn check_form_equal(
    name: &'static str,
    got: &BForm,
    want: &BForm,
    report: &mut Vec<GmIdentity>,
) {
    let mut failure = None;
    for (label, s) in [
        ("dz", got.dz.sub(&want.dz)),
        ("d_e", got.de.sub(&want.de)),
        ("d_s", got.ds.sub(&want.ds)),
    ] {
        if let Some((k, _)) = s.iter_known().find(|(_, c)| !c.is_zero()) {
            failure = Some((label.to_string(), k));
            break;
        }
    }
    report.push(GmIdentity {
        name,
        passed: failure.is_none(),
        first_failure: failure,
    });
}

/// Verifies the Gauss-Manin table
///   grad_e omega = -omega, grad_s omega = eta,
///   grad_e eta = eta,      grad_s eta = (a/3) omega,
/// component-wise, modulo the declared O(z^{N-1}) tails and modulo d_e^d_s.
pub fn gauss_manin_check(n: i64) -> GmReport {
    assert!(n >= 16);
    let (omega, eta) = make_omega_eta(n);
    let mut ids = Vec::new();
    let third = bc_a().mul_rat_i64(1, 3);

    // d omega + d_e ^ omega - d_s ^ eta = 0 on U0 (exact) and U1 (mod tails)
    for (name, w_comp, e_comp) in [
        ("U0: d(omega) + d_e^omega - d_s^eta", &omega.comp0, &eta.comp0),
        ("U1: d(omega) + d_e^omega - d_s^eta", &omega.comp1, &eta.comp1),
    ] {
        let lhs = d_of_form(w_comp);
        let t1 = de_wedge(w_comp);
        let t2 = ds_wedge(e_comp);
        let resid = Two {
            a: lhs.a.add(&t1.a).sub(&t2.a),
            b: lhs.b.add(&t1.b).sub(&t2.b),
        };
        check_two_zero(name, &resid, n - 1, &mut ids);
    }

    // d eta - d_e ^ eta - (a/3) d_s ^ omega = 0 on U0 and U1
    for (name, e_comp, w_comp) in [
        ("U0: d(eta) - d_e^eta - (a/3) d_s^omega", &eta.comp0, &omega.comp0),
        ("U1: d(eta) - d_e^eta - (a/3) d_s^omega", &eta.comp1, &omega.comp1),
    ] {
        let lhs = d_of_form(e_comp);
        let t1 = de_wedge(e_comp);
        let t2 = ds_wedge(w_comp);
        let resid = Two {
            a: lhs.a.sub(&t1.a).sub(&t2.a.scale(&third)),
            b: lhs.b.sub(&t1.b).sub(&t2.b.scale(&third)),
        };
        check_two_zero(name, &resid, n - 1, &mut ids);
    }

    // intersection components:
    // d omega_int - omega_1 + omega_0 = d_s * eta_int - d_e * omega_int
    {
        let lhs = d_of_function(&omega.comp_int)
            .add(&omega.comp1.neg())
            .add(&omega.comp0);
        let want = BForm {
            dz: Laurent::zero_exact(),
            de: Laurent::zero_exact(),
            ds: eta.comp_int.clone(),
        };
        check_form_equal("int: d(omega_int) - omega_1 + omega_0 = eta_int d_s", &lhs, &want, &mut ids);
    }
    // d eta_int - eta_1 + eta_0 = d_e * eta_int + (a/3) d_s * omega_int
    {
        let lhs = d_of_function(&eta.comp_int)
            .add(&eta.comp1.neg())
            .add(&eta.comp0);
        let want = BForm {
            dz: Laurent::zero_exact(),
            de: eta.comp_int.clone(),
            ds: Laurent::zero_exact(),
        };
        check_form_equal("int: d(eta_int) - eta_1 + eta_0 = eta_int d_e", &lhs, &want, &mut ids);
    }

    GmReport { identities: ids }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn g(n: i64, d: i64) -> GaussRat {
        GaussRat::from_rat(rat(n, d))
    }

    #[test]
    fn omega_eta_shapes() {
        let (omega, eta) = make_omega_eta(16);
        assert!(omega.comp_int.is_zero_exact());
        // eta_0 d_s part x v0 + y has its pole cancelled
        assert!(eta.comp0.ds.ord().unwrap() >= 1);
        // eta_1 leading d_s term is -(a/3) z
        let lead = eta.comp1.ds.coeff(1).unwrap();
        assert_eq!(lead, bc_a().mul_rat_i64(-1, 3));
    }

    #[test]
    fn poincare_pairing_values() {
        let n = 20;
        let (omega, eta) = make_omega_eta(n);
        // Tr(omega x eta) = 1, so <omega, eta> = 2 pi i
        let t = trace_diagonal(&hproduct(&omega, &eta), n).unwrap();
        assert_eq!(t, BC::one());
        let p = poincare_pairing(&omega, &eta, n).unwrap();
        assert_eq!(p.two_pi_i_power, 1);
        assert_eq!(p.value, g(1, 1));
        // antisymmetry
        let t = trace_diagonal(&hproduct(&eta, &omega), n).unwrap();
        assert_eq!(t, BC::one().neg_ref());
        let t = trace_diagonal(&hproduct(&omega, &omega), n).unwrap();
        assert!(t.is_zero());
        let t = trace_diagonal(&hproduct(&eta, &eta), n).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn flags_are_supplied_as_a_list() {
        // the two flags contribute separately; their sum is the trace
        let n = 18;
        let (omega, eta) = make_omega_eta(n);
        let h = hproduct(&eta, &omega);
        let zero_int = trace_diagonal_flags(&h, &[FlagCell::ZeroInt], n).unwrap();
        let int_one = trace_diagonal_flags(&h, &[FlagCell::IntOne], n).unwrap();
        assert!(zero_int.is_zero());
        assert_eq!(int_one, BC::one().neg_ref());
        assert_eq!(
            trace_diagonal(&h, n).unwrap(),
            zero_int.add_ref(&int_one)
        );
    }

    #[test]
    fn gauss_manin_table_holds() {
        let report = gauss_manin_check(20);
        for id in &report.identities {
            assert!(id.passed, "{}: failed at {:?}", id.name, id.first_failure);
        }
    }
}
