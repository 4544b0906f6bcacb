//! The module generated by 1, theta^0, theta^1, theta^2 over Q(i)(a,b) with
//! the derivation action determined by the residue functionals, and the
//! evaluation of the canonical third-order operator on it.

use crate::hyperform::{bc_a, bc_b, bc_i, BC};
use crate::qmpoly::{QMPoly, QmRatio};
use crate::ring::{rat, GaussRat, Ring};
use crate::wpoly::{MonoFrac, WPoly};

/// c_s + c_0 theta^0 + c_1 theta^1 + c_2 theta^2.
#[derive(Clone, PartialEq, Debug)]
pub struct DModElem {
    pub scalar: BC,
    pub t0: BC,
    pub t1: BC,
    pub t2: BC,
}

impl DModElem {
    pub fn zero() -> Self {
        DModElem {
            scalar: BC::zero(),
            t0: BC::zero(),
            t1: BC::zero(),
            t2: BC::zero(),
        }
    }

    pub fn theta0() -> Self {
        DModElem {
            t0: BC::one(),
            ..Self::zero()
        }
    }

    pub fn theta1() -> Self {
        DModElem {
            t1: BC::one(),
            ..Self::zero()
        }
    }

    pub fn theta2() -> Self {
        DModElem {
            t2: BC::one(),
            ..Self::zero()
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        DModElem {
            scalar: self.scalar.add_ref(&rhs.scalar),
            t0: self.t0.add_ref(&rhs.t0),
            t1: self.t1.add_ref(&rhs.t1),
            t2: self.t2.add_ref(&rhs.t2),
        }
    }

    pub fn scale(&self, c: &BC) -> Self {
        DModElem {
            scalar: self.scalar.mul_ref(c),
            t0: self.t0.mul_ref(c),
            t1: self.t1.mul_ref(c),
            t2: self.t2.mul_ref(c),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&BC::one().neg_ref())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DModDerivation {
    EulerPrime,
    SerrePrime,
}

/// 8 i a^2 / (3 b).
fn c_eight() -> BC {
    MonoFrac::new(
        WPoly::mono(GaussRat::new(rat(0, 1), rat(8, 3)), 2, 0),
        0,
        1,
    )
}

/// -4 i a.
fn c_four() -> BC {
    MonoFrac::from_poly(WPoly::mono(GaussRat::new(rat(0, 1), rat(-4, 1)), 1, 0))
}

/// The derivation action:
///   de' theta^0 = -2 theta^0, de' theta^1 = 0, de' theta^2 = 2 theta^2,
///   ds' theta^0 = theta^1,
///   ds' theta^1 = 2 theta^2 + (2a/3) theta^0 + 8ia^2/(3b),
///   ds' theta^2 = (a/3) theta^1 - 4ia,
/// extended to coefficients in Q(i)(a,b) by the Leibniz rule.
pub fn dmod_apply(d: DModDerivation, x: &DModElem) -> DModElem {
    match d {
        DModDerivation::EulerPrime => DModElem {
            scalar: x.scalar.delta_e(),
            t0: x.t0.delta_e().add_ref(&x.t0.mul_i64(-2)),
            t1: x.t1.delta_e(),
            t2: x.t2.delta_e().add_ref(&x.t2.mul_i64(2)),
        },
        DModDerivation::SerrePrime => {
            let two_a_third = bc_a().mul_rat_i64(2, 3);
            let a_third = bc_a().mul_rat_i64(1, 3);
            DModElem {
                scalar: x
                    .scalar
                    .delta_s()
                    .add_ref(&x.t1.mul_ref(&c_eight()))
                    .add_ref(&x.t2.mul_ref(&c_four())),
                t0: x.t0.delta_s().add_ref(&x.t1.mul_ref(&two_a_third)),
                t1: x
                    .t1
                    .delta_s()
                    .add_ref(&x.t0)
                    .add_ref(&x.t2.mul_ref(&a_third)),
                t2: x.t2.delta_s().add_ref(&x.t1.mul_i64(2)),
            }
        }
    }
}

/// Result of evaluating the canonical operator on theta^0.
#[derive(Clone, Debug)]
pub struct BEvaluation {
    /// the scalar component 24ia + 32ia^4/(9b^2)
    pub scalar_part: BC,
    /// the transported weight-4 meromorphic modular form
    pub modform: QmRatio,
    /// the same form written over j - 1728
    pub modform_j: QmRatio,
    /// carried multiplier of the operator: (2 pi i)^{-3} [omega]^4
    pub multiplier: &'static str,
}

/// Applies ds'^3 - (4a/3) ds' - 4b to theta^0 and transports the scalar
/// component through the modular dictionary.
pub fn eval_b() -> BEvaluation {
    let t0 = DModElem::theta0();
    let d1 = dmod_apply(DModDerivation::SerrePrime, &t0);
    let d2 = dmod_apply(DModDerivation::SerrePrime, &d1);
    let d3 = dmod_apply(DModDerivation::SerrePrime, &d2);
    let four_a_third = bc_a().mul_rat_i64(4, 3);
    let four_b = bc_b().mul_i64(4);
    let total = d3
        .add(&d1.scale(&four_a_third).neg())
        .add(&t0.scale(&four_b).neg());
    assert!(
        total.t0.is_zero() && total.t1.is_zero() && total.t2.is_zero(),
        "theta components must cancel in the canonical operator"
    );
    let scalar_part = total.scalar;

    // transported form: 2 pi i * mu(scalar) as a ratio of E4, E6 polynomials
    let num_poly = scalar_part.numerator().map(|g| g.clone());
    let (da, db) = scalar_part.denominator();
    let mu_num = mu_gauss(&num_poly).scale(&GaussRat::new(rat(0, 1), rat(2, 1)));
    let mu_den = mu_gauss(&WPoly::mono(GaussRat::one(), da, db));
    let modform = QmRatio::new(mu_num, mu_den, 1);

    // the j-form -1728 pi E4/(j - 1728): using j - 1728 = 1728 E6^2/(E4^3 - E6^2)
    // this is -1728 pi E4 (E4^3 - E6^2) / (1728 E6^2)
    let disc = QMPoly::e4().pow(3).sub_ref(&QMPoly::e6().pow(2));
    let modform_j = QmRatio::new(
        QMPoly::e4()
            .mul_ref(&disc)
            .scale(&GaussRat::from_rat(rat(-1728, 1))),
        QMPoly::e6().pow(2).scale(&GaussRat::from_rat(rat(1728, 1))),
        1,
    );
    BEvaluation {
        scalar_part,
        modform,
        modform_j,
        multiplier: "(2*pi*i)^-3 [omega]^4",
    }
}

/// The dictionary on Q(i)-coefficient polynomials.
pub fn mu_gauss(p: &WPoly<GaussRat>) -> QMPoly {
    let a_img = QMPoly::e4().scale(&GaussRat::from_rat(rat(-1, 48)));
    let b_img = QMPoly::e6().scale(&GaussRat::from_rat(rat(1, 864)));
    let e2_img = QMPoly::e2();
    let mut acc = QMPoly::zero();
    for (&(m, n, q), c) in p.terms() {
        let mut t = QMPoly::constant(c.clone());
        for _ in 0..m {
            t = t.mul_ref(&a_img);
        }
        for _ in 0..n {
            t = t.mul_ref(&b_img);
        }
        for _ in 0..q {
            t = t.mul_ref(&e2_img);
        }
        acc = acc.add_ref(&t);
    }
    acc
}

/// Cross-check that the derivation table reproduces the residue computation:
/// ds' theta^0 should be theta^1 whose Psi_1 d_s value is -8ia^2/(3b), and
/// the tabulated iterated derivatives should match.
pub fn dmod_table_check() -> bool {
    let t0 = DModElem::theta0();
    let d2 = dmod_apply(
        DModDerivation::SerrePrime,
        &dmod_apply(DModDerivation::SerrePrime, &t0),
    );
    // ds'^2 theta^0 = 2 theta^2 + (2a/3) theta^0 + 8ia^2/(3b)
    let ok2 = d2.t2 == BC::from_i64(2)
        && d2.t0 == bc_a().mul_rat_i64(2, 3)
        && d2.t1.is_zero()
        && d2.scalar == c_eight();
    // ds'^3 theta^0 = (4a/3) theta^1 + 4b theta^0 + 24ia + 32ia^4/(9b^2)
    let d3 = dmod_apply(DModDerivation::SerrePrime, &d2);
    let expect_scalar = MonoFrac::from_poly(WPoly::mono(
        GaussRat::new(rat(0, 1), rat(24, 1)),
        1,
        0,
    ))
    .add_ref(&MonoFrac::new(
        WPoly::mono(GaussRat::new(rat(0, 1), rat(32, 9)), 4, 0),
        0,
        2,
    ));
    let ok3 = d3.t1 == bc_a().mul_rat_i64(4, 3)
        && d3.t0 == bc_b().mul_i64(4)
        && d3.t2.is_zero()
        && d3.scalar == expect_scalar;
    let _ = bc_i();
    ok2 && ok3
}
