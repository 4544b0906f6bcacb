//! The two branches of the curve W: x1 + x2 = 0 through infinity in E x E,
//! the rational function f = y1 - i y2 on W, its logarithmic differential,
//! and the residue functionals Psi_1, Psi_0 evaluated over the branches.

use crate::hyperform::{bc_i, bseries, BForm, BSeries, Hyperform2, BC};
use crate::laurent::{Cut, LResult, Laurent};
use crate::ring::Ring;
use crate::weierstrass::{self, BasicSeries};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BranchCase {
    /// z2 = +i (z + ...)
    Plus,
    /// z2 = -i (z + ...)
    Minus,
}

/// One branch of W at infinity in the coordinate z = z1.
#[derive(Clone, Debug)]
pub struct BranchData {
    pub case: BranchCase,
    /// z2(z), an odd series of order 1 over Q(i)[a,b]
    pub z2: BSeries,
    /// f = y(z) - i y(z2(z))
    pub f: BSeries,
    pub order: i64,
}

/// Solve x(z1) + x(z2) = 0 for z2 as a series in z = z1 and expand f on both
/// branches. The plus branch is returned first.
pub fn build_branches(n: i64) -> (BranchData, BranchData) {
    let x = bseries(&weierstrass::expand_basic(BasicSeries::X, n + 6).series);
    let y = bseries(&weierstrass::expand_basic(BasicSeries::Y, n + 6).series);

    // 1/x = z^2 (1 - ...) is an even series; as a series in s = z^2 it has
    // order 1, so the equation 1/x(z2) = -1/x(z) inverts for w = z2^2
    let xinv = x.inv(n + 6).expect("x has unit leading coefficient");
    let phi = even_to_s(&xinv);
    let phi_inv = phi.revert((n + 6) / 2 + 2).expect("phi has order 1");
    let w = phi_inv
        .compose(&xinv.neg(), n + 6)
        .expect("rhs has order 2");
    // w = -z^2 - (2b/7) z^8 - ...; the +i square root first
    let z2_plus = w.sqrt(n + 4).expect("even order, leading -1");
    debug_assert_eq!(z2_plus.coeff(1).unwrap(), bc_i());
    let z2_minus = z2_plus.neg();

    let mk = |case, z2: BSeries| {
        let y2 = y.compose(&z2, n + 2).expect("z2 has order 1");
        let f = y.sub(&y2.scale(&bc_i())).trim_to_cut(n);
        BranchData {
            case,
            z2: z2.trim_to_cut(n + 2),
            f,
            order: n,
        }
    };
    let plus = mk(BranchCase::Plus, z2_plus);
    let minus = mk(BranchCase::Minus, z2_minus);

    // branch consistency: f_plus * f_minus = 2b exactly through the
    // available order ((y1 - i y2)(y1 + i y2) = y1^2 + y2^2 = 2b on W)
    let prod = plus.f.mul(&minus.f);
    let two_b = crate::hyperform::bc_b().mul_i64(2);
    let diff = prod.sub(&Laurent::constant(two_b));
    assert!(
        diff.is_zero_sofar(),
        "branch product is not 2b: {:?}",
        diff
    );
    (plus, minus)
}

/// Reindex an even series sum c_{2k} z^{2k} as sum c_{2k} s^k.
fn even_to_s(f: &BSeries) -> BSeries {
    let mut coeffs = Vec::new();
    let ord = f.ord().expect("nonzero");
    assert!(ord % 2 == 0);
    let cut = match f.cut() {
        Cut::Exact => Cut::Exact,
        Cut::At(t) => Cut::At((t + 1).div_euclid(2)),
    };
    let top = match f.cut() {
        Cut::Exact => ord + 2 * 64,
        Cut::At(t) => t,
    };
    let mut k = ord;
    while k < top {
        assert!(f
            .coeff(k + 1)
            .map(|c| c.is_zero())
            .unwrap_or(true));
        coeffs.push(f.coeff(k).unwrap_or_else(|_| BC::zero()));
        k += 2;
    }
    Laurent::new(ord / 2, coeffs, cut)
}

trait TrimCut {
    fn trim_to_cut(self, n: i64) -> Self;
}

impl TrimCut for BSeries {
    fn trim_to_cut(self, n: i64) -> Self {
        let cut = self.cut().min(Cut::At(n));
        let ord = self.ord().unwrap_or(0);
        let coeffs: Vec<BC> = self
            .iter_known()
            .filter(|(k, _)| cut.covers(*k))
            .map(|(_, c)| c.clone())
            .collect();
        Laurent::new(ord, coeffs, cut)
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum BranchError {
    #[error("f has vanishing leading coefficient (b = 0 is excluded)")]
    DivisionByZeroSeries,
    #[error(transparent)]
    Laurent(#[from] crate::laurent::LaurentError),
}

/// df/f on a branch, in the (dz, d_e, d_s) basis.
///
/// df is assembled from the total differentials of y on both factors, the
/// second factor pulled back through z2(z).
pub fn dlog_f(branch: &BranchData, n: i64) -> Result<BForm, BranchError> {
    let dy = weierstrass::total_differential(BasicSeries::Y, n + 4);
    let dy = BForm {
        dz: bseries(&dy.dz.series),
        de: bseries(&dy.de.series),
        ds: bseries(&dy.ds.series),
    };
    let dy2 = dy.substitute(&branch.z2, n + 2);
    let m_i = bc_i().neg_ref();
    let df = BForm {
        dz: dy.dz.add(&dy2.dz.scale(&m_i)),
        de: dy.de.add(&dy2.de.scale(&m_i)),
        ds: dy.ds.add(&dy2.ds.scale(&m_i)),
    };
    let finv = branch
        .f
        .inv(n)
        .map_err(|_| BranchError::DivisionByZeroSeries)?;
    Ok(df.scale_series(&finv))
}

/// d_e ^ dz and d_s ^ dz coefficients of (df/f) ^ theta_s on a branch.
fn wedge_parts(dl: &BForm, theta: &BForm) -> (BSeries, BSeries) {
    // (A dz + B d_e + C d_s) ^ (P dz + Q d_e + R d_s):
    //   d_e^dz : B P - A Q
    //   d_s^dz : C P - A R
    let de_dz = dl.de.mul(&theta.dz).sub(&dl.dz.mul(&theta.de));
    let ds_dz = dl.ds.mul(&theta.dz).sub(&dl.dz.mul(&theta.ds));
    (de_dz, ds_dz)
}

/// Psi_1 of a 2-hyperform: residues of the d_e (x) dz and d_s (x) dz parts
/// of (df/f) ^ theta_s, summed over both branches. The (2 pi i)^{-1}
/// normalization cancels against the 2 pi i of the residue theorem, so the
/// reported pair is exact.
pub fn psi1(theta: &Hyperform2, branches: &(BranchData, BranchData)) -> LResult<(BC, BC)> {
    let mut de_acc = BC::zero();
    let mut ds_acc = BC::zero();
    for br in [&branches.0, &branches.1] {
        let n = br.order;
        let dl = dlog_f(br, n).expect("b != 0 on valid branches");
        let th = theta.restricted_sum(&br.z2, n);
        let (de_dz, ds_dz) = wedge_parts(&dl, &th);
        de_acc = de_acc.add_ref(&de_dz.residue()?);
        ds_acc = ds_acc.add_ref(&ds_dz.residue()?);
    }
    Ok((de_acc, ds_acc))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BaseDir {
    De,
    Ds,
}

/// Psi_0 on a wedge-decomposed 3-hyperform u ^ theta: the d_e^d_s (x) dz
/// graded coefficient of (df/f) ^ u ^ theta_s, summed over branches.
pub fn psi0(u: BaseDir, theta: &Hyperform2, branches: &(BranchData, BranchData)) -> LResult<BC> {
    let mut acc = BC::zero();
    for br in [&branches.0, &branches.1] {
        let n = br.order;
        let dl = dlog_f(br, n).expect("b != 0 on valid branches");
        let th = theta.restricted_sum(&br.z2, n);
        // (A dz + B d_e + C d_s) ^ u ^ (P dz + Q d_e + R d_s),
        // coefficient of d_e ^ d_s ^ dz:
        //   u = d_e: A R - C P
        //   u = d_s: B P - A Q
        let part = match u {
            BaseDir::De => dl.dz.mul(&th.ds).sub(&dl.ds.mul(&th.dz)),
            BaseDir::Ds => dl.de.mul(&th.dz).sub(&dl.dz.mul(&th.de)),
        };
        acc = acc.add_ref(&part.residue()?);
    }
    Ok(acc)
}
