//! The higher cycle (W, f) with W: x1 + x2 = 0, f = y1 - i y2, and its exact
//! intersection numbers with the algebraic cycles Z1, Z2, the diagonal and
//! graphs of endomorphisms, via deformation and branch leading terms.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rug::Rational;

use crate::bifield::{field_norm, BiField, TowerElem};
use crate::branch::{build_branches, BranchData};
use crate::hyperform::BC;
use crate::laurent::Laurent;
use crate::quad::QuadExt;
use crate::ring::{GaussRat, Ring};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum CycleError {
    #[error("degenerate curve: the discriminant vanishes or b = 0")]
    DegenerateCurve,
    #[error("intersection is not proper: {0}")]
    NonProperIntersection(String),
    #[error("endomorphism failed validation: {0}")]
    UnvalidatedEndo(String),
    #[error("cycle class system is singular")]
    SingularSystem,
    #[error("endomorphism file is over an unsupported CM field (expected mu^2 + mu + 2 = 0)")]
    UnsupportedCmField,
    #[error("endomorphism file: {0}")]
    Parse(String),
    #[error("finite intersection locus has degree {0}; only degrees 1 and 2 are supported")]
    UnsupportedDegree(usize),
}

/// Exact Weierstrass coefficients of one curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveParams {
    pub a: Rational,
    pub b: Rational,
}

impl CurveParams {
    pub fn new(a: Rational, b: Rational) -> Result<Self, CycleError> {
        let p = CurveParams { a, b };
        if p.discriminant() == 0 || p.b == 0 {
            return Err(CycleError::DegenerateCurve);
        }
        Ok(p)
    }

    pub fn tau7() -> Self {
        CurveParams {
            a: Rational::from(-35),
            b: Rational::from(-98),
        }
    }

    /// -16 (4 a^3 + 27 b^2).
    pub fn discriminant(&self) -> Rational {
        let a3 = Rational::from(&self.a * &self.a) * &self.a;
        let b2 = Rational::from(&self.b * &self.b);
        (a3 * Rational::from(4) + b2 * Rational::from(27)) * Rational::from(-16)
    }
}

/// Univariate polynomial over the biquadratic field, ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct KPoly(pub Vec<BiField>);

impl KPoly {
    fn normalize(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }
    fn zero() -> Self {
        KPoly(vec![])
    }
    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        let n = self.0.len().max(rhs.0.len());
        let mut out = vec![BiField::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] = out[i].add_ref(c);
        }
        for (i, c) in rhs.0.iter().enumerate() {
            out[i] = out[i].add_ref(c);
        }
        KPoly(out).normalize()
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.0.is_empty() || rhs.0.is_empty() {
            return KPoly::zero();
        }
        let mut out = vec![BiField::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, c) in self.0.iter().enumerate() {
            for (j, d) in rhs.0.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&c.mul_ref(d));
            }
        }
        KPoly(out).normalize()
    }
    fn scale(&self, c: &BiField) -> Self {
        KPoly(self.0.iter().map(|x| x.mul_ref(c)).collect()).normalize()
    }
    fn shift_x(&self) -> Self {
        // multiply by x
        let mut v = vec![BiField::zero()];
        v.extend(self.0.iter().cloned());
        KPoly(v)
    }
    fn eval_base(&self, x: &BiField) -> BiField {
        let mut acc = BiField::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }
    fn eval_tower(&self, t: &TowerElem) -> TowerElem {
        let mut acc = TowerElem::from_base(BiField::zero(), t.minpoly.clone());
        for c in self.0.iter().rev() {
            acc = acc.mul(t).add(&TowerElem::from_base(c.clone(), t.minpoly.clone()));
        }
        acc
    }
}

/// Endomorphism data: x-coordinate map X(x) = xnum/xden, y-factor
/// phi_y(x, y) = y * ynum(x)/yden(x), tangent scalar and pairing triple.
#[derive(Clone, Debug)]
pub struct Endomorphism {
    pub x_num: KPoly,
    pub x_den: KPoly,
    pub y_num: KPoly,
    pub y_den: KPoly,
    pub mu_act: BiField,
    pub degree: i64,
    /// intersection numbers with Z1, Z2, Delta_E
    pub pairing: (i64, i64, i64),
    validated: bool,
}

impl Endomorphism {
    /// The identity map: X = x, y-factor 1.
    pub fn identity() -> Self {
        let mut e = Endomorphism {
            x_num: KPoly(vec![BiField::zero(), BiField::one()]),
            x_den: KPoly(vec![BiField::one()]),
            y_num: KPoly(vec![BiField::one()]),
            y_den: KPoly(vec![BiField::one()]),
            mu_act: BiField::one(),
            degree: 1,
            pairing: (1, 1, 0),
            validated: false,
        };
        e.validated = true;
        e
    }

    /// Multiplication by -1: X = x, y-factor -1.
    pub fn minus_one() -> Self {
        let mut e = Endomorphism {
            x_num: KPoly(vec![BiField::zero(), BiField::one()]),
            x_den: KPoly(vec![BiField::one()]),
            y_num: KPoly(vec![BiField::from_i64(-1)]),
            y_den: KPoly(vec![BiField::one()]),
            mu_act: BiField::from_i64(-1),
            degree: 1,
            pairing: (1, 1, 4),
            validated: false,
        };
        e.validated = true;
        e
    }

    /// The complex multiplication of the curve y^2 = x^3 - 35x - 98 by
    /// mu = (-1 + sqrt(-7))/2.
    pub fn tau7_builtin() -> Self {
        let text = tau7_endo_text();
        let mut e = parse_endomorphism(&text).expect("builtin data parses");
        e.validate(&CurveParams::tau7()).expect("builtin validates");
        e
    }

    /// Checks the curve equation is preserved:
    /// (x^3+ax+b) ynum^2 xden^3 = (xnum^3 + a xnum xden^2 + b xden^3) yden^2,
    /// and degree = Norm(mu_act).
    pub fn validate(&mut self, curve: &CurveParams) -> Result<(), CycleError> {
        let a = BiField::from_rat(curve.a.clone());
        let b = BiField::from_rat(curve.b.clone());
        let cubic = KPoly(vec![
            b.clone(),
            a.clone(),
            BiField::zero(),
            BiField::one(),
        ]);
        let lhs = cubic
            .mul(&self.y_num.mul(&self.y_num))
            .mul(&self.x_den.mul(&self.x_den).mul(&self.x_den));
        let xn = &self.x_num;
        let xd = &self.x_den;
        let rhs_inner = xn
            .mul(xn)
            .mul(xn)
            .add(&xn.mul(&xd.mul(xd)).scale(&a))
            .add(&xd.mul(xd).mul(xd).scale(&b));
        let rhs = rhs_inner.mul(&self.y_den.mul(&self.y_den));
        if lhs != rhs {
            return Err(CycleError::UnvalidatedEndo(
                "curve equation is not preserved".into(),
            ));
        }
        let norm = self
            .mu_act
            .mul_ref(&self.mu_act.conj_mu())
            .as_rational()
            .ok_or_else(|| CycleError::UnvalidatedEndo("tangent scalar not in Q(mu)".into()))?;
        if norm != self.degree {
            return Err(CycleError::UnvalidatedEndo(format!(
                "degree {} differs from Norm(mu_act) = {}",
                self.degree, norm
            )));
        }
        self.validated = true;
        Ok(())
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }
}

/// Parse one field element written as "p" or "p,q" (meaning p + q mu).
fn parse_elem(s: &str) -> Result<BiField, CycleError> {
    let mut parts = s.split(',');
    let p = parts.next().ok_or_else(|| CycleError::Parse("empty element".into()))?;
    let p = Rational::from_str(p.trim())
        .map_err(|_| CycleError::Parse(format!("bad rational: {}", s)))?;
    let q = match parts.next() {
        Some(q) => Rational::from_str(q.trim())
            .map_err(|_| CycleError::Parse(format!("bad rational: {}", s)))?,
        None => Rational::new(),
    };
    if parts.next().is_some() {
        return Err(CycleError::Parse(format!("too many components: {}", s)));
    }
    Ok(BiField::new(p, q, Rational::new(), Rational::new()))
}

fn parse_poly(rest: &[&str]) -> Result<KPoly, CycleError> {
    let mut v = Vec::new();
    for tok in rest {
        v.push(parse_elem(tok)?);
    }
    Ok(KPoly(v).normalize())
}

/// Parses the endomorphism text format:
/// a `cm-endomorphism v1` header, `minpoly c0 c1` (monic, mu^2+c1 mu+c0),
/// `mu p,q`, `degree n`, `pairing n1 n2 n3`, then coefficient lists
/// `xnum ...`, `xden ...`, `ynum ...`, `yden ...` with rationals as
/// decimal strings.
pub fn parse_endomorphism(text: &str) -> Result<Endomorphism, CycleError> {
    let mut minpoly = None;
    let mut mu_act = None;
    let mut degree = None;
    let mut pairing = None;
    let mut xnum = None;
    let mut xden = None;
    let mut ynum = None;
    let mut yden = None;
    let mut saw_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if line != "cm-endomorphism v1" {
                return Err(CycleError::Parse(format!(
                    "line {}: expected header 'cm-endomorphism v1'",
                    lineno + 1
                )));
            }
            saw_header = true;
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "minpoly" => {
                if toks.len() != 3 {
                    return Err(CycleError::Parse("minpoly needs c0 c1".into()));
                }
                let c0 = Rational::from_str(toks[1])
                    .map_err(|_| CycleError::Parse("bad minpoly coefficient".into()))?;
                let c1 = Rational::from_str(toks[2])
                    .map_err(|_| CycleError::Parse("bad minpoly coefficient".into()))?;
                minpoly = Some((c0, c1));
            }
            "mu" => mu_act = Some(parse_elem(toks.get(1).copied().unwrap_or(""))?),
            "degree" => {
                degree = Some(
                    toks.get(1)
                        .and_then(|t| t.parse::<i64>().ok())
                        .ok_or_else(|| CycleError::Parse("bad degree".into()))?,
                )
            }
            "pairing" => {
                if toks.len() != 4 {
                    return Err(CycleError::Parse("pairing needs three integers".into()));
                }
                let p: Vec<i64> = toks[1..]
                    .iter()
                    .map(|t| t.parse::<i64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| CycleError::Parse("bad pairing".into()))?;
                pairing = Some((p[0], p[1], p[2]));
            }
            "xnum" => xnum = Some(parse_poly(&toks[1..])?),
            "xden" => xden = Some(parse_poly(&toks[1..])?),
            "ynum" => ynum = Some(parse_poly(&toks[1..])?),
            "yden" => yden = Some(parse_poly(&toks[1..])?),
            other => {
                return Err(CycleError::Parse(format!(
                    "line {}: unknown key {}",
                    lineno + 1,
                    other
                )))
            }
        }
    }
    let (c0, c1) = minpoly.ok_or_else(|| CycleError::Parse("missing minpoly".into()))?;
    if c0 != 2 || c1 != 1 {
        return Err(CycleError::UnsupportedCmField);
    }
    Ok(Endomorphism {
        x_num: xnum.ok_or_else(|| CycleError::Parse("missing xnum".into()))?,
        x_den: xden.ok_or_else(|| CycleError::Parse("missing xden".into()))?,
        y_num: ynum.ok_or_else(|| CycleError::Parse("missing ynum".into()))?,
        y_den: yden.ok_or_else(|| CycleError::Parse("missing yden".into()))?,
        mu_act: mu_act.ok_or_else(|| CycleError::Parse("missing mu".into()))?,
        degree: degree.ok_or_else(|| CycleError::Parse("missing degree".into()))?,
        pairing: pairing.ok_or_else(|| CycleError::Parse("missing pairing".into()))?,
        validated: false,
    })
}

pub fn load_endomorphism(path: &Path, curve: &CurveParams) -> Result<Endomorphism, CycleError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CycleError::Parse(format!("{}: {}", path.display(), e)))?;
    let mut e = parse_endomorphism(&text)?;
    e.validate(curve)?;
    Ok(e)
}

/// The shipped tau_7 endomorphism in the file format.
pub fn tau7_endo_text() -> String {
    "cm-endomorphism v1\n\
     # complex multiplication by mu = (-1 + sqrt(-7))/2 on y^2 = x^3 - 35x - 98\n\
     minpoly 2 1\n\
     mu 0,1\n\
     degree 2\n\
     pairing 1 2 4\n\
     # X(x) = mu^-2 (x + (3mu+5)^2/(x + mu + 4))\n\
     xnum -49/4,-35/4 -3/2,1/2 -1/4,1/4\n\
     xden 4,1 1,0\n\
     # y-factor mu^-3 (1 - (3mu+5)^2/(x + mu + 4)^2)\n\
     ynum 49/8,-21/8 5/2,3/2 3/8,1/8\n\
     yden 14,7 8,2 1,0\n"
        .to_string()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasicCycle {
    Z1,
    Z2,
    DiagE,
}

/// Evaluate the symbolic branch-series coefficient ring element at a curve.
fn bc_eval(c: &BC, p: &CurveParams) -> GaussRat {
    let a = GaussRat::from_rat(p.a.clone());
    let b = GaussRat::from_rat(p.b.clone());
    c.eval(&a, &b).expect("b != 0 was checked")
}

fn gauss_to_bifield(g: &GaussRat) -> BiField {
    BiField::from_gauss(g)
}

/// Branch expansions shared by the intersection routines.
fn branches() -> (BranchData, BranchData) {
    build_branches(16)
}

/// Intersection with Z1 = [infty] x E, Z2 = E x [infty], or the diagonal.
pub fn intersect_basic(which: BasicCycle, p: &CurveParams) -> Result<BiField, CycleError> {
    if p.discriminant() == 0 || p.b == 0 {
        return Err(CycleError::DegenerateCurve);
    }
    let (plus, minus) = branches();
    match which {
        BasicCycle::Z1 => {
            // deformation {z} x E: the two intersection points carry the two
            // branch expansions of f; their product must be z-free
            let prod = plus.f.mul(&minus.f);
            let val = constant_of(&prod)?;
            Ok(gauss_to_bifield(&bc_eval(&val, p)))
        }
        BasicCycle::Z2 => {
            // deformation E x {z}: re-expand f on both branches in the
            // coordinate z2 by reverting z2(z)
            let n = 12;
            let mut prod: Option<Laurent<BC>> = None;
            for br in [&plus, &minus] {
                let z_of_z2 = br.z2.revert(n).expect("branch has order 1");
                let f_in_z2 = br.f.compose(&z_of_z2, n).expect("order 1");
                prod = Some(match prod {
                    None => f_in_z2,
                    Some(q) => q.mul(&f_in_z2),
                });
            }
            let val = constant_of(&prod.unwrap())?;
            Ok(gauss_to_bifield(&bc_eval(&val, p)))
        }
        BasicCycle::DiagE => intersect_graph(&Endomorphism::identity(), p),
    }
}

/// The product of deformed leading terms must have z-degree 0; this is the
/// deformation-independence witness.
fn constant_of(s: &Laurent<BC>) -> Result<BC, CycleError> {
    for (k, c) in s.iter_known() {
        if k != 0 && !c.is_zero() {
            return Err(CycleError::NonProperIntersection(format!(
                "deformation product has a z^{} term",
                k
            )));
        }
    }
    s.coeff(0)
        .map_err(|_| CycleError::NonProperIntersection("truncation exhausted".into()))
}

/// Intersection number of (W, f) with the graph of an endomorphism.
///
/// Finite points solve X(x) = -x; their f-values combine into field norms.
/// The point at infinity contributes through the deformed branch leading
/// terms 2b ((mu - i)/(mu + i))^3.
pub fn intersect_graph(e: &Endomorphism, p: &CurveParams) -> Result<BiField, CycleError> {
    if p.discriminant() == 0 || p.b == 0 {
        return Err(CycleError::DegenerateCurve);
    }
    if !e.is_validated() {
        return Err(CycleError::UnvalidatedEndo("call validate() first".into()));
    }
    let a = BiField::from_rat(p.a.clone());
    let b = BiField::from_rat(p.b.clone());
    let i = BiField::i();

    // finite locus: xnum(x) + x xden(x) = 0
    let locus = e.x_num.add(&e.x_den.shift_x());
    let finite = match locus.degree() {
        Some(1) => {
            let root = locus.0[0]
                .neg_ref()
                .mul_ref(&locus.0[1].inv_ref().ok_or(CycleError::SingularSystem)?);
            let y2 = root
                .mul_ref(&root)
                .mul_ref(&root)
                .add_ref(&a.mul_ref(&root))
                .add_ref(&b);
            if y2.is_zero() {
                return Err(CycleError::NonProperIntersection(
                    "finite intersection point lies on y = 0".into(),
                ));
            }
            let yden_v = e.y_den.eval_base(&root);
            let c = yden_v
                .inv_ref()
                .ok_or_else(|| {
                    CycleError::NonProperIntersection("y-factor undefined at a point".into())
                })?
                .mul_ref(&e.y_num.eval_base(&root))
                .mul_ref(&i)
                .neg_ref()
                .add_ref(&BiField::one());
            // product over the two y-signs: (yC)(-yC) = -y^2 C^2
            y2.mul_ref(&c).mul_ref(&c).neg_ref()
        }
        Some(2) => {
            let lead_inv = locus.0[2].inv_ref().ok_or(CycleError::SingularSystem)?;
            let mp = (
                locus.0[1].mul_ref(&lead_inv),
                locus.0[0].mul_ref(&lead_inv),
            );
            // transversality: simple roots of the quadratic
            let disc = mp.0.mul_ref(&mp.0).sub_ref(&mp.1.mul_i64(4));
            if disc.is_zero() {
                return Err(CycleError::NonProperIntersection(
                    "finite intersection locus has a double root".into(),
                ));
            }
            let t = TowerElem::gen(mp.clone());
            let y2 = t
                .pow(3)
                .add(&t.scale(&a))
                .add(&TowerElem::from_base(b.clone(), mp.clone()));
            if field_norm(&y2).is_zero() {
                return Err(CycleError::NonProperIntersection(
                    "a finite intersection point lies on y = 0".into(),
                ));
            }
            let yden_v = e.y_den.eval_tower(&t);
            if field_norm(&yden_v).is_zero() {
                return Err(CycleError::NonProperIntersection(
                    "y-factor undefined at a finite intersection point".into(),
                ));
            }
            let ratio = e.y_num.eval_tower(&t).mul(&yden_v.inv().expect("norm checked"));
            let c = TowerElem::from_base(BiField::one(), mp.clone())
                .sub(&ratio.scale(&i));
            let val = y2.mul(&c).mul(&c).neg();
            field_norm(&val)
        }
        Some(d) => return Err(CycleError::UnsupportedDegree(d)),
        None => {
            return Err(CycleError::NonProperIntersection(
                "X(x) = -x degenerates".into(),
            ))
        }
    };

    // infinity: the deformed graph branch z2 ~ mu (z1 - z) meets the two
    // W-branches z2 ~ +- i z1; multiplying the leading Laurent terms gives
    // c1 c2 ((mu - i)/mu)^3 (mu/(mu + i))^3 with c1 c2 = 2b
    let (plus, minus) = branches();
    let c1 = bc_eval(&plus.f.coeff(-3).expect("known"), p);
    let c2 = bc_eval(&minus.f.coeff(3).expect("known"), p);
    // z-degree witness: (-3) + 3 = 0 by construction of the branches
    let c1c2 = gauss_to_bifield(&c1.mul_ref(&c2));
    debug_assert_eq!(
        c1c2,
        b.mul_i64(2),
        "product of branch leading terms must be 2b"
    );
    let mu = &e.mu_act;
    let num = mu.sub_ref(&i);
    let den = mu.add_ref(&i);
    let deni = den
        .inv_ref()
        .ok_or_else(|| CycleError::NonProperIntersection("tangent scalar is i".into()))?;
    let ratio = num.mul_ref(&deni);
    let infinity = c1c2.mul_ref(&ratio.pow(3));

    Ok(finite.mul_ref(&infinity))
}

/// Solve for the class of the graph in the basis Z1, Z2, Delta, Q_tau:
/// returns (c1, c2, c3, c4).
pub fn cycle_class_coeffs(
    e: &Endomorphism,
) -> Result<(Rational, Rational, Rational, BiField), CycleError> {
    let (n1, n2, n3) = e.pairing;
    let s = Rational::from((n1 + n2 + n3, 2));
    let c1 = &s - Rational::from(n1);
    let c2 = &s - Rational::from(n2);
    let c3 = &s - Rational::from(n3);
    // self-intersection 0 = c1 n1 + c2 n2 + c3 n3 + c4 (mu - conj mu)/2
    let sum = (&c1 * Rational::from(n1))
        + (&c2 * Rational::from(n2))
        + (&c3 * Rational::from(n3));
    let delta = e.mu_act.sub_ref(&e.mu_act.conj_mu());
    let c4 = if delta.is_zero() {
        if sum != 0 {
            return Err(CycleError::SingularSystem);
        }
        BiField::zero()
    } else {
        BiField::from_rat(-sum)
            .mul_i64(2)
            .mul_ref(&delta.inv_ref().expect("nonzero"))
    };
    Ok((c1, c2, c3, c4))
}

/// Integer combination of the basic cycles and endomorphism graphs.
#[derive(Clone, Debug, Default)]
pub struct AlgCycle {
    pub terms: Vec<(CycleComponent, i64)>,
}

#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum CycleComponent {
    Z1,
    Z2,
    DiagE,
    Graph(Endomorphism),
}

impl AlgCycle {
    /// Z_tau = 2 Gamma_phi - 5 Z1 - 3 Z2 + Delta_E for the tau_7 data.
    pub fn z_tau7() -> Self {
        AlgCycle {
            terms: vec![
                (CycleComponent::Graph(Endomorphism::tau7_builtin()), 2),
                (CycleComponent::Z1, -5),
                (CycleComponent::Z2, -3),
                (CycleComponent::DiagE, 1),
            ],
        }
    }
}

/// Product of constituent intersection numbers raised to the cycle's
/// integer coefficients.
pub fn intersect_cycle(c: &AlgCycle, p: &CurveParams) -> Result<BiField, CycleError> {
    let mut acc = BiField::one();
    for (comp, k) in &c.terms {
        if *k == 0 {
            continue;
        }
        let v = match comp {
            CycleComponent::Z1 => intersect_basic(BasicCycle::Z1, p)?,
            CycleComponent::Z2 => intersect_basic(BasicCycle::Z2, p)?,
            CycleComponent::DiagE => intersect_basic(BasicCycle::DiagE, p)?,
            CycleComponent::Graph(e) => intersect_graph(e, p)?,
        };
        let factor = if *k > 0 {
            v.pow(*k as u32)
        } else {
            v.inv_ref()
                .ok_or_else(|| {
                    CycleError::NonProperIntersection("zero intersection number".into())
                })?
                .pow((-k) as u32)
        };
        acc = acc.mul_ref(&factor);
    }
    Ok(acc)
}

/// The unit u = -1 + mu - 2i - i mu with u^2 = i (8 - 3 sqrt 7).
pub fn tau7_unit() -> BiField {
    BiField::new(
        Rational::from(-1),
        Rational::from(1),
        Rational::from(-2),
        Rational::from(-1),
    )
}

impl fmt::Display for CurveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

/// Individual f-values at the two finite diagonal points (0, +-sqrt b),
/// as elements of Q(i, sqrt d): f = +-sqrt(b) (1 - i). Used to confirm the
/// shared engine against the directly multiplied point values.
pub fn diagonal_finite_values(p: &CurveParams) -> (QuadExt, QuadExt) {
    let s = QuadExt::sqrt_of_rational(&p.b);
    (s.clone(), s.neg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn bi(c0: i64, c1: i64, c2: i64, c3: i64) -> BiField {
        BiField::new(
            Rational::from(c0),
            Rational::from(c1),
            Rational::from(c2),
            Rational::from(c3),
        )
    }

    #[test]
    fn tau7_endo_parses_and_validates() {
        let e = Endomorphism::tau7_builtin();
        assert_eq!(e.degree, 2);
        assert_eq!(e.pairing, (1, 2, 4));
        assert_eq!(e.mu_act, BiField::mu());
    }

    #[test]
    fn validation_rejects_wrong_curve() {
        let text = tau7_endo_text();
        let mut e = parse_endomorphism(&text).unwrap();
        let wrong = CurveParams::new(rat(-35, 1), rat(-99, 1)).unwrap();
        assert!(matches!(
            e.validate(&wrong),
            Err(CycleError::UnvalidatedEndo(_))
        ));
    }

    #[test]
    fn unsupported_field_rejected() {
        let text = tau7_endo_text().replace("minpoly 2 1", "minpoly 3 1");
        assert!(matches!(
            parse_endomorphism(&text),
            Err(CycleError::UnsupportedCmField)
        ));
    }

    #[test]
    fn basic_intersections_at_tau7() {
        let p = CurveParams::tau7();
        // Z1 -> 2b = -196 = -14^2
        assert_eq!(
            intersect_basic(BasicCycle::Z1, &p).unwrap(),
            BiField::from_i64(-196)
        );
        // Z2 -> -2b = 196
        assert_eq!(
            intersect_basic(BasicCycle::Z2, &p).unwrap(),
            BiField::from_i64(196)
        );
        // Delta -> -4b^2 = -14^4
        assert_eq!(
            intersect_basic(BasicCycle::DiagE, &p).unwrap(),
            BiField::from_i64(-38416)
        );
        // degenerate curve rejected
        assert!(matches!(
            CurveParams::new(rat(0, 1), rat(0, 1)),
            Err(CycleError::DegenerateCurve)
        ));
    }

    #[test]
    fn diagonal_finite_point_values_multiply_out() {
        // f(0, +-sqrt b) = +-sqrt(b)(1 - i); the product of the two values is
        // -b (1-i)^2 = 2bi, matching the shared engine's finite part
        let p = CurveParams::tau7();
        let (s1, s2) = diagonal_finite_values(&p);
        let radical_product = s1.mul(&s2).as_rational().unwrap(); // -b
        assert_eq!(radical_product, rat(98, 1));
        // f+ f- = (-b)(1-i)^2 = (-b)(-2i) = 2bi
        let one_minus_i_sq = GaussRat::new(rat(1, 1), rat(-1, 1));
        let one_minus_i_sq = one_minus_i_sq.mul_ref(&one_minus_i_sq);
        let product = GaussRat::from_rat(radical_product).mul_ref(&one_minus_i_sq);
        assert_eq!(product, GaussRat::new(rat(0, 1), rat(2, 1) * rat(-98, 1)));
    }

    #[test]
    fn graph_intersection_tau7() {
        let p = CurveParams::tau7();
        let e = Endomorphism::tau7_builtin();
        let u = tau7_unit();
        // 14^6 u^4
        let expect = u.pow(4).mul_ref(&BiField::from_i64(14i64.pow(6)));
        assert_eq!(intersect_graph(&e, &p).unwrap(), expect);
        // the infinity part alone is -2b u^3: recompute it here
        let i = BiField::i();
        let mu = BiField::mu();
        let ratio = mu.sub_ref(&i).mul_ref(&mu.add_ref(&i).inv_ref().unwrap());
        let inf = BiField::from_i64(2 * -98).mul_ref(&ratio.pow(3));
        assert_eq!(inf, u.pow(3).mul_ref(&BiField::from_i64(196)));
        // and the finite part alone is 14^4 u
        let fin = intersect_graph(&e, &p)
            .unwrap()
            .mul_ref(&inf.inv_ref().unwrap());
        assert_eq!(fin, u.mul_ref(&BiField::from_i64(38416)));
    }

    #[test]
    fn class_coefficients() {
        // tau7: (5/2, 3/2, -1/2, sqrt(-7))
        let e = Endomorphism::tau7_builtin();
        let (c1, c2, c3, c4) = cycle_class_coeffs(&e).unwrap();
        assert_eq!(c1, rat(5, 2));
        assert_eq!(c2, rat(3, 2));
        assert_eq!(c3, rat(-1, 2));
        assert_eq!(c4, BiField::sqrt_minus7());
        // identity: (0, 0, 1, 0)
        let (c1, c2, c3, c4) = cycle_class_coeffs(&Endomorphism::identity()).unwrap();
        assert_eq!((c1, c2, c3), (rat(0, 1), rat(0, 1), rat(1, 1)));
        assert!(c4.is_zero());
        // multiplication by -1: pairing (1,1,4), coefficients (2,2,-1), c4 = 0
        let (c1, c2, c3, c4) = cycle_class_coeffs(&Endomorphism::minus_one()).unwrap();
        assert_eq!((c1, c2, c3), (rat(2, 1), rat(2, 1), rat(-1, 1)));
        assert!(c4.is_zero());
    }

    #[test]
    fn class_coefficients_round_trip() {
        // recombining the coefficients against the intersection matrix
        // reproduces the input pairing numbers
        for e in [
            Endomorphism::tau7_builtin(),
            Endomorphism::identity(),
            Endomorphism::minus_one(),
        ] {
            let (c1, c2, c3, _c4) = cycle_class_coeffs(&e).unwrap();
            let (n1, n2, n3) = e.pairing;
            // Z1: c2 Z2.Z1 + c3 D.Z1 = c2 + c3
            assert_eq!(Rational::from(&c2 + &c3), Rational::from(n1));
            assert_eq!(Rational::from(&c1 + &c3), Rational::from(n2));
            assert_eq!(Rational::from(&c1 + &c2), Rational::from(n3));
        }
    }

    #[test]
    fn full_cycle_is_u8() {
        let p = CurveParams::tau7();
        let z = AlgCycle::z_tau7();
        let v = intersect_cycle(&z, &p).unwrap();
        let u = tau7_unit();
        assert_eq!(v, u.pow(8));
        // u^2 = i(8 - 3 sqrt 7) = -3 - 6 mu + 8 i, and u is a unit
        assert_eq!(u.mul_ref(&u), bi(-3, -6, 8, 0));
        assert_eq!(u.norm_to_q(), rat(1, 1));
        // empty cycle gives 1
        assert_eq!(
            intersect_cycle(&AlgCycle::default(), &p).unwrap(),
            BiField::one()
        );
    }

    #[test]
    fn cycle_homomorphism() {
        // intersecting is a homomorphism from cycle addition to multiplication
        let p = CurveParams::tau7();
        let c1 = AlgCycle {
            terms: vec![(CycleComponent::Z1, 2), (CycleComponent::DiagE, -1)],
        };
        let c2 = AlgCycle {
            terms: vec![(CycleComponent::Z2, 1), (CycleComponent::Z1, -1)],
        };
        let sum = AlgCycle {
            terms: c1.terms.iter().cloned().chain(c2.terms.iter().cloned()).collect(),
        };
        let v1 = intersect_cycle(&c1, &p).unwrap();
        let v2 = intersect_cycle(&c2, &p).unwrap();
        let vs = intersect_cycle(&sum, &p).unwrap();
        assert_eq!(vs, v1.mul_ref(&v2));
    }

    #[test]
    fn z1_z2_product_identity() {
        // |Z1| * |Z2| = 4 b^2 exactly
        let p = CurveParams::new(rat(-2, 1), rat(5, 1)).unwrap();
        let z1 = intersect_basic(BasicCycle::Z1, &p).unwrap().as_rational().unwrap();
        let z2 = intersect_basic(BasicCycle::Z2, &p).unwrap().as_rational().unwrap();
        assert_eq!(
            Rational::from(&z1 * &z2).abs(),
            rat(4, 1) * Rational::from(&p.b * &p.b)
        );
    }
}
