//! The lifted Green value: boundary decompositions of CM polynomials in the
//! group homology, pole-avoiding path integration of (X - tau)^2 g(tau) dtau,
//! and the comparison of the lifted value against the exact intersection
//! number.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Float, Rational};

use crate::cohomology::{act_gen, in_boundary_lattice, Gen, IntV2};
use crate::ring::Ring;
use crate::cycles::{intersect_cycle, AlgCycle, CurveParams, CycleError, Endomorphism};
use crate::green::{global_green, CMPoint, GreenError, V2Poly};
use crate::hp::{pi, HPComplex};
use crate::modular::{g_target, reduce_fundamental, Gamma2};

/// One generator step in a boundary decomposition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BGen {
    S,
    T,
}

impl BGen {
    pub fn gamma(&self) -> Gamma2 {
        match self {
            BGen::S => Gamma2::S,
            BGen::T => Gamma2::t_power(1),
        }
    }
    fn gen(&self) -> Gen {
        match self {
            BGen::S => Gen::S,
            BGen::T => Gen::T,
        }
    }
}

/// Writes p = sum (gamma_i u_i - u_i) under the left weight -2 action.
/// Requires the middle coefficient to be even (lattice membership).
pub fn boundary_decompose(p: &IntV2) -> Result<Vec<(BGen, IntV2)>, GreenError> {
    if !in_boundary_lattice(p) {
        return Err(GreenError::NotInBoundaryLattice);
    }
    let IntV2(p0, p1, p2) = *p;
    // (S, k)        gives k (X^2 - 1)
    // (S, -m X)     gives 2 m X
    // (T, -n X)     gives n
    let mut out = Vec::new();
    if p2 != 0 {
        out.push((BGen::S, IntV2(p2, 0, 0)));
    }
    if p1 != 0 {
        out.push((BGen::S, IntV2(0, -p1 / 2, 0)));
    }
    if p0 + p2 != 0 {
        out.push((BGen::T, IntV2(0, -(p0 + p2), 0)));
    }
    debug_assert_eq!(apply_decomposition(&out), *p);
    Ok(out)
}

/// A different valid decomposition of the same polynomial, for the
/// independence check: X^2 - 1 is also S(-X^2) - (-X^2).
pub fn boundary_decompose_alt(p: &IntV2) -> Result<Vec<(BGen, IntV2)>, GreenError> {
    if !in_boundary_lattice(p) {
        return Err(GreenError::NotInBoundaryLattice);
    }
    let IntV2(p0, p1, p2) = *p;
    let mut out = Vec::new();
    if p2 != 0 {
        out.push((BGen::S, IntV2(0, 0, -p2)));
    }
    if p1 != 0 {
        out.push((BGen::S, IntV2(0, -p1 / 2, 0)));
    }
    if p0 + p2 != 0 {
        out.push((BGen::T, IntV2(0, -(p0 + p2), 0)));
    }
    debug_assert_eq!(apply_decomposition(&out), *p);
    Ok(out)
}

/// sum (gamma u - u), for verification.
pub fn apply_decomposition(decomp: &[(BGen, IntV2)]) -> IntV2 {
    let mut acc = IntV2::zero();
    for (g, u) in decomp {
        acc = acc.add(&act_gen(g.gen(), u)).sub(u);
    }
    acc
}

/// Path policy: vertices keep hyperbolic distance min_dist from the orbit
/// of i; composite quadrature subdivides until the segment error estimate
/// is below 2^{-prec/2}.
#[derive(Clone, Copy, Debug)]
pub struct PathPolicy {
    pub min_dist: f64,
    pub detour_margin: f64,
    pub max_depth: u32,
}

impl Default for PathPolicy {
    fn default() -> Self {
        PathPolicy {
            min_dist: 0.2,
            detour_margin: 1.5,
            max_depth: 24,
        }
    }
}

/// Hyperbolic distance from z to the orbit of i, and the nearest orbit
/// point in the original coordinates.
fn orbit_distance(z: &HPComplex, prec: u32) -> (f64, HPComplex) {
    let (zr, g) = reduce_fundamental(z).expect("path point in upper half plane");
    let ginv = g.inverse();
    let mut best = f64::INFINITY;
    let mut best_w = HPComplex::i(prec);
    // for reduced points only i and i +- 1 can come within distance ~0.5
    for dx in [0i64, 1, -1] {
        let w = HPComplex::new(
            Float::with_val(prec, dx),
            Float::with_val(prec, 1),
        );
        let t = 1.0
            + zr.sub(&w).norm_sqr().to_f64() / (2.0 * zr.im.to_f64() * w.im.to_f64());
        let d = (t + (t * t - 1.0).sqrt()).ln(); // acosh
        if d < best {
            best = d;
            best_w = ginv.apply(&w);
        }
    }
    (best, best_w)
}

/// Polygonal path from `from` to `to` whose sampled points keep clear of
/// the orbit of i.
pub fn build_path(
    from: &HPComplex,
    to: &HPComplex,
    policy: &PathPolicy,
    prec: u32,
) -> Result<Vec<HPComplex>, GreenError> {
    for (label, p) in [("start", from), ("end", to)] {
        let (d, _) = orbit_distance(p, prec);
        if d < policy.min_dist {
            return Err(GreenError::PathTooClosePole(format!(
                "{} point is at hyperbolic distance {:.3}",
                label, d
            )));
        }
    }
    let mut path = vec![from.clone(), to.clone()];
    let mut depth = 0;
    loop {
        depth += 1;
        if depth > policy.max_depth {
            return Err(GreenError::PathTooClosePole(
                "detour depth exhausted".into(),
            ));
        }
        let mut changed = false;
        let mut i = 0;
        while i + 1 < path.len() {
            let a = path[i].clone();
            let b = path[i + 1].clone();
            // sample the open segment
            let mut worst = (f64::INFINITY, HPComplex::i(prec), 0.5f64);
            for s in 1..16 {
                let lam = s as f64 / 16.0;
                let p = a
                    .scale(&Float::with_val(prec, 1.0 - lam))
                    .add(&b.scale(&Float::with_val(prec, lam)));
                let (d, w) = orbit_distance(&p, prec);
                if d < worst.0 {
                    worst = (d, w, lam);
                }
            }
            if worst.0 < policy.min_dist {
                // push a detour vertex away from the nearby pole; if the
                // radial direction runs into a neighboring orbit point, go
                // straight up instead (heights far above 1 clear everything)
                let w = worst.1;
                let closest = a
                    .scale(&Float::with_val(prec, 1.0 - worst.2))
                    .add(&b.scale(&Float::with_val(prec, worst.2)));
                let mut radial = closest.sub(&w);
                if radial.abs().to_f64() < 1e-12 {
                    radial = b.sub(&a).mul_i();
                }
                let radial = radial.scale(&Float::with_val(prec, 1.0 / radial.abs().to_f64()));
                let up = HPComplex::from_f64(prec, 0.0, 1.0);
                // the distance oracle is exact below ~0.53 (nearer orbit
                // points all lie in the checked set); stay under that
                let target = (policy.min_dist * policy.detour_margin).min(0.5);
                let mut vertex = None;
                'dirs: for dir in [&radial, &up, &radial.neg()] {
                    let mut radius = 0.05f64;
                    while radius <= 64.0 {
                        let v = w.add(&dir.scale(&Float::with_val(prec, radius)));
                        if v.im.to_f64() > 0.05 {
                            let (d, _) = orbit_distance(&v, prec);
                            if d >= target {
                                vertex = Some(v);
                                break 'dirs;
                            }
                        }
                        radius *= 2.0;
                    }
                }
                let Some(vertex) = vertex else {
                    return Err(GreenError::PathTooClosePole(
                        "no clear detour vertex".into(),
                    ));
                };
                path.insert(i + 1, vertex);
                changed = true;
            }
            i += 1;
        }
        if !changed {
            return Ok(path);
        }
    }
}

type NodeCache = BTreeMap<(u32, u32), Arc<Vec<(Float, Float)>>>;

/// Gauss-Legendre nodes and weights on [-1, 1], cached per (order, prec).
fn gl_nodes(order: u32, prec: u32) -> Arc<Vec<(Float, Float)>> {
    static CACHE: OnceLock<Mutex<NodeCache>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(v) = guard.get(&(order, prec)) {
        return v.clone();
    }
    let n = order as i64;
    let mut nodes = Vec::new();
    for k in 1..=n {
        // Newton from the Chebyshev estimate
        let mut x = Float::with_val(
            prec,
            (std::f64::consts::PI * (k as f64 - 0.25) / (n as f64 + 0.5)).cos(),
        );
        for _ in 0..200 {
            let (p, dp) = legendre_pair(n, &x, prec);
            let dx = Float::with_val(prec, &p / &dp);
            x -= &dx;
            if dx.abs() < Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8)) {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, &x, prec);
        let w = Float::with_val(prec, 2u32)
            / ((Float::with_val(prec, 1u32) - Float::with_val(prec, &x * &x))
                * Float::with_val(prec, &dp * &dp));
        nodes.push((x, w));
    }
    let arc = Arc::new(nodes);
    guard.insert((order, prec), arc.clone());
    arc
}

/// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_pair(n: i64, x: &Float, prec: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = Float::with_val(prec, x);
    for j in 2..=n {
        let a = Float::with_val(prec, 2 * j - 1) * Float::with_val(prec, x * &p1);
        let b = Float::with_val(prec, j - 1) * &p0;
        let p2 = (a - b) / Float::with_val(prec, j);
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = Float::with_val(prec, x * &p1) - &p0;
    let den = Float::with_val(prec, x * x) - 1u32;
    let dp = Float::with_val(prec, n) * num / den;
    (p1, dp)
}

/// V2-valued integrand (tau^2 g, -2 tau g, g) of (X - tau)^2 g(tau).
fn integrand(tau: &HPComplex, prec: u32) -> Result<V2Poly, GreenError> {
    let g = g_target(tau, prec)?;
    Ok(V2Poly {
        c0: tau.mul(tau).mul(&g),
        c1: tau.mul(&g).scale_i64(-2),
        c2: g,
    })
}

fn poly_add(a: &V2Poly, b: &V2Poly) -> V2Poly {
    V2Poly {
        c0: a.c0.add(&b.c0),
        c1: a.c1.add(&b.c1),
        c2: a.c2.add(&b.c2),
    }
}

fn poly_scale(a: &V2Poly, s: &HPComplex) -> V2Poly {
    V2Poly {
        c0: a.c0.mul(s),
        c1: a.c1.mul(s),
        c2: a.c2.mul(s),
    }
}

fn poly_norm(a: &V2Poly) -> f64 {
    a.c0.abs().to_f64() + a.c1.abs().to_f64() + a.c2.abs().to_f64()
}

fn gl_segment(a: &HPComplex, b: &HPComplex, order: u32, prec: u32) -> Result<V2Poly, GreenError> {
    let nodes = gl_nodes(order, prec);
    let mid = a.add(b).scale(&Float::with_val(prec, 0.5));
    let half = b.sub(a).scale(&Float::with_val(prec, 0.5));
    let mut acc = V2Poly::zero(prec);
    for (x, w) in nodes.iter() {
        let tau = mid.add(&half.scale(x));
        let f = integrand(&tau, prec)?;
        acc = poly_add(&acc, &poly_scale(&f, &HPComplex::real(prec, w)));
    }
    Ok(poly_scale(&acc, &half))
}

/// Adaptive composite quadrature of the V2-valued form over a segment.
fn integrate_segment(
    a: &HPComplex,
    b: &HPComplex,
    prec: u32,
    depth: u32,
) -> Result<V2Poly, GreenError> {
    let whole = gl_segment(a, b, 32, prec)?;
    let mid = a.add(b).scale(&Float::with_val(prec, 0.5));
    let left = gl_segment(a, &mid, 32, prec)?;
    let right = gl_segment(&mid, b, 32, prec)?;
    let refined = poly_add(&left, &right);
    let err = poly_norm(&poly_add(&whole, &poly_scale(&refined, &HPComplex::from_i64(prec, -1))));
    let tol = (2f64).powi(-(prec as i32) / 2);
    if err < tol.max(1e-3 * f64::EPSILON * poly_norm(&refined)) || depth == 0 {
        return Ok(refined);
    }
    let l = integrate_segment(a, &mid, prec, depth - 1)?;
    let r = integrate_segment(&mid, b, prec, depth - 1)?;
    Ok(poly_add(&l, &r))
}

/// Integral of (X - tau)^2 g(tau) dtau along a polygonal path.
pub fn integrate_path(path: &[HPComplex], prec: u32) -> Result<V2Poly, GreenError> {
    let mut acc = V2Poly::zero(prec);
    for seg in path.windows(2) {
        let v = integrate_segment(&seg[0], &seg[1], prec, 18)?;
        acc = poly_add(&acc, &v);
    }
    Ok(acc)
}

/// The lifted value with its modulus statement.
#[derive(Clone, Debug)]
pub struct EichlerValue {
    pub value: HPComplex,
    /// the value is defined modulo (pi i / sqrt(D0 D)) Z with D0 = -4
    pub modulus_scale: Float,
    pub modulus: String,
}

/// Lifted Green value at (z, i) by cocycle integration:
/// hat G = -(1/(2 sqrt D)) sum_i ( int_z^{gamma_i^{-1} z} (X-tau)^2 g dtau, w_i )
/// where 2 sqrt(D) Q_z = sum (gamma_i w_i - w_i) over the integer lattice.
pub fn eichler_lift_with(
    z: &CMPoint,
    prec: u32,
    policy: &PathPolicy,
    decomp: &[(BGen, IntV2)],
) -> Result<EichlerValue, GreenError> {
    let d = z.disc();
    let tau = z.tau(prec);
    let mut total = HPComplex::zero(prec);
    for (g, u) in decomp {
        if u.is_zero() {
            continue;
        }
        let endpoint = g.gamma().inverse().apply(&tau);
        let path = build_path(&tau, &endpoint, policy, prec)?;
        let integral = integrate_path(&path, prec)?;
        total = total.add(&integral.pairing_int(u));
    }
    // divide by -2 sqrt(D) = -2 i sqrt(|D|)
    let sqrt_abs_d = Float::with_val(prec, -d).sqrt();
    let denom = HPComplex::new(Float::new(prec), Float::with_val(prec, &sqrt_abs_d * 2u32)).neg();
    let value = total.div(&denom);
    let modulus_scale = pi(prec) / (Float::with_val(prec, &sqrt_abs_d * 2u32));
    Ok(EichlerValue {
        value,
        modulus_scale,
        modulus: format!("pi i / sqrt({}) Z", 4 * (-d)),
    })
}

pub fn eichler_lift(
    z: &CMPoint,
    prec: u32,
    policy: &PathPolicy,
) -> Result<EichlerValue, GreenError> {
    let q = IntV2(2 * z.c, 2 * z.b, 2 * z.a);
    let decomp = boundary_decompose(&q)?;
    eichler_lift_with(z, prec, policy, &decomp)
}

/// Result of comparing the analytic lift against the exact intersection
/// number.
#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub disc: i64,
    pub lifted: HPComplex,
    pub scaled_lift: HPComplex,
    pub intersection: String,
    pub log_intersection: HPComplex,
    pub residual: HPComplex,
    pub residual_mod: f64,
    pub green_value: Float,
    pub green_tail: Float,
    pub re_consistency: f64,
    pub pass: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ConjectureError {
    #[error(transparent)]
    Green(#[from] GreenError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error("only discriminant -7 has a shipped endomorphism; supply one for disc {0}")]
    UnsupportedDiscriminant(i64),
}

/// Verifies sqrt(-4D) hat G = 2 log(cycle . Z_z) mod pi i, and
/// Re hat G = G/2, for a CM point with curve and endomorphism data.
pub fn conjecture_check(
    z: &CMPoint,
    endo: &Endomorphism,
    curve: &CurveParams,
    prec: u32,
    green_bound: u32,
) -> Result<ConjectureReport, ConjectureError> {
    let d = z.disc();
    // cycle with class 2 sqrt(D) Q_z from the graph class decomposition
    let (c1, c2, c3, c4) = crate::cycles::cycle_class_coeffs(endo)?;
    // r = 2 sqrt(D)/c4 must be a rational integer
    let sqrt_d = crate::bifield::BiField::sqrt_minus7();
    if d != -7 {
        return Err(ConjectureError::UnsupportedDiscriminant(d));
    }
    let r = sqrt_d
        .mul_i64(2)
        .mul_ref(&c4.inv_ref().ok_or(CycleError::SingularSystem)?);
    let r = r
        .as_rational()
        .filter(|x| x.is_integer())
        .ok_or_else(|| {
            ConjectureError::Cycle(CycleError::NonProperIntersection(
                "cycle class is not integrally proportional to Q_z".into(),
            ))
        })?;
    let r_i: i64 = r.numer().to_i64().expect("small integer");
    let to_int = |x: Rational| -> i64 {
        debug_assert!(x.is_integer());
        x.numer().to_i64().expect("small integer")
    };
    let cycle = AlgCycle {
        terms: vec![
            (crate::cycles::CycleComponent::Graph(endo.clone()), r_i),
            (
                crate::cycles::CycleComponent::Z1,
                -to_int(Rational::from(&c1 * &r)),
            ),
            (
                crate::cycles::CycleComponent::Z2,
                -to_int(Rational::from(&c2 * &r)),
            ),
            (
                crate::cycles::CycleComponent::DiagE,
                -to_int(Rational::from(&c3 * &r)),
            ),
        ],
    };
    let alpha = intersect_cycle(&cycle, curve)?;
    let (are, aim) = alpha.embed(prec);
    let alpha_c = HPComplex::new(are, aim);
    let log_alpha = alpha_c.ln();

    let lift = eichler_lift(z, prec, &PathPolicy::default())?;
    // sqrt(-4D) = 2 sqrt(|D|) for D < 0, and -4D > 0
    let scale = Float::with_val(prec, -4 * d).sqrt();
    let scaled = lift.value.scale(&scale);
    let rhs = log_alpha.scale_i64(2);
    let residual = scaled.sub(&rhs);
    // reduce the imaginary part modulo pi
    let pi_f = pi(prec);
    let k = Float::with_val(prec, &residual.im / &pi_f)
        .round()
        .to_f64();
    let im_red = Float::with_val(prec, &residual.im - Float::with_val(prec, &pi_f * &Float::with_val(prec, k)));
    let residual_mod = residual.re.to_f64().hypot(im_red.to_f64());

    let gg = global_green(2, &z.tau(prec), &HPComplex::i(prec), green_bound, prec)?;
    let re_consistency =
        (lift.value.re.to_f64() - gg.value.to_f64() / 2.0).abs();

    let pass = residual_mod < 1e-6 && re_consistency < gg.tail.to_f64().max(1e-6);
    Ok(ConjectureReport {
        disc: d,
        lifted: lift.value.clone(),
        scaled_lift: scaled,
        intersection: format!("{}", alpha),
        log_intersection: log_alpha,
        residual,
        residual_mod,
        green_value: gg.value,
        green_tail: gg.tail,
        re_consistency,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_examples() {
        // 2X^2 + 2X + 4 -> [(S, 2), (S, -X), (T, -6X)]
        let p = IntV2(4, 2, 2);
        let d = boundary_decompose(&p).unwrap();
        assert_eq!(
            d,
            vec![
                (BGen::S, IntV2(2, 0, 0)),
                (BGen::S, IntV2(0, -1, 0)),
                (BGen::T, IntV2(0, -6, 0)),
            ]
        );
        assert_eq!(apply_decomposition(&d), p);
        // zero decomposes into nothing
        assert!(boundary_decompose(&IntV2::zero()).unwrap().is_empty());
        // X^2 + 1 -> [(S, 1), (T, -2X)]
        let p = IntV2(1, 0, 1);
        let d = boundary_decompose(&p).unwrap();
        assert_eq!(
            d,
            vec![(BGen::S, IntV2(1, 0, 0)), (BGen::T, IntV2(0, -2, 0))]
        );
        // odd middle coefficient rejected
        assert!(matches!(
            boundary_decompose(&IntV2(0, 1, 0)),
            Err(GreenError::NotInBoundaryLattice)
        ));
        // the alternative decomposition hits the same polynomial
        let p = IntV2(4, 2, 2);
        let alt = boundary_decompose_alt(&p).unwrap();
        assert_ne!(alt, boundary_decompose(&p).unwrap());
        assert_eq!(apply_decomposition(&alt), p);
    }

    #[test]
    fn random_cm_forms_decompose() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut count = 0;
        while count < 50 {
            let a = (next() % 12 + 1) as i64;
            let b = (next() % 25) as i64 - 12;
            let c = (next() % 12 + 1) as i64;
            if b * b - 4 * a * c >= 0 {
                continue;
            }
            let p = IntV2(2 * c, 2 * b, 2 * a);
            let d = boundary_decompose(&p).unwrap();
            assert_eq!(apply_decomposition(&d), p);
            count += 1;
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let prec = 128;
        let nodes = gl_nodes(8, prec);
        // integral of x^6 over [-1, 1] = 2/7
        let mut acc = Float::new(prec);
        for (x, w) in nodes.iter() {
            let x6 = Float::with_val(prec, x * x).square() * Float::with_val(prec, x * x);
            acc += x6 * w;
        }
        assert!((acc.to_f64() - 2.0 / 7.0).abs() < 1e-30);
    }

    #[test]
    fn lift_stable_under_homotopic_path_change() {
        // widening the detour keeps the homotopy class, so the value moves
        // only by quadrature error
        let prec = 128;
        let z = CMPoint::tau7();
        let tight = PathPolicy {
            detour_margin: 1.3,
            ..PathPolicy::default()
        };
        let wide = PathPolicy {
            detour_margin: 1.55,
            ..PathPolicy::default()
        };
        let a = eichler_lift(&z, prec, &tight).unwrap().value;
        let b = eichler_lift(&z, prec, &wide).unwrap().value;
        let d = a.sub(&b).abs().to_f64();
        assert!(d < 1e-6, "paths disagree by {}", d);
    }

    #[test]
    fn path_avoids_pole() {
        let prec = 96;
        let policy = PathPolicy::default();
        let t7 = CMPoint::tau7().tau(prec);
        let end = Gamma2::S.inverse().apply(&t7);
        let path = build_path(&t7, &end, &policy, prec).unwrap();
        assert!(path.len() >= 3, "straight segment passes too close to i");
        for seg in path.windows(2) {
            for s in 0..=16 {
                let lam = s as f64 / 16.0;
                let p = seg[0]
                    .scale(&Float::with_val(prec, 1.0 - lam))
                    .add(&seg[1].scale(&Float::with_val(prec, lam)));
                let (d, _) = orbit_distance(&p, prec);
                assert!(d > 0.15, "clearance {} at {:?}", d, p);
            }
        }
    }
}
