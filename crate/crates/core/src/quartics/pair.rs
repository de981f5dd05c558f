use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bitangent::unit;
use super::form::{cnorm, cross, CPoint, ComplexForm, TernaryForm};
use super::smooth::singular_point;
use super::{is_smooth, QuarticError, Tolerances};
use crate::linalg::QMatrix;
use crate::poly::{rat, rat_to_f64, QPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairStatus {
    /// `λ ≠ 0` and `Δ₀` smooth.
    UMember,
    /// `λ = 0`: `Δ₀` is the double conic `Q²`.
    QLocus,
    /// `Δ₀` singular.
    Degenerate,
}

impl PairStatus {
    pub fn name(self) -> &'static str {
        match self {
            PairStatus::UMember => "U-member",
            PairStatus::QLocus => "Q-locus",
            PairStatus::Degenerate => "degenerate",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TangentPair {
    pub b0: TernaryForm,
    pub q: TernaryForm,
    pub lambda: num_rational::BigRational,
    pub delta0: TernaryForm,
    pub status: PairStatus,
    /// Numeric singular point of `Δ₀` when degenerate.
    pub witness: Option<CPoint>,
    pub tangency: Option<TangencyData>,
}

/// Contact between `B₀` and `Δ₀`. On `B₀` one has `Δ₀ = Q²`, so
/// `I_p(B₀, Δ₀) = 2·I_p(B₀, Q)`; when `B₀ ∩ Q` is eight distinct points
/// (decided exactly) every contact has multiplicity exactly two.
#[derive(Clone, Debug)]
pub struct TangencyData {
    /// `B₀ ∩ Q` consists of 8 distinct points (exact resultant test).
    pub transversal: bool,
    pub points: Vec<CPoint>,
    pub multiplicities: Vec<usize>,
    pub total: usize,
    /// Largest of `|B₀(p)|`, `|Q(p)|`, `|Δ₀(p)|` on unit representatives, normalized forms.
    pub max_residual: f64,
    /// Largest sine of the angle between `∇B₀(p)` and `∇Δ₀(p)`.
    pub max_gradient_angle: f64,
    pub conic: Option<ConicFit>,
    /// Projective distance between the recovered conic and `Q`.
    pub conic_distance: Option<f64>,
}

pub fn is_smooth_conic(q: &TernaryForm) -> bool {
    q.conic_matrix().is_some_and(|m| {
        let m = QMatrix::from_vec(3, 3, m.into_iter().flatten().collect());
        !m.determinant().is_zero()
    })
}

/// `Δ₀ = Q² − λ·B₀` with its classification and, for U-members, certified
/// tangency data.
pub fn make_tangent_pair(
    b0: &TernaryForm,
    q: &TernaryForm,
    lambda: &num_rational::BigRational,
    seed: u64,
    tol: &Tolerances,
) -> Result<TangentPair, QuarticError> {
    if b0.degree() != 4 {
        return Err(QuarticError::WrongDegree { expected: 4, found: b0.degree() });
    }
    if q.degree() != 2 {
        return Err(QuarticError::WrongDegree { expected: 2, found: q.degree() });
    }
    if !is_smooth_conic(q) {
        return Err(QuarticError::ConicNotSmooth);
    }
    let delta0 = q.pow(2).sub(&b0.scale(lambda));
    let mut pair = TangentPair {
        b0: b0.clone(),
        q: q.clone(),
        lambda: lambda.clone(),
        delta0,
        status: PairStatus::QLocus,
        witness: None,
        tangency: None,
    };
    if lambda.is_zero() {
        return Ok(pair);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if pair.delta0.is_zero() || !is_smooth(&pair.delta0)? {
        pair.status = PairStatus::Degenerate;
        pair.witness = singular_point(&pair.delta0.to_complex(), &mut rng, 1e-8);
        return Ok(pair);
    }
    pair.status = PairStatus::UMember;
    pair.tangency = Some(tangency_data(b0, q, &pair.delta0, &mut rng, tol));
    Ok(pair)
}

fn tangency_data(
    b0: &TernaryForm,
    q: &TernaryForm,
    delta0: &TernaryForm,
    rng: &mut ChaCha8Rng,
    tol: &Tolerances,
) -> TangencyData {
    let (transversal, mut points) = intersect_quartic_conic(b0, q, rng);
    let (bc, qc, dc) = (
        b0.to_complex().normalized(),
        q.to_complex().normalized(),
        delta0.to_complex().normalized(),
    );
    for p in points.iter_mut() {
        *p = polish(&bc, &qc, p);
    }
    let mut max_residual: f64 = 0.0;
    let mut max_angle: f64 = 0.0;
    for p in &points {
        max_residual = max_residual
            .max(bc.eval(p).norm())
            .max(qc.eval(p).norm())
            .max(dc.eval(p).norm());
        let gb = unit(&bc.gradient_at(p));
        let gd = dc.gradient_at(p);
        let angle = if cnorm(&gd) == 0.0 {
            0.0
        } else {
            cnorm(&cross(&gb, &unit(&gd)))
        };
        max_angle = max_angle.max(angle);
    }
    let multiplicities = if transversal { alloc::vec![2; points.len()] } else { Vec::new() };
    let conic = if points.len() >= 6 {
        points_on_conic(&points, tol).ok().flatten()
    } else {
        None
    };
    let conic_distance = conic.as_ref().map(|c| {
        let target: Vec<Complex64> = qc.coeffs().to_vec();
        super::form::projective_distance(&c.coeffs, &target)
    });
    TangencyData {
        transversal,
        total: multiplicities.iter().sum(),
        multiplicities,
        points,
        max_residual,
        max_gradient_angle: max_angle,
        conic,
        conic_distance,
    }
}

/// Exact transversality of `F ∩ G` (`deg F = 4`, `deg G = 2`) and numeric
/// intersection points. After a seeded rational change of coordinates the
/// resultant `Res_z(F, G)` in `x` (at `y = 1`) is interpolated exactly; it is
/// squarefree of degree 8 iff the intersection is eight distinct points that
/// project to distinct `x`-values.
pub fn intersect_quartic_conic(
    f: &TernaryForm,
    g: &TernaryForm,
    rng: &mut ChaCha8Rng,
) -> (bool, Vec<CPoint>) {
    let mut last = Vec::new();
    for _ in 0..6 {
        let m: [[num_rational::BigRational; 3]; 3] =
            core::array::from_fn(|i| core::array::from_fn(|j| rat(rng.gen_range(-3..=3) + i64::from(i == j) * 5)));
        let mq = QMatrix::from_vec(3, 3, m.iter().flatten().cloned().collect());
        if mq.determinant().is_zero() {
            continue;
        }
        let (fm, gm) = (f.compose_linear(&m), g.compose_linear(&m));
        if fm.coeff([0, 0, 4]).is_zero() || gm.coeff([0, 0, 2]).is_zero() {
            continue;
        }
        let xs: Vec<num_rational::BigRational> = (0..9).map(|k| rat(k - 4)).collect();
        let ys: Vec<num_rational::BigRational> = xs.iter().map(|x| sylvester_at(&fm, &gm, x)).collect();
        let res = QPoly::interpolate(&xs, &ys);
        let ok = res.degree() == Some(8) && res.is_squarefree();
        let pts = points_from_resultant(&fm, &gm, &res, &m);
        if ok {
            return (true, pts);
        }
        last = pts;
    }
    (false, last)
}

/// Coefficients in `z` of `F(x, 1, z)` (ascending).
fn z_coeffs(f: &TernaryForm, x: &num_rational::BigRational) -> Vec<num_rational::BigRational> {
    let d = f.degree();
    (0..=d)
        .map(|k| {
            (0..=d - k)
                .map(|a| {
                    let b = d - k - a;
                    f.coeff([a, b, k]) * pow(x, a)
                })
                .sum()
        })
        .collect()
}

fn pow(x: &num_rational::BigRational, k: usize) -> num_rational::BigRational {
    (0..k).fold(num_rational::BigRational::one(), |acc, _| acc * x)
}

/// Sylvester resultant of `F(x,1,z)` and `G(x,1,z)` in `z` at a rational `x`.
fn sylvester_at(f: &TernaryForm, g: &TernaryForm, x: &num_rational::BigRational) -> num_rational::BigRational {
    let (a, b) = (z_coeffs(f, x), z_coeffs(g, x));
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut s = QMatrix::zeros(size, size);
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            s[(i, i + k)] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            s[(n + i, i + k)] = c.clone();
        }
    }
    s.determinant()
}

fn points_from_resultant(
    fm: &TernaryForm,
    gm: &TernaryForm,
    res: &QPoly,
    m: &[[num_rational::BigRational; 3]; 3],
) -> Vec<CPoint> {
    let fc = fm.to_complex();
    let gc = gm.to_complex();
    let mc: [[f64; 3]; 3] = core::array::from_fn(|i| core::array::from_fn(|j| rat_to_f64(&m[i][j])));
    let one = Complex64::one();
    res.to_complex()
        .roots()
        .into_iter()
        .map(|x| {
            // z from the conic, choosing the root where the quartic vanishes
            let c = gc.along(&[x, one, Complex64::zero()], &[Complex64::zero(), Complex64::zero(), one]);
            let disc = (c[1] * c[1] - c[0] * c[2] * 4.0).sqrt();
            let zs = [(-c[1] + disc) / (c[2] * 2.0), (-c[1] - disc) / (c[2] * 2.0)];
            let z = if fc.eval(&[x, one, zs[0]]).norm() <= fc.eval(&[x, one, zs[1]]).norm() {
                zs[0]
            } else {
                zs[1]
            };
            let v = [x, one, z];
            unit(&core::array::from_fn(|i| (0..3).map(|j| v[j] * mc[i][j]).sum()))
        })
        .collect()
}

/// Newton refinement of a common zero of `F` and `G` on the unit sphere.
fn polish(f: &ComplexForm, g: &ComplexForm, p: &CPoint) -> CPoint {
    let mut x = *p;
    let r0 = *p;
    for _ in 0..8 {
        let (gf, gg) = (f.gradient_at(&x), g.gradient_at(&x));
        let j = Matrix3::new(
            gf[0], gf[1], gf[2], gg[0], gg[1], gg[2], r0[0].conj(), r0[1].conj(), r0[2].conj(),
        );
        let dot: Complex64 = (0..3).map(|i| r0[i].conj() * x[i]).sum();
        let r = Vector3::new(f.eval(&x), g.eval(&x), dot - Complex64::one());
        let Some(step) = j.lu().solve(&r) else { break };
        for i in 0..3 {
            x[i] -= step[i];
        }
        if step.norm() < 1e-16 {
            break;
        }
    }
    unit(&x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConicFit {
    /// Conic coefficients in graded-lex order, unit norm.
    pub coeffs: Vec<Complex64>,
    pub sigma_min: f64,
    pub sigma_next: f64,
    /// Largest `|C(p)|` over the unit-normalized input points.
    pub residual: f64,
}

/// The conic through the given points, when the Veronese matrix has a
/// numerically one-dimensional kernel.
pub fn points_on_conic(points: &[CPoint], tol: &Tolerances) -> Result<Option<ConicFit>, QuarticError> {
    if points.len() < 6 {
        return Err(QuarticError::TooFewPoints(points.len()));
    }
    let n = points.len();
    let pts: Vec<CPoint> = points.iter().map(unit).collect();
    let a = DMatrix::from_fn(n, 6, |i, k| {
        let [x, y, z] = pts[i];
        [x * x, x * y, x * z, y * y, y * z, z * z][k]
    });
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let kmin = order[order.len() - 1];
    let sigma_min = svd.singular_values[kmin];
    let sigma_next = svd.singular_values[order[order.len() - 2]];
    // A v = σ u with v the conjugate of a row of Vᴴ
    let coeffs: Vec<Complex64> = (0..6).map(|k| vt[(kmin, k)].conj()).collect();
    if n == 6 && sigma_min >= tol.conic {
        return Ok(None);
    }
    if sigma_min >= tol.conic || sigma_next <= tol.conic_gap {
        return Ok(None);
    }
    let c = ComplexForm::new(2, coeffs.clone()).expect("six coefficients");
    let residual = pts.iter().map(|p| c.eval(p).norm()).fold(0.0, f64::max);
    Ok(Some(ConicFit { coeffs, sigma_min, sigma_next, residual }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn sphere() -> TernaryForm {
        TernaryForm::from_terms(2, &[(1, [2, 0, 0]), (1, [0, 2, 0]), (1, [0, 0, 2])]).unwrap()
    }

    #[test]
    fn fermat_half_is_u_member() {
        let p = make_tangent_pair(&TernaryForm::fermat(), &sphere(), &ratio(1, 2), 1, &Tolerances::default()).unwrap();
        assert_eq!(p.status, PairStatus::UMember);
        let t = p.tangency.unwrap();
        assert!(t.transversal);
        assert_eq!(t.points.len(), 8);
        assert_eq!(t.multiplicities, vec![2; 8]);
        assert_eq!(t.total, 16);
        assert!(t.max_residual < 1e-10, "{}", t.max_residual);
        assert!(t.max_gradient_angle < 1e-8);
        let c = t.conic.expect("conic through the contact points");
        assert!(c.residual < 1e-8);
        assert!(t.conic_distance.unwrap() < 1e-8);
    }

    #[test]
    fn lambda_two_degenerates() {
        let p = make_tangent_pair(&TernaryForm::fermat(), &sphere(), &rat(2), 1, &Tolerances::default()).unwrap();
        assert_eq!(p.status, PairStatus::Degenerate);
        // Q² − 2B₀ = −(x² − (y+z)²)(x² − (y−z)²)
        let l1 = TernaryForm::from_terms(2, &[(1, [2, 0, 0]), (-1, [0, 2, 0]), (-2, [0, 1, 1]), (-1, [0, 0, 2])]).unwrap();
        let l2 = TernaryForm::from_terms(2, &[(1, [2, 0, 0]), (-1, [0, 2, 0]), (2, [0, 1, 1]), (-1, [0, 0, 2])]).unwrap();
        assert_eq!(p.delta0, l1.mul(&l2).scale(&rat(-1)));
        let w = p.witness.expect("singular point");
        assert!(p.delta0.to_complex().normalized().gradient_at(&w).iter().all(|g| g.norm() < 1e-7));
    }

    #[test]
    fn lambda_zero_is_q_locus() {
        let p = make_tangent_pair(&TernaryForm::fermat(), &sphere(), &rat(0), 1, &Tolerances::default()).unwrap();
        assert_eq!(p.status, PairStatus::QLocus);
        assert_eq!(p.delta0, sphere().pow(2));
    }

    #[test]
    fn singular_conic_rejected() {
        let xy = TernaryForm::from_terms(2, &[(1, [1, 1, 0])]).unwrap();
        assert_eq!(
            make_tangent_pair(&TernaryForm::fermat(), &xy, &rat(1), 1, &Tolerances::default()).unwrap_err(),
            QuarticError::ConicNotSmooth
        );
    }

    #[test]
    fn conic_through_points() {
        let tol = Tolerances::default();
        // x² + y² − z² parametrized by (1 − t², 2t, 1 + t²)
        let pts: Vec<CPoint> = (0..8)
            .map(|k| {
                let t = Complex64::new(0.3 * k as f64 - 1.0, 0.1 * k as f64);
                [Complex64::one() - t * t, t * 2.0, Complex64::one() + t * t]
            })
            .collect();
        let c = points_on_conic(&pts, &tol).unwrap().expect("on a conic");
        let target = [1.0, 0.0, 0.0, 1.0, 0.0, -1.0].map(|x| Complex64::new(x, 0.0));
        assert!(super::super::form::projective_distance(&c.coeffs, &target) < 1e-10);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let random: Vec<CPoint> = (0..8)
            .map(|_| core::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        assert!(points_on_conic(&random, &tol).unwrap().is_none());
        assert_eq!(points_on_conic(&random[..5], &tol).unwrap_err(), QuarticError::TooFewPoints(5));
    }

    #[test]
    fn tangent_conic_is_not_transversal() {
        // the conic x² + y² − z² is tangent to x(x² + y² − z²)... use B₀ = Q² + x⁴: B₀ ∩ Q = {x = 0} doubled
        let q = TernaryForm::from_terms(2, &[(1, [2, 0, 0]), (1, [0, 2, 0]), (-1, [0, 0, 2])]).unwrap();
        let x4 = TernaryForm::from_terms(4, &[(1, [4, 0, 0])]).unwrap();
        let b0 = q.pow(2).add(&x4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (ok, _) = intersect_quartic_conic(&b0, &q, &mut rng);
        assert!(!ok);
        let (ok, pts) = intersect_quartic_conic(&TernaryForm::fermat(), &sphere(), &mut rng);
        assert!(ok);
        assert_eq!(pts.len(), 8);
    }
}
