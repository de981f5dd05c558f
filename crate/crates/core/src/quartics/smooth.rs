use alloc::vec::Vec;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::form::{cnorm, monomial_count, monomial_index, monomials, CPoint, ComplexForm, TernaryForm};
use super::QuarticError;
use crate::linalg::QMatrix;

/// Exact smoothness test for a ternary form of degree `d ≥ 1`.
///
/// The partials have degree `d − 1`. They have no common projective zero iff
/// they form a regular sequence, iff their ideal contains every form of degree
/// `3(d − 2) + 1`; this is a rank condition on a Macaulay matrix.
pub fn is_smooth(f: &TernaryForm) -> Result<bool, QuarticError> {
    if f.is_zero() {
        return Err(QuarticError::ZeroForm);
    }
    let d = f.degree();
    if d <= 1 {
        return Ok(true);
    }
    let target = 3 * (d - 2) + 1;
    let shift = target - (d - 1);
    let grad = f.gradient();
    let shifts = monomials(shift);
    let cols = monomial_count(target);
    let mut m = QMatrix::zeros(3 * shifts.len(), cols);
    let mut r = 0;
    for g in &grad {
        for s in &shifts {
            for (e, c) in monomials(d - 1).iter().zip(g.coeffs()) {
                if c.is_zero() {
                    continue;
                }
                let k = monomial_index([e[0] + s[0], e[1] + s[1], e[2] + s[2]]);
                m[(r, k)] = c.clone();
            }
            r += 1;
        }
    }
    Ok(m.rank() == cols)
}

/// Searches numerically for a common zero of the partials (Gauss–Newton from
/// seeded starts). Returns a unit-norm point with `|∇F| ≤ tol·|F|` scale.
pub fn singular_point(f: &ComplexForm, rng: &mut ChaCha8Rng, tol: f64) -> Option<CPoint> {
    let f = f.normalized();
    let g = [f.partial(0), f.partial(1), f.partial(2)];
    let h: Vec<Vec<ComplexForm>> = g
        .iter()
        .map(|gi| (0..3).map(|j| gi.partial(j)).collect())
        .collect();
    let mut best: Option<(f64, CPoint)> = None;
    for _ in 0..64 {
        let mut x: CPoint = core::array::from_fn(|_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        for _ in 0..100 {
            let n = cnorm(&x);
            x = x.map(|v| v / n);
            let r = Vector3::from_fn(|i, _| g[i].eval(&x));
            let j = Matrix3::from_fn(|i, k| h[i][k].eval(&x));
            // least-squares step restricted to the orthogonal complement of x
            let xv = Vector3::from_fn(|i, _| x[i]);
            let proj = Matrix3::identity() - xv * xv.adjoint();
            let jp = j * proj;
            let a = jp.adjoint() * jp + Matrix3::identity() * Complex64::new(1e-14, 0.0);
            let Some(step) = a.lu().solve(&(jp.adjoint() * r)) else {
                break;
            };
            let step = proj * step;
            for i in 0..3 {
                x[i] -= step[i];
            }
            if step.norm() < 1e-15 {
                break;
            }
        }
        let n = cnorm(&x);
        let x = x.map(|v| v / n);
        let res = g.iter().map(|gi| gi.eval(&x).norm()).fold(0.0, f64::max);
        if best.as_ref().is_none_or(|b| res < b.0) {
            best = Some((res, x));
        }
        if res < tol {
            break;
        }
    }
    best.filter(|b| b.0 < tol).map(|b| b.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn form(terms: &[(i64, [usize; 3])]) -> TernaryForm {
        TernaryForm::from_terms(4, terms).unwrap()
    }

    #[test]
    fn fermat_is_smooth() {
        assert!(is_smooth(&TernaryForm::fermat()).unwrap());
    }

    #[test]
    fn double_conic_is_singular() {
        let q = TernaryForm::from_terms(2, &[(1, [2, 0, 0]), (1, [0, 2, 0]), (1, [0, 0, 2])]).unwrap();
        assert!(!is_smooth(&q.pow(2)).unwrap());
        assert!(is_smooth(&q).unwrap());
    }

    #[test]
    fn witness_for_squared_difference() {
        // (x² − y²)² + z⁴, singular at (1 : ±1 : 0)
        let f = form(&[(1, [4, 0, 0]), (-2, [2, 2, 0]), (1, [0, 4, 0]), (1, [0, 0, 4])]);
        assert!(!is_smooth(&f).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = singular_point(&f.to_complex(), &mut rng, 1e-8).expect("witness");
        let ratio = p[1] / p[0];
        // z enters through z³, so it is only determined to about tol^(1/3)
        assert!(p[2].norm() < 1e-2);
        assert!((ratio.norm() - 1.0).abs() < 1e-6 && ratio.im.abs() < 1e-6);
    }

    #[test]
    fn hyperflex_quartic_is_smooth() {
        assert!(is_smooth(&form(&[(1, [3, 1, 0]), (1, [0, 4, 0]), (1, [0, 0, 4])])).unwrap());
    }

    #[test]
    fn cone_is_singular() {
        assert!(!is_smooth(&form(&[(1, [4, 0, 0]), (1, [0, 4, 0])])).unwrap());
    }
}
