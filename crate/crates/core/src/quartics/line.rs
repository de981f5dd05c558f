use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::form::{cross, normalize_max, CPoint, ComplexForm, TernaryForm};
use super::QuarticError;
use crate::poly::{rat_to_f64, QPoly};

/// A line `l₀x + l₁y + l₂z = 0` with rational dual coordinates, normalized so
/// that the first coordinate of largest absolute value is one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    coords: [BigRational; 3],
}

impl Line {
    pub fn new(coords: [BigRational; 3]) -> Result<Self, QuarticError> {
        let p = pivot(&coords).ok_or(QuarticError::ZeroLine)?;
        let s = coords[p].clone();
        Ok(Line {
            coords: coords.map(|c| c / &s),
        })
    }

    pub fn from_i64(l: [i64; 3]) -> Result<Self, QuarticError> {
        Line::new(l.map(|c| BigRational::from_integer(c.into())))
    }

    pub fn coords(&self) -> &[BigRational; 3] {
        &self.coords
    }

    pub fn pivot(&self) -> usize {
        pivot(&self.coords).expect("nonzero line")
    }

    /// Two points `A`, `B` spanning the line: the non-pivot coordinates are
    /// `(1, 0)` and `(0, 1)`, the pivot coordinate is solved for.
    pub fn parametrization(&self) -> ([BigRational; 3], [BigRational; 3]) {
        let p = self.pivot();
        let free: Vec<usize> = (0..3).filter(|&i| i != p).collect();
        let mut pts = [
            [BigRational::zero(), BigRational::zero(), BigRational::zero()],
            [BigRational::zero(), BigRational::zero(), BigRational::zero()],
        ];
        for (k, pt) in pts.iter_mut().enumerate() {
            pt[free[k]] = BigRational::one();
            pt[p] = -&self.coords[free[k]] / &self.coords[p];
        }
        let [a, b] = pts;
        (a, b)
    }

    pub fn to_complex(&self) -> CLine {
        CLine::new(self.coords.clone().map(|c| Complex64::new(rat_to_f64(&c), 0.0)))
    }

    pub fn contains(&self, p: &[BigRational; 3]) -> bool {
        self.coords
            .iter()
            .zip(p)
            .map(|(a, b)| a * b)
            .sum::<BigRational>()
            .is_zero()
    }
}

fn pivot(c: &[BigRational; 3]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 0..3 {
        if c[i].is_zero() {
            continue;
        }
        if best.is_none_or(|b| c[i].abs() > c[b].abs()) {
            best = Some(i);
        }
    }
    best
}

/// `F(s·A + u·B)` as a binary form: `coeffs[k]` multiplies `s^{d−k} u^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub degree: usize,
    pub coeffs: Vec<BigRational>,
}

impl BinaryForm {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The affine polynomial in `u` (at `s = 1`).
    pub fn dehomogenize(&self) -> QPoly {
        QPoly::new(self.coeffs.clone())
    }

    /// Root multiplicities on `P¹`, counting the point `s = 0`; descending.
    pub fn multiplicity_pattern(&self) -> Vec<usize> {
        let p = self.dehomogenize();
        let mut v = p.multiplicity_pattern();
        let at_infinity = self.degree - p.degree().unwrap_or(0);
        if at_infinity > 0 {
            v.push(at_infinity);
        }
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

/// Exact restriction of `F` to `t` in the parametrization of [`Line::parametrization`].
pub fn restrict_to_line(f: &TernaryForm, t: &Line) -> BinaryForm {
    let (a, b) = t.parametrization();
    let p = f.along(&a, &b);
    let mut coeffs: Vec<BigRational> = p.coeffs().to_vec();
    coeffs.resize(f.degree() + 1, BigRational::zero());
    BinaryForm {
        degree: f.degree(),
        coeffs,
    }
}

/// A line with complex dual coordinates, normalized so that the
/// largest-modulus coordinate is one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CLine {
    coords: CPoint,
}

/// Fixed auxiliary vectors for the canonical parametrization of complex lines.
const W1: [(f64, f64); 3] = [(0.5773, 0.1127), (-0.3011, 0.6409), (0.7203, -0.2318)];
const W2: [(f64, f64); 3] = [(-0.2231, 0.5402), (0.8127, 0.0903), (0.1459, 0.6611)];

fn cvec(w: &[(f64, f64); 3]) -> CPoint {
    w.map(|(re, im)| Complex64::new(re, im))
}

impl CLine {
    pub fn new(coords: CPoint) -> Self {
        CLine {
            coords: normalize_max(&coords),
        }
    }

    pub fn coords(&self) -> &CPoint {
        &self.coords
    }

    /// The line through two points.
    pub fn through(p: &CPoint, q: &CPoint) -> Self {
        CLine::new(cross(p, q))
    }

    /// Canonical pair of unit points spanning the line.
    pub fn parametrization(&self) -> (CPoint, CPoint) {
        let unit = |v: CPoint| {
            let n = super::form::cnorm(&v);
            v.map(|x| x / n)
        };
        (
            unit(cross(&self.coords, &cvec(&W1))),
            unit(cross(&self.coords, &cvec(&W2))),
        )
    }

    /// `F(P + xD)` in the canonical parametrization, with the roles of `P`, `D`
    /// swapped when the leading coefficient is small. Returns the coefficients
    /// together with the two points used.
    pub fn restrict(&self, f: &ComplexForm) -> (Vec<Complex64>, CPoint, CPoint) {
        let (p, d) = self.parametrization();
        let c = f.along(&p, &d);
        let m = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if c[f.degree()].norm() >= 1e-3 * m {
            return (c, p, d);
        }
        (f.along(&d, &p), d, p)
    }

    pub fn eval(&self, p: &CPoint) -> Complex64 {
        self.coords.iter().zip(p).map(|(a, b)| a * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn fermat_on_z_zero() {
        let t = Line::from_i64([0, 0, 1]).unwrap();
        let r = restrict_to_line(&TernaryForm::fermat(), &t);
        assert_eq!(r.coeffs, vec![rat(1), rat(0), rat(0), rat(0), rat(1)]);
    }

    #[test]
    fn conic_on_z_zero() {
        let conic = TernaryForm::from_terms(2, &[(1, [2, 0, 0]), (1, [0, 2, 0]), (1, [0, 0, 2])]).unwrap();
        let r = restrict_to_line(&conic, &Line::from_i64([0, 0, 1]).unwrap());
        assert_eq!(r.coeffs, vec![rat(1), rat(0), rat(1)]);
    }

    #[test]
    fn contained_line_gives_zero() {
        // z·(x³ + y³ + z³) contains z = 0
        let f = TernaryForm::from_terms(4, &[(1, [3, 0, 1]), (1, [0, 3, 1]), (1, [0, 0, 4])]).unwrap();
        let r = restrict_to_line(&f, &Line::from_i64([0, 0, 5]).unwrap());
        assert!(r.is_zero());
    }

    #[test]
    fn normalization_and_points() {
        let t = Line::from_i64([2, -4, 1]).unwrap();
        assert_eq!(t.pivot(), 1);
        assert_eq!(t.coords()[1], rat(1));
        let (a, b) = t.parametrization();
        assert!(t.contains(&a) && t.contains(&b));
        assert!(Line::from_i64([0, 0, 0]).is_err());
    }

    #[test]
    fn pattern_counts_infinity() {
        // x²·y² restricted to z = 0 in coordinates (s, u) = (x, y): s²u²
        let f = TernaryForm::from_terms(4, &[(1, [2, 2, 0])]).unwrap();
        let r = restrict_to_line(&f, &Line::from_i64([0, 0, 1]).unwrap());
        assert_eq!(r.multiplicity_pattern(), vec![2, 2]);
    }
}
