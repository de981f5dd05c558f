use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use super::QuarticError;
use crate::poly::{rat, rat_to_f64, QPoly};

pub type CPoint = [Complex64; 3];

/// Exponents `(a, b, c)` of `x^a y^b z^c` of total degree `d` in graded-lex
/// order: `x⁴, x³y, x³z, x²y², …, z⁴` for `d = 4`.
pub fn monomials(d: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity((d + 1) * (d + 2) / 2);
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

/// Position of `x^a y^b z^c` in [`monomials`].
pub fn monomial_index(e: [usize; 3]) -> usize {
    let d = e[0] + e[1] + e[2];
    // monomials with a larger x-exponent come first
    let before: usize = (e[0] + 1..=d).map(|a| d - a + 1).sum();
    before + (d - e[0] - e[1])
}

pub fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Homogeneous ternary form with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TernaryForm {
    degree: usize,
    coeffs: Vec<BigRational>,
}

impl TernaryForm {
    /// Rejects wrong coefficient counts and the zero form.
    pub fn new(degree: usize, coeffs: Vec<BigRational>) -> Result<Self, QuarticError> {
        if coeffs.len() != monomial_count(degree) {
            return Err(QuarticError::CoefficientCount {
                expected: monomial_count(degree),
                found: coeffs.len(),
            });
        }
        let f = TernaryForm { degree, coeffs };
        if f.is_zero() {
            return Err(QuarticError::ZeroForm);
        }
        Ok(f)
    }

    pub fn from_i64(degree: usize, coeffs: &[i64]) -> Result<Self, QuarticError> {
        TernaryForm::new(degree, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub(crate) fn zero(degree: usize) -> Self {
        TernaryForm {
            degree,
            coeffs: alloc::vec![BigRational::zero(); monomial_count(degree)],
        }
    }

    /// Builds a form from `(coefficient, [a, b, c])` terms; repeated monomials add up.
    pub fn from_terms(degree: usize, terms: &[(i64, [usize; 3])]) -> Result<Self, QuarticError> {
        let mut f = TernaryForm::zero(degree);
        for (c, e) in terms {
            if e.iter().sum::<usize>() != degree {
                return Err(QuarticError::NotHomogeneous);
            }
            f.coeffs[monomial_index(*e)] += rat(*c);
        }
        if f.is_zero() {
            return Err(QuarticError::ZeroForm);
        }
        Ok(f)
    }

    /// `x⁴ + y⁴ + z⁴`.
    pub fn fermat() -> Self {
        TernaryForm::from_terms(4, &[(1, [4, 0, 0]), (1, [0, 4, 0]), (1, [0, 0, 4])])
            .expect("nonzero")
    }

    /// Linear form `l₀x + l₁y + l₂z`.
    pub fn linear(l: &[BigRational; 3]) -> Self {
        TernaryForm {
            degree: 1,
            coeffs: l.to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, e: [usize; 3]) -> &BigRational {
        &self.coeffs[monomial_index(e)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, p: &[BigRational; 3]) -> BigRational {
        let pw: Vec<Vec<BigRational>> = p.iter().map(|x| powers(x, self.degree)).collect();
        monomials(self.degree)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| c * &pw[0][e[0]] * &pw[1][e[1]] * &pw[2][e[2]])
            .sum()
    }

    /// `∂F/∂x_i`; may be the zero form.
    pub fn partial(&self, i: usize) -> TernaryForm {
        if self.degree == 0 {
            return TernaryForm::zero(0);
        }
        let mut out = TernaryForm::zero(self.degree - 1);
        for (e, c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if e[i] == 0 || c.is_zero() {
                continue;
            }
            let mut f = *e;
            f[i] -= 1;
            out.coeffs[monomial_index(f)] += c * rat(e[i] as i64);
        }
        out
    }

    pub fn gradient(&self) -> [TernaryForm; 3] {
        [self.partial(0), self.partial(1), self.partial(2)]
    }

    pub fn add(&self, o: &TernaryForm) -> TernaryForm {
        assert_eq!(self.degree, o.degree, "degree mismatch");
        TernaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &TernaryForm) -> TernaryForm {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> TernaryForm {
        TernaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, o: &TernaryForm) -> TernaryForm {
        let mut out = TernaryForm::zero(self.degree + o.degree);
        let (ma, mb) = (monomials(self.degree), monomials(o.degree));
        for (ea, ca) in ma.iter().zip(&self.coeffs) {
            if ca.is_zero() {
                continue;
            }
            for (eb, cb) in mb.iter().zip(&o.coeffs) {
                if cb.is_zero() {
                    continue;
                }
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.coeffs[monomial_index(e)] += ca * cb;
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> TernaryForm {
        let mut acc = TernaryForm {
            degree: 0,
            coeffs: alloc::vec![BigRational::one()],
        };
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `F(M·X)`: substitutes `x_i ↦ Σ_j m[i][j]·X_j`.
    pub fn compose_linear(&self, m: &[[BigRational; 3]; 3]) -> TernaryForm {
        let lin: Vec<TernaryForm> = m.iter().map(TernaryForm::linear).collect();
        let pw: Vec<Vec<TernaryForm>> = lin
            .iter()
            .map(|l| {
                let mut v = alloc::vec![l.pow(0)];
                for k in 1..=self.degree {
                    let next = v[k - 1].mul(l);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = TernaryForm::zero(self.degree);
        for (e, c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let t = pw[0][e[0]].mul(&pw[1][e[1]]).mul(&pw[2][e[2]]);
            out = out.add(&t.scale(c));
        }
        out
    }

    /// `F(A + u·B)` as a polynomial in `u`.
    pub fn along(&self, a: &[BigRational; 3], b: &[BigRational; 3]) -> QPoly {
        let lin: Vec<QPoly> = (0..3)
            .map(|i| QPoly::new(alloc::vec![a[i].clone(), b[i].clone()]))
            .collect();
        let pw: Vec<Vec<QPoly>> = lin
            .iter()
            .map(|l| {
                let mut v = alloc::vec![QPoly::constant(BigRational::one())];
                for k in 1..=self.degree {
                    let next = &v[k - 1] * l;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = QPoly::zero();
        for (e, c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let t = &(&pw[0][e[0]] * &pw[1][e[1]]) * &pw[2][e[2]];
            out = &out + &t.scale(c);
        }
        out
    }

    pub fn to_complex(&self) -> ComplexForm {
        ComplexForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Complex64::new(rat_to_f64(c), 0.0))
                .collect(),
        }
    }

    /// Symmetric 3×3 matrix of a conic (entries halved off the diagonal).
    pub fn conic_matrix(&self) -> Option<[[BigRational; 3]; 3]> {
        if self.degree != 2 {
            return None;
        }
        let half = BigRational::new(1.into(), 2.into());
        let c = |e| self.coeff(e).clone();
        let xy = c([1, 1, 0]) * &half;
        let xz = c([1, 0, 1]) * &half;
        let yz = c([0, 1, 1]) * &half;
        Some([
            [c([2, 0, 0]), xy.clone(), xz.clone()],
            [xy, c([0, 2, 0]), yz.clone()],
            [xz, yz, c([0, 0, 2])],
        ])
    }
}

fn powers(x: &BigRational, d: usize) -> Vec<BigRational> {
    let mut v = alloc::vec![BigRational::one()];
    for k in 1..=d {
        let next = &v[k - 1] * x;
        v.push(next);
    }
    v
}

impl fmt::Debug for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryForm({self})")
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (v, k) in ["x", "y", "z"].iter().zip(e) {
                match k {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{k}")?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses sums of monomials in `x, y, z` with rational coefficients, as
/// printed by `Display`: `x^4 + 2*y^4 - 3/2 z^4`, `(1/2)*x*y`. Juxtaposition
/// multiplies; repeated monomials add up.
impl core::str::FromStr for TernaryForm {
    type Err = QuarticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = FormParser { s: s.as_bytes(), at: 0 };
        let terms = p.sum()?;
        let degree = terms.first().map(|t| t.1.iter().sum::<usize>()).unwrap_or(0);
        if terms.iter().any(|t| t.1.iter().sum::<usize>() != degree) {
            return Err(QuarticError::NotHomogeneous);
        }
        let mut f = TernaryForm::zero(degree);
        for (c, e) in terms {
            f.coeffs[monomial_index(e)] += c;
        }
        if f.is_zero() {
            return Err(QuarticError::ZeroForm);
        }
        Ok(f)
    }
}

struct FormParser<'a> {
    s: &'a [u8],
    at: usize,
}

impl FormParser<'_> {
    fn err(&self, reason: &'static str) -> QuarticError {
        QuarticError::Parse { at: self.at, reason }
    }

    fn peek(&mut self) -> Option<u8> {
        while self.s.get(self.at).is_some_and(u8::is_ascii_whitespace) {
            self.at += 1;
        }
        self.s.get(self.at).copied()
    }

    fn sum(&mut self) -> Result<Vec<(BigRational, [usize; 3])>, QuarticError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.at += 1;
                -1
            }
            Some(b'+') => {
                self.at += 1;
                1
            }
            None => return Err(self.err("empty form")),
            _ => 1,
        };
        loop {
            let (c, e) = self.term()?;
            terms.push((c * rat(sign), e));
            sign = match self.peek() {
                None => return Ok(terms),
                Some(b'+') => 1,
                Some(b'-') => -1,
                Some(_) => return Err(self.err("expected `+` or `-`")),
            };
            self.at += 1;
        }
    }

    fn term(&mut self) -> Result<(BigRational, [usize; 3]), QuarticError> {
        let mut c = BigRational::one();
        let mut e = [0; 3];
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(b'*') if factors > 0 => self.at += 1,
                Some(b'+' | b'-') | None if factors > 0 => return Ok((c, e)),
                _ => {}
            }
            match self.peek() {
                Some(b'x' | b'y' | b'z') => {
                    let v = usize::from(self.s[self.at] - b'x');
                    self.at += 1;
                    let k = if self.peek() == Some(b'^') {
                        self.at += 1;
                        self.peek();
                        self.integer()?
                    } else {
                        1
                    };
                    e[v] += usize::try_from(k).map_err(|_| self.err("exponent too large"))?;
                }
                Some(b'(') => {
                    self.at += 1;
                    let neg = match self.peek() {
                        Some(b'-') => {
                            self.at += 1;
                            true
                        }
                        Some(b'+') => {
                            self.at += 1;
                            false
                        }
                        _ => false,
                    };
                    let r = self.rational()?;
                    c *= if neg { -r } else { r };
                    if self.peek() != Some(b')') {
                        return Err(self.err("expected `)`"));
                    }
                    self.at += 1;
                }
                Some(b'0'..=b'9') => c *= self.rational()?,
                _ => return Err(self.err("expected a coefficient or one of x, y, z")),
            }
            factors += 1;
        }
    }

    fn integer(&mut self) -> Result<u64, QuarticError> {
        let start = self.at;
        while self.s.get(self.at).is_some_and(u8::is_ascii_digit) {
            self.at += 1;
        }
        core::str::from_utf8(&self.s[start..self.at])
            .ok()
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| self.err("expected an integer"))
    }

    fn big_integer(&mut self) -> Result<num_bigint::BigInt, QuarticError> {
        self.peek();
        let start = self.at;
        while self.s.get(self.at).is_some_and(u8::is_ascii_digit) {
            self.at += 1;
        }
        core::str::from_utf8(&self.s[start..self.at])
            .ok()
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| self.err("expected an integer"))
    }

    fn rational(&mut self) -> Result<BigRational, QuarticError> {
        let n = self.big_integer()?;
        if self.peek() == Some(b'/') {
            self.at += 1;
            let d = self.big_integer()?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(BigRational::new(n, d));
        }
        Ok(BigRational::from_integer(n))
    }
}

/// Floating-point complex view of a ternary form.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexForm {
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl ComplexForm {
    pub fn new(degree: usize, coeffs: Vec<Complex64>) -> Result<Self, QuarticError> {
        if coeffs.len() != monomial_count(degree) {
            return Err(QuarticError::CoefficientCount {
                expected: monomial_count(degree),
                found: coeffs.len(),
            });
        }
        Ok(ComplexForm { degree, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Divides by the largest coefficient modulus.
    pub fn normalized(&self) -> ComplexForm {
        let m = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            return self.clone();
        }
        ComplexForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c / m).collect(),
        }
    }

    pub fn eval(&self, p: &CPoint) -> Complex64 {
        let pw: Vec<Vec<Complex64>> = p.iter().map(|x| cpowers(*x, self.degree)).collect();
        monomials(self.degree)
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| c * pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]])
            .sum()
    }

    pub fn partial(&self, i: usize) -> ComplexForm {
        let d = self.degree.saturating_sub(1);
        let mut coeffs = alloc::vec![Complex64::zero(); monomial_count(d)];
        if self.degree > 0 {
            for (e, c) in monomials(self.degree).iter().zip(&self.coeffs) {
                if e[i] == 0 {
                    continue;
                }
                let mut f = *e;
                f[i] -= 1;
                coeffs[monomial_index(f)] += c * e[i] as f64;
            }
        }
        ComplexForm { degree: d, coeffs }
    }

    /// `Σ vᵢ·∂F/∂xᵢ`.
    pub fn directional(&self, v: &CPoint) -> ComplexForm {
        let parts = [self.partial(0), self.partial(1), self.partial(2)];
        let mut coeffs = alloc::vec![Complex64::zero(); monomial_count(parts[0].degree)];
        for (p, vi) in parts.iter().zip(v) {
            for (o, c) in coeffs.iter_mut().zip(&p.coeffs) {
                *o += c * vi;
            }
        }
        ComplexForm {
            degree: parts[0].degree,
            coeffs,
        }
    }

    pub fn gradient_at(&self, p: &CPoint) -> CPoint {
        [
            self.partial(0).eval(p),
            self.partial(1).eval(p),
            self.partial(2).eval(p),
        ]
    }

    /// Coefficients (ascending in `x`, length `degree + 1`) of `F(P + x·D)`.
    pub fn along(&self, p: &CPoint, d: &CPoint) -> Vec<Complex64> {
        let pw: Vec<Vec<Vec<Complex64>>> = (0..3)
            .map(|i| {
                let mut v = alloc::vec![alloc::vec![Complex64::one()]];
                for k in 1..=self.degree {
                    let next = crate::poly::cmul(&v[k - 1], &[p[i], d[i]]);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = alloc::vec![Complex64::zero(); self.degree + 1];
        for (e, c) in monomials(self.degree).iter().zip(&self.coeffs) {
            if *c == Complex64::zero() {
                continue;
            }
            let t = crate::poly::cmul(&crate::poly::cmul(&pw[0][e[0]], &pw[1][e[1]]), &pw[2][e[2]]);
            for (o, x) in out.iter_mut().zip(&t) {
                *o += c * x;
            }
        }
        out
    }
}

fn cpowers(x: Complex64, d: usize) -> Vec<Complex64> {
    let mut v = alloc::vec![Complex64::one()];
    for k in 1..=d {
        v.push(v[k - 1] * x);
    }
    v
}

pub fn cross(a: &CPoint, b: &CPoint) -> CPoint {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn cnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Scales so that the largest-modulus coordinate equals one.
pub fn normalize_max(a: &CPoint) -> CPoint {
    let k = (0..3)
        .max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm()))
        .expect("three coordinates");
    let s = a[k];
    [a[0] / s, a[1] / s, a[2] / s]
}

/// Sine of the angle between two nonzero complex vectors viewed as points of
/// projective space.
pub fn projective_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    // sine of the angle from the 2x2 minors; 1 - cos² loses half the digits
    let mut wedge = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            wedge += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
        }
    }
    (wedge.sqrt() / (cnorm(a) * cnorm(b))).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;
    use proptest::prelude::*;

    #[test]
    fn small_projective_distance() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let a = [c(1.0), c(2.0), c(3.0)];
        let b = [c(2.0), c(4.0), c(6.0 + 6e-12)];
        let d = projective_distance(&a, &b);
        let exact = 6e-12 * (5.0f64 / 14.0).sqrt() / 14.0f64.sqrt() / 2.0;
        assert!((d - exact).abs() < 1e-3 * exact, "{d} vs {exact}");
        assert_eq!(projective_distance(&a, &a), 0.0);
    }

    #[test]
    fn parse_forms() {
        assert_eq!("x^4 + y^4 + z^4".parse::<TernaryForm>().unwrap(), TernaryForm::fermat());
        let f: TernaryForm = "-3/2 x^2yz + 2*x*y*z^2 - (1/3)*x^4 + x^2 y z".parse().unwrap();
        assert_eq!(*f.coeff([2, 1, 1]), ratio(-1, 2));
        assert_eq!(*f.coeff([1, 1, 2]), rat(2));
        assert_eq!(*f.coeff([4, 0, 0]), ratio(-1, 3));
        assert_eq!("x^2 + y".parse::<TernaryForm>().unwrap_err(), QuarticError::NotHomogeneous);
        assert_eq!("x - x".parse::<TernaryForm>().unwrap_err(), QuarticError::ZeroForm);
        assert!(matches!("x^4 + + y^4".parse::<TernaryForm>(), Err(QuarticError::Parse { at: 6, .. })));
        assert!(matches!("x^4 + w".parse::<TernaryForm>(), Err(QuarticError::Parse { .. })));
        assert!(matches!("1/0 x".parse::<TernaryForm>(), Err(QuarticError::Parse { .. })));
    }

    proptest! {
        #[test]
        fn display_round_trip(c in prop::collection::vec(-20i64..20, 15), d in 1i64..9) {
            prop_assume!(c.iter().any(|&x| x != 0));
            let f = TernaryForm::new(4, c.iter().map(|&x| ratio(x, d)).collect()).unwrap();
            prop_assert_eq!(f.to_string().parse::<TernaryForm>().unwrap(), f);
        }
    }
}
