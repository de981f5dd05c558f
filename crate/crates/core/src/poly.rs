//! Univariate polynomials: exact over Q and floating point over C.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, ToPrimitive, Zero};

/// Dense polynomial over Q, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        QPoly::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(alloc::vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = alloc::vec![BigRational::zero(); k + 1];
        v[k] = c;
        QPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(BigRational::one() / self.leading()))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, n: usize) -> QPoly {
        let mut acc = QPoly::constant(BigRational::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = alloc::vec![BigRational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &r[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                let v = &c * di;
                r[k + i] -= v;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Yun's algorithm: `self = c · Π fᵢ^i` with squarefree, pairwise coprime,
    /// monic `fᵢ`. Returns the nonconstant `(fᵢ, i)`.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let fp = self.derivative();
        let a0 = self.gcd(&fp);
        let mut b = self.div_rem(&a0).0;
        let mut c = fp.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.monic(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Multiplicities of the distinct complex roots, in descending order.
    pub fn multiplicity_pattern(&self) -> Vec<usize> {
        let mut v = Vec::new();
        for (f, m) in self.squarefree_decomposition() {
            for _ in 0..f.degree().unwrap_or(0) {
                v.push(m);
            }
        }
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn to_complex(&self) -> CPoly {
        CPoly::new(
            self.coeffs
                .iter()
                .map(|c| Complex64::new(rat_to_f64(c), 0.0))
                .collect(),
        )
    }

    /// Exact interpolation through `(xᵢ, yᵢ)` with distinct `xᵢ` (Newton form).
    pub fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> QPoly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<BigRational> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut p = QPoly::constant(dd[n - 1].clone());
        for i in (0..n - 1).rev() {
            let lin = QPoly::new(alloc::vec![-xs[i].clone(), BigRational::one()]);
            p = &(&p * &lin) + &QPoly::constant(dd[i].clone());
        }
        p
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut v = alloc::vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly::new(v)
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*u")?,
                _ => write!(f, "({c})*u^{k}")?,
            }
        }
        Ok(())
    }
}

/// Dense polynomial over C (double precision), ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::zero()) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * x + c)
    }

    /// Value and first derivative.
    pub fn eval_d(&self, x: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> CPoly {
        CPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// All complex roots with multiplicity by the Ehrlich–Aberth iteration,
    /// followed by Newton polishing of the simple ones.
    pub fn roots(&self) -> Vec<Complex64> {
        let Some(n) = self.degree() else {
            return Vec::new();
        };
        if n == 0 {
            return Vec::new();
        }
        let lc = self.coeffs[n];
        let monic: Vec<Complex64> = self.coeffs.iter().map(|c| c / lc).collect();
        let p = CPoly { coeffs: monic };
        let dp = p.derivative();
        // Fujiwara-type bound for the initial circle
        let radius = (0..n)
            .map(|k| p.coeffs[k].norm().powf(1.0 / (n - k) as f64))
            .fold(0.0, f64::max)
            .max(1e-3);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let t = 2.0 * core::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
                Complex64::from_polar(radius, t)
            })
            .collect();
        let mut done = alloc::vec![false; n];
        for _ in 0..800 {
            let mut all = true;
            for i in 0..n {
                if done[i] {
                    continue;
                }
                let pv = p.eval(z[i]);
                if pv == Complex64::zero() {
                    done[i] = true;
                    continue;
                }
                let ratio = pv / dp.eval(z[i]);
                let mut s = Complex64::zero();
                for j in 0..n {
                    if j != i {
                        s += Complex64::one() / (z[i] - z[j]);
                    }
                }
                let w = ratio / (Complex64::one() - ratio * s);
                if !w.is_finite() {
                    done[i] = true;
                    continue;
                }
                z[i] -= w;
                if w.norm() <= 1e-15 * z[i].norm().max(1e-300) {
                    done[i] = true;
                } else {
                    all = false;
                }
            }
            if all {
                break;
            }
        }
        for zi in z.iter_mut() {
            for _ in 0..3 {
                let (v, d) = p.eval_d(*zi);
                if d.norm() == 0.0 {
                    break;
                }
                let step = v / d;
                let cand = *zi - step;
                if cand.is_finite() && p.eval(cand).norm() < v.norm() {
                    *zi = cand;
                } else {
                    break;
                }
            }
        }
        z
    }
}

/// Multiplication of coefficient vectors (ascending).
pub fn cmul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = alloc::vec![Complex64::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Groups points closer than `tol` (single linkage); returns cluster
/// centroids and sizes, sizes descending.
pub fn cluster(points: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() < tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for (i, &p) in points.iter().enumerate().take(n) {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += p;
                g.2 += 1;
            }
            None => groups.push((r, p, 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> =
        groups.into_iter().map(|(_, s, m)| (s / m as f64, m)).collect();
    out.sort_by_key(|g| core::cmp::Reverse(g.1));
    out
}

/// Smallest `max |aᵢ − b_π(i)|` over bijections `π` (brute force, small sets).
pub fn match_sets(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let d = p
            .iter()
            .enumerate()
            .map(|(i, &j)| (a[i] - b[j]).norm())
            .fold(0.0, f64::max);
        if d < best {
            best = d;
        }
    });
    Some(best)
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn arithmetic() {
        let p = QPoly::from_i64(&[1, 0, 1]);
        let q = QPoly::from_i64(&[-1, 1]);
        assert_eq!(&p * &q, QPoly::from_i64(&[-1, 1, -1, 1]));
        let (d, r) = (&p * &q).div_rem(&q);
        assert_eq!(d, p);
        assert!(r.is_zero());
        assert_eq!(p.eval(&rat(2)), rat(5));
        assert_eq!(p.derivative(), QPoly::from_i64(&[0, 2]));
        assert_eq!((&p - &p).degree(), None);
    }

    #[test]
    fn gcd_and_yun() {
        // (x−1)²(x+2)³(x²+1)
        let a = QPoly::from_i64(&[-1, 1]).pow(2);
        let b = QPoly::from_i64(&[2, 1]).pow(3);
        let c = QPoly::from_i64(&[1, 0, 1]);
        let f = &(&a * &b) * &c.scale(&rat(7));
        let dec = f.squarefree_decomposition();
        assert_eq!(
            dec,
            vec![
                (c.clone(), 1),
                (QPoly::from_i64(&[-1, 1]), 2),
                (QPoly::from_i64(&[2, 1]), 3)
            ]
        );
        assert_eq!(f.multiplicity_pattern(), vec![3, 2, 1, 1]);
        assert!(!f.is_squarefree());
        assert!(c.is_squarefree());
        assert_eq!(a.gcd(&b).degree(), Some(0));
        assert_eq!(f.gcd(&a), a.monic());
    }

    #[test]
    fn interpolation() {
        let p = QPoly::new(vec![ratio(1, 3), rat(-2), rat(0), ratio(5, 7)]);
        let xs: Vec<BigRational> = (0..6).map(rat).collect();
        let ys: Vec<BigRational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(QPoly::interpolate(&xs, &ys), p);
    }

    #[test]
    fn roots_of_unity() {
        let p = CPoly::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::zero(),
            Complex64::zero(),
            Complex64::zero(),
            Complex64::new(1.0, 0.0),
        ]);
        let r = p.roots();
        let expect: Vec<Complex64> = (0..4)
            .map(|k| Complex64::from_polar(1.0, core::f64::consts::PI * (2 * k + 1) as f64 / 4.0))
            .collect();
        assert!(match_sets(&r, &expect).unwrap() < 1e-13);
    }

    #[test]
    fn clusters_of_double_roots() {
        // (x−1)²(x+1)(x−2i)
        let p = QPoly::from_i64(&[-1, 1]).pow(2);
        let p = &p * &QPoly::from_i64(&[1, 1]);
        let mut c = p.to_complex().coeffs().to_vec();
        c = cmul(&c, &[Complex64::new(0.0, -2.0), Complex64::one()]);
        let r = CPoly::new(c).roots();
        let cl = cluster(&r, 1e-5);
        assert_eq!(cl.iter().map(|x| x.1).collect::<Vec<_>>(), vec![2, 1, 1]);
        assert!((cl[0].0 - Complex64::one()).norm() < 1e-7);
    }

    proptest! {
        #[test]
        fn roots_reproduce_polynomial(cs in proptest::collection::vec(-9i64..=9, 3..9)) {
            let p = QPoly::from_i64(&cs);
            prop_assume!(p.degree().unwrap_or(0) >= 1 && p.is_squarefree());
            let cp = p.to_complex();
            let r = cp.roots();
            prop_assert_eq!(r.len(), cp.degree().unwrap());
            // rebuild from roots and compare coefficients
            let mut prod = vec![cp.coeffs()[cp.degree().unwrap()]];
            for z in &r {
                prod = cmul(&prod, &[-z, Complex64::one()]);
            }
            for (a, b) in prod.iter().zip(cp.coeffs()) {
                prop_assert!((a - b).norm() < 1e-7 * (1.0 + cp.max_abs_coeff()));
            }
        }

        #[test]
        fn division_identity(a in proptest::collection::vec(-9i64..=9, 0..7), b in proptest::collection::vec(-9i64..=9, 1..5)) {
            let (a, b) = (QPoly::from_i64(&a), QPoly::from_i64(&b));
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }
    }
}
