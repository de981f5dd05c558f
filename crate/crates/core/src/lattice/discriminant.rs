use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::LatticeError;
use crate::linalg::{smith_normal_form, unimodular_inverse, IntMatrix};

/// The finite group `A_M = M^∨/M` of a nondegenerate lattice with its
/// discriminant bilinear and quadratic forms.
///
/// Vectors are written in the coordinates of the lattice basis. A class is
/// stored by its Smith coordinates: the tuple `(y_i mod d_i)` where `y = S·V⁻¹·x`
/// for the Smith decomposition `U·G·V = S` of the Gram matrix. Two dual vectors
/// represent the same class iff their Smith coordinates agree.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    gram: IntMatrix,
    factors: Vec<BigInt>,
    generators: Vec<Vec<BigRational>>,
    /// rows of `V⁻¹` belonging to the torsion positions
    coord_rows: IntMatrix,
}

impl DiscriminantGroup {
    pub fn new(gram: &IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        let snf = smith_normal_form(gram);
        if snf.rank() < gram.rows() {
            return Err(LatticeError::Degenerate);
        }
        let diag = snf.diagonal();
        let vinv = unimodular_inverse(&snf.v);
        let mut factors = Vec::new();
        let mut generators = Vec::new();
        let mut rows = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            factors.push(d.clone());
            generators.push(
                snf.v
                    .col_vec(i)
                    .into_iter()
                    .map(|x| BigRational::new(x, d.clone()))
                    .collect(),
            );
            rows.push(i);
        }
        Ok(DiscriminantGroup {
            gram: gram.clone(),
            factors,
            generators,
            coord_rows: vinv.select_rows(&rows),
        })
    }

    /// Invariant factors `d_1 | d_2 | …`, all greater than one.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    /// Dual-lattice vectors (lattice coordinates) representing the generators.
    pub fn generators(&self) -> &[Vec<BigRational>] {
        &self.generators
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn ngens(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_two_elementary(&self) -> bool {
        let two = BigInt::from(2);
        self.factors.iter().all(|d| *d == two)
    }

    pub fn zero(&self) -> Vec<BigInt> {
        alloc::vec![BigInt::zero(); self.factors.len()]
    }

    pub fn is_dual_vector(&self, x: &[BigRational]) -> bool {
        (0..self.gram.rows()).all(|i| {
            self.gram
                .row(i)
                .iter()
                .zip(x)
                .fold(BigRational::zero(), |acc, (g, v)| acc + v * g)
                .is_integer()
        })
    }

    /// Smith coordinates of the class of a dual vector.
    pub fn class_of(&self, x: &[BigRational]) -> Result<Vec<BigInt>, LatticeError> {
        if x.len() != self.gram.rows() {
            return Err(LatticeError::DimensionMismatch);
        }
        if !self.is_dual_vector(x) {
            return Err(LatticeError::NotDualVector);
        }
        Ok(self
            .factors
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let w = self
                    .coord_rows
                    .row(k)
                    .iter()
                    .zip(x)
                    .fold(BigRational::zero(), |acc, (a, v)| acc + v * a);
                let y = w * BigRational::from_integer(d.clone());
                debug_assert!(y.is_integer());
                y.to_integer().mod_floor(d)
            })
            .collect())
    }

    pub fn reduce(&self, class: &[BigInt]) -> Vec<BigInt> {
        class.iter().zip(&self.factors).map(|(c, d)| c.mod_floor(d)).collect()
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((x, y), d)| (x + y).mod_floor(d))
            .collect()
    }

    /// A dual vector representing the class.
    pub fn representative(&self, class: &[BigInt]) -> Vec<BigRational> {
        let n = self.gram.rows();
        let mut x = alloc::vec![BigRational::zero(); n];
        for (c, g) in class.iter().zip(&self.generators) {
            if c.is_zero() {
                continue;
            }
            let c = BigRational::from_integer(c.clone());
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += &c * gi;
            }
        }
        x
    }

    fn pairing(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let g = &self.gram[(i, j)];
                if !g.is_zero() {
                    acc += xi * yj * BigRational::from_integer(g.clone());
                }
            }
        }
        acc
    }

    /// Discriminant quadratic form `q(x) = x² mod 2Z`, normalized to `[0, 2)`.
    pub fn quadratic(&self, class: &[BigInt]) -> BigRational {
        let x = self.representative(class);
        mod_rational(&self.pairing(&x, &x), &BigInt::from(2))
    }

    /// Discriminant bilinear form `b(x, y) = x·y mod Z`, normalized to `[0, 1)`.
    pub fn bilinear(&self, a: &[BigInt], b: &[BigInt]) -> BigRational {
        let x = self.representative(a);
        let y = self.representative(b);
        mod_rational(&self.pairing(&x, &y), &BigInt::one())
    }

    /// Self-pairing `x²` of the representative, not reduced.
    pub fn norm(&self, class: &[BigInt]) -> BigRational {
        let x = self.representative(class);
        self.pairing(&x, &x)
    }

    /// Every element, in lexicographic order of Smith coordinates.
    pub fn elements(&self) -> Elements<'_> {
        Elements {
            factors: &self.factors,
            next: Some(self.zero()),
        }
    }

    /// The generators as unit class vectors.
    pub fn generator_classes(&self) -> Vec<Vec<BigInt>> {
        (0..self.ngens())
            .map(|i| {
                let mut c = self.zero();
                c[i] = BigInt::one();
                c
            })
            .collect()
    }
}

/// `x mod m` as a rational in `[0, m)`.
pub fn mod_rational(x: &BigRational, m: &BigInt) -> BigRational {
    let m = BigRational::from_integer(m.clone());
    let q = (x / &m).floor();
    x - q * m
}

pub struct Elements<'a> {
    factors: &'a [BigInt],
    next: Option<Vec<BigInt>>,
}

impl Iterator for Elements<'_> {
    type Item = Vec<BigInt>;

    fn next(&mut self) -> Option<Vec<BigInt>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut carry = true;
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] == self.factors[i] {
                succ[i] = BigInt::zero();
            } else {
                carry = false;
                break;
            }
        }
        if !carry {
            self.next = Some(succ);
        }
        Some(cur)
    }
}
