//! Integral lattices given by Gram matrices, 2-elementary invariants,
//! primitive embeddings, gluing and involutions.

mod discriminant;
mod embedding;
pub mod fixtures;
mod standard;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::linalg::{inertia, IntMatrix, LinalgError};

pub use discriminant::{mod_rational, DiscriminantGroup, Elements};
pub use embedding::{
    extend_isometry, glue_map, involution_from_sublattice, Embedding, Extension, GlueCheck,
    GlueMap, GlueMismatch,
};
pub use standard::parse_lattice;

/// Up to this 2-rank the δ invariant and the glue checks run over every element.
pub const EXHAUSTIVE_RANK: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("lattice is degenerate")]
    Degenerate,
    #[error("lattice is not even")]
    NotEven,
    #[error("discriminant group is not 2-elementary (invariant factors {0:?})")]
    NotTwoElementary(Vec<BigInt>),
    #[error("lattice is definite")]
    Definite,
    #[error("ambient lattice is not unimodular")]
    NotUnimodular,
    #[error("sublattice is not primitive")]
    NotPrimitive,
    #[error("basis rows are linearly dependent")]
    DependentRows,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("vector is not in the dual lattice")]
    NotDualVector,
    #[error("extension is not integral at {0:?}")]
    ExtensionNotIntegral(Vec<(usize, usize)>),
    #[error("not an isometry: {0}")]
    NotIsometry(&'static str),
    #[error("embeddings have different ambient lattices")]
    DifferentAmbient,
    #[error("unknown lattice name: {0}")]
    UnknownName(String),
}

impl From<LinalgError> for LatticeError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NotSymmetric => LatticeError::NotSymmetric,
            LinalgError::DependentRows => LatticeError::DependentRows,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
}

/// `(signature, a, δ)` of an even 2-elementary lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub rank: usize,
    pub signature: (usize, usize),
    pub a: usize,
    pub delta: u8,
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({}, {}), {}, {})",
            self.signature.0, self.signature.1, self.a, self.delta
        )
    }
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(Lattice { gram })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, LatticeError> {
        Lattice::new(IntMatrix::from_rows(rows))
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn determinant(&self) -> BigInt {
        self.gram.determinant()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn is_unimodular(&self) -> bool {
        self.gram.is_unimodular()
    }

    /// `(n₊, n₋)`; errors on degenerate forms.
    pub fn signature(&self) -> Result<(usize, usize), LatticeError> {
        let i = inertia(&self.gram)?;
        if i.zero > 0 {
            return Err(LatticeError::Degenerate);
        }
        Ok((i.plus, i.minus))
    }

    pub fn is_indefinite(&self) -> Result<bool, LatticeError> {
        let (p, m) = self.signature()?;
        Ok(p > 0 && m > 0)
    }

    /// `Λ(d)`: the form multiplied by `d`.
    pub fn rescale(&self, d: i64) -> Lattice {
        Lattice {
            gram: self.gram.scale(&BigInt::from(d)),
        }
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice {
            gram: self.gram.block_diag(&other.gram),
        }
    }

    /// Gram matrix in a new basis given by the rows of `p`.
    pub fn change_basis(&self, p: &IntMatrix) -> Result<Lattice, LatticeError> {
        if !p.is_unimodular() || p.cols() != self.rank() {
            return Err(LatticeError::DimensionMismatch);
        }
        Ok(Lattice {
            gram: p.congruence(&self.gram),
        })
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup, LatticeError> {
        DiscriminantGroup::new(&self.gram)
    }

    pub fn triple(&self) -> Result<Triple, LatticeError> {
        let signature = self.signature()?;
        if !self.is_even() {
            return Err(LatticeError::NotEven);
        }
        let disc = self.discriminant_group()?;
        if !disc.is_two_elementary() {
            return Err(LatticeError::NotTwoElementary(
                disc.invariant_factors().to_vec(),
            ));
        }
        Ok(Triple {
            rank: self.rank(),
            signature,
            a: disc.ngens(),
            delta: delta_invariant(&disc),
        })
    }

    pub fn hyperbolic_plane() -> Lattice {
        Lattice {
            gram: IntMatrix::from_rows(&[[0, 1], [1, 0]]),
        }
    }

    /// Positive-definite `E₈` (Cartan matrix, Bourbaki numbering).
    pub fn e8() -> Lattice {
        let mut g = IntMatrix::diagonal(&[2; 8]);
        for (i, j) in E8_EDGES {
            g[(i, j)] = BigInt::from(-1);
            g[(j, i)] = BigInt::from(-1);
        }
        Lattice { gram: g }
    }

    /// `A₁ = ⟨−2⟩`.
    pub fn a1() -> Lattice {
        Lattice {
            gram: IntMatrix::diagonal(&[-2]),
        }
    }

    /// `I_{p,q} = diag(1,…,1,−1,…,−1)`.
    pub fn odd_unimodular(p: usize, q: usize) -> Lattice {
        let mut d = alloc::vec![1i64; p];
        d.extend(core::iter::repeat_n(-1, q));
        Lattice {
            gram: IntMatrix::diagonal(&d),
        }
    }

    /// `E₈(−1)² ⊕ U³`.
    pub fn k3() -> Lattice {
        let e = Lattice::e8().rescale(-1);
        let u = Lattice::hyperbolic_plane();
        e.direct_sum(&e).direct_sum(&u).direct_sum(&u).direct_sum(&u)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice({:?})", self.gram)
    }
}

pub(crate) const E8_EDGES: [(usize, usize); 7] =
    [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];

/// δ = 0 iff `x² ∈ Z` for every `x` in the dual. On a 2-elementary group
/// `x ↦ x² mod Z` is additive (`2b(x, y) ∈ Z`), so the generators decide it;
/// small groups are enumerated anyway as a cross-check.
fn delta_invariant(disc: &DiscriminantGroup) -> u8 {
    let odd = |c: &[BigInt]| !disc.norm(c).is_integer();
    let found = if disc.ngens() <= EXHAUSTIVE_RANK {
        disc.elements().any(|c| odd(&c))
    } else {
        let gens = disc.generator_classes();
        gens.iter().enumerate().any(|(i, g)| {
            odd(g) || gens[i + 1..].iter().any(|h| odd(&disc.add(g, h)))
        })
    };
    u8::from(found)
}

/// Isometry-class test for indefinite even 2-elementary lattices by
/// comparing `(signature, a, δ)`.
pub fn nikulin_isometry_class_equal(l1: &Lattice, l2: &Lattice) -> Result<bool, LatticeError> {
    let mut triples = [None, None];
    for (slot, l) in triples.iter_mut().zip([l1, l2]) {
        let t = l.triple()?;
        if t.signature.0 == 0 || t.signature.1 == 0 {
            return Err(LatticeError::Definite);
        }
        *slot = Some(t);
    }
    Ok(triples[0] == triples[1])
}


#[cfg(test)]
mod tests;
