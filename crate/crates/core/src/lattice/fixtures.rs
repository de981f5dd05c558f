//! Concrete lattices and embeddings used by tests and the command line.
//!
//! K3 coordinates: `E₈(−1)` on 0..8 and 8..16, then three copies of `U` on
//! 16..18, 18..20, 20..22.

use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{Embedding, Lattice};
use crate::linalg::IntMatrix;

pub const K3_RANK: usize = 22;

/// `I_{1,7}(2) = diag(2, −2, …, −2)`.
pub fn i17_2() -> Lattice {
    Lattice::odd_unimodular(1, 7).rescale(2)
}

pub fn k3() -> Lattice {
    Lattice::k3()
}

fn unit(i: usize) -> Vec<i64> {
    let mut v = alloc::vec![0; K3_RANK];
    v[i] = 1;
    v
}

fn hyperbolic(block: usize, sign: i64) -> Vec<i64> {
    let mut v = alloc::vec![0; K3_RANK];
    v[16 + 2 * block] = 1;
    v[17 + 2 * block] = sign;
    v
}

fn build(rows: Vec<Vec<i64>>) -> Embedding {
    let basis = IntMatrix::from_big_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect(),
        K3_RANK,
    );
    Embedding::new(k3(), basis).expect("fixture rows are independent")
}

/// `e₁ + f₁` (norm 2), `e₂ − f₂` (norm −2) and six pairwise orthogonal simple
/// roots of the two `E₈(−1)` summands (Bourbaki nodes 1, 2, 5 in each).
pub fn i17_2_in_k3() -> Embedding {
    let mut rows = alloc::vec![hyperbolic(0, 1), hyperbolic(1, -1)];
    rows.extend([0, 1, 4].map(unit));
    rows.extend([8, 9, 12].map(unit));
    build(rows)
}

/// A second embedding: `e + f` in the third `U`, roots at Bourbaki nodes
/// 1, 2, 5, 7 of the first `E₈(−1)` and 1, 2, 5 of the second.
pub fn i17_2_in_k3_alt() -> Embedding {
    let mut rows = alloc::vec![hyperbolic(2, 1)];
    rows.extend([0, 1, 4, 6].map(unit));
    rows.extend([8, 9, 12].map(unit));
    build(rows)
}
