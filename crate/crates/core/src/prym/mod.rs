//! Integral homology of a 4-sheeted branched cover of `P¹` from its monodromy,
//! with intersection form, deck involution and Prym sublattice.

mod graph;

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::linalg::{column_lattice_index, integer_kernel, integer_solve, smith_normal_form, IntMatrix};
use crate::perm::{is_transitive, orbit, product, Perm};
use crate::towers::Monodromy;

pub use graph::RibbonGraph;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PrymError {
    #[error("monodromy product is {0}, not the identity")]
    ProductNotIdentity(String),
    #[error("cover is disconnected: orbit of sheet 1 is {0:?}")]
    NotTransitive(Vec<usize>),
    #[error("involution {0} is not a fixed-point-free involution")]
    BadInvolution(String),
    #[error("involution does not commute with the monodromy around branch value {0}")]
    NotDeck(usize),
    #[error("permutations act on {found} sheets, expected {expected}")]
    SheetCount { expected: usize, found: usize },
    #[error("branch values and permutations differ in number")]
    Length,
    #[error("homology has torsion or wrong rank {0}")]
    Homology(usize),
    #[error("anti-invariant lattice has rank {0}, expected 4")]
    Rank(usize),
    #[error("restricted pairing is degenerate")]
    Degenerate,
}

/// Branch values with their local monodromy (counterclockwise loops, spokes
/// in counterclockwise order) and a deck involution on the sheets.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverPresentation {
    pub branch_points: Vec<Complex64>,
    pub perms: Vec<Perm>,
    pub tau: Perm,
}

impl CoverPresentation {
    pub fn new(branch_points: Vec<Complex64>, perms: Vec<Perm>, tau: Perm) -> Result<Self, PrymError> {
        let p = CoverPresentation { branch_points, perms, tau };
        p.validate()?;
        Ok(p)
    }

    pub fn from_monodromy(m: &Monodromy) -> Result<Self, PrymError> {
        CoverPresentation::new(m.branch_points.clone(), m.perms.clone(), Monodromy::tau())
    }

    pub fn sheets(&self) -> usize {
        self.tau.len()
    }

    pub fn validate(&self) -> Result<(), PrymError> {
        let n = self.sheets();
        if self.branch_points.len() != self.perms.len() {
            return Err(PrymError::Length);
        }
        if let Some(p) = self.perms.iter().find(|p| p.len() != n) {
            return Err(PrymError::SheetCount { expected: n, found: p.len() });
        }
        let t2 = self.tau.then(&self.tau);
        if !t2.is_identity() || (0..n).any(|k| self.tau.apply(k) == k) {
            return Err(PrymError::BadInvolution(alloc::format!("{}", self.tau)));
        }
        let prod = product(&self.perms, n);
        if !prod.is_identity() {
            return Err(PrymError::ProductNotIdentity(alloc::format!("{prod}")));
        }
        if !is_transitive(&self.perms, n) {
            return Err(PrymError::NotTransitive(
                orbit(&self.perms, 0, n).into_iter().map(|k| k + 1).collect(),
            ));
        }
        if let Some(j) = self.perms.iter().position(|p| !p.commutes_with(&self.tau)) {
            return Err(PrymError::NotDeck(j));
        }
        Ok(())
    }

    /// `2 − 2g = n·2 − Σ (n − #cycles)`.
    pub fn genus(&self) -> i64 {
        let n = self.sheets() as i64;
        let def: i64 = self.perms.iter().map(|p| p.deficiency() as i64).sum();
        (def - 2 * n) / 2 + 1
    }

    /// `sheets N`, `tau <cycles>`, then one line per branch value: `re im <cycles>`.
    /// Cycles are 1-based; `#` starts a comment line.
    pub fn to_text(&self) -> String {
        let mut s = alloc::format!("sheets {}\ntau {}\n", self.sheets(), self.tau);
        for (c, p) in self.branch_points.iter().zip(&self.perms) {
            s.push_str(&alloc::format!("{:.17e} {:.17e} {}\n", c.re, c.im, p));
        }
        s
    }

    /// Parses and validates.
    pub fn from_text(text: &str) -> Result<Self, String> {
        let p = CoverPresentation::parse(text)?;
        p.validate().map_err(|e| alloc::format!("{e}"))?;
        Ok(p)
    }

    /// Parses without checking the presentation invariants.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, first) = lines.next().ok_or("empty presentation")?;
        let n: usize = first
            .strip_prefix("sheets")
            .and_then(|v| v.trim().parse().ok())
            .filter(|&n| n > 0)
            .ok_or(alloc::format!("line {ln}: expected `sheets N`"))?;
        let (ln, second) = lines.next().ok_or("missing `tau` line")?;
        let tau = second
            .strip_prefix("tau")
            .ok_or(alloc::format!("line {ln}: expected `tau <cycles>`"))
            .and_then(|v| Perm::parse(v.trim(), n).map_err(|e| alloc::format!("line {ln}: {e}")))?;
        let mut branch_points = Vec::new();
        let mut perms = Vec::new();
        for (ln, l) in lines {
            let mut parts = l.splitn(3, char::is_whitespace);
            let mut num = |what: &str| -> Result<f64, String> {
                parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or(alloc::format!("line {ln}: {what} part"))
            };
            let re = num("real")?;
            let im = num("imaginary")?;
            let p = Perm::parse(parts.next().unwrap_or("").trim(), n).map_err(|e| alloc::format!("line {ln}: {e}"))?;
            branch_points.push(Complex64::new(re, im));
            perms.push(p);
        }
        Ok(CoverPresentation { branch_points, perms, tau })
    }
}

/// `H₁` of the cover in a chosen integral basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologyModel {
    /// Intersection matrix `J[i][j] = cᵢ · cⱼ`.
    pub j: IntMatrix,
    /// Action of the deck involution: column `k` is the image of basis element `k`.
    pub tau: IntMatrix,
}

impl HomologyModel {
    pub fn rank(&self) -> usize {
        self.j.rows()
    }

    pub fn is_valid(&self) -> bool {
        let n = self.rank();
        let id = IntMatrix::identity(n);
        self.j.transpose() == self.j.neg()
            && self.j.determinant().is_one()
            && self.tau.transpose().congruence(&self.j) == self.j
            && &self.tau * &self.tau == id
    }

    /// Rank of `ker(τ − 1)`.
    pub fn invariant_rank(&self) -> usize {
        integer_kernel(&self.tau.sub(&IntMatrix::identity(self.rank()))).rows()
    }

    /// The same data in the basis given by the columns of `s`.
    pub fn change_basis(&self, s: &IntMatrix) -> HomologyModel {
        let inv = crate::linalg::unimodular_inverse(s);
        HomologyModel {
            j: s.transpose().congruence(&self.j),
            tau: &(&inv * &self.tau) * s,
        }
    }
}

/// Homology of the cover from the lifted spoke graph and its rotation system.
pub fn homology_with_intersection(p: &CoverPresentation) -> Result<HomologyModel, PrymError> {
    p.validate()?;
    RibbonGraph::lift(p).homology(&p.tau)
}

/// The anti-invariant sublattice `ker(1 + τ)` with its restricted pairing.
#[derive(Clone, Debug, PartialEq)]
pub struct PrymLattice {
    /// Rows are a basis in homology coordinates (saturated).
    pub basis: IntMatrix,
    pub pairing: IntMatrix,
    /// `|H^τ / (1 + τ)H|`, the component group of `ker(1 + τ)` on the Jacobian.
    pub component_order: BigInt,
    /// `[ker(1 + τ) : (1 − τ)H]`.
    pub anti_invariant_index: BigInt,
}

pub fn prym_sublattice(h: &HomologyModel) -> Result<PrymLattice, PrymError> {
    let n = h.rank();
    let id = IntMatrix::identity(n);
    let plus = h.tau.add(&id);
    let minus = id.sub(&h.tau);
    let basis = integer_kernel(&plus);
    if basis.rows() != 4 {
        return Err(PrymError::Rank(basis.rows()));
    }
    let pairing = basis.congruence(&h.j);
    let invariant = integer_kernel(&minus);
    Ok(PrymLattice {
        component_order: sublattice_index(&invariant, &plus),
        anti_invariant_index: sublattice_index(&basis, &minus),
        basis,
        pairing,
    })
}

/// `[L : span of the columns of m]` for `L` with basis the rows of `l`,
/// assuming the columns lie in `L`.
fn sublattice_index(l: &IntMatrix, m: &IntMatrix) -> BigInt {
    let lt = l.transpose();
    let mut coords = Vec::new();
    for c in 0..m.cols() {
        let x = integer_solve(&lt, &m.col_vec(c)).expect("column lies in the lattice");
        coords.extend(x);
    }
    let a = IntMatrix::from_vec(m.cols(), l.rows(), coords).transpose();
    column_lattice_index(&a).unwrap_or_else(BigInt::zero)
}

/// Elementary divisors `(d₁, d₂, …)` of a nondegenerate skew form, one per
/// hyperbolic pair, ascending.
pub fn polarization_type(p: &PrymLattice) -> Result<Vec<BigInt>, PrymError> {
    skew_type(&p.pairing)
}

pub fn skew_type(j: &IntMatrix) -> Result<Vec<BigInt>, PrymError> {
    let diag = smith_normal_form(j).diagonal();
    if diag.iter().any(Zero::is_zero) {
        return Err(PrymError::Degenerate);
    }
    Ok(diag.chunks(2).map(|c| c[0].clone()).collect())
}
