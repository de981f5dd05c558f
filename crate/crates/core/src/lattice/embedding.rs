use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{mod_rational, DiscriminantGroup, Lattice, LatticeError, EXHAUSTIVE_RANK};
use crate::linalg::{
    column_lattice_index, integer_kernel, integer_solve, saturate, saturation_index, IntMatrix,
    QMatrix,
};

/// A sublattice `M ⊂ L`; the rows of `basis` are ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    ambient: Lattice,
    basis: IntMatrix,
}

impl Embedding {
    pub fn new(ambient: Lattice, basis: IntMatrix) -> Result<Self, LatticeError> {
        if basis.cols() != ambient.rank() {
            return Err(LatticeError::DimensionMismatch);
        }
        if basis.rank() < basis.rows() {
            return Err(LatticeError::DependentRows);
        }
        Ok(Embedding { ambient, basis })
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// The sublattice with its induced form `B·G·Bᵀ`.
    pub fn sublattice(&self) -> Lattice {
        Lattice {
            gram: self.basis.congruence(self.ambient.gram()),
        }
    }

    pub fn is_primitive(&self) -> bool {
        saturation_index(&self.basis).is_ok_and(|i| i.is_one())
    }

    /// `[sat(M) : M]`.
    pub fn saturation_index(&self) -> BigInt {
        saturation_index(&self.basis).expect("embedding rows are independent")
    }

    pub fn saturation(&self) -> Embedding {
        Embedding {
            ambient: self.ambient.clone(),
            basis: saturate(&self.basis).expect("embedding rows are independent"),
        }
    }

    /// `M^⊥`, saturated, basis in Hermite normal form.
    pub fn orthogonal_complement(&self) -> Result<Embedding, LatticeError> {
        if !self.ambient.is_nondegenerate() {
            return Err(LatticeError::Degenerate);
        }
        let bg = &self.basis * self.ambient.gram();
        Ok(Embedding {
            ambient: self.ambient.clone(),
            basis: integer_kernel(&bg),
        })
    }

    /// Sublattice coordinates of the orthogonal projection of `x` onto `M ⊗ Q`,
    /// i.e. `G_M⁻¹·B·G·x`. The result lies in `M^∨` for integral `x`.
    pub fn project(&self, x: &[BigInt]) -> Result<Vec<BigRational>, LatticeError> {
        let ginv = self.gram_inverse()?;
        let bgx: Vec<BigRational> = (&self.basis * self.ambient.gram())
            .mul_vec(x)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        Ok(ginv.mul_vec(&bgx))
    }

    /// Ambient coordinates `Bᵀ·c` of a vector given in sublattice coordinates.
    pub fn to_ambient(&self, c: &[BigRational]) -> Vec<BigRational> {
        let mut out = alloc::vec![BigRational::zero(); self.ambient.rank()];
        for (ci, row) in c.iter().zip(self.basis.row_iter()) {
            if ci.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(row) {
                *o += ci * BigRational::from_integer(b.clone());
            }
        }
        out
    }

    fn gram_inverse(&self) -> Result<QMatrix, LatticeError> {
        self.sublattice()
            .gram()
            .to_rational()
            .inverse()
            .ok_or(LatticeError::Degenerate)
    }

    /// Orthogonal projector onto `M ⊗ Q` acting on ambient column vectors:
    /// `Bᵀ·G_M⁻¹·B·G`.
    fn projector(&self) -> Result<QMatrix, LatticeError> {
        let ginv = self.gram_inverse()?;
        let bt = QMatrix::from_int(&self.basis.transpose());
        let bg = QMatrix::from_int(&(&self.basis * self.ambient.gram()));
        Ok(&(&bt * &ginv) * &bg)
    }
}

/// `γ: A_M → A_{M⊥}` for a primitive `M` in a unimodular lattice. Classes are
/// in Smith coordinates of the respective discriminant groups.
#[derive(Clone, Debug)]
pub struct GlueMap {
    pub sub: Embedding,
    pub complement: Embedding,
    pub source: DiscriminantGroup,
    pub target: DiscriminantGroup,
    /// `γ(g_i)` for the Smith generators `g_i` of `A_M`.
    pub images: Vec<Vec<BigInt>>,
    pub check: GlueCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GlueCheck {
    /// Compatible with the relations of `A_M` and with every coset representative.
    pub homomorphism: bool,
    pub bijective: bool,
    /// `q_{M⊥}(γx) = −q_M(x)` on every tested element.
    pub anti_isometry: bool,
    pub elements_checked: usize,
    pub exhaustive: bool,
}

impl GlueCheck {
    pub fn verified(&self) -> bool {
        self.homomorphism && self.bijective && self.anti_isometry
    }
}

impl GlueMap {
    pub fn order(&self) -> BigInt {
        self.source.order()
    }

    pub fn apply(&self, class: &[BigInt]) -> Vec<BigInt> {
        let mut out = self.target.zero();
        for (c, img) in class.iter().zip(&self.images) {
            for (o, x) in out.iter_mut().zip(img) {
                *o += c * x;
            }
        }
        self.target.reduce(&out)
    }

    pub fn verified(&self) -> bool {
        self.check.verified()
    }
}

fn check_glue_hypotheses(e: &Embedding) -> Result<(), LatticeError> {
    if !e.ambient.is_unimodular() {
        return Err(LatticeError::NotUnimodular);
    }
    if !e.is_primitive() {
        return Err(LatticeError::NotPrimitive);
    }
    if !e.sublattice().is_nondegenerate() {
        return Err(LatticeError::Degenerate);
    }
    Ok(())
}

/// The glue map read off from the images of the ambient basis vectors: each
/// `x ∈ L` splits as `x = p_M(x) + p_{M⊥}(x)` with `p_M(x) ∈ M^∨`,
/// `p_{M⊥}(x) ∈ (M⊥)^∨`, and `γ` sends the class of the first part to the
/// class of the second.
pub fn glue_map(e: &Embedding) -> Result<GlueMap, LatticeError> {
    check_glue_hypotheses(e)?;
    let k = e.orthogonal_complement()?;
    let source = e.sublattice().discriminant_group()?;
    let target = k.sublattice().discriminant_group()?;
    let n = e.ambient.rank();

    let mut alphas = Vec::with_capacity(n);
    let mut betas = Vec::with_capacity(n);
    for j in 0..n {
        let mut x = alloc::vec![BigInt::zero(); n];
        x[j] = BigInt::one();
        alphas.push(source.class_of(&e.project(&x)?)?);
        betas.push(target.class_of(&k.project(&x)?)?);
    }

    // Express each generator of A_M through the alphas: [A | diag(d)]·(c; t) = e_i.
    let a = source.ngens();
    let mut sys = IntMatrix::zeros(a, n + a);
    for (j, alpha) in alphas.iter().enumerate() {
        for (i, v) in alpha.iter().enumerate() {
            sys[(i, j)] = v.clone();
        }
    }
    for (i, d) in source.invariant_factors().iter().enumerate() {
        sys[(i, n + i)] = d.clone();
    }
    let mut images = Vec::with_capacity(a);
    let mut homomorphism = true;
    for i in 0..a {
        let mut rhs = alloc::vec![BigInt::zero(); a];
        rhs[i] = BigInt::one();
        let Some(sol) = integer_solve(&sys, &rhs) else {
            homomorphism = false;
            images.push(target.zero());
            continue;
        };
        let mut img = target.zero();
        for (c, beta) in sol[..n].iter().zip(&betas) {
            for (o, b) in img.iter_mut().zip(beta) {
                *o += c * b;
            }
        }
        images.push(target.reduce(&img));
    }

    let mut map = GlueMap {
        sub: e.clone(),
        complement: k,
        source,
        target,
        images,
        check: GlueCheck {
            homomorphism,
            bijective: false,
            anti_isometry: false,
            elements_checked: 0,
            exhaustive: false,
        },
    };

    // Relations d_i·g_i = 0 must map to zero, and the map must reproduce every beta.
    for (img, d) in map.images.iter().zip(map.source.invariant_factors()) {
        let scaled: Vec<BigInt> = img.iter().map(|x| x * d).collect();
        homomorphism &= map.target.reduce(&scaled).iter().all(Zero::is_zero);
    }
    for (alpha, beta) in alphas.iter().zip(&betas) {
        homomorphism &= map.apply(alpha) == *beta;
    }
    map.check.homomorphism = homomorphism;

    // Surjective iff the images together with the relations of A_{M⊥} span Z^{a'};
    // equal orders then give bijectivity.
    let b = map.target.ngens();
    let mut span = IntMatrix::zeros(b, a + b);
    for (j, img) in map.images.iter().enumerate() {
        for (i, v) in img.iter().enumerate() {
            span[(i, j)] = v.clone();
        }
    }
    for (i, d) in map.target.invariant_factors().iter().enumerate() {
        span[(i, a + i)] = d.clone();
    }
    let surjective = b == 0 || column_lattice_index(&span).is_some_and(|x| x.is_one());
    map.check.bijective = surjective && map.source.order() == map.target.order();

    let two = BigInt::from(2);
    let anti = |x: &[BigInt]| {
        let s = map.source.norm(x) + map.target.norm(&map.apply(x));
        mod_rational(&s, &two).is_zero()
    };
    let (ok, count, exhaustive) = if a <= EXHAUSTIVE_RANK {
        let mut count = 0;
        let ok = map.source.elements().all(|x| {
            count += 1;
            anti(&x)
        });
        (ok, count, true)
    } else {
        let gens = map.source.generator_classes();
        let mut count = 0;
        let mut ok = true;
        for (i, g) in gens.iter().enumerate() {
            count += 1;
            ok &= anti(g);
            for h in &gens[i + 1..] {
                count += 1;
                ok &= anti(&map.source.add(g, h));
            }
        }
        (ok, count, false)
    };
    map.check.anti_isometry = ok;
    map.check.elements_checked = count;
    map.check.exhaustive = exhaustive;
    Ok(map)
}

/// The involution acting as `+1` on `M` and `−1` on `M⊥`, as a matrix on
/// ambient column vectors: `2·P_M − Id`.
pub fn involution_from_sublattice(e: &Embedding) -> Result<IntMatrix, LatticeError> {
    if !e.ambient.is_nondegenerate() {
        return Err(LatticeError::Degenerate);
    }
    if !e.is_primitive() {
        return Err(LatticeError::NotPrimitive);
    }
    let p = e.projector()?;
    let n = e.ambient.rank();
    let two = BigRational::from_integer(BigInt::from(2));
    let i = p.scale(&two).sub(&QMatrix::identity(n));
    i.to_integer()
        .ok_or_else(|| LatticeError::ExtensionNotIntegral(i.non_integral_entries()))
}

/// A mismatch `γ₂(φ̄ g) ≠ ψ̄(γ₁ g)` at the `generator`-th Smith generator of `A_{M1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueMismatch {
    pub generator: usize,
    pub via_sublattice: Vec<BigInt>,
    pub via_complement: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    Isometry(IntMatrix),
    Incompatible(Vec<GlueMismatch>),
}

fn is_isometry(phi: &IntMatrix, g1: &IntMatrix, g2: &IntMatrix) -> bool {
    phi.rows() == g2.rows() && phi.cols() == g1.rows() && &(&phi.transpose() * g2) * phi == *g1
}

/// Glues `φ: M1 → M2` and `ψ: M1⊥ → M2⊥` into an isometry of the ambient
/// lattice when the induced maps on discriminant groups are compatible.
///
/// `φ` acts on sublattice coordinates (`m = Bᵀ·c ↦ B₂ᵀ·Φ·c`), `ψ` likewise on the
/// coordinates of the complements returned by [`Embedding::orthogonal_complement`].
/// The result acts on ambient column vectors.
pub fn extend_isometry(
    e1: &Embedding,
    e2: &Embedding,
    phi: &IntMatrix,
    psi: &IntMatrix,
) -> Result<Extension, LatticeError> {
    if e1.ambient != e2.ambient {
        return Err(LatticeError::DifferentAmbient);
    }
    check_glue_hypotheses(e1)?;
    check_glue_hypotheses(e2)?;
    let (m1, m2) = (e1.sublattice(), e2.sublattice());
    if !is_isometry(phi, m1.gram(), m2.gram()) {
        return Err(LatticeError::NotIsometry("phi"));
    }
    let g1 = glue_map(e1)?;
    let g2 = glue_map(e2)?;
    let (k1, k2) = (g1.complement.sublattice(), g2.complement.sublattice());
    if !is_isometry(psi, k1.gram(), k2.gram()) {
        return Err(LatticeError::NotIsometry("psi"));
    }

    let phi_q = phi.to_rational();
    let psi_q = psi.to_rational();
    let mut mismatches = Vec::new();
    for (i, gen) in g1.source.generator_classes().into_iter().enumerate() {
        let x = g1.source.representative(&gen);
        let via_sublattice = g2.apply(&g2.source.class_of(&phi_q.mul_vec(&x))?);
        let y = g1.target.representative(&g1.apply(&gen));
        let via_complement = g2.target.class_of(&psi_q.mul_vec(&y))?;
        if via_sublattice != via_complement {
            mismatches.push(GlueMismatch {
                generator: i,
                via_sublattice,
                via_complement,
            });
        }
    }
    if !mismatches.is_empty() {
        return Ok(Extension::Incompatible(mismatches));
    }

    let p1 = e1.basis.vstack(&g1.complement.basis).transpose();
    let p2 = (&phi.transpose() * &e2.basis)
        .vstack(&(&psi.transpose() * &g2.complement.basis))
        .transpose();
    let p1inv = p1.to_rational().inverse().ok_or(LatticeError::Degenerate)?;
    let t = &p2.to_rational() * &p1inv;
    let t = t
        .to_integer()
        .ok_or_else(|| LatticeError::ExtensionNotIntegral(t.non_integral_entries()))?;
    debug_assert!(is_isometry(&t, e1.ambient.gram(), e1.ambient.gram()));
    Ok(Extension::Isometry(t))
}
