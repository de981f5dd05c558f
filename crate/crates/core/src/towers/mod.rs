//! Double-cover towers `C_t → E_t → P¹` over a line and their bigonal duals.

mod dual;
mod monodromy;

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{rat, rat_to_f64, QPoly};
use crate::quartics::{is_smooth, is_smooth_conic, Line, QuarticError, TernaryForm};

pub use dual::{
    bigonal_dual, branch_divisor, verify_step2, verify_step3, Dualization, DualModel, Step2Report,
    Step3Report,
};
pub use monodromy::{fiber_monodromy, Monodromy, MonodromyOptions};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TowerError {
    #[error(transparent)]
    Quartic(#[from] QuarticError),
    #[error("λ must be nonzero")]
    LambdaZero,
    #[error("{0} is singular")]
    Singular(&'static str),
    #[error("non-generic line: {0}")]
    NonGenericLine(String),
    #[error("path tracking lost separation: {0}")]
    Tracking(String),
}

/// A pair `(B₀, Q)`, the pencil parameter `λ` with the sign of `μ = ±√λ`,
/// and a line `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerInstance {
    pub b0: TernaryForm,
    pub q: TernaryForm,
    pub lambda: BigRational,
    pub mu_sign: i8,
    pub line: Line,
}

impl TowerInstance {
    pub fn new(
        b0: TernaryForm,
        q: TernaryForm,
        lambda: BigRational,
        mu_sign: i8,
        line: Line,
    ) -> Result<Self, TowerError> {
        if b0.degree() != 4 {
            return Err(QuarticError::WrongDegree { expected: 4, found: b0.degree() }.into());
        }
        if q.degree() != 2 {
            return Err(QuarticError::WrongDegree { expected: 2, found: q.degree() }.into());
        }
        if !is_smooth_conic(&q) {
            return Err(QuarticError::ConicNotSmooth.into());
        }
        if lambda.is_zero() {
            return Err(TowerError::LambdaZero);
        }
        let inst = TowerInstance {
            b0,
            q,
            lambda,
            mu_sign: if mu_sign < 0 { -1 } else { 1 },
            line,
        };
        if !is_smooth(&inst.b0)? {
            return Err(TowerError::Singular("B0"));
        }
        if !is_smooth(&inst.delta0())? {
            return Err(TowerError::Singular("Δ0"));
        }
        Ok(inst)
    }

    /// `Δ₀ = Q² − λ·B₀`.
    pub fn delta0(&self) -> TernaryForm {
        self.q.pow(2).sub(&self.b0.scale(&self.lambda))
    }

    /// `μ = ±√λ` (imaginary for negative `λ`).
    pub fn mu(&self) -> Complex64 {
        let l = rat_to_f64(&self.lambda);
        let root = if l >= 0.0 {
            Complex64::new(l.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-l).sqrt())
        };
        root * f64::from(self.mu_sign)
    }

    /// The role-swapped instance `(Δ₀, Q, 1, +)`: its `Δ₀` is `Q² − Δ₀ = λ·B₀`.
    pub fn swapped(&self) -> Result<TowerInstance, TowerError> {
        TowerInstance::new(self.delta0(), self.q.clone(), BigRational::one(), 1, self.line.clone())
    }

    pub fn with_mu_sign(&self, s: i8) -> TowerInstance {
        TowerInstance { mu_sign: s, ..self.clone() }
    }
}

/// Affine parametrization `u ↦ A + u·B` of the line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub a: [BigRational; 3],
    pub b: [BigRational; 3],
}

impl Chart {
    /// The first chart `A + u(B + kA)`, `k = 0, 1, −1, 2, …`, in which `B₀|t`
    /// and `Δ₀|t` both have degree 4 (no branching at infinity).
    pub fn choose(inst: &TowerInstance) -> Result<Chart, TowerError> {
        let (a, b) = inst.line.parametrization();
        let delta0 = inst.delta0();
        for k in [0, 1, -1, 2, -2, 3, -3, 5, -5, 7] {
            let b2: [BigRational; 3] = core::array::from_fn(|i| &b[i] + &a[i] * rat(k));
            let chart = Chart { a: a.clone(), b: b2 };
            if chart.restrict(&inst.b0).degree() == Some(4) && chart.restrict(&delta0).degree() == Some(4) {
                return Ok(chart);
            }
        }
        Err(TowerError::NonGenericLine("line contained in B0 or Δ0".into()))
    }

    pub fn restrict(&self, f: &TernaryForm) -> QPoly {
        f.along(&self.a, &self.b)
    }

    pub fn point(&self, u: &BigRational) -> [BigRational; 3] {
        core::array::from_fn(|i| &self.a[i] + &self.b[i] * u)
    }
}

/// The 8 branch values of `C_t → P¹`: `a` the roots of `b`, `p` the roots of `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchData {
    pub a: Vec<Complex64>,
    pub p: Vec<Complex64>,
    pub b: QPoly,
    pub d: QPoly,
    /// Smallest distance between two of the 8 points.
    pub separation: f64,
}

impl BranchData {
    pub fn new(b: QPoly, d: QPoly) -> Self {
        let a = sorted_roots(&b);
        let p = sorted_roots(&d);
        let all: Vec<Complex64> = a.iter().chain(&p).copied().collect();
        let mut separation = f64::INFINITY;
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                separation = separation.min((all[i] - all[j]).norm());
            }
        }
        BranchData { a, p, b, d, separation }
    }
}

/// Roots in a fixed order (real part, then imaginary part).
pub fn sorted_roots(p: &QPoly) -> Vec<Complex64> {
    let mut r = p.to_complex().roots();
    r.sort_by(|x, y| {
        let kx = ((x.re * 1e8).round(), x.im);
        let ky = ((y.re * 1e8).round(), y.im);
        kx.partial_cmp(&ky).expect("finite roots")
    });
    r
}

/// `E: y² = lower(u)`, `C: z² = twist·(κ·y − q(u))` with `κ² = kappa_sq`.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerEquations {
    pub lower: QPoly,
    pub q: QPoly,
    pub kappa_sq: BigRational,
    pub kappa: Complex64,
    pub twist: BigRational,
}

impl TowerEquations {
    /// `κ²·lower − q²`; its roots are where `C → E` branches.
    pub fn upper_branch_poly(&self) -> QPoly {
        &self.lower.scale(&self.kappa_sq) - &self.q.pow(2)
    }

    /// All branch values: roots of `lower`, then roots of the upper polynomial.
    pub fn branch_points(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        (sorted_roots(&self.lower), sorted_roots(&self.upper_branch_poly()))
    }

    /// The 4 points `(y, z)` over `u`, sheet `2·i_y + i_z` using principal roots.
    pub fn sheets_at(&self, u: Complex64) -> [(Complex64, Complex64); 4] {
        let (lower, q) = (self.lower.to_complex(), self.q.to_complex());
        let y0 = lower.eval(u).sqrt();
        let t = rat_to_f64(&self.twist);
        let qu = q.eval(u);
        core::array::from_fn(|k| {
            let y = if k < 2 { y0 } else { -y0 };
            let z0 = ((self.kappa * y - qu) * t).sqrt();
            (y, if k % 2 == 0 { z0 } else { -z0 })
        })
    }

    /// Number of distinct points over `u`.
    pub fn fiber_size(&self, u: Complex64, tol: f64) -> usize {
        let pts = self.sheets_at(u);
        let mut classes: Vec<(Complex64, Complex64)> = Vec::new();
        for (y, z) in pts {
            let scale = 1.0 + y.norm().max(z.norm());
            if !classes.iter().any(|(y2, z2)| (y - y2).norm().max((z - z2).norm()) < tol * scale) {
                classes.push((y, z));
            }
        }
        classes.len()
    }

    pub fn genus_ledger(&self, tol: f64) -> GenusLedger {
        let (lo, up) = self.branch_points();
        let def_lower: Vec<usize> = lo.iter().map(|&u| 4 - self.fiber_size(u, tol)).collect();
        let def_upper: Vec<usize> = up.iter().map(|&u| 4 - self.fiber_size(u, tol)).collect();
        let total: usize = def_lower.iter().chain(&def_upper).sum();
        let euler = 4 * 2 - total as i64;
        let lower_euler = 2 * 2 - lo.len() as i64;
        GenusLedger {
            deficiencies_lower: def_lower,
            deficiencies_upper: def_upper,
            total_deficiency: total,
            euler_characteristic: euler,
            genus_upper: (2 - euler) / 2,
            genus_lower: (2 - lower_euler) / 2,
        }
    }
}

/// Riemann–Hurwitz bookkeeping for the 4-sheeted cover `C → P¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusLedger {
    /// Deficiency over each branch value of `E → P¹` (expected 2).
    pub deficiencies_lower: Vec<usize>,
    /// Deficiency over each branch value of `C → E` (expected 1).
    pub deficiencies_upper: Vec<usize>,
    pub total_deficiency: usize,
    pub euler_characteristic: i64,
    pub genus_upper: i64,
    pub genus_lower: i64,
}

impl GenusLedger {
    pub fn balanced(&self) -> bool {
        self.deficiencies_lower.iter().all(|&d| d == 2)
            && self.deficiencies_upper.iter().all(|&d| d == 1)
            && self.euler_characteristic == -4
            && self.genus_upper == 3
            && self.genus_lower == 1
    }
}

/// `E_t: y² = b(u)`, `C_t: z² = μ·y − q(u)`, together with `d = Δ₀|t`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveModel {
    pub b: QPoly,
    pub q: QPoly,
    pub d: QPoly,
    pub lambda: BigRational,
    pub mu: Complex64,
}

impl CurveModel {
    pub fn equations(&self) -> TowerEquations {
        TowerEquations {
            lower: self.b.clone(),
            q: self.q.clone(),
            kappa_sq: self.lambda.clone(),
            kappa: self.mu,
            twist: BigRational::one(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Slice {
    pub chart: Chart,
    pub branch: BranchData,
    pub model: CurveModel,
    pub ledger: GenusLedger,
}

/// Restricts the instance to its line in the chart of [`Chart::choose`].
pub fn slice(inst: &TowerInstance) -> Result<Slice, TowerError> {
    let chart = Chart::choose(inst)?;
    slice_in_chart(inst, &chart)
}

pub fn slice_in_chart(inst: &TowerInstance, chart: &Chart) -> Result<Slice, TowerError> {
    let b = chart.restrict(&inst.b0);
    let q = chart.restrict(&inst.q);
    let d = chart.restrict(&inst.delta0());
    for (name, f) in [("b", &b), ("d", &d)] {
        if f.degree() != Some(4) {
            return Err(TowerError::NonGenericLine(alloc::format!("deg {name}(u) < 4 in this chart")));
        }
        if !f.is_squarefree() {
            return Err(TowerError::NonGenericLine(alloc::format!("double root in {name}(u)")));
        }
    }
    let g = b.gcd(&d);
    if g.degree() != Some(0) {
        return Err(TowerError::NonGenericLine(alloc::format!("b(u) and d(u) share the factor {g}")));
    }
    let model = CurveModel {
        b: b.clone(),
        q,
        d: d.clone(),
        lambda: inst.lambda.clone(),
        mu: inst.mu(),
    };
    let ledger = model.equations().genus_ledger(1e-6);
    Ok(Slice {
        chart: chart.clone(),
        branch: BranchData::new(b, d),
        model,
        ledger,
    })
}

/// Whether `p = c·q` for a nonzero rational `c`.
pub fn proportional(p: &QPoly, q: &QPoly) -> Option<BigRational> {
    if p.is_zero() || q.is_zero() || p.degree() != q.degree() {
        return None;
    }
    let c = p.leading() / q.leading();
    (*p == q.scale(&c) && !c.abs().is_zero()).then_some(c)
}

#[cfg(test)]
mod tests;
