use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{proportional, sorted_roots, BranchData, CurveModel, TowerEquations};
use crate::poly::{match_sets, rat, QPoly};

/// `Ẽ: η² = d(u)`, `C^∨: ζ² = 2(η − q(u))`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualModel {
    pub d: QPoly,
    pub q: QPoly,
    pub lambda: BigRational,
}

impl DualModel {
    pub fn equations(&self) -> TowerEquations {
        TowerEquations {
            lower: self.d.clone(),
            q: self.q.clone(),
            kappa_sq: BigRational::one(),
            kappa: Complex64::new(1.0, 0.0),
            twist: rat(2),
        }
    }

    /// Branch data of the dual tower: roots of `d`, then roots of `q² − d`.
    pub fn branch_data(&self) -> BranchData {
        BranchData::new(self.d.clone(), &self.q.pow(2) - &self.d)
    }
}

#[derive(Clone, Debug)]
pub struct Dualization {
    pub model: DualModel,
    /// `q² − λb` equals the restriction of `Δ₀` exactly.
    pub pencil_identity: bool,
    pub samples: usize,
    /// Largest relative residual of `η² = d` and `ζ² = 2(η − q)` at the samples.
    pub max_residual: f64,
}

/// The bigonal construction on a tower: for the two lifts `z, z′` over the
/// points `(u, ±y)` of `E_t`, the pair coordinates are `η = z·z′`, `ζ = z + z′`.
pub fn bigonal_dual(model: &CurveModel, seed: u64) -> Dualization {
    let d = &model.q.pow(2) - &model.b.scale(&model.lambda);
    let pencil_identity = d == model.d;
    let (b, q, dc) = (model.b.to_complex(), model.q.to_complex(), d.to_complex());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = 20;
    let mut max_residual: f64 = 0.0;
    for _ in 0..samples {
        let u = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let y = b.eval(u).sqrt();
        let qu = q.eval(u);
        let z1 = (model.mu * y - qu).sqrt();
        let z2 = (-model.mu * y - qu).sqrt();
        let (eta, zeta) = (z1 * z2, z1 + z2);
        let scale = 1.0 + qu.norm_sqr() + dc.eval(u).norm() + eta.norm_sqr();
        let r1 = (eta * eta - dc.eval(u)).norm() / scale;
        let r2 = (zeta * zeta - (eta - qu) * 2.0).norm() / scale;
        max_residual = max_residual.max(r1).max(r2);
    }
    Dualization {
        model: DualModel { d, q: model.q.clone(), lambda: model.lambda.clone() },
        pencil_identity,
        samples,
        max_residual,
    }
}

#[derive(Clone, Debug)]
pub struct Step2Report {
    /// The `η`-cover is branched over the roots of `Δ₀|t` (exact).
    pub lower_exact: bool,
    /// The `ζ`-cover is branched over the roots of `B₀|t`: `q² − d = λ·b` (exact).
    pub upper_exact: bool,
    pub lower_error: f64,
    pub upper_error: f64,
    /// Over each root of `q² − d` exactly one point of `Ẽ` has `η = q`.
    pub upper_fibers: bool,
    pub mismatch: Option<String>,
}

impl Step2Report {
    pub fn passed(&self, tol: f64) -> bool {
        self.lower_exact
            && self.upper_exact
            && self.upper_fibers
            && self.lower_error < tol
            && self.upper_error < tol
    }
}

pub fn verify_step2(branch: &BranchData, dual: &DualModel) -> Step2Report {
    let lower_exact = proportional(&dual.d, &branch.d).is_some();
    let upper_poly = &dual.q.pow(2) - &dual.d;
    let upper_exact = proportional(&upper_poly, &branch.b).is_some();
    let lower = sorted_roots(&dual.d);
    let lower_error = match_sets(&lower, &branch.p).unwrap_or(f64::INFINITY);
    let eq = dual.equations();
    let divisor = branch_divisor(&eq);
    let upper: Vec<Complex64> = divisor.iter().map(|p| p.0).collect();
    let upper_error = match_sets(&upper, &branch.a).unwrap_or(f64::INFINITY);
    let (dc, qc) = (dual.d.to_complex(), dual.q.to_complex());
    let upper_fibers = upper.len() == 4
        && upper.iter().all(|&u| {
            let eta = dc.eval(u).sqrt();
            let qu = qc.eval(u);
            let tol = 1e-7 * (1.0 + qu.norm());
            ((eta - qu).norm() < tol) != ((-eta - qu).norm() < tol)
        });
    let mismatch = if !lower_exact || lower_error >= 1e-10 {
        let worst = lower
            .iter()
            .copied()
            .max_by(|x, y| dist(*x, &branch.p).total_cmp(&dist(*y, &branch.p)));
        Some(alloc::format!(
            "η-cover branch point {} is not among the p_i",
            fmt_c(worst.unwrap_or_default())
        ))
    } else if !upper_exact || upper_error >= 1e-10 {
        let worst = upper
            .iter()
            .copied()
            .max_by(|x, y| dist(*x, &branch.a).total_cmp(&dist(*y, &branch.a)));
        Some(alloc::format!(
            "ζ-cover branch point over {} is not above any a_i",
            fmt_c(worst.unwrap_or_default())
        ))
    } else if !upper_fibers {
        Some("ζ-cover branch fiber is not a single point".into())
    } else {
        None
    };
    Step2Report { lower_exact, upper_exact, lower_error, upper_error, upper_fibers, mismatch }
}

fn dist(x: Complex64, set: &[Complex64]) -> f64 {
    set.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)
}

fn fmt_c(z: Complex64) -> String {
    alloc::format!("{:.6}{:+.6}i", z.re, z.im)
}

/// Branch points `(u, y)` of `C → E`: zeros of `κy − q` on `E`, i.e.
/// `y = q(u)/κ` over the roots of `κ²·lower − q²`.
pub fn branch_divisor(eq: &TowerEquations) -> Vec<(Complex64, Complex64)> {
    let q = eq.q.to_complex();
    sorted_roots(&eq.upper_branch_poly())
        .into_iter()
        .map(|u| (u, q.eval(u) / eq.kappa))
        .collect()
}

#[derive(Clone, Debug)]
pub struct Step3Report {
    /// For each branch point of the `ζ`-cover, `+1` when it lies on `η = +q(a_i)`.
    pub signs: Vec<i8>,
    pub consistent: bool,
    /// `Ẽ` is the lower curve of the swapped tower (`d` equals its `b`).
    pub lower_equal: bool,
    /// `C^∨` and the swapped `C̃_t` have the same branch divisor on `Ẽ`.
    pub divisor_equal: bool,
    pub divisor_error: f64,
    /// Ratio of the constants in front of `(η − q)`; a quadratic twist, trivial over `C`.
    pub twist: BigRational,
    pub mismatch: Option<String>,
}

impl Step3Report {
    pub fn passed(&self) -> bool {
        self.consistent && self.lower_equal && self.divisor_equal
    }
}

pub fn verify_step3(dual: &DualModel, swapped: &CurveModel) -> Step3Report {
    let (dc, qc) = (dual.d.to_complex(), dual.q.to_complex());
    let mut signs = Vec::new();
    let mut single = true;
    for u in sorted_roots(&(&dual.q.pow(2) - &dual.d)) {
        let eta = dc.eval(u).sqrt();
        let qu = qc.eval(u);
        let tol = 1e-7 * (1.0 + qu.norm());
        let vanishing: Vec<Complex64> = [eta, -eta].into_iter().filter(|e| (e - qu).norm() < tol).collect();
        single &= vanishing.len() == 1;
        if let Some(e) = vanishing.first() {
            signs.push(if (e - qu).norm() <= (e + qu).norm() { 1 } else { -1 });
        }
    }
    let consistent = single && signs.len() == 4 && signs.iter().all(|&s| s == signs[0]);
    let lower_equal = dual.d == swapped.b && dual.q == swapped.q;
    let (de, se) = (dual.equations(), swapped.equations());
    let exact = proportional(&de.upper_branch_poly(), &se.upper_branch_poly()).is_some();
    let (a, b) = (branch_divisor(&de), branch_divisor(&se));
    let divisor_error = if a.len() == b.len() {
        a.iter()
            .map(|x| {
                b.iter()
                    .map(|y| (x.0 - y.0).norm().max((x.1 - y.1).norm()))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let divisor_equal = lower_equal && exact && divisor_error < 1e-10;
    let mismatch = if !lower_equal {
        Some("dual lower curve differs from the swapped tower's E".into())
    } else if !divisor_equal {
        Some(alloc::format!("branch divisors differ by {divisor_error:e}"))
    } else if !consistent {
        Some(alloc::format!("mixed signs {signs:?}"))
    } else {
        None
    };
    Step3Report {
        signs,
        consistent,
        lower_equal,
        divisor_equal,
        divisor_error,
        twist: &de.twist / &se.twist,
        mismatch,
    }
}
