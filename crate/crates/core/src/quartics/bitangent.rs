use alloc::vec::Vec;

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::form::{cnorm, projective_distance, CPoint, ComplexForm, TernaryForm};
use super::line::{restrict_to_line, CLine, Line};
use super::{is_smooth, QuarticError, Tolerances};
use crate::poly::{cluster, CPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tangency {
    Ordinary,
    SimpleTangent,
    Flex,
    Bitangent,
    Hyperflex,
}

impl Tangency {
    /// Classification of a quartic's restriction by its root multiplicities.
    pub fn from_pattern(pattern: &[usize]) -> Option<Tangency> {
        Some(match pattern {
            [1, 1, 1, 1] => Tangency::Ordinary,
            [2, 1, 1] => Tangency::SimpleTangent,
            [3, 1] => Tangency::Flex,
            [2, 2] => Tangency::Bitangent,
            [4] => Tangency::Hyperflex,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Tangency::Ordinary => "ordinary",
            Tangency::SimpleTangent => "simple-tangent",
            Tangency::Flex => "flex",
            Tangency::Bitangent => "bitangent",
            Tangency::Hyperflex => "hyperflex",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangencyReport {
    pub line: CLine,
    pub classification: Tangency,
    /// Points of `F ∩ t` with their intersection multiplicities.
    pub points: Vec<(CPoint, usize)>,
    /// Relative residual of the certificate (zero for exact classification).
    pub residual: f64,
}

/// Exact classification from the squarefree decomposition of `F|t`.
pub fn classify_tangency(f: &TernaryForm, t: &Line) -> Result<TangencyReport, QuarticError> {
    if f.degree() != 4 {
        return Err(QuarticError::WrongDegree { expected: 4, found: f.degree() });
    }
    let r = restrict_to_line(f, t);
    if r.is_zero() {
        return Err(QuarticError::LineInCurve);
    }
    let classification =
        Tangency::from_pattern(&r.multiplicity_pattern()).expect("degree-4 pattern");
    let (a, b) = t.parametrization();
    let a = a.map(|x| Complex64::new(crate::poly::rat_to_f64(&x), 0.0));
    let b = b.map(|x| Complex64::new(crate::poly::rat_to_f64(&x), 0.0));
    let mut points = Vec::new();
    let poly = r.dehomogenize();
    for (g, m) in poly.squarefree_decomposition() {
        for u in g.to_complex().roots() {
            points.push((core::array::from_fn(|i| a[i] + u * b[i]), m));
        }
    }
    let at_inf = 4 - poly.degree().unwrap_or(0);
    if at_inf > 0 {
        points.push((b, at_inf));
    }
    Ok(TangencyReport {
        line: t.to_complex(),
        classification,
        points,
        residual: 0.0,
    })
}

/// Numeric classification by root clustering of `F|t`.
pub fn classify_tangency_numeric(
    f: &ComplexForm,
    t: &CLine,
    cluster_tol: f64,
) -> Result<TangencyReport, QuarticError> {
    let f = f.normalized();
    let (c, p, d) = t.restrict(&f);
    let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if scale < 1e-12 {
        return Err(QuarticError::LineInCurve);
    }
    let roots = CPoly::new(c).roots();
    let groups = cluster(&roots, cluster_tol);
    let mut pattern: Vec<usize> = groups.iter().map(|g| g.1).collect();
    pattern.sort_unstable_by(|a, b| b.cmp(a));
    let classification = Tangency::from_pattern(&pattern).unwrap_or(Tangency::Ordinary);
    let points = groups
        .iter()
        .map(|(x, m)| (core::array::from_fn(|i| p[i] + x * d[i]), *m))
        .collect();
    Ok(TangencyReport {
        line: *t,
        classification,
        points,
        residual: 0.0,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SquareFit {
    pub residual: f64,
    /// Roots of the quadratic `q` with `F|t = κ·q²` (equal for a hyperflex line).
    pub roots: [Complex64; 2],
    pub points: [CPoint; 2],
    pub discriminant: f64,
}

/// Fits `F|t ≈ κ·(x² + αx + β)²` in the canonical parametrization of `t`.
pub fn square_fit(f: &ComplexForm, t: &CLine) -> SquareFit {
    let f = f.normalized();
    let (c, p, d) = t.restrict(&f);
    let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
    let k = c[4];
    let a: Vec<Complex64> = c.iter().map(|x| x / k).collect();
    let alpha = a[3] / 2.0;
    let beta = (a[2] - alpha * alpha) / 2.0;
    let s = square_coeffs(alpha, beta);
    let residual = c
        .iter()
        .zip(&s)
        .map(|(x, y)| (x - k * y).norm())
        .fold(0.0, f64::max)
        / scale;
    let disc = alpha * alpha - beta * 4.0;
    let sq = disc.sqrt();
    let roots = [(-alpha + sq) / 2.0, (-alpha - sq) / 2.0];
    let points = roots.map(|x| core::array::from_fn(|i| p[i] + x * d[i]));
    let size = 1.0 + alpha.norm_sqr() + beta.norm();
    SquareFit {
        residual,
        roots,
        points,
        discriminant: disc.norm() / size,
    }
}

fn square_coeffs(alpha: Complex64, beta: Complex64) -> [Complex64; 5] {
    [
        beta * beta,
        alpha * beta * 2.0,
        alpha * alpha + beta * 2.0,
        alpha * 2.0,
        Complex64::one(),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitangentStatus {
    Complete,
    Incomplete,
}

#[derive(Clone, Debug)]
pub struct BitangentSet {
    pub status: BitangentStatus,
    /// Certified lines, classified `Bitangent` or `Hyperflex`, in a canonical order.
    pub lines: Vec<TangencyReport>,
    pub hyperflex_count: usize,
    pub max_residual: f64,
    pub min_separation: f64,
    pub starts: usize,
}

impl BitangentSet {
    pub fn count(&self) -> usize {
        self.lines.len()
    }

    pub fn proper_count(&self) -> usize {
        self.lines.len() - self.hyperflex_count
    }

    pub fn is_complete(&self) -> bool {
        self.status == BitangentStatus::Complete
    }
}

pub const BITANGENT_COUNT: usize = 28;

struct Chart {
    a: [[Complex64; 3]; 3],
    /// `Σ (A e₁)_i ∂F/∂x_i`
    g: ComplexForm,
}

impl Chart {
    fn new(f: &ComplexForm, rng: &mut ChaCha8Rng) -> Chart {
        let a: [[Complex64; 3]; 3] = core::array::from_fn(|_| {
            core::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        });
        let col1: CPoint = core::array::from_fn(|i| a[i][1]);
        Chart { a, g: f.directional(&col1) }
    }

    fn apply(&self, v: [Complex64; 3]) -> CPoint {
        core::array::from_fn(|i| (0..3).map(|j| self.a[i][j] * v[j]).sum())
    }

    /// Points `P = A(0, c, 1)` and `D = A(1, m, 0)`.
    fn frame(&self, m: Complex64, c: Complex64) -> (CPoint, CPoint) {
        let z = Complex64::zero();
        let o = Complex64::one();
        (self.apply([z, c, o]), self.apply([o, m, z]))
    }
}

type V5 = SVector<Complex64, 5>;

/// Newton's method for `F(P + xD) = κ(x² + αx + β)²` in the unknowns
/// `(m, c, κ, α, β)`.
fn newton(f: &ComplexForm, chart: &Chart, mut v: V5, tol: &Tolerances) -> Option<V5> {
    let mut prev = f64::INFINITY;
    for _ in 0..tol.newton_iterations {
        let (p, d) = chart.frame(v[0], v[1]);
        let fc = f.along(&p, &d);
        let gc = chart.g.along(&p, &d);
        let (kappa, alpha, beta) = (v[2], v[3], v[4]);
        let s = square_coeffs(alpha, beta);
        let r = V5::from_fn(|k, _| fc[k] - kappa * s[k]);
        let mut j = SMatrix::<Complex64, 5, 5>::zeros();
        for k in 0..5 {
            j[(k, 0)] = if k == 0 { Complex64::zero() } else { gc[k - 1] };
            j[(k, 1)] = if k < 4 { gc[k] } else { Complex64::zero() };
            j[(k, 2)] = -s[k];
        }
        let da = [Complex64::zero(), beta * 2.0, alpha * 2.0, Complex64::new(2.0, 0.0), Complex64::zero()];
        let db = [beta * 2.0, alpha * 2.0, Complex64::new(2.0, 0.0), Complex64::zero(), Complex64::zero()];
        for k in 0..5 {
            j[(k, 3)] = -kappa * da[k];
            j[(k, 4)] = -kappa * db[k];
        }
        let step = j.lu().solve(&r)?;
        v -= step;
        let size = v.norm();
        if !size.is_finite() || size > 1e8 {
            return None;
        }
        let rel = step.norm() / (1.0 + size);
        // stagnation at roundoff level counts as converged; certification follows
        if rel <= tol.newton || (prev < 1e-11 && rel > 0.5 * prev) {
            return Some(v);
        }
        prev = rel;
    }
    None
}

/// Random start: a uniformly random line, with the roots of the restriction paired up.
fn start(f: &ComplexForm, chart: &Chart, rng: &mut ChaCha8Rng) -> Option<V5> {
    // a random line λ·w = 0 in chart coordinates, through (0, c, 1) and (1, m, 0)
    let l: CPoint = core::array::from_fn(|_| gaussian(rng));
    if l[1].norm() < 1e-3 * cnorm(&l) {
        return None;
    }
    let (m, c) = (-l[0] / l[1], -l[2] / l[1]);
    let (p, d) = chart.frame(m, c);
    let fc = f.along(&p, &d);
    if fc[4].norm() < 1e-8 {
        return None;
    }
    let r = CPoly::new(fc.clone()).roots();
    if r.len() != 4 {
        return None;
    }
    let partner = rng.gen_range(1..4);
    let alpha = -(r[0] + r[partner]);
    let beta = r[0] * r[partner];
    Some(V5::from_column_slice(&[m, c, fc[4], alpha, beta]))
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    // Box–Muller
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen_range(0.0..core::f64::consts::TAU);
    Complex64::from_polar((-u.ln()).sqrt(), v)
}

/// Bitangent lines of a smooth quartic by seeded multistart Newton in random
/// projective charts. Lines whose restriction is `κ·ℓ⁴` (hyperflex lines) are
/// included and classified as such.
pub fn bitangents(f: &TernaryForm, seed: u64, tol: &Tolerances) -> Result<BitangentSet, QuarticError> {
    if f.degree() != 4 {
        return Err(QuarticError::WrongDegree { expected: 4, found: f.degree() });
    }
    if !is_smooth(f)? {
        return Err(QuarticError::NotSmooth);
    }
    Ok(bitangents_numeric(&f.to_complex(), seed, tol))
}

/// Numeric core of [`bitangents`]; smoothness is not checked.
pub fn bitangents_numeric(f: &ComplexForm, seed: u64, tol: &Tolerances) -> BitangentSet {
    let f = f.normalized();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<(CLine, SquareFit)> = Vec::new();
    let mut starts = 0;
    let mut crowded = false;
    'charts: for _ in 0..tol.charts {
        let chart = Chart::new(&f, &mut rng);
        for _ in 0..tol.starts_per_chart {
            if found.len() >= BITANGENT_COUNT {
                break 'charts;
            }
            starts += 1;
            let Some(v0) = start(&f, &chart, &mut rng) else {
                continue;
            };
            let Some(v) = newton(&f, &chart, v0, tol) else {
                continue;
            };
            let (p, d) = chart.frame(v[0], v[1]);
            let line = CLine::through(&p, &d);
            let dmin = found
                .iter()
                .map(|(l, _)| projective_distance(l.coords(), line.coords()))
                .fold(f64::INFINITY, f64::min);
            if dmin < tol.dedup {
                continue;
            }
            let fit = square_fit(&f, &line);
            if fit.residual >= tol.certify {
                continue;
            }
            if dmin < tol.separation {
                crowded = true;
            }
            found.push((line, fit));
        }
    }
    found.sort_by(|a, b| canonical_key(&a.0).partial_cmp(&canonical_key(&b.0)).expect("finite"));
    let mut min_separation = f64::INFINITY;
    for i in 0..found.len() {
        for j in i + 1..found.len() {
            min_separation =
                min_separation.min(projective_distance(found[i].0.coords(), found[j].0.coords()));
        }
    }
    let lines: Vec<TangencyReport> = found
        .into_iter()
        .map(|(line, fit)| {
            let hyperflex = fit.discriminant < tol.hyperflex;
            let points = if hyperflex {
                let mid: CPoint = core::array::from_fn(|i| (fit.points[0][i] + fit.points[1][i]) / 2.0);
                alloc::vec![(mid, 4)]
            } else {
                alloc::vec![(fit.points[0], 2), (fit.points[1], 2)]
            };
            TangencyReport {
                line,
                classification: if hyperflex { Tangency::Hyperflex } else { Tangency::Bitangent },
                points,
                residual: fit.residual,
            }
        })
        .collect();
    let hyperflex_count = lines
        .iter()
        .filter(|l| l.classification == Tangency::Hyperflex)
        .count();
    let max_residual = lines.iter().map(|l| l.residual).fold(0.0, f64::max);
    let complete = lines.len() == BITANGENT_COUNT && !crowded && min_separation > tol.separation;
    BitangentSet {
        status: if complete { BitangentStatus::Complete } else { BitangentStatus::Incomplete },
        lines,
        hyperflex_count,
        max_residual,
        min_separation,
        starts,
    }
}

/// Sort key making the output order independent of discovery order.
fn canonical_key(l: &CLine) -> [f64; 6] {
    let c = l.coords();
    [c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im].map(|x| (x * 1e6).round() / 1e6)
}

/// Smallest projective distance from `l` to any line of `set`.
pub fn distance_to_set(l: &CLine, set: &[TangencyReport]) -> f64 {
    set.iter()
        .map(|r| projective_distance(r.line.coords(), l.coords()))
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn unit(p: &CPoint) -> CPoint {
    let n = cnorm(p);
    p.map(|x| x / n)
}
