use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{TowerEquations, TowerError};
use crate::perm::{is_transitive, product, Perm};
use crate::poly::CPoly;

#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyOptions {
    /// Fixed basepoint; chosen from seeded candidates when absent.
    pub basepoint: Option<Complex64>,
    pub seed: u64,
    /// Smallest allowed path-parameter step before tracking gives up.
    pub min_step: f64,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        MonodromyOptions { basepoint: None, seed: 0, min_step: 1e-10 }
    }
}

/// Monodromy of the 4-sheeted cover `C → P¹` around its 8 branch values.
///
/// Sheets are labelled `2·i_y + i_z` by the principal square roots at the
/// basepoint, so the deck involution `z ↦ −z` is `k ↦ k ^ 1`. Loops run out
/// along straight spokes, once counterclockwise around the branch value and
/// back, ordered by the counterclockwise angle of their spokes; with this
/// order the product `σ₁ then σ₂ then …` is the loop around infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct Monodromy {
    pub basepoint: Complex64,
    /// Branch values in loop order.
    pub branch_points: Vec<Complex64>,
    /// Whether each branch value is one of `E → P¹` (otherwise of `C → E`).
    pub lower: Vec<bool>,
    pub perms: Vec<Perm>,
    pub sheets: [(Complex64, Complex64); 4],
    pub radius: f64,
    pub steps: usize,
}

impl Monodromy {
    pub fn tau() -> Perm {
        Perm::new((0..4).map(|k| k ^ 1).collect()).expect("involution")
    }

    pub fn product(&self) -> Perm {
        product(&self.perms, 4)
    }

    pub fn is_transitive(&self) -> bool {
        is_transitive(&self.perms, 4)
    }

    /// `4·χ(P¹) − Σ deficiencies`.
    pub fn euler_characteristic(&self) -> i64 {
        8 - self.perms.iter().map(|p| p.deficiency() as i64).sum::<i64>()
    }

    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    /// Cycle types `2+2` over lower branch values and `2+1+1` over upper ones.
    pub fn cycle_types_ok(&self) -> bool {
        self.perms.iter().zip(&self.lower).all(|(p, &lo)| {
            p.cycle_type() == if lo { alloc::vec![2, 2] } else { alloc::vec![2, 1, 1] }
        })
    }
}

pub fn fiber_monodromy(eq: &TowerEquations, opts: &MonodromyOptions) -> Result<Monodromy, TowerError> {
    let (lo, up) = eq.branch_points();
    let mut pts: Vec<(Complex64, bool)> =
        lo.iter().map(|&u| (u, true)).chain(up.iter().map(|&u| (u, false))).collect();
    let all: Vec<Complex64> = pts.iter().map(|p| p.0).collect();
    let (u0, clearance) = match opts.basepoint {
        Some(u0) => (u0, clearance(u0, &all)),
        None => choose_basepoint(&all, opts.seed),
    };
    let mut pair = f64::INFINITY;
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            pair = pair.min((all[i] - all[j]).norm());
        }
    }
    if clearance <= 0.0 {
        return Err(TowerError::Tracking("basepoint on a spoke of another branch value".into()));
    }
    let radius = 0.4 * pair.min(clearance);
    pts.sort_by(|a, b| (a.0 - u0).arg().total_cmp(&(b.0 - u0).arg()));

    let tracker = Tracker::new(eq, opts.min_step);
    let start = eq.sheets_at(u0);
    let mut perms = Vec::new();
    let mut steps = 0;
    for &(c, _) in &pts {
        let dir = (u0 - c) / (u0 - c).norm();
        let w = c + dir * radius;
        let theta0 = dir.arg();
        let mut s = start;
        steps += tracker.track(&mut s, |t| u0 + (w - u0) * t)?;
        steps += tracker.track(&mut s, |t| c + Complex64::from_polar(radius, theta0 + core::f64::consts::TAU * t))?;
        steps += tracker.track(&mut s, |t| w + (u0 - w) * t)?;
        perms.push(match_sheets(&start, &s)?);
    }
    Ok(Monodromy {
        basepoint: u0,
        branch_points: pts.iter().map(|p| p.0).collect(),
        lower: pts.iter().map(|p| p.1).collect(),
        perms,
        sheets: start,
        radius,
        steps,
    })
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let t = (((p - a) * ab.conj()).re / ab.norm_sqr()).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Smallest distance from a branch value to the basepoint or to another spoke.
fn clearance(u0: Complex64, pts: &[Complex64]) -> f64 {
    let mut m = f64::INFINITY;
    for (j, &c) in pts.iter().enumerate() {
        m = m.min((c - u0).norm());
        for (k, &e) in pts.iter().enumerate() {
            if k != j {
                m = m.min(segment_distance(e, u0, c));
            }
        }
    }
    m
}

fn choose_basepoint(pts: &[Complex64], seed: u64) -> (Complex64, f64) {
    let n = pts.len() as f64;
    let center: Complex64 = pts.iter().sum::<Complex64>() / n;
    let spread = pts.iter().map(|p| (p - center).norm()).fold(0.0, f64::max).max(1e-3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (center, f64::NEG_INFINITY);
    for _ in 0..256 {
        let r = spread * rng.gen_range(0.0..1.5);
        let u = center + Complex64::from_polar(r, rng.gen_range(0.0..core::f64::consts::TAU));
        let c = clearance(u, pts);
        if c > best.1 {
            best = (u, c);
        }
    }
    best
}

struct Tracker {
    lower: CPoly,
    q: CPoly,
    kappa: Complex64,
    twist: f64,
    min_step: f64,
}

impl Tracker {
    fn new(eq: &TowerEquations, min_step: f64) -> Self {
        Tracker {
            lower: eq.lower.to_complex(),
            q: eq.q.to_complex(),
            kappa: eq.kappa,
            twist: crate::poly::rat_to_f64(&eq.twist),
            min_step,
        }
    }

    /// Continues all four sheets along `path` on `[0, 1]`; a step is accepted
    /// only when every continued root is much closer to its predecessor than
    /// to the other root of the same square.
    fn track(&self, sheets: &mut [(Complex64, Complex64); 4], path: impl Fn(f64) -> Complex64) -> Result<usize, TowerError> {
        let mut t = 0.0;
        let mut h: f64 = 0.02;
        let mut steps = 0;
        while t < 1.0 {
            let t1 = (t + h).min(1.0);
            let u = path(t1);
            match self.step(sheets, u) {
                Some(next) => {
                    *sheets = next;
                    t = t1;
                    steps += 1;
                    h = (h * 1.5).min(0.05);
                }
                None => {
                    h /= 2.0;
                    if h < self.min_step {
                        return Err(TowerError::Tracking(alloc::format!("at u = {u}")));
                    }
                }
            }
        }
        Ok(steps)
    }

    fn step(&self, sheets: &[(Complex64, Complex64); 4], u: Complex64) -> Option<[(Complex64, Complex64); 4]> {
        let y0 = self.lower.eval(u).sqrt();
        let qu = self.q.eval(u);
        let mut out = *sheets;
        for (k, (y, z)) in sheets.iter().enumerate() {
            let yn = pick(*y, y0)?;
            let z0 = ((self.kappa * yn - qu) * self.twist).sqrt();
            out[k] = (yn, pick(*z, z0)?);
        }
        Some(out)
    }
}

/// The root of `{r, −r}` continuing `prev`, if unambiguous.
fn pick(prev: Complex64, r: Complex64) -> Option<Complex64> {
    let (a, b) = ((r - prev).norm(), (-r - prev).norm());
    let (best, near, far) = if a <= b { (r, a, b) } else { (-r, b, a) };
    (near < 0.25 * far).then_some(best)
}

fn match_sheets(start: &[(Complex64, Complex64); 4], end: &[(Complex64, Complex64); 4]) -> Result<Perm, TowerError> {
    let images: Vec<usize> = end
        .iter()
        .map(|(y, z)| {
            (0..4)
                .min_by(|&i, &j| {
                    let di = (start[i].0 - y).norm() + (start[i].1 - z).norm();
                    let dj = (start[j].0 - y).norm() + (start[j].1 - z).norm();
                    di.total_cmp(&dj)
                })
                .expect("four sheets")
        })
        .collect();
    Perm::new(images).map_err(|_| TowerError::Tracking("loop endpoints do not match the sheets".into()))
}
