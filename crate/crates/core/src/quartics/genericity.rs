use num_complex::Complex64;

use super::bitangent::{bitangents, distance_to_set, unit, BitangentSet, Tangency};
use super::form::{cross, ComplexForm, TernaryForm};
use super::line::CLine;
use super::{QuarticError, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// A needed bitangent set was not certified complete.
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    fn all(vs: &[Verdict]) -> Verdict {
        if vs.contains(&Verdict::Fail) {
            Verdict::Fail
        } else if vs.contains(&Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub verdict: Verdict,
    /// Offending line, if any.
    pub witness: Option<CLine>,
    /// The quantity compared against its threshold (smallest margin seen).
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct GenericityReport {
    /// `B₀` has no hyperflex line.
    pub no_hyperflex: Condition,
    /// No bitangent of `B₀` is tangent to `Δ₀` at a contact point.
    pub no_shared_tangency: Condition,
    /// `B₀` and `Δ₀` have no common bitangent.
    pub no_common_bitangent: Condition,
    pub overall: Verdict,
    /// Contact points of `B₀`-bitangents lying on `Δ₀` but crossed transversally.
    pub transversal_incidences: usize,
    pub b0_bitangents: BitangentSet,
    pub delta0_bitangents: BitangentSet,
}

impl GenericityReport {
    pub fn conditions(&self) -> [(&'static str, &Condition); 3] {
        [
            ("no-hyperflex", &self.no_hyperflex),
            ("no-shared-tangency", &self.no_shared_tangency),
            ("no-common-bitangent", &self.no_common_bitangent),
        ]
    }
}

/// The three genericity conditions for a pair `(B₀, Δ₀)` of smooth quartics.
pub fn genericity_check(
    b0: &TernaryForm,
    delta0: &TernaryForm,
    seed: u64,
    tol: &Tolerances,
) -> Result<GenericityReport, QuarticError> {
    let bs = bitangents(b0, seed, tol)?;
    let ds = bitangents(delta0, seed.wrapping_add(1), tol)?;
    Ok(genericity_from_sets(&delta0.to_complex(), bs, ds, tol))
}

/// [`genericity_check`] from precomputed bitangent sets.
pub fn genericity_from_sets(
    delta0: &ComplexForm,
    bs: BitangentSet,
    ds: BitangentSet,
    tol: &Tolerances,
) -> GenericityReport {
    let no_hyperflex = hyperflex_condition(&bs);
    let (no_shared_tangency, transversal_incidences) = shared_tangency(&bs, delta0, tol);
    let no_common_bitangent = common_bitangent(&bs, &ds, tol);
    let overall = Verdict::all(&[
        no_hyperflex.verdict,
        no_shared_tangency.verdict,
        no_common_bitangent.verdict,
    ]);
    GenericityReport {
        no_hyperflex,
        no_shared_tangency,
        no_common_bitangent,
        overall,
        transversal_incidences,
        b0_bitangents: bs,
        delta0_bitangents: ds,
    }
}

fn hyperflex_condition(bs: &BitangentSet) -> Condition {
    let hyper = bs.lines.iter().find(|l| l.classification == Tangency::Hyperflex);
    let verdict = match (hyper, bs.is_complete()) {
        (Some(_), _) => Verdict::Fail,
        (None, true) => Verdict::Pass,
        (None, false) => Verdict::Inconclusive,
    };
    Condition {
        verdict,
        witness: hyper.map(|l| l.line),
        margin: bs.min_separation,
    }
}

/// For each contact point `p` of a bitangent `m` of `B₀`, restrict `Δ₀` to
/// `m` near `p`: `h(s) = Δ₀(p + s·v)`. Tangency at `p` means `h(0) = h′(0) = 0`.
fn shared_tangency(bs: &BitangentSet, delta0: &ComplexForm, tol: &Tolerances) -> (Condition, usize) {
    let d = delta0.normalized();
    let mut witness = None;
    let mut incidences = 0;
    let mut margin = f64::INFINITY;
    for l in &bs.lines {
        for (p, _) in &l.points {
            let p = unit(p);
            let v = unit(&cross(l.line.coords(), &conj(&p)));
            let h0 = d.eval(&p).norm();
            let h1: f64 = d
                .gradient_at(&p)
                .iter()
                .zip(&v)
                .map(|(g, x)| g * x)
                .sum::<Complex64>()
                .norm();
            margin = margin.min(h0.max(h1));
            if h0 < tol.tangency {
                if h1 < tol.tangency {
                    witness.get_or_insert(l.line);
                } else {
                    incidences += 1;
                }
            }
        }
    }
    let verdict = if witness.is_some() {
        Verdict::Fail
    } else if bs.is_complete() {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    (Condition { verdict, witness, margin }, incidences)
}

fn common_bitangent(bs: &BitangentSet, ds: &BitangentSet, tol: &Tolerances) -> Condition {
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for l in &bs.lines {
        let dist = distance_to_set(&l.line, &ds.lines);
        margin = margin.min(dist);
        if dist < tol.dedup {
            witness.get_or_insert(l.line);
        }
    }
    let verdict = if witness.is_some() {
        Verdict::Fail
    } else if bs.is_complete() && ds.is_complete() {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    Condition { verdict, witness, margin }
}

fn conj(p: &[Complex64; 3]) -> [Complex64; 3] {
    p.map(|x| x.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;
    use crate::quartics::{make_tangent_pair, PairStatus};

    fn form(d: usize, terms: &[(i64, [usize; 3])]) -> TernaryForm {
        TernaryForm::from_terms(d, terms).unwrap()
    }

    fn generic_b0() -> TernaryForm {
        TernaryForm::from_i64(4, &[3, -1, 2, 1, 0, 4, -2, 1, 1, 5, 2, -1, 3, 1, 4]).unwrap()
    }

    fn conic() -> TernaryForm {
        form(2, &[(2, [2, 0, 0]), (1, [1, 1, 0]), (3, [0, 2, 0]), (-1, [0, 1, 1]), (1, [0, 0, 2]), (1, [1, 0, 1])])
    }

    #[test]
    fn generic_pair_passes() {
        let tol = Tolerances::default();
        let pair = make_tangent_pair(&generic_b0(), &conic(), &ratio(1, 3), 7, &tol).unwrap();
        assert_eq!(pair.status, PairStatus::UMember);
        let r = genericity_check(&pair.b0, &pair.delta0, 11, &tol).unwrap();
        assert!(r.b0_bitangents.is_complete() && r.delta0_bitangents.is_complete());
        for (name, c) in r.conditions() {
            assert_eq!(c.verdict, Verdict::Pass, "{name}");
        }
        assert_eq!(r.overall, Verdict::Pass);
        // conditions one and three are symmetric
        let s = genericity_check(&pair.delta0, &pair.b0, 11, &tol).unwrap();
        assert_eq!(s.no_common_bitangent.verdict, Verdict::Pass);
        assert_eq!(s.no_hyperflex.verdict, Verdict::Pass);
    }

    #[test]
    fn common_bitangent_fails() {
        // B₀ = q(x,y)² + z·G and Q = q + z·ℓ: both restrict to squares on z = 0
        let q = form(2, &[(1, [2, 0, 0]), (3, [1, 1, 0]), (-2, [0, 2, 0])]);
        let g = form(3, &[(1, [3, 0, 0]), (-2, [0, 3, 0]), (1, [0, 0, 3]), (1, [1, 1, 1]), (2, [0, 2, 1])]);
        let z = form(1, &[(1, [0, 0, 1])]);
        let b0 = q.pow(2).add(&z.mul(&g));
        let conic = q.add(&z.mul(&form(1, &[(1, [1, 0, 0]), (1, [0, 0, 1])])));
        let tol = Tolerances::default();
        let pair = make_tangent_pair(&b0, &conic, &ratio(2, 5), 3, &tol).unwrap();
        assert_eq!(pair.status, PairStatus::UMember);
        let r = genericity_check(&pair.b0, &pair.delta0, 5, &tol).unwrap();
        assert_eq!(r.no_common_bitangent.verdict, Verdict::Fail);
        let w = r.no_common_bitangent.witness.unwrap();
        let zline = CLine::new([Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(super::super::form::projective_distance(w.coords(), zline.coords()) < 1e-8);
        assert_eq!(r.overall, Verdict::Fail);
    }

    #[test]
    fn hyperflex_fails() {
        let b0 = form(4, &[(1, [3, 1, 0]), (1, [0, 4, 0]), (1, [0, 0, 4])]);
        let tol = Tolerances::default();
        let pair = make_tangent_pair(&b0, &conic(), &ratio(1, 2), 3, &tol).unwrap();
        assert_eq!(pair.status, PairStatus::UMember);
        let r = genericity_check(&pair.b0, &pair.delta0, 5, &tol).unwrap();
        assert_eq!(r.no_hyperflex.verdict, Verdict::Fail);
        assert!(r.b0_bitangents.hyperflex_count >= 1);
        assert_eq!(r.overall, Verdict::Fail);
    }
}
