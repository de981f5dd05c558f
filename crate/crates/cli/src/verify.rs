//! Per-instance checks, each producing report claims.

use bigonal_core::linalg::IntMatrix;
use bigonal_core::perm::Perm;
use bigonal_core::poly::match_sets;
use bigonal_core::prym::{homology_with_intersection, polarization_type, prym_sublattice, CoverPresentation};
use bigonal_core::quartics::{genericity_check, make_tangent_pair, CLine, PairStatus, Verdict};
use bigonal_core::towers::{
    bigonal_dual, fiber_monodromy, slice, slice_in_chart, verify_step2, verify_step3, Dualization, Monodromy,
    MonodromyOptions, Slice, TowerEquations, TowerInstance,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;
use serde_json::{json, Value};

use crate::input::InstanceRecord;
use crate::report::{Claim, Status};
use crate::settings::Settings;
use crate::CliError;

pub fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn complexes(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().copied().map(complex).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array(
        m.row_iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|x| i64::try_from(x).map(|v| json!(v)).unwrap_or_else(|_| json!(x.to_string())))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn bigints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| json!(x.to_string())).collect())
}

fn perms(ps: &[Perm]) -> Value {
    Value::Array(ps.iter().map(|p| json!(p.to_string())).collect())
}

fn line(l: &CLine) -> String {
    let c = l.coords();
    format!(
        "[{:.6}{:+.6}i, {:.6}{:+.6}i, {:.6}{:+.6}i]",
        c[0].re, c[0].im, c[1].re, c[1].im, c[2].re, c[2].im
    )
}

fn verdict(v: Verdict) -> Status {
    match v {
        Verdict::Pass => Status::Pass,
        Verdict::Fail => Status::Fail,
        Verdict::Inconclusive => Status::Inconclusive,
    }
}

/// `Δ₀ = Q² − λB₀` classification, tangency and conic recovery. With
/// `expect_member`, anything but a U-member fails the status claim.
pub fn pair_claims(rec: &InstanceRecord, s: &Settings, seed: u64, expect_member: bool) -> Vec<Claim> {
    let tol = s.tolerances();
    let pair = match make_tangent_pair(&rec.b0, &rec.q, &rec.lambda, seed, &tol) {
        Ok(p) => p,
        Err(e) => return vec![Claim::check("pair.status", false).witness(e.to_string())],
    };
    let member = pair.status == PairStatus::UMember;
    let mut status = Claim::new("pair.status", if member || !expect_member { Status::Pass } else { Status::Fail })
        .value("status", pair.status.name())
        .value("delta0", pair.delta0.to_string());
    if let Some(w) = pair.witness {
        status = status.value("singular_point", Value::Array(w.iter().copied().map(complex).collect()));
    }
    let status = status.witness(format!("Δ0 is {}", pair.status.name()));
    let mut out = vec![status];
    let Some(t) = pair.tangency else { return out };
    let all_double = t.points.len() == 8 && t.multiplicities.iter().all(|&m| m == 2) && t.total == 16;
    out.push(
        Claim::check("pair.tangency", t.transversal && all_double)
            .value("transversal", t.transversal)
            .value("points", t.points.len())
            .value("multiplicities", t.multiplicities.clone())
            .value("total", t.total)
            .value("max_residual", t.max_residual)
            .value("max_gradient_angle", t.max_gradient_angle)
            .witness(if t.transversal {
                format!("multiplicities {:?}", t.multiplicities)
            } else {
                "B0 ∩ Q is not eight distinct points".to_string()
            }),
    );
    let conic = match (&t.conic, t.conic_distance) {
        (Some(c), Some(d)) => Claim::check("pair.conic", c.residual < s.conic && d < s.conic)
            .value("residual", c.residual)
            .value("sigma_min", c.sigma_min)
            .value("sigma_next", c.sigma_next)
            .value("distance_to_q", d)
            .witness(format!("residual {:e}, distance to Q {d:e}", c.residual)),
        _ => Claim::check("pair.conic", false).witness("no conic through the contact points"),
    };
    out.push(conic);
    out
}

pub fn genericity_claim(rec: &InstanceRecord, s: &Settings, seed: u64) -> Claim {
    let r = match genericity_check(&rec.b0, &rec.delta0(), seed, &s.tolerances()) {
        Ok(r) => r,
        Err(e) => return Claim::check("pair.genericity", false).witness(e.to_string()),
    };
    let mut c = Claim::new("pair.genericity", verdict(r.overall))
        .value("b0_bitangents", r.b0_bitangents.count())
        .value("delta0_bitangents", r.delta0_bitangents.count())
        .value("transversal_incidences", r.transversal_incidences);
    let mut witness = None;
    for (name, cond) in r.conditions() {
        c = c.value(name, cond.verdict.name()).value(&format!("{name}_margin"), cond.margin);
        if witness.is_none() && cond.verdict != Verdict::Pass {
            witness = Some(match &cond.witness {
                Some(l) => format!("{name}: {} at line {}", cond.verdict.name(), line(l)),
                None => format!("{name}: {} (bitangent set incomplete)", cond.verdict.name()),
            });
        }
    }
    match witness {
        Some(w) => c.witness(w),
        None => c,
    }
}

/// Slice, dual and the swapped slice of one instance.
pub struct TowerRun {
    pub id: String,
    pub inst: TowerInstance,
    pub slice: Slice,
    pub dual: Dualization,
    pub seed: u64,
}

impl TowerRun {
    pub fn new(rec: &InstanceRecord, seed: u64) -> Result<Self, CliError> {
        let inst = rec.instance()?;
        let slice = slice(&inst).map_err(|e| CliError::Input(format!("instance `{}`: {e}", rec.id)))?;
        let dual = bigonal_dual(&slice.model, seed);
        Ok(TowerRun { id: rec.id.clone(), inst, slice, dual, seed })
    }

    pub fn slice_claim(&self) -> Claim {
        let m = &self.slice.model;
        let b = &self.slice.branch;
        Claim::check("tower.slice", b.a.len() == 4 && b.p.len() == 4)
            .value("b", m.b.to_string())
            .value("q", m.q.to_string())
            .value("d", m.d.to_string())
            .value("a", complexes(&b.a))
            .value("p", complexes(&b.p))
            .value("separation", b.separation)
            .value(
                "chart",
                json!([
                    self.slice.chart.a.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    self.slice.chart.b.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                ]),
            )
    }

    pub fn pencil_claim(&self, s: &Settings) -> Claim {
        Claim::check("tower.pencil-identity", self.dual.pencil_identity && self.dual.max_residual < s.numeric)
            .value("exact", self.dual.pencil_identity)
            .value("samples", self.dual.samples)
            .value("max_residual", self.dual.max_residual)
            .value("dual_lower", self.dual.model.d.to_string())
            .witness(if self.dual.pencil_identity {
                format!("bigonal model residual {:e}", self.dual.max_residual)
            } else {
                "d ≠ q² − λb".to_string()
            })
    }

    pub fn ledger_claim(&self) -> Claim {
        let l = &self.slice.ledger;
        Claim::check("tower.genus-ledger", l.balanced() && l.genus_upper == 3 && l.genus_lower == 1)
            .value("genus_upper", l.genus_upper)
            .value("genus_lower", l.genus_lower)
            .value("deficiencies_lower", l.deficiencies_lower.clone())
            .value("deficiencies_upper", l.deficiencies_upper.clone())
            .value("euler_characteristic", l.euler_characteristic)
            .witness(format!("g(C) = {}, g(E) = {}", l.genus_upper, l.genus_lower))
    }

    pub fn monodromy(&self, eq: &TowerEquations) -> Result<Monodromy, String> {
        fiber_monodromy(eq, &MonodromyOptions { seed: self.seed, ..Default::default() }).map_err(|e| e.to_string())
    }

    pub fn step2_claim(&self, s: &Settings) -> Claim {
        let r = verify_step2(&self.slice.branch, &self.dual.model);
        let c = Claim::check("duality.step2", r.passed(s.numeric))
            .value("lower_exact", r.lower_exact)
            .value("upper_exact", r.upper_exact)
            .value("lower_error", r.lower_error)
            .value("upper_error", r.upper_error)
            .value("upper_fibers", r.upper_fibers);
        match r.mismatch {
            Some(m) => c.witness(m),
            None => c,
        }
    }

    /// Sign consistency and the dual of the dual, both through the role-swapped instance.
    pub fn step3_claims(&self, s: &Settings) -> Vec<Claim> {
        let sw = match self.inst.swapped().and_then(|i| slice_in_chart(&i, &self.slice.chart)) {
            Ok(sw) => sw,
            Err(e) => {
                return vec![
                    Claim::check("duality.step3", false).witness(format!("swapped instance: {e}")),
                    Claim::check("duality.dual-of-dual", false).witness(format!("swapped instance: {e}")),
                ]
            }
        };
        let r = verify_step3(&self.dual.model, &sw.model);
        let mut step3 = Claim::check("duality.step3", r.passed())
            .value("signs", r.signs.clone())
            .value("consistent", r.consistent)
            .value("lower_equal", r.lower_equal)
            .value("divisor_equal", r.divisor_equal)
            .value("divisor_error", r.divisor_error)
            .value("twist", r.twist.to_string());
        if let Some(m) = r.mismatch {
            step3 = step3.witness(m);
        }
        let dd = bigonal_dual(&sw.model, self.seed);
        let bd = dd.model.branch_data();
        let ea = match_sets(&bd.a, &self.slice.branch.a).unwrap_or(f64::INFINITY);
        let ep = match_sets(&bd.p, &self.slice.branch.p).unwrap_or(f64::INFINITY);
        let dd_claim = Claim::check("duality.dual-of-dual", dd.pencil_identity && ea < s.numeric && ep < s.numeric)
            .value("pencil_identity", dd.pencil_identity)
            .value("a_error", ea)
            .value("p_error", ep)
            .witness(format!("branch data differ by {:e}", ea.max(ep)));
        vec![step3, dd_claim]
    }
}

pub fn monodromy_claim(id: &str, m: &Result<Monodromy, String>) -> Claim {
    match m {
        Err(e) => Claim::check(id, false).witness(format!("tracking failed: {e}")),
        Ok(m) => {
            let product = m.product();
            Claim::check(id, m.cycle_types_ok() && product.is_identity() && m.is_transitive() && m.genus() == 3)
                .value("basepoint", complex(m.basepoint))
                .value("branch_points", complexes(&m.branch_points))
                .value("lower", m.lower.clone())
                .value("perms", perms(&m.perms))
                .value("product", product.to_string())
                .value("transitive", m.is_transitive())
                .value("genus", m.genus())
                .value("radius", m.radius)
                .witness(if !m.cycle_types_ok() {
                    format!("cycle types {:?}", m.perms.iter().map(Perm::cycle_type).collect::<Vec<_>>())
                } else if !product.is_identity() {
                    format!("product of loops is {product}")
                } else {
                    format!("group is not transitive (genus {})", m.genus())
                })
        }
    }
}

/// Homology, `τ`, the anti-invariant lattice and its type.
pub fn prym_claim(id: &str, p: &CoverPresentation) -> Claim {
    if let Err(e) = p.validate() {
        return Claim::check(id, false).witness(e.to_string());
    }
    let h = match homology_with_intersection(p) {
        Ok(h) => h,
        Err(e) => return Claim::check(id, false).witness(e.to_string()),
    };
    let base = Claim::new(id, Status::Pass)
        .value("genus", p.genus())
        .value("rank", h.rank())
        .value("intersection", matrix(&h.j))
        .value("tau", matrix(&h.tau))
        .value("symplectic_involution", h.is_valid())
        .value("invariant_rank", h.invariant_rank());
    let prym = match prym_sublattice(&h) {
        Ok(x) => x,
        Err(e) => {
            let mut c = base.witness(e.to_string());
            c.status = Status::Fail;
            return c;
        }
    };
    let ty = polarization_type(&prym);
    let one_two = [BigInt::one(), BigInt::from(2)];
    let ok = h.rank() == 6
        && h.is_valid()
        && h.invariant_rank() == 2
        && ty.as_deref() == Ok(&one_two[..])
        && prym.component_order.is_one();
    let mut c = base
        .value("prym_basis", matrix(&prym.basis))
        .value("pairing", matrix(&prym.pairing))
        .value("type", ty.as_ref().map(|t| bigints(t)).unwrap_or(Value::Null))
        .value("component_order", prym.component_order.to_string())
        .value("anti_invariant_index", prym.anti_invariant_index.to_string());
    c.status = Status::from_bool(ok);
    let w = match &ty {
        Err(e) => e.to_string(),
        Ok(t) if t[..] != one_two[..] => format!("type {:?}", t.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        _ if !prym.component_order.is_one() => format!("component order {}", prym.component_order),
        _ => format!("rank {}, invariant rank {}, valid {}", h.rank(), h.invariant_rank(), h.is_valid()),
    };
    c.witness(w)
}

pub fn prym_from_monodromy(id: &str, m: &Result<Monodromy, String>) -> Claim {
    match m {
        Err(e) => Claim::check(id, false).witness(format!("tracking failed: {e}")),
        Ok(m) => match CoverPresentation::from_monodromy(m) {
            Ok(p) => prym_claim(id, &p),
            Err(e) => Claim::check(id, false).witness(e.to_string()),
        },
    }
}

/// Every check for one instance, in a fixed order.
pub fn full_instance(rec: &InstanceRecord, s: &Settings, seed: u64) -> Vec<Claim> {
    let mut claims = pair_claims(rec, s, seed, true);
    claims.push(genericity_claim(rec, s, seed));
    match TowerRun::new(rec, seed) {
        Err(CliError::Input(e)) => claims.push(Claim::check("tower.slice", false).witness(e)),
        Ok(run) => {
            claims.push(run.pencil_claim(s));
            claims.push(run.ledger_claim());
            let m = run.monodromy(&run.slice.model.equations());
            let md = run.monodromy(&run.dual.model.equations());
            claims.push(monodromy_claim("tower.monodromy", &m));
            claims.push(monodromy_claim("dual.monodromy", &md));
            claims.push(run.step2_claim(s));
            claims.extend(run.step3_claims(s));
            claims.push(prym_from_monodromy("prym.tower", &m));
            claims.push(prym_from_monodromy("prym.dual", &md));
        }
    }
    claims.into_iter().map(|c| c.for_instance(&rec.id)).collect()
}
