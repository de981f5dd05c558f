//! One line per acceptance criterion; exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use bigonal::generate::{instance_rng, random_record, random_smooth_quartic};
use bigonal::verify::full_instance;
use bigonal::{suite, Claim, Settings, Status};
use bigonal_core::lattice::{fixtures, glue_map, involution_from_sublattice, Embedding};
use bigonal_core::linalg::IntMatrix;
use bigonal_core::quartics::{bitangents, is_smooth, TernaryForm};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

const SEED: u64 = 20;
const INSTANCES: u64 = 10;
const RANDOM_QUARTICS: u64 = 5;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn criterion(failures: &mut Vec<u32>, n: u32, name: &str, f: impl FnOnce() -> Outcome) {
    let start = Instant::now();
    let o = f();
    let secs = start.elapsed().as_secs_f64();
    println!("{} {n:>2} {name} ({secs:.2} s): {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    if !o.ok {
        failures.push(n);
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

/// Eigenlattice of `I` for `±1` is exactly `e` when `e` is primitive, every
/// basis row is an eigenvector and the ranks agree.
fn is_eigenlattice(i: &IntMatrix, e: &Embedding, sign: i64) -> bool {
    let n = i.rows();
    let shifted = i.sub(&IntMatrix::identity(n).scale(&BigInt::from(sign)));
    let eigen = e.basis().row_iter().all(|b| shifted.mul_vec(b).iter().all(|x| x.sign() == num_bigint::Sign::NoSign));
    e.is_primitive() && eigen && n - shifted.rank() == e.rank()
}

fn bitangent_run(f: &TernaryForm, seed: u64, s: &Settings) -> (bool, String) {
    let (set, t) = timed(|| bitangents(f, seed, &s.tolerances()));
    match set {
        Ok(set) => {
            let ok = set.is_complete() && set.count() == 28 && set.max_residual < 1e-9 && t < Duration::from_secs(60);
            (ok, format!("{} lines, residual {:.1e}, {:.1} s", set.count(), set.max_residual, t.as_secs_f64()))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn find<'a>(claims: &'a [Claim], id: &str) -> Option<&'a Claim> {
    claims.iter().find(|c| c.id == id)
}

fn passes(claims: &[Claim], ids: &[&str]) -> Result<(), String> {
    for id in ids {
        match find(claims, id) {
            None => return Err(format!("{id} missing")),
            Some(c) if c.status != Status::Pass => {
                return Err(format!("{id}: {}", c.witness.clone().unwrap_or_default()))
            }
            _ => {}
        }
    }
    Ok(())
}

fn over_instances(runs: &[(String, Vec<Claim>, Duration)], check: impl Fn(&[Claim]) -> Result<(), String>) -> Outcome {
    let bad: Vec<String> = runs.iter().filter_map(|(id, c, _)| check(c).err().map(|e| format!("{id}: {e}"))).collect();
    if bad.is_empty() {
        outcome(true, format!("{} instances", runs.len()))
    } else {
        outcome(false, bad.join("; "))
    }
}

fn main() {
    let settings = Settings::default();
    let mut failures = Vec::new();

    criterion(&mut failures, 1, "lattice triple of I1,7(2)", || {
        let (t, d) = timed(|| fixtures::i17_2().triple());
        match t {
            Ok(t) => outcome(
                t.signature == (1, 7) && t.a == 8 && t.delta == 1 && d < Duration::from_secs(1),
                format!("triple {t}"),
            ),
            Err(e) => outcome(false, e.to_string()),
        }
    });

    criterion(&mut failures, 2, "K3 lattice fixture", || {
        let (l, d) = timed(fixtures::k3);
        let sig = l.signature();
        let det = l.determinant();
        outcome(
            sig == Ok((3, 19)) && l.is_even() && det.abs() == BigInt::from(1) && d < Duration::from_secs(1),
            format!("signature {sig:?}, even {}, det {det}", l.is_even()),
        )
    });

    let e = fixtures::i17_2_in_k3();
    criterion(&mut failures, 3, "orthogonal complement", || match e.orthogonal_complement() {
        Ok(k) => {
            let l = k.sublattice();
            let (sig, t) = (l.signature(), l.triple());
            let ok = sig == Ok((2, 12)) && t.as_ref().is_ok_and(|t| t.a == 8) && l.rank() == 14 && l.rank() - 2 == 12;
            outcome(ok, format!("signature {sig:?}, triple {t:?}, moduli dimension {}", l.rank() - 2))
        }
        Err(err) => outcome(false, err.to_string()),
    });

    criterion(&mut failures, 4, "glue anti-isometry on every element", || {
        let (g, d) = timed(|| glue_map(&e));
        match g {
            Ok(g) => outcome(
                g.verified() && g.check.exhaustive && g.check.elements_checked == 256 && d < Duration::from_secs(10),
                format!("{:?}", g.check),
            ),
            Err(err) => outcome(false, err.to_string()),
        }
    });

    criterion(&mut failures, 5, "involution from the sublattice", || {
        let (i, k) = match (involution_from_sublattice(&e), e.orthogonal_complement()) {
            (Ok(i), Ok(k)) => (i, k),
            (Err(err), _) | (_, Err(err)) => return outcome(false, err.to_string()),
        };
        let g = e.ambient().gram();
        let square = &i * &i == IntMatrix::identity(i.rows());
        let isometry = &(&i.transpose() * g) * &i == *g;
        let fixed = is_eigenlattice(&i, &e, 1);
        let anti = is_eigenlattice(&i, &k, -1);
        outcome(
            square && isometry && fixed && anti,
            format!("I² = 1 {square}, isometry {isometry}, fixed = M {fixed}, anti-fixed = M⊥ {anti}"),
        )
    });

    criterion(&mut failures, 6, "28 bitangents", || {
        let mut ok = true;
        let mut parts = Vec::new();
        let (r, msg) = bitangent_run(&TernaryForm::fermat(), SEED, &settings);
        ok &= r;
        parts.push(format!("fermat {msg}"));
        for i in 0..RANDOM_QUARTICS {
            let f = random_smooth_quartic(&mut instance_rng(SEED, i));
            let smooth = is_smooth(&f) == Ok(true);
            let (r, msg) = bitangent_run(&f, SEED + i, &settings);
            ok &= r && smooth;
            parts.push(format!("random {i} {msg}"));
        }
        outcome(ok, parts.join("; "))
    });

    let runs: Vec<(String, Vec<Claim>, Duration)> = (0..INSTANCES)
        .map(|i| {
            let rec = random_record(SEED, i);
            let (claims, d) = timed(|| full_instance(&rec, &settings, rec.seed.unwrap_or(SEED)));
            (rec.id.clone(), claims, d)
        })
        .collect();

    criterion(&mut failures, 7, "pair generation", || {
        over_instances(&runs, |c| {
            passes(c, &["pair.status", "pair.tangency", "pair.conic"])?;
            let conic = find(c, "pair.conic").expect("present");
            let r = conic.values.get("residual").and_then(Value::as_f64).unwrap_or(f64::INFINITY);
            if r >= 1e-8 {
                return Err(format!("conic residual {r:e}"));
            }
            let t = find(c, "pair.tangency").expect("present");
            if t.values.get("points") != Some(&json!(8)) {
                return Err("not 8 tangency points".into());
            }
            find(c, "pair.genericity").map(|_| ()).ok_or_else(|| "no genericity report".into())
        })
    });

    criterion(&mut failures, 8, "tower identities and monodromy", || {
        over_instances(&runs, |c| {
            passes(c, &["tower.pencil-identity", "tower.genus-ledger", "tower.monodromy", "dual.monodromy"])?;
            match find(c, "tower.pencil-identity").and_then(|p| p.values.get("exact")) {
                Some(Value::Bool(true)) => Ok(()),
                _ => Err("pencil identity is not exact".into()),
            }
        })
    });

    criterion(&mut failures, 9, "bigonal duality", || {
        over_instances(&runs, |c| passes(c, &["duality.step2", "duality.step3", "duality.dual-of-dual"]))
    });

    criterion(&mut failures, 10, "Prym type (1,2), connected kernel", || {
        let slow: Vec<_> = runs.iter().filter(|r| r.2 >= Duration::from_secs(120)).map(|r| r.0.clone()).collect();
        let mut o = over_instances(&runs, |c| {
            passes(c, &["prym.tower", "prym.dual"])?;
            for id in ["prym.tower", "prym.dual"] {
                let v = &find(c, id).expect("present").values;
                if v.get("type") != Some(&json!(["1", "2"])) {
                    return Err(format!("{id} type {:?}", v.get("type")));
                }
                if v.get("component_order") != Some(&json!("1")) {
                    return Err(format!("{id} component order {:?}", v.get("component_order")));
                }
            }
            Ok(())
        });
        if !slow.is_empty() {
            o = outcome(false, format!("over 120 s: {}", slow.join(", ")));
        }
        let worst = runs.iter().map(|r| r.2).max().unwrap_or_default();
        o.detail = format!("{}, slowest instance {:.1} s", o.detail, worst.as_secs_f64());
        o
    });

    criterion(&mut failures, 11, "deterministic suite report", || {
        let a = suite(SEED, 3, &settings, 0).map(|r| r.to_json());
        let b = suite(SEED, 3, &settings, 1).map(|r| r.to_json());
        match (a, b) {
            (Ok(a), Ok(b)) => outcome(a == b, format!("{} bytes", a.len())),
            _ => outcome(false, "suite failed to start"),
        }
    });

    if failures.is_empty() {
        println!("all criteria pass");
    } else {
        println!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
