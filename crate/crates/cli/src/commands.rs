use std::path::Path;

use bigonal_core::lattice::{
    extend_isometry, fixtures, glue_map, involution_from_sublattice, nikulin_isometry_class_equal, parse_lattice,
    Embedding, Extension, Lattice, LatticeError,
};
use bigonal_core::linalg::{integer_kernel, row_lattice_basis, IntMatrix};
use bigonal_core::prym::CoverPresentation;
use bigonal_core::quartics::{bitangents, is_smooth, points_on_conic, singular_point, BITANGENT_COUNT};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Cli, Command, EmbeddingSource, LatticeCmd, LatticeSource, QuarticCmd, TowerCmd};
use crate::generate::random_record;
use crate::input::{file_stem, parse_form_file, parse_matrix, parse_points, parse_rational, read_file, InstanceRecord};
use crate::report::{Claim, Report, Status};
use crate::settings::Settings;
use crate::verify::{self, complex, TowerRun};
use crate::CliError;

pub enum Output {
    Report(Box<Report>),
    /// Non-report output such as generated instances.
    Text(String),
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn lattice_err(e: LatticeError) -> CliError {
    input(e.to_string())
}

/// Runs one command. Input errors are returned; failed checks are reported.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let mut settings = Settings::default();
    let base_seed = cli.seed.unwrap_or(0);
    let report = |command: String, seed: u64, settings: &Settings, claims: Vec<Claim>| {
        Ok(Output::Report(Box::new(Report::new(&command, seed, settings, claims))))
    };
    match &cli.command {
        Command::Lattice(cmd) => {
            settings.apply(&cli.tol)?;
            let (name, claims) = lattice(cmd)?;
            report(format!("lattice {name}"), base_seed, &settings, claims)
        }
        Command::Quartic(cmd) => quartic(cli, cmd),
        Command::Tower(cmd) => tower(cli, cmd),
        Command::Prym(a) => prym(cli, &a.file, a.cover),
        Command::Suite(a) => {
            settings.apply(&cli.tol)?;
            Ok(Output::Report(Box::new(suite(base_seed, a.count, &settings, cli.jobs.unwrap_or(0))?)))
        }
        Command::Generate(a) => {
            let recs: Vec<Value> = (0..a.count).map(|i| random_record(base_seed, i).to_value()).collect();
            let mut s = serde_json::to_string_pretty(&recs).expect("records serialize");
            s.push('\n');
            Ok(Output::Text(s))
        }
    }
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

/// `count` random instances through every check; claims are sorted by
/// instance id whatever the number of threads.
pub fn suite(seed: u64, count: u64, settings: &Settings, jobs: usize) -> Result<Report, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| input(format!("--jobs: {e}")))?;
    let mut per_instance: Vec<(String, Vec<Claim>)> = pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let rec = random_record(seed, i);
                let s = rec.seed.unwrap_or(seed);
                (rec.id.clone(), verify::full_instance(&rec, settings, s))
            })
            .collect()
    });
    per_instance.sort_by(|a, b| a.0.cmp(&b.0));
    let command = format!("suite --count {count}");
    Ok(Report::new(&command, seed, settings, per_instance.into_iter().flat_map(|p| p.1).collect()))
}

/// Settings and seed for a record: defaults, then the record, then the flags.
fn record_context(cli: &Cli, rec: &InstanceRecord) -> Result<(Settings, u64), CliError> {
    let mut s = Settings::default();
    s.apply(&rec.tol)?;
    s.apply(&cli.tol)?;
    Ok((s, cli.seed.or(rec.seed).unwrap_or(0)))
}

fn quartic(cli: &Cli, cmd: &QuarticCmd) -> Result<Output, CliError> {
    let (command, seed, settings, claims) = match cmd {
        QuarticCmd::Bitangents { file } => {
            let mut s = Settings::default();
            s.apply(&cli.tol)?;
            let seed = cli.seed.unwrap_or(0);
            let f = parse_form_file(&read_file(file)?)?;
            if f.degree() != 4 {
                return Err(input(format!("{}: expected a quartic, found degree {}", display(file), f.degree())));
            }
            let tol = s.tolerances();
            let smooth = is_smooth(&f).map_err(|e| input(e.to_string()))?;
            let mut claims = Vec::new();
            let mut c = Claim::check("quartic.smooth", smooth).value("form", f.to_string());
            if !smooth {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                if let Some(p) = singular_point(&f.to_complex(), &mut rng, s.tangency) {
                    c = c.value("singular_point", Value::Array(p.iter().copied().map(complex).collect()));
                }
                claims.push(c.witness("the curve is singular"));
            } else {
                claims.push(c);
                let set = bitangents(&f, seed, &tol).map_err(|e| input(e.to_string()))?;
                let ok = set.is_complete() && set.count() == BITANGENT_COUNT && set.max_residual < s.certify;
                let status = if ok {
                    Status::Pass
                } else if !set.is_complete() {
                    Status::Inconclusive
                } else {
                    Status::Fail
                };
                let lines: Vec<Value> = set
                    .lines
                    .iter()
                    .map(|r| {
                        json!({
                            "line": Value::Array(r.line.coords().iter().copied().map(complex).collect()),
                            "kind": r.classification.name(),
                            "residual": r.residual,
                        })
                    })
                    .collect();
                claims.push(
                    Claim::new("quartic.bitangents", status)
                        .value("count", set.count())
                        .value("proper", set.proper_count())
                        .value("hyperflex", set.hyperflex_count)
                        .value("complete", set.is_complete())
                        .value("max_residual", set.max_residual)
                        .value("min_separation", set.min_separation)
                        .value("starts", set.starts)
                        .value("lines", lines)
                        .witness(format!("{} of {BITANGENT_COUNT} lines certified", set.count())),
                );
            }
            (format!("quartic bitangents {}", display(file)), seed, s, claims)
        }
        QuarticCmd::Genericity { file } => {
            let rec = InstanceRecord::from_file(file)?;
            let (s, seed) = record_context(cli, &rec)?;
            let c = verify::genericity_claim(&rec, &s, seed).for_instance(&rec.id);
            (format!("quartic genericity {}", display(file)), seed, s, vec![c])
        }
        QuarticCmd::MakePair { file, lambda } => {
            let mut rec = match file {
                Some(f) => InstanceRecord::from_file(f)?,
                None => random_record(cli.seed.unwrap_or(0), 0),
            };
            if let Some(l) = lambda {
                rec.lambda = parse_rational(l).ok_or_else(|| input(format!("--lambda: cannot parse `{l}`")))?;
            }
            let (s, seed) = record_context(cli, &rec)?;
            let claims = verify::pair_claims(&rec, &s, seed, false)
                .into_iter()
                .map(|c| c.for_instance(&rec.id))
                .collect::<Vec<_>>();
            let claims = claims
                .into_iter()
                .map(|c| if c.id == "pair.status" { c.value("lambda", rec.lambda.to_string()) } else { c })
                .collect();
            let what = file.as_deref().map(display).unwrap_or_else(|| "(random)".into());
            let lam = lambda.as_deref().map(|l| format!(" --lambda {l}")).unwrap_or_default();
            (format!("quartic make-pair {what}{lam}"), seed, s, claims)
        }
        QuarticCmd::ConicCheck { file } => {
            let mut s = Settings::default();
            s.apply(&cli.tol)?;
            let pts = parse_points(&read_file(file)?)?;
            let fit = points_on_conic(&pts, &s.tolerances()).map_err(|e| input(e.to_string()))?;
            let c = match fit {
                Some(f) => Claim::check("quartic.conic", f.residual < s.conic)
                    .value("coefficients", Value::Array(f.coeffs.iter().copied().map(complex).collect()))
                    .value("residual", f.residual)
                    .value("sigma_min", f.sigma_min)
                    .value("sigma_next", f.sigma_next)
                    .witness(format!("residual {:e}", f.residual)),
                None => Claim::check("quartic.conic", false)
                    .value("points", pts.len())
                    .witness("the points do not lie on a unique conic"),
            };
            (format!("quartic conic-check {}", display(file)), cli.seed.unwrap_or(0), s, vec![c])
        }
    };
    Ok(Output::Report(Box::new(Report::new(&command, seed, &settings, claims))))
}

fn tower(cli: &Cli, cmd: &TowerCmd) -> Result<Output, CliError> {
    let (name, file) = match cmd {
        TowerCmd::Slice { file } => ("slice", file),
        TowerCmd::Dualize { file } => ("dualize", file),
        TowerCmd::VerifyStep2 { file } => ("verify-step2", file),
        TowerCmd::VerifyStep3 { file } => ("verify-step3", file),
        TowerCmd::Monodromy { file } => ("monodromy", file),
    };
    let rec = InstanceRecord::from_file(file)?;
    let (s, seed) = record_context(cli, &rec)?;
    let run = TowerRun::new(&rec, seed)?;
    let claims = match cmd {
        TowerCmd::Slice { .. } => vec![run.slice_claim(), run.ledger_claim()],
        TowerCmd::Dualize { .. } => {
            let dual_ledger = run.dual.model.equations().genus_ledger(s.cluster);
            vec![
                run.pencil_claim(&s),
                Claim::check(
                    "dual.genus-ledger",
                    dual_ledger.balanced() && dual_ledger.genus_upper == 3 && dual_ledger.genus_lower == 1,
                )
                .value("genus_upper", dual_ledger.genus_upper)
                .value("genus_lower", dual_ledger.genus_lower)
                .witness(format!("g = {}, {}", dual_ledger.genus_upper, dual_ledger.genus_lower)),
            ]
        }
        TowerCmd::VerifyStep2 { .. } => vec![run.step2_claim(&s)],
        TowerCmd::VerifyStep3 { .. } => run.step3_claims(&s),
        TowerCmd::Monodromy { .. } => vec![
            verify::monodromy_claim("tower.monodromy", &run.monodromy(&run.slice.model.equations())),
            verify::monodromy_claim("dual.monodromy", &run.monodromy(&run.dual.model.equations())),
        ],
    };
    let claims = claims.into_iter().map(|c| c.for_instance(&rec.id)).collect();
    Ok(Output::Report(Box::new(Report::new(&format!("tower {name} {}", display(file)), seed, &s, claims))))
}

fn prym(cli: &Cli, file: &Path, cover: bool) -> Result<Output, CliError> {
    let text = read_file(file)?;
    let as_json = !cover && text.trim_start().starts_with('{');
    let command = format!("prym {}{}", if cover { "--cover " } else { "" }, display(file));
    if as_json {
        let rec = InstanceRecord::parse(&text, &file_stem(file)).map_err(|e| input(format!("{}: {e}", display(file))))?;
        let (s, seed) = record_context(cli, &rec)?;
        let run = TowerRun::new(&rec, seed)?;
        let m = run.monodromy(&run.slice.model.equations());
        let md = run.monodromy(&run.dual.model.equations());
        let claims = vec![verify::prym_from_monodromy("prym.tower", &m), verify::prym_from_monodromy("prym.dual", &md)]
            .into_iter()
            .map(|c| c.for_instance(&rec.id))
            .collect();
        return Ok(Output::Report(Box::new(Report::new(&command, seed, &s, claims))));
    }
    let mut s = Settings::default();
    s.apply(&cli.tol)?;
    let p = CoverPresentation::parse(&text).map_err(|e| input(format!("{}: {e}", display(file))))?;
    let c = verify::prym_claim("prym.cover", &p).for_instance(&file_stem(file));
    Ok(Output::Report(Box::new(Report::new(&command, cli.seed.unwrap_or(0), &s, vec![c]))))
}

/// Named lattices with the values they are expected to have.
struct Expected {
    triple: Option<&'static str>,
    signature: Option<(usize, usize)>,
    unimodular_even: bool,
}

fn named_lattice(name: &str) -> Result<(Lattice, Expected), CliError> {
    let none = Expected { triple: None, signature: None, unimodular_even: false };
    match name {
        "I17_2" => Ok((fixtures::i17_2(), Expected { triple: Some("((1, 7), 8, 1)"), signature: Some((1, 7)), ..none })),
        "K3" => Ok((fixtures::k3(), Expected { triple: None, signature: Some((3, 19)), unimodular_even: true })),
        _ => Ok((parse_lattice(name).map_err(lattice_err)?, none)),
    }
}

fn lattice_source(src: &LatticeSource) -> Result<(String, Lattice, Expected), CliError> {
    match (&src.fixture, &src.gram) {
        (Some(n), None) => {
            let (l, e) = named_lattice(n)?;
            Ok((format!("--fixture {n}"), l, e))
        }
        (None, Some(p)) => {
            let g = parse_matrix(&read_file(p)?).map_err(|e| input(format!("{}: {e}", display(p))))?;
            let l = Lattice::new(g).map_err(lattice_err)?;
            Ok((format!("--gram {}", display(p)), l, Expected { triple: None, signature: None, unimodular_even: false }))
        }
        _ => Err(input("give exactly one of --fixture or --gram")),
    }
}

/// `(signature of the complement, its 2-rank)` for named embeddings.
fn named_embedding(name: &str) -> Result<(Embedding, Complement), CliError> {
    match name {
        "I17_2-in-K3" => Ok((fixtures::i17_2_in_k3(), Some(((2, 12), 8)))),
        "I17_2-in-K3-alt" => Ok((fixtures::i17_2_in_k3_alt(), Some(((2, 12), 8)))),
        _ => Err(input(format!("unknown embedding fixture `{name}` (expected I17_2-in-K3 or I17_2-in-K3-alt)"))),
    }
}

type Complement = Option<((usize, usize), usize)>;
type EmbeddingInput = (String, Embedding, Complement);

fn embedding_source(src: &EmbeddingSource) -> Result<EmbeddingInput, CliError> {
    match (&src.fixture, &src.gram, &src.basis) {
        (Some(n), None, None) => {
            let (e, x) = named_embedding(n)?;
            Ok((format!("--fixture {n}"), e, x))
        }
        (None, Some(g), Some(b)) => {
            let gram = parse_matrix(&read_file(g)?).map_err(|e| input(format!("{}: {e}", display(g))))?;
            let basis = parse_matrix(&read_file(b)?).map_err(|e| input(format!("{}: {e}", display(b))))?;
            let e = Embedding::new(Lattice::new(gram).map_err(lattice_err)?, basis).map_err(lattice_err)?;
            Ok((format!("--gram {} --basis {}", display(g), display(b)), e, None))
        }
        _ => Err(input("give --fixture, or both --gram and --basis")),
    }
}

fn lattice_values(c: Claim, l: &Lattice) -> Claim {
    let c = c.value("rank", l.rank()).value("even", l.is_even()).value("determinant", l.determinant().to_string());
    match l.signature() {
        Ok(s) => c.value("signature", json!([s.0, s.1])),
        Err(_) => c.value("signature", Value::Null),
    }
}

fn lattice(cmd: &LatticeCmd) -> Result<(String, Vec<Claim>), CliError> {
    match cmd {
        LatticeCmd::Triple(src) => {
            let (what, l, exp) = lattice_source(src)?;
            let mut claims = Vec::new();
            let sig = l.signature().ok();
            let mut inv = Claim::check(
                "lattice.invariants",
                exp.signature.is_none_or(|s| sig == Some(s))
                    && (!exp.unimodular_even || (l.is_even() && l.determinant().abs().is_one())),
            );
            inv = lattice_values(inv, &l).witness(format!("signature {sig:?}, even {}, det {}", l.is_even(), l.determinant()));
            claims.push(inv);
            let t = match l.triple() {
                Ok(t) => Claim::check("lattice.triple", exp.triple.is_none_or(|e| e == t.to_string()))
                    .value("triple", t.to_string())
                    .value("a", t.a)
                    .value("delta", t.delta)
                    .witness(format!("triple {t}, expected {}", exp.triple.unwrap_or("-"))),
                Err(e) => Claim::check("lattice.triple", false).witness(e.to_string()),
            };
            claims.push(t);
            Ok((format!("triple {what}"), claims))
        }
        LatticeCmd::Complement(src) => {
            let (what, e, exp) = embedding_source(src)?;
            let k = e.orthogonal_complement().map_err(lattice_err)?.sublattice();
            let sig = k.signature().ok();
            let t = k.triple().ok();
            let ok = match exp {
                Some((s, a)) => sig == Some(s) && t.is_some_and(|t| t.a == a),
                None => true,
            };
            let mut c = lattice_values(Claim::check("lattice.complement", ok), &k)
                .value("two_elementary", t.is_some())
                .value("triple", t.map(|t| t.to_string()))
                .value("a", t.map(|t| t.a));
            if let Some((p, _)) = sig.filter(|s| s.0 == 2) {
                c = c.value("moduli_dimension", k.rank() - p);
            }
            let c = c.witness(format!("signature {sig:?}, triple {t:?}"));
            Ok((format!("complement {what}"), vec![c]))
        }
        LatticeCmd::Glue(src) => {
            let (what, e, _) = embedding_source(src)?;
            let g = glue_map(&e).map_err(lattice_err)?;
            let c = Claim::check("lattice.glue", g.verified() && g.check.exhaustive)
                .value("order", g.order().to_string())
                .value("homomorphism", g.check.homomorphism)
                .value("bijective", g.check.bijective)
                .value("anti_isometry", g.check.anti_isometry)
                .value("elements_checked", g.check.elements_checked)
                .value("exhaustive", g.check.exhaustive)
                .witness(format!("{:?}", g.check));
            Ok((format!("glue {what}"), vec![c]))
        }
        LatticeCmd::Involution(src) => {
            let (what, e, _) = embedding_source(src)?;
            let c = match involution_from_sublattice(&e) {
                Err(err) => Claim::check("lattice.involution", false).witness(err.to_string()),
                Ok(i) => involution_claim(&e, &i)?,
            };
            Ok((format!("involution {what}"), vec![c]))
        }
        LatticeCmd::Extend { from, to, phi, psi } => {
            let (what, e1, _) = embedding_source(from)?;
            let e2 = match to {
                Some(n) => named_embedding(n)?.0,
                None => e1.clone(),
            };
            let k1 = e1.orthogonal_complement().map_err(lattice_err)?;
            let load = |p: &Option<std::path::PathBuf>, n: usize| -> Result<IntMatrix, CliError> {
                match p {
                    Some(p) => parse_matrix(&read_file(p)?).map_err(|e| input(format!("{}: {e}", display(p)))),
                    None => Ok(IntMatrix::identity(n)),
                }
            };
            let phi = load(phi, e1.rank())?;
            let psi = load(psi, k1.rank())?;
            let c = match extend_isometry(&e1, &e2, &phi, &psi).map_err(lattice_err)? {
                Extension::Isometry(t) => Claim::check("lattice.extend", true).value("isometry", verify::matrix(&t)),
                Extension::Incompatible(ms) => Claim::check("lattice.extend", false)
                    .value("mismatches", ms.len())
                    .witness(
                        ms.iter()
                            .map(|m| {
                                format!(
                                    "generator {}: {:?} vs {:?}",
                                    m.generator,
                                    m.via_sublattice.iter().map(BigInt::to_string).collect::<Vec<_>>(),
                                    m.via_complement.iter().map(BigInt::to_string).collect::<Vec<_>>()
                                )
                            })
                            .collect::<Vec<_>>()
                            .join("; "),
                    ),
            };
            let target = to.as_deref().map(|t| format!(" --to {t}")).unwrap_or_default();
            Ok((format!("extend {what}{target}"), vec![c]))
        }
        LatticeCmd::NikulinEqual { fixture, gram } => {
            let mut ls = Vec::new();
            for n in fixture {
                ls.push((n.clone(), named_lattice(n)?.0));
            }
            for g in gram {
                let m = parse_matrix(&read_file(g)?).map_err(|e| input(format!("{}: {e}", display(g))))?;
                ls.push((display(g), Lattice::new(m).map_err(lattice_err)?));
            }
            if ls.len() != 2 {
                return Err(input(format!("nikulin-equal needs two lattices, got {}", ls.len())));
            }
            let equal = nikulin_isometry_class_equal(&ls[0].1, &ls[1].1).map_err(lattice_err)?;
            let c = Claim::check("lattice.nikulin-equal", true)
                .value("equal", equal)
                .value("first", ls[0].1.triple().map(|t| t.to_string()).ok())
                .value("second", ls[1].1.triple().map(|t| t.to_string()).ok());
            Ok((format!("nikulin-equal {} {}", ls[0].0, ls[1].0), vec![c]))
        }
    }
}

/// Integrality is given; checks `I² = 1`, `IᵀGI = G`, and that the
/// eigenlattices for `±1` are exactly the sublattice and its complement.
fn involution_claim(e: &Embedding, i: &IntMatrix) -> Result<Claim, CliError> {
    let n = i.rows();
    let id = IntMatrix::identity(n);
    let g = e.ambient().gram();
    let k = e.orthogonal_complement().map_err(lattice_err)?;
    let fixed = integer_kernel(&i.sub(&id));
    let anti = integer_kernel(&i.add(&id));
    let square = (i * i) == id;
    let isometry = &(&i.transpose() * g) * i == *g;
    let fixed_ok = fixed == row_lattice_basis(e.basis());
    let anti_ok = anti == row_lattice_basis(k.basis());
    let trace: BigInt = (0..n).map(|j| i[(j, j)].clone()).sum();
    Ok(Claim::check("lattice.involution", square && isometry && fixed_ok && anti_ok)
        .value("integral", true)
        .value("square_identity", square)
        .value("isometry", isometry)
        .value("fixed_is_sublattice", fixed_ok)
        .value("anti_fixed_is_complement", anti_ok)
        .value("fixed_rank", fixed.rows())
        .value("anti_fixed_rank", anti.rows())
        .value("trace", trace.to_string())
        .witness(format!("I² = 1: {square}, isometry: {isometry}, fixed = M: {fixed_ok}, anti-fixed = M⊥: {anti_ok}")))
}
