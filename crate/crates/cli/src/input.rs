//! Instance records and the plain-text file formats. See `FORMATS.md`.

use std::path::Path;

use bigonal_core::linalg::IntMatrix;
use bigonal_core::quartics::{monomial_count, monomials, CPoint, Line, TernaryForm};
use bigonal_core::towers::TowerInstance;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::CliError;

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

pub fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into())
}

/// `"3"`, `"-2/7"` or a JSON integer.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse().ok().map(BigRational::from_integer),
    }
}

fn rational_value(v: &Value, field: &str) -> Result<BigRational, CliError> {
    let r = match v {
        Value::Number(n) => n.as_i64().map(|i| BigRational::from_integer(i.into())),
        Value::String(s) => parse_rational(s),
        _ => None,
    };
    r.ok_or_else(|| input(format!("field `{field}`: expected an integer or a \"p/q\" string, found {v}")))
}

pub fn rational_to_value(r: &BigRational) -> Value {
    if r.is_integer() {
        if let Ok(i) = i64::try_from(r.numer()) {
            return json!(i);
        }
    }
    json!(r.to_string())
}

/// A polynomial string or a coefficient array in graded-lex order.
pub fn form_value(v: &Value, field: &str, degree: usize) -> Result<TernaryForm, CliError> {
    let f = match v {
        Value::String(s) => s.parse::<TernaryForm>().map_err(|e| input(format!("field `{field}`: {e}")))?,
        Value::Array(a) => {
            let coeffs = a
                .iter()
                .enumerate()
                .map(|(i, c)| rational_value(c, &format!("{field}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            TernaryForm::new(degree, coeffs).map_err(|e| input(format!("field `{field}`: {e}")))?
        }
        _ => return Err(input(format!("field `{field}`: expected a polynomial string or coefficient array"))),
    };
    if f.degree() != degree {
        return Err(input(format!("field `{field}`: expected degree {degree}, found {}", f.degree())));
    }
    Ok(f)
}

/// Coefficients as exact strings, graded-lex order.
pub fn form_to_value(f: &TernaryForm) -> Value {
    Value::Array(f.coeffs().iter().map(rational_to_value).collect())
}

/// One tower instance: `B₀`, `Q`, `λ`, the sign of `μ = ±√λ`, the line,
/// a seed and tolerance overrides.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceRecord {
    pub id: String,
    pub b0: TernaryForm,
    pub q: TernaryForm,
    pub lambda: BigRational,
    pub mu_sign: i8,
    pub line: Option<Line>,
    pub seed: Option<u64>,
    pub tol: Vec<String>,
}

const FIELDS: [&str; 8] = ["id", "b0", "q", "lambda", "mu_sign", "line", "seed", "tol"];

impl InstanceRecord {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = read_file(path)?;
        InstanceRecord::parse(&text, &file_stem(path)).map_err(|e| match e {
            CliError::Input(m) => input(format!("{}: {m}", path.display())),
        })
    }

    pub fn parse(text: &str, default_id: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| input(format!("invalid JSON: {e}")))?;
        let obj = v.as_object().ok_or_else(|| input("expected a JSON object"))?;
        InstanceRecord::from_object(obj, default_id)
    }

    pub fn from_object(obj: &Map<String, Value>, default_id: &str) -> Result<Self, CliError> {
        if let Some(k) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
            return Err(input(format!("unknown field `{k}` (expected one of {})", FIELDS.join(", "))));
        }
        let need = |k: &str| obj.get(k).ok_or_else(|| input(format!("missing field `{k}`")));
        let id = match obj.get("id") {
            None => default_id.to_string(),
            Some(Value::String(s)) if !s.is_empty() => s.clone(),
            Some(_) => return Err(input("field `id`: expected a nonempty string")),
        };
        let b0 = form_value(need("b0")?, "b0", 4)?;
        let q = form_value(need("q")?, "q", 2)?;
        let lambda = rational_value(need("lambda")?, "lambda")?;
        let mu_sign = match obj.get("mu_sign") {
            None => 1,
            Some(v) => match v.as_i64() {
                Some(1) => 1,
                Some(-1) => -1,
                _ => return Err(input("field `mu_sign`: expected 1 or -1")),
            },
        };
        let line = match obj.get("line") {
            None | Some(Value::Null) => None,
            Some(Value::Array(a)) if a.len() == 3 => {
                let c: Vec<BigRational> = a
                    .iter()
                    .enumerate()
                    .map(|(i, x)| rational_value(x, &format!("line[{i}]")))
                    .collect::<Result<_, _>>()?;
                let l = Line::new([c[0].clone(), c[1].clone(), c[2].clone()])
                    .map_err(|e| input(format!("field `line`: {e}")))?;
                Some(l)
            }
            Some(_) => return Err(input("field `line`: expected three coordinates")),
        };
        let seed = match obj.get("seed") {
            None => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| input("field `seed`: expected a nonnegative integer"))?),
        };
        let tol = match obj.get("tol") {
            None => Vec::new(),
            Some(Value::Object(m)) => m
                .iter()
                .map(|(k, v)| {
                    v.as_f64()
                        .map(|x| format!("{k}={x:e}"))
                        .ok_or_else(|| input(format!("field `tol.{k}`: expected a number")))
                })
                .collect::<Result<_, _>>()?,
            Some(_) => return Err(input("field `tol`: expected an object")),
        };
        Ok(InstanceRecord { id, b0, q, lambda, mu_sign, line, seed, tol })
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("id".into(), json!(self.id));
        m.insert("b0".into(), json!(self.b0.to_string()));
        m.insert("q".into(), json!(self.q.to_string()));
        m.insert("lambda".into(), rational_to_value(&self.lambda));
        m.insert("mu_sign".into(), json!(self.mu_sign));
        if let Some(l) = &self.line {
            m.insert("line".into(), Value::Array(l.coords().iter().map(rational_to_value).collect()));
        }
        if let Some(s) = self.seed {
            m.insert("seed".into(), json!(s));
        }
        Value::Object(m)
    }

    /// The validated tower instance; needs a line.
    pub fn instance(&self) -> Result<TowerInstance, CliError> {
        let line = self.line.clone().ok_or_else(|| input(format!("instance `{}`: missing field `line`", self.id)))?;
        TowerInstance::new(self.b0.clone(), self.q.clone(), self.lambda.clone(), self.mu_sign, line)
            .map_err(|e| input(format!("instance `{}`: {e}", self.id)))
    }

    pub fn delta0(&self) -> TernaryForm {
        self.q.pow(2).sub(&self.b0.scale(&self.lambda))
    }
}

/// A ternary form file: a JSON object with field `form`, a polynomial, or
/// whitespace-separated coefficients (6, 10 or 15 of them) in graded-lex order.
/// Lines starting with `#` are comments.
pub fn parse_form_file(text: &str) -> Result<TernaryForm, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| input(format!("invalid JSON: {e}")))?;
        let f = v.get("form").ok_or_else(|| input("missing field `form`"))?;
        let degree = match f {
            Value::Array(a) => degree_of_count(a.len())?,
            Value::String(s) => s.parse::<TernaryForm>().map_err(|e| input(format!("field `form`: {e}")))?.degree(),
            _ => return Err(input("field `form`: expected a polynomial string or coefficient array")),
        };
        return form_value(f, "form", degree);
    }
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join(" ");
    if body.contains(['x', 'y', 'z']) {
        return body.parse().map_err(|e| input(format!("{e}")));
    }
    let coeffs = body
        .split_whitespace()
        .enumerate()
        .map(|(i, t)| parse_rational(t).ok_or_else(|| input(format!("coefficient {}: cannot parse `{t}`", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    TernaryForm::new(degree_of_count(coeffs.len())?, coeffs).map_err(|e| input(e.to_string()))
}

fn degree_of_count(n: usize) -> Result<usize, CliError> {
    (1..=8)
        .find(|&d| monomial_count(d) == n)
        .ok_or_else(|| input(format!("{n} coefficients do not match any degree")))
}

/// Integer matrix: one row per line, entries separated by whitespace or commas.
pub fn parse_matrix(text: &str) -> Result<IntMatrix, CliError> {
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let row = l
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<BigInt>().map_err(|_| input(format!("line {}: cannot parse `{t}`", ln + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(input(format!("line {}: expected {} entries, found {}", ln + 1, first.len(), row.len())));
            }
        }
        rows.push(row);
    }
    let cols = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || cols == 0 {
        return Err(input("empty matrix"));
    }
    Ok(IntMatrix::from_big_rows(rows, cols))
}

/// `{"points": [[x, y, z], …]}` with each coordinate a number or `[re, im]`.
pub fn parse_points(text: &str) -> Result<Vec<CPoint>, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| input(format!("invalid JSON: {e}")))?;
    let pts = v.get("points").and_then(Value::as_array).ok_or_else(|| input("missing array `points`"))?;
    pts.iter()
        .enumerate()
        .map(|(i, p)| {
            let a = p
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| input(format!("points[{i}]: expected three coordinates")))?;
            let mut out = [Complex64::zero(); 3];
            for (k, c) in a.iter().enumerate() {
                out[k] = match c {
                    Value::Number(n) => Complex64::new(n.as_f64().unwrap_or(f64::NAN), 0.0),
                    Value::Array(z) if z.len() == 2 && z.iter().all(Value::is_number) => {
                        Complex64::new(z[0].as_f64().unwrap_or(f64::NAN), z[1].as_f64().unwrap_or(f64::NAN))
                    }
                    _ => return Err(input(format!("points[{i}][{k}]: expected a number or [re, im]"))),
                };
            }
            Ok(out)
        })
        .collect()
}

/// `x^a y^b z^c` labels in coefficient order, for documentation and reports.
pub fn monomial_labels(degree: usize) -> Vec<String> {
    monomials(degree)
        .into_iter()
        .map(|e| {
            let parts: Vec<String> = ["x", "y", "z"]
                .iter()
                .zip(e)
                .filter(|(_, k)| *k > 0)
                .map(|(v, k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            if parts.is_empty() {
                "1".into()
            } else {
                parts.join(" ")
            }
        })
        .collect()
}
