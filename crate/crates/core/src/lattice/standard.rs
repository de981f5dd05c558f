use alloc::string::ToString;

use super::{Lattice, LatticeError};

/// Parses names such as `U`, `E8(-1)`, `A1`, `K3`, `I1,7(2)`, `I_{1,7}(2)`
/// and direct sums joined by `+`. A trailing `(d)` rescales the form by `d`.
pub fn parse_lattice(name: &str) -> Result<Lattice, LatticeError> {
    let mut out: Option<Lattice> = None;
    for term in split_sum(name) {
        let l = parse_term(term.trim()).ok_or_else(|| LatticeError::UnknownName(name.to_string()))?;
        out = Some(match out {
            None => l,
            Some(acc) => acc.direct_sum(&l),
        });
    }
    out.ok_or_else(|| LatticeError::UnknownName(name.to_string()))
}

fn split_sum(s: &str) -> impl Iterator<Item = &str> {
    s.split(['+', '⊕'])
}

fn parse_term(t: &str) -> Option<Lattice> {
    let (base, power) = match t.split_once('^') {
        Some((b, p)) => (b.trim(), p.trim().parse::<usize>().ok()?),
        None => (t, 1),
    };
    if power == 0 {
        return None;
    }
    let (base, scale) = match base.strip_suffix(')') {
        Some(rest) => {
            let open = rest.rfind('(')?;
            let d: i64 = rest[open + 1..].trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            (rest[..open].trim(), d)
        }
        None => (base, 1),
    };
    let l = match base {
        "U" => Lattice::hyperbolic_plane(),
        "E8" => Lattice::e8(),
        "A1" => Lattice::a1(),
        "K3" => Lattice::k3(),
        _ => parse_odd(base)?,
    };
    let mut acc = l.clone();
    for _ in 1..power {
        acc = acc.direct_sum(&l);
    }
    Some(if scale == 1 { acc } else { acc.rescale(scale) })
}

fn parse_odd(s: &str) -> Option<Lattice> {
    let rest = s.strip_prefix('I')?;
    let rest = rest.strip_prefix('_').unwrap_or(rest);
    let rest = rest
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .unwrap_or(rest);
    let (p, q) = rest.split_once(',')?;
    Some(Lattice::odd_unimodular(p.trim().parse().ok()?, q.trim().parse().ok()?))
}
