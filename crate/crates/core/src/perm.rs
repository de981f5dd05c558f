//! Permutations of a small finite set, written in cycle notation with labels from 1.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("not a permutation of 0..{0}")]
    NotBijective(usize),
    #[error("malformed cycle notation: {0}")]
    Syntax(String),
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// From images: `images[i]` is the image of `i`.
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(PermError::NotBijective(n));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// Parses cycle notation such as `(1 2)(3 4)` on `n` points; `()` is the identity.
    pub fn parse(s: &str, n: usize) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = alloc::vec![false; n];
        let err = || PermError::Syntax(s.into());
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(err)?;
            let end = body.find(')').ok_or_else(err)?;
            let cycle: Vec<usize> = body[..end]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().ok().filter(|&k| k >= 1 && k <= n).map(|k| k - 1))
                .collect::<Option<_>>()
                .ok_or_else(err)?;
            for (i, &a) in cycle.iter().enumerate() {
                if used[a] {
                    return Err(err());
                }
                used[a] = true;
                images[a] = cycle[(i + 1) % cycle.len()];
            }
            rest = body[end + 1..].trim_start();
        }
        Ok(Perm(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = alloc::vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// `π⁻¹ σ π` in the sense `i ↦ π(σ(π⁻¹(i)))`.
    pub fn conjugate_by(&self, pi: &Perm) -> Perm {
        pi.inverse().then(self).then(pi)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.then(other) == other.then(self)
    }

    /// Cycles including fixed points, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = alloc::vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut c = Vec::new();
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                c.push(i);
                i = self.0[i];
            }
            out.push(c);
        }
        out
    }

    /// Cycle lengths, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// `n − #cycles`, the ramification deficiency of a branch point with this monodromy.
    pub fn deficiency(&self) -> usize {
        self.0.len() - self.cycles().len()
    }

    /// All permutations of `0..n` (lexicographic).
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut v: Vec<usize> = (0..n).collect();
        heap(&mut v, n, &mut out);
        out.sort();
        out
    }
}

fn heap(v: &mut Vec<usize>, k: usize, out: &mut Vec<Perm>) {
    if k <= 1 {
        out.push(Perm(v.clone()));
        return;
    }
    for i in 0..k {
        heap(v, k - 1, out);
        if k.is_multiple_of(2) {
            v.swap(i, k - 1);
        } else {
            v.swap(0, k - 1);
        }
    }
}

/// Whether the group generated by `gens` acts transitively on `0..n`.
pub fn is_transitive(gens: &[Perm], n: usize) -> bool {
    orbit(gens, 0, n).len() == n
}

pub fn orbit(gens: &[Perm], start: usize, n: usize) -> Vec<usize> {
    let mut seen = alloc::vec![false; n];
    let mut stack = alloc::vec![start];
    seen[start] = true;
    let mut out = Vec::new();
    while let Some(i) = stack.pop() {
        out.push(i);
        for g in gens {
            let j = g.apply(i);
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Product `gens[0]` then `gens[1]` then ….
pub fn product(gens: &[Perm], n: usize) -> Perm {
    gens.iter().fold(Perm::identity(n), |acc, g| acc.then(g))
}

/// A `π` with `π⁻¹ aᵢ π = bᵢ` for every `i`, if one exists.
pub fn simultaneous_conjugator(a: &[Perm], b: &[Perm]) -> Option<Perm> {
    let n = a.first().map_or(0, Perm::len);
    if a.len() != b.len() {
        return None;
    }
    Perm::all(n)
        .into_iter()
        .find(|pi| a.iter().zip(b).all(|(x, y)| x.conjugate_by(pi) == *y))
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, k) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", k + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    #[test]
    fn parse_and_print() {
        let p = Perm::parse("(1 2)(3 4)", 4).unwrap();
        assert_eq!(p.images(), &[1, 0, 3, 2]);
        assert_eq!(p.to_string(), "(1 2)(3 4)");
        assert_eq!(p.cycle_type(), vec![2, 2]);
        assert_eq!(Perm::parse("()", 4).unwrap(), Perm::identity(4));
        assert_eq!(Perm::identity(4).to_string(), "()");
        assert!(Perm::parse("(1 5)", 4).is_err());
        assert!(Perm::parse("(1 2)(2 3)", 4).is_err());
        assert!(Perm::parse("1 2", 4).is_err());
    }

    #[test]
    fn composition_order() {
        let a = Perm::parse("(1 2)", 3).unwrap();
        let b = Perm::parse("(2 3)", 3).unwrap();
        // 1 → 2 → 3
        assert_eq!(a.then(&b).apply(0), 2);
        assert_eq!(a.then(&b).to_string(), "(1 3 2)");
    }

    #[test]
    fn transitivity() {
        let a = Perm::parse("(1 2)", 4).unwrap();
        let b = Perm::parse("(3 4)", 4).unwrap();
        assert!(!is_transitive(&[a.clone(), b.clone()], 4));
        assert!(is_transitive(&[a, b, Perm::parse("(2 3)", 4).unwrap()], 4));
    }

    #[test]
    fn all_has_factorial_size() {
        assert_eq!(Perm::all(4).len(), 24);
    }

    proptest! {
        #[test]
        fn conjugator_found(i in 0usize..24, j in 0usize..24, k in 0usize..24) {
            let all = Perm::all(4);
            let gens = [all[i].clone(), all[j].clone()];
            let moved: Vec<Perm> = gens.iter().map(|g| g.conjugate_by(&all[k])).collect();
            let pi = simultaneous_conjugator(&gens, &moved).unwrap();
            for (g, m) in gens.iter().zip(&moved) {
                prop_assert_eq!(&g.conjugate_by(&pi), m);
            }
        }

        #[test]
        fn round_trip(i in 0usize..120) {
            let p = Perm::all(5)[i].clone();
            prop_assert_eq!(Perm::parse(&p.to_string(), 5).unwrap(), p.clone());
            prop_assert!(p.then(&p.inverse()).is_identity());
        }
    }
}
