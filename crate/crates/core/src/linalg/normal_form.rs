use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{IntMatrix, LinalgError, QMatrix};

/// Smith normal form `U·A·V = S` with unimodular `U`, `V`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Diagonal of `S` (length `min(rows, cols)`), nonnegative, each dividing the next.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Nonzero diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect()
    }
}

fn min_abs_position(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let v = &s[(i, j)];
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                if a.is_one() {
                    return Some((i, j));
                }
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(p, _)| p)
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_position(&s, t) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                // a remainder is now smaller than the pivot; move the smallest one in
                let mut best: Option<(bool, usize, BigInt)> = None;
                for i in t + 1..m {
                    let x = s[(i, t)].abs();
                    if !x.is_zero() && best.as_ref().is_none_or(|b| x < b.2) {
                        best = Some((true, i, x));
                    }
                }
                for j in t + 1..n {
                    let x = s[(t, j)].abs();
                    if !x.is_zero() && best.as_ref().is_none_or(|b| x < b.2) {
                        best = Some((false, j, x));
                    }
                }
                if let Some((is_row, k, _)) = best {
                    if is_row {
                        s.swap_rows(t, k);
                        u.swap_rows(t, k);
                    } else {
                        s.swap_cols(t, k);
                        v.swap_cols(t, k);
                    }
                }
                continue;
            }
            // divisibility of the remaining block by the pivot
            let pivot = s[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    s.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { u, s, v }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular, `U·A = H`,
/// `H` in row echelon form with positive pivots and entries above each pivot
/// reduced into `[0, pivot)`. Zero rows are at the bottom.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let mut has_pivot = false;
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..m {
                let x = h[(i, c)].abs();
                if !x.is_zero() && best.as_ref().is_none_or(|b| x < b.1) {
                    best = Some((i, x));
                }
            }
            let Some((p, _)) = best else { break };
            has_pivot = true;
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                clean &= h[(i, c)].is_zero();
            }
            if clean {
                break;
            }
        }
        if !has_pivot {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row lattice.
pub fn row_lattice_basis(a: &IntMatrix) -> IntMatrix {
    let (h, _) = hermite_normal_form(a);
    let keep: Vec<usize> = (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).collect();
    h.select_rows(&keep)
}

/// Counts `(n_plus, n_minus, n_zero)` of a symmetric integer matrix by exact
/// congruence reduction over the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

pub fn inertia(g: &IntMatrix) -> Result<Inertia, LinalgError> {
    if !g.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let n = g.rows();
    let mut a = QMatrix::from_int(g);
    let mut active: Vec<usize> = (0..n).collect();
    let mut res = Inertia { plus: 0, minus: 0, zero: 0 };

    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[(i, i)].is_zero()) {
            let i = active.remove(pos);
            let d = a[(i, i)].clone();
            if d.is_positive() {
                res.plus += 1;
            } else {
                res.minus += 1;
            }
            for &j in &active {
                if a[(j, i)].is_zero() {
                    continue;
                }
                let f = &a[(j, i)] / &d;
                for &k in &active {
                    let v = &f * &a[(i, k)];
                    a[(j, k)] -= v;
                }
            }
            continue;
        }
        // zero diagonal: look for a hyperbolic 2×2 pivot [[0, b], [b, 0]]
        let pair = active.iter().enumerate().find_map(|(p, &i)| {
            active[p + 1..]
                .iter()
                .find(|&&j| !a[(i, j)].is_zero())
                .map(|&j| (i, j))
        });
        let Some((i, j)) = pair else {
            res.zero += active.len();
            break;
        };
        res.plus += 1;
        res.minus += 1;
        let b = a[(i, j)].clone();
        active.retain(|&k| k != i && k != j);
        // Schur complement: a_kl -= (a_ki a_jl + a_kj a_il) / b
        let snapshot: Vec<(usize, BigRational, BigRational)> = active
            .iter()
            .map(|&k| (k, a[(k, i)].clone(), a[(k, j)].clone()))
            .collect();
        for (k, aki, akj) in &snapshot {
            for (l, ali, alj) in &snapshot {
                let v = (aki * alj + akj * ali) / &b;
                a[(*k, *l)] -= v;
            }
        }
    }
    Ok(res)
}

/// Basis of the primitive closure `span_Q(B) ∩ Zⁿ` of the row lattice of `B`,
/// returned in Hermite normal form.
pub fn saturate(b: &IntMatrix) -> Result<IntMatrix, LinalgError> {
    let r = b.rows();
    if b.rank() < r {
        return Err(LinalgError::DependentRows);
    }
    if r == 0 {
        return Ok(IntMatrix::zeros(0, b.cols()));
    }
    let snf = smith_normal_form(b);
    let vinv = unimodular_inverse(&snf.v);
    let rows: Vec<usize> = (0..r).collect();
    Ok(row_lattice_basis(&vinv.select_rows(&rows)))
}

/// Index of the row lattice of `B` inside its saturation (product of SNF invariants).
pub fn saturation_index(b: &IntMatrix) -> Result<BigInt, LinalgError> {
    if b.rank() < b.rows() {
        return Err(LinalgError::DependentRows);
    }
    Ok(smith_normal_form(b).diagonal().iter().product())
}

pub fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    QMatrix::from_int(m)
        .inverse()
        .and_then(|q| q.to_integer())
        .expect("matrix is not unimodular")
}

/// Some exact solution of `A·x = b`, free variables set to zero; `None` if inconsistent.
pub fn rational_solve(a: &IntMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let (m, n) = (a.rows(), a.cols());
    let mut aug = QMatrix::zeros(m, n + 1);
    for i in 0..m {
        for j in 0..n {
            aug[(i, j)] = BigRational::from_integer(a[(i, j)].clone());
        }
        aug[(i, n)] = b[i].clone();
    }
    let pivots = aug.rref_in_place();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = alloc::vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[(r, n)].clone();
    }
    Some(x)
}

/// Rows form a basis of `{x ∈ Zⁿ : A·x = 0}` (saturated, Hermite normal form).
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let cols: Vec<usize> = (rank..n).collect();
    let k = snf.v.select_cols(&cols).transpose();
    row_lattice_basis(&k)
}

/// Some integer solution of `A·x = b`, or `None` when none exists.
pub fn integer_solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let diag = snf.diagonal();
    let mut y = alloc::vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else {
            let (q, r) = c.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// `[Z^k : L]` for the lattice `L` spanned by the columns of `A`
/// (`None` when the columns do not span a full-rank lattice).
pub fn column_lattice_index(a: &IntMatrix) -> Option<BigInt> {
    let snf = smith_normal_form(a);
    if snf.rank() < a.rows() {
        return None;
    }
    Some(snf.diagonal().iter().product())
}
