use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CoverPresentation, HomologyModel, PrymError};
use crate::linalg::{smith_normal_form, unimodular_inverse, IntMatrix};

/// Preimage of the spoke star `u₀ → c_j` in the cover, with the
/// counterclockwise rotation at each vertex. Its complement is a union of
/// discs, one per sheet, so the surface is this graph with faces attached.
///
/// Vertices `0..n` lie over `u₀` (one per sheet); the rest are the cycles of
/// each `σ_j`. Edge `j·n + k` is the lift of spoke `j` on sheet `k`, directed
/// away from `u₀`. Dart `2e` runs along edge `e`, dart `2e + 1` against it.
#[derive(Clone, Debug)]
pub struct RibbonGraph {
    sheets: usize,
    heads: Vec<usize>,
    vertices: usize,
    /// Darts leaving each vertex in counterclockwise order.
    rotation: Vec<Vec<usize>>,
    /// Position of each dart in the rotation at its tail.
    slot: Vec<usize>,
}

impl RibbonGraph {
    pub fn lift(p: &CoverPresentation) -> Self {
        let n = p.sheets();
        let m = p.perms.len();
        let mut heads = vec![0; n * m];
        let mut rotation: Vec<Vec<usize>> = (0..n).map(|k| (0..m).map(|j| 2 * (j * n + k)).collect()).collect();
        for (j, s) in p.perms.iter().enumerate() {
            for cycle in s.cycles() {
                let v = rotation.len();
                for &k in &cycle {
                    heads[j * n + k] = v;
                }
                rotation.push(cycle.iter().map(|&k| 2 * (j * n + k) + 1).collect());
            }
        }
        let mut slot = vec![0; 2 * n * m];
        for darts in &rotation {
            for (i, &d) in darts.iter().enumerate() {
                slot[d] = i;
            }
        }
        RibbonGraph { sheets: n, vertices: rotation.len(), heads, rotation, slot }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.heads.len()
    }

    fn tail(&self, d: usize) -> usize {
        let e = d / 2;
        if d.is_multiple_of(2) { e % self.sheets } else { self.heads[e] }
    }

    fn head(&self, d: usize) -> usize {
        self.tail(d ^ 1)
    }

    fn sign(d: usize) -> i64 {
        if d.is_multiple_of(2) { 1 } else { -1 }
    }

    fn next_ccw(&self, d: usize) -> usize {
        let r = &self.rotation[self.tail(d)];
        r[(self.slot[d] + 1) % r.len()]
    }

    /// Boundary walks of the faces.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; 2 * self.edge_count()];
        let mut out = Vec::new();
        for start in 0..seen.len() {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                walk.push(d);
                d = self.next_ccw(d ^ 1);
            }
            out.push(walk);
        }
        out
    }

    fn chain(&self, walk: &[usize]) -> Vec<i64> {
        let mut c = vec![0; self.edge_count()];
        for &d in walk {
            c[d / 2] += Self::sign(d);
        }
        c
    }

    /// Signed crossings of the left push-off of a closed walk with each edge:
    /// `a · b = Σ a_e · L_b[e]` for any cycle `a`.
    fn left_crossings(&self, walk: &[usize]) -> Vec<i64> {
        let mut l = vec![0; self.edge_count()];
        for (i, &d) in walk.iter().enumerate() {
            let o = walk[(i + 1) % walk.len()];
            let r = d ^ 1;
            let mut x = self.next_ccw(o);
            while x != r {
                l[x / 2] -= Self::sign(x);
                x = self.next_ccw(x);
            }
        }
        l
    }

    /// BFS tree from vertex 0: the dart reaching each vertex, and the tree edges.
    fn spanning_tree(&self) -> (Vec<Option<usize>>, Vec<bool>) {
        let mut parent = vec![None; self.vertices];
        let mut reached = vec![false; self.vertices];
        let mut in_tree = vec![false; self.edge_count()];
        reached[0] = true;
        let mut queue = alloc::collections::VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &d in &self.rotation[v] {
                let w = self.head(d);
                if !reached[w] {
                    reached[w] = true;
                    parent[w] = Some(d);
                    in_tree[d / 2] = true;
                    queue.push_back(w);
                }
            }
        }
        (parent, in_tree)
    }

    fn path_from_root(&self, parent: &[Option<usize>], mut v: usize) -> Vec<usize> {
        let mut p = Vec::new();
        while let Some(d) = parent[v] {
            p.push(d);
            v = self.tail(d);
        }
        p.reverse();
        p
    }

    /// Integral `H₁` with intersection form and deck action `k ↦ τ(k)`.
    pub fn homology(&self, tau: &crate::perm::Perm) -> Result<HomologyModel, PrymError> {
        let (parent, in_tree) = self.spanning_tree();
        let cotree: Vec<usize> = (0..self.edge_count()).filter(|&e| !in_tree[e]).collect();
        let g = cotree.len();

        // fundamental cycle of cotree edge e: root → tail, e, head → root
        let walks: Vec<Vec<usize>> = cotree
            .iter()
            .map(|&e| {
                let mut w = self.path_from_root(&parent, self.tail(2 * e));
                w.push(2 * e);
                let back = self.path_from_root(&parent, self.head(2 * e));
                w.extend(back.iter().rev().map(|d| d ^ 1));
                w
            })
            .collect();
        let chains: Vec<Vec<i64>> = walks.iter().map(|w| self.chain(w)).collect();
        let crossings: Vec<Vec<i64>> = walks.iter().map(|w| self.left_crossings(w)).collect();
        let mut m = IntMatrix::zeros(g, g);
        for i in 0..g {
            for j in 0..g {
                let s: i64 = chains[i].iter().zip(&crossings[j]).map(|(a, b)| a * b).sum();
                m[(i, j)] = BigInt::from(s);
            }
        }
        let cotree_coords = |c: &[i64]| -> Vec<BigInt> { cotree.iter().map(|&e| BigInt::from(c[e])).collect() };

        let faces = self.faces();
        if faces.len() != self.sheets {
            return Err(PrymError::Homology(faces.len()));
        }
        let mut f = IntMatrix::zeros(g, faces.len());
        for (k, face) in faces.iter().enumerate() {
            for (i, v) in cotree_coords(&self.chain(face)).into_iter().enumerate() {
                f[(i, k)] = v;
            }
        }
        let snf = smith_normal_form(&f);
        let r = snf.rank();
        if snf.diagonal().iter().take(r).any(|d| !d.is_one()) {
            return Err(PrymError::Homology(g - r));
        }
        let uinv = unimodular_inverse(&snf.u);
        let keep: Vec<usize> = (r..g).collect();
        let x = uinv.select_cols(&keep);
        let project = |v: &[BigInt]| -> Vec<BigInt> { snf.u.mul_vec(v)[r..].to_vec() };

        let j = &(&x.transpose() * &m) * &x;

        // τ on edges: (j, k) ↦ (j, τ(k)), orientation preserved
        let n = self.sheets;
        let rank = g - r;
        let mut t = IntMatrix::zeros(rank, rank);
        for c in 0..rank {
            let mut edge_chain = vec![0i64; self.edge_count()];
            for (i, ch) in chains.iter().enumerate() {
                let coef = &x[(i, c)];
                if coef.is_zero() {
                    continue;
                }
                let coef = i64::try_from(coef).map_err(|_| PrymError::Homology(rank))?;
                for (e, &v) in ch.iter().enumerate() {
                    edge_chain[e] += coef * v;
                }
            }
            let mut image = vec![0i64; self.edge_count()];
            for (e, &v) in edge_chain.iter().enumerate() {
                image[(e / n) * n + tau.apply(e % n)] += v;
            }
            for (i, v) in project(&cotree_coords(&image)).into_iter().enumerate() {
                t[(i, c)] = v;
            }
        }
        Ok(HomologyModel { j, tau: t })
    }
}
