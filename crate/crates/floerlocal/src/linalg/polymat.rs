//! Matrices over F2[x] and their Smith normal form.
//!
//! The normal form here is "diagonal with invertible transforms on both
//! sides"; the divisibility chain d1 | d2 | ... is not enforced because
//! nothing downstream needs it — ranks, kernels, cokernel classes and
//! solving all work from any diagonalization.

use super::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<Poly>, // row-major
}

impl PolyMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        PolyMatrix { nrows, ncols, entries: vec![Poly::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = PolyMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Poly::one();
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut m = PolyMatrix::zero(nrows, ncols);
        for r in 0..nrows {
            for c in 0..ncols {
                *m.at_mut(r, c) = f(r, c);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn at(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.ncols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Poly {
        &mut self.entries[r * self.ncols + c]
    }

    pub fn column(&self, c: usize) -> Vec<Poly> {
        (0..self.nrows).map(|r| self.at(r, c).clone()).collect()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.ncols);
        (0..self.nrows)
            .map(|r| {
                let mut acc = Poly::zero();
                for c in 0..self.ncols {
                    let e = self.at(r, c);
                    if !e.is_zero() && !v[c].is_zero() {
                        acc = acc.add(&e.mul(&v[c]));
                    }
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.ncols {
            self.entries.swap(i * self.ncols + c, j * self.ncols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.nrows {
            self.entries.swap(r * self.ncols + i, r * self.ncols + j);
        }
    }

    /// row_i += q * row_k
    fn row_op(&mut self, i: usize, k: usize, q: &Poly) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.ncols {
            let add = self.at(k, c).mul(q);
            let cur = self.at(i, c).add(&add);
            *self.at_mut(i, c) = cur;
        }
    }

    /// col_j += q * col_k
    fn col_op(&mut self, j: usize, k: usize, q: &Poly) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.nrows {
            let add = self.at(r, k).mul(q);
            let cur = self.at(r, j).add(&add);
            *self.at_mut(r, j) = cur;
        }
    }

    /// Smith-style diagonalization `S * A * T = diag(d)`.
    pub fn snf(&self) -> Snf {
        let mut a = self.clone();
        let r = self.nrows;
        let c = self.ncols;
        let mut s = PolyMatrix::identity(r);
        let mut sinv = PolyMatrix::identity(r);
        let mut t = PolyMatrix::identity(c);
        let mut k = 0;
        while k < r.min(c) {
            // Pull the lowest-degree nonzero entry of the trailing block to (k, k).
            let mut best: Option<(usize, usize, usize)> = None;
            for i in k..r {
                for j in k..c {
                    if let Some(d) = a.at(i, j).degree() {
                        if best.map(|(bd, _, _)| d < bd).unwrap_or(true) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break };
            a.swap_rows(k, pi);
            s.swap_rows(k, pi);
            sinv.swap_cols(k, pi);
            a.swap_cols(k, pj);
            t.swap_cols(k, pj);
            // Alternate clearing the pivot column and row; every time a
            // division leaves a remainder the pivot degree drops, so this
            // terminates.
            loop {
                let mut dirty = false;
                for i in (k + 1)..r {
                    if a.at(i, k).is_zero() {
                        continue;
                    }
                    let (q, rem) = a.at(i, k).divrem(a.at(k, k));
                    a.row_op(i, k, &q);
                    s.row_op(i, k, &q);
                    sinv.col_op(k, i, &q);
                    if !rem.is_zero() {
                        a.swap_rows(k, i);
                        s.swap_rows(k, i);
                        sinv.swap_cols(k, i);
                        dirty = true;
                    }
                }
                for j in (k + 1)..c {
                    if a.at(k, j).is_zero() {
                        continue;
                    }
                    let (q, rem) = a.at(k, j).divrem(a.at(k, k));
                    a.col_op(j, k, &q);
                    t.col_op(j, k, &q);
                    if !rem.is_zero() {
                        a.swap_cols(k, j);
                        t.swap_cols(k, j);
                        dirty = true;
                    }
                }
                let col_clear = ((k + 1)..r).all(|i| a.at(i, k).is_zero());
                let row_clear = ((k + 1)..c).all(|j| a.at(k, j).is_zero());
                if !dirty && col_clear && row_clear {
                    break;
                }
            }
            k += 1;
        }
        let d: Vec<Poly> = (0..r.min(c)).map(|i| a.at(i, i).clone()).collect();
        Snf { d, s, sinv, t }
    }
}

/// Result of [`PolyMatrix::snf`]: `s * a * t` is diagonal with entries `d`,
/// and `sinv` is the inverse of `s`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: Vec<Poly>,
    pub s: PolyMatrix,
    pub sinv: PolyMatrix,
    pub t: PolyMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|p| !p.is_zero()).count()
    }

    /// Indices `j` (into the column space) whose diagonal entry is zero;
    /// columns `t[:, j]` for these form a kernel basis.
    pub fn kernel_indices(&self, ncols: usize) -> Vec<usize> {
        (0..ncols).filter(|&j| j >= self.d.len() || self.d[j].is_zero()).collect()
    }

    pub fn kernel_basis(&self, ncols: usize) -> Vec<Vec<Poly>> {
        self.kernel_indices(ncols).into_iter().map(|j| self.t.column(j)).collect()
    }

    /// Solve `a x = b` (where `self = a.snf()`), returning one solution.
    pub fn solve(&self, b: &[Poly]) -> Option<Vec<Poly>> {
        let u = self.s.apply(b);
        let ncols = self.t.nrows();
        let mut y = vec![Poly::zero(); ncols];
        for (i, ui) in u.iter().enumerate() {
            if i < self.d.len() && !self.d[i].is_zero() {
                let (q, rem) = ui.divrem(&self.d[i]);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !ui.is_zero() {
                return None;
            }
        }
        Some(self.t.apply(&y))
    }
}
