//! Dense matrices over F2 with rows packed into `u64` words.

/// A dense F2 matrix. Rows are bit vectors; addition is XOR.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    nrows: usize,
    ncols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        let words = ncols.div_ceil(64).max(1);
        BitMatrix { nrows, ncols, words, rows: vec![vec![0u64; words]; nrows] }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r][c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let mask = 1u64 << (c % 64);
        if v {
            self.rows[r][c / 64] |= mask;
        } else {
            self.rows[r][c / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.rows[r][c / 64] ^= 1u64 << (c % 64);
    }

    /// `rows[to] += rows[from]` (XOR).
    pub fn add_row(&mut self, to: usize, from: usize) {
        debug_assert_ne!(to, from);
        let (a, b) = if to < from {
            let (lo, hi) = self.rows.split_at_mut(from);
            (&mut lo[to], &hi[0])
        } else {
            let (lo, hi) = self.rows.split_at_mut(to);
            (&mut hi[0], &lo[from])
        };
        for (x, y) in a.iter_mut().zip(b.iter()) {
            *x ^= *y;
        }
    }

    pub fn push_row(&mut self, bits: &[usize]) {
        let mut row = vec![0u64; self.words];
        for &c in bits {
            debug_assert!(c < self.ncols);
            row[c / 64] |= 1u64 << (c % 64);
        }
        self.rows.push(row);
        self.nrows += 1;
    }

    fn row_is_zero(&self, r: usize) -> bool {
        self.rows[r].iter().all(|&w| w == 0)
    }

    /// Reduce to row echelon form in place; returns the pivot column of each
    /// pivot row, in order.
    pub fn echelonize(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.ncols {
            if row == self.nrows {
                break;
            }
            let Some(p) = (row..self.nrows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.rows.swap(row, p);
            for r in 0..self.nrows {
                if r != row && self.get(r, col) {
                    self.add_row(r, row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.echelonize().len()
    }

    /// Basis of the right kernel `{x : M x = 0}`, one vector per row of the
    /// returned matrix.
    pub fn kernel_basis(&self) -> BitMatrix {
        let mut m = self.clone();
        let pivots = m.echelonize();
        let mut is_pivot = vec![false; self.ncols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.ncols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = BitMatrix::zero(0, self.ncols);
        for &f in &free {
            let mut bits = vec![f];
            for (r, &pc) in pivots.iter().enumerate() {
                if m.get(r, f) {
                    bits.push(pc);
                }
            }
            basis.push_row(&bits);
        }
        basis
    }

    /// Solve `M x = b` for one particular solution; `None` if inconsistent.
    pub fn solve(&self, b: &[bool]) -> Option<Vec<bool>> {
        assert_eq!(b.len(), self.nrows);
        // Augment with b as an extra column and echelonize.
        let mut aug = BitMatrix::zero(self.nrows, self.ncols + 1);
        for r in 0..self.nrows {
            aug.rows[r][..self.words].copy_from_slice(&self.rows[r]);
            aug.set(r, self.ncols, b[r]);
        }
        let pivots = aug.echelonize();
        // Inconsistent iff a pivot sits in the augmented column.
        if pivots.contains(&self.ncols) {
            return None;
        }
        let mut x = vec![false; self.ncols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.ncols);
        }
        // Free variables stay zero; verify in debug builds.
        debug_assert!({
            let mut ok = true;
            for r in 0..self.nrows {
                let mut acc = false;
                for c in 0..self.ncols {
                    if self.get(r, c) && x[c] {
                        acc = !acc;
                    }
                }
                ok &= acc == b[r];
            }
            ok
        });
        Some(x)
    }

    /// Dimension of the span of the rows.
    pub fn row_space_dim(&self) -> usize {
        self.rank()
    }

    /// Dimension of `rowspace(self) ∩ rowspace(other)`.
    pub fn row_space_intersection_dim(&self, other: &BitMatrix) -> usize {
        assert_eq!(self.ncols, other.ncols);
        let mut stacked = BitMatrix::zero(0, self.ncols);
        for r in 0..self.nrows {
            if !self.row_is_zero(r) {
                stacked.rows.push(self.rows[r].clone());
                stacked.nrows += 1;
            }
        }
        for r in 0..other.nrows {
            if !other.row_is_zero(r) {
                stacked.rows.push(other.rows[r].clone());
                stacked.nrows += 1;
            }
        }
        self.rank() + other.rank() - stacked.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        // [1 1 0; 0 1 1] has rank 2, kernel spanned by (1,1,1).
        let mut m = BitMatrix::zero(2, 3);
        m.set(0, 0, true);
        m.set(0, 1, true);
        m.set(1, 1, true);
        m.set(1, 2, true);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.nrows(), 1);
        assert!(k.get(0, 0) && k.get(0, 1) && k.get(0, 2));
    }

    #[test]
    fn solve_consistent_and_not() {
        let mut m = BitMatrix::zero(2, 2);
        m.set(0, 0, true);
        m.set(1, 0, true);
        m.set(1, 1, true);
        let x = m.solve(&[true, false]).unwrap();
        assert_eq!(x, vec![true, true]);
        // [1 0; 1 0] x = (1, 0) is inconsistent.
        let mut s = BitMatrix::zero(2, 2);
        s.set(0, 0, true);
        s.set(1, 0, true);
        assert!(s.solve(&[true, false]).is_none());
    }

    #[test]
    fn intersection_dim() {
        // span{(1,0),(0,1)} ∩ span{(1,1)} is 1-dimensional.
        let mut a = BitMatrix::zero(2, 2);
        a.set(0, 0, true);
        a.set(1, 1, true);
        let mut b = BitMatrix::zero(1, 2);
        b.set(0, 0, true);
        b.set(0, 1, true);
        assert_eq!(a.row_space_intersection_dim(&b), 1);
    }

    #[test]
    fn wide_matrix_across_word_boundary() {
        let mut m = BitMatrix::zero(1, 130);
        m.set(0, 0, true);
        m.set(0, 129, true);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.nrows(), 129);
    }
}
