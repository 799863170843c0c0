//! Dense matrices over GF(2^M): row echelon form, rank and linear solves.

use crate::field::{Elem, FieldCtx};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Outcome of solving `x * A = b` for a row vector `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Elem>),
    /// The system is consistent but `A` has a nontrivial left kernel.
    Underdetermined,
    Inconsistent,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Elem>) -> Matrix {
        assert_eq!(rows * cols, data.len());
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[dst] += c * row[src]`, starting from column `from`.
    fn axpy_row(&mut self, ctx: FieldCtx, dst: usize, src: usize, c: Elem, from: usize) {
        let cols = self.cols;
        for j in from..cols {
            let s = self.data[src * cols + j];
            if !s.is_zero() {
                self.data[dst * cols + j] += ctx.mul(c, s);
            }
        }
    }

    /// Reduces to row echelon form in place, scanning columns left to right.
    ///
    /// The pivot for each column is the first remaining row with a nonzero
    /// entry there; it is moved up, scaled to a leading one, and cleared from
    /// the rows below it. Returns the pivot columns; the first `len()` rows of
    /// the result are the pivot rows.
    pub fn echelon(&mut self, ctx: FieldCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..self.cols {
            if top == self.rows {
                break;
            }
            let Some(p) = (top..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                continue;
            };
            self.swap_rows(top, p);
            let inv = ctx.inv(self.get(top, col)).expect("pivot is nonzero");
            for j in col..self.cols {
                let v = self.get(top, j);
                self.set(top, j, ctx.mul(v, inv));
            }
            for i in top + 1..self.rows {
                let c = self.get(i, col);
                if !c.is_zero() {
                    self.axpy_row(ctx, i, top, c, col);
                }
            }
            pivots.push(col);
            top += 1;
        }
        pivots
    }

    pub fn rank(&self, ctx: FieldCtx) -> usize {
        self.clone().echelon(ctx).len()
    }

    /// Solves `x * self = b` for a row vector `x` of length `rows()`.
    pub fn solve_left(&self, ctx: FieldCtx, b: &[Elem]) -> Solution {
        assert_eq!(b.len(), self.cols);
        // Work on the transposed, augmented system: A^T x^T = b^T.
        let (n_eq, n_var) = (self.cols, self.rows);
        let mut aug = Matrix::zeros(n_eq, n_var + 1);
        for e in 0..n_eq {
            for v in 0..n_var {
                aug.set(e, v, self.get(v, e));
            }
            aug.set(e, n_var, b[e]);
        }
        let pivots = aug.echelon(ctx);
        if pivots.last() == Some(&n_var) {
            return Solution::Inconsistent;
        }
        if pivots.len() < n_var {
            return Solution::Underdetermined;
        }
        // Back substitution; pivot columns are 0..n_var in order.
        let mut x = vec![Elem::ZERO; n_var];
        for i in (0..n_var).rev() {
            let mut acc = aug.get(i, n_var);
            for j in i + 1..n_var {
                acc += ctx.mul(aug.get(i, j), x[j]);
            }
            x[i] = acc;
        }
        Solution::Unique(x)
    }

    /// `v * self` for a row vector `v`.
    pub fn left_mul(&self, ctx: FieldCtx, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Elem::ZERO; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += ctx.mul(c, a);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rank_of_identity_and_duplicates() {
        let ctx = FieldCtx::new(4, None).unwrap();
        let e = |v: u32| Elem(v);
        let m =
            Matrix::from_rows(vec![vec![e(1), e(0), e(0)], vec![e(0), e(1), e(0)], vec![e(2), e(3), e(0)]]);
        assert_eq!(m.rank(ctx), 2);
        let id = Matrix::from_rows(vec![vec![e(1), e(0)], vec![e(0), e(1)]]);
        assert_eq!(id.rank(ctx), 2);
        assert_eq!(Matrix::zeros(3, 3).rank(ctx), 0);
    }

    #[test]
    fn echelon_has_leading_ones_and_zeros_below() {
        let ctx = FieldCtx::new(8, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<Vec<Elem>> = (0..6).map(|_| (0..9).map(|_| ctx.random(&mut rng)).collect()).collect();
        let mut m = Matrix::from_rows(rows);
        let piv = m.echelon(ctx);
        for (i, &c) in piv.iter().enumerate() {
            assert_eq!(m.get(i, c), Elem::ONE);
            for below in i + 1..m.rows() {
                assert!(m.get(below, c).is_zero());
            }
        }
    }

    #[test]
    fn solve_recovers_message() {
        let ctx = FieldCtx::new(6, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = Matrix::from_rows((0..4).map(|_| (0..7).map(|_| ctx.random(&mut rng)).collect()).collect());
        let x: Vec<Elem> = (0..4).map(|_| ctx.random(&mut rng)).collect();
        let b = a.left_mul(ctx, &x);
        assert_eq!(a.solve_left(ctx, &b), Solution::Unique(x));
        let mut bad = b.clone();
        bad[0] += Elem::ONE;
        // Generic 4x7 random matrix: a perturbed right-hand side is inconsistent.
        assert_eq!(a.solve_left(ctx, &bad), Solution::Inconsistent);
        let narrow = a.select_cols(&[0, 1]);
        assert_eq!(narrow.solve_left(ctx, &b[..2]), Solution::Underdetermined);
    }
}
