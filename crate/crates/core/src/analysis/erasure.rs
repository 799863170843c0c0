//! Erasure masks, the rank recoverability oracle and the peeling decoder.

use serde::{Deserialize, Serialize};

use crate::codec::{lagrange, CodeInstance};
use crate::error::{param, Error, Result};
use crate::field::Elem;
use crate::linalg::Solution;

/// Erased cells of the `n x n` grid, row-major, so flat index `i * n + j`
/// is also the code coordinate of `zf[i] + zg[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ErasureMask {
    n: usize,
    erased: Vec<bool>,
}

/// Run-length form: alternating run lengths, starting with a run of kept
/// cells (possibly 0), in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskRle {
    pub n_frak: usize,
    pub rle: String,
}

impl ErasureMask {
    pub fn empty(n: usize) -> ErasureMask {
        ErasureMask { n, erased: vec![false; n * n] }
    }

    pub fn full(n: usize) -> ErasureMask {
        ErasureMask { n, erased: vec![true; n * n] }
    }

    pub fn from_flat(n: usize, erased: Vec<bool>) -> Result<ErasureMask> {
        if erased.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, got: erased.len() });
        }
        Ok(ErasureMask { n, erased })
    }

    pub fn from_cells(n: usize, cells: impl IntoIterator<Item = (usize, usize)>) -> ErasureMask {
        let mut m = ErasureMask::empty(n);
        for (i, j) in cells {
            m.set(i, j, true);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_erased(&self, i: usize, j: usize) -> bool {
        self.erased[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, erased: bool) {
        self.erased[i * self.n + j] = erased;
    }

    pub fn as_flat(&self) -> &[bool] {
        &self.erased
    }

    pub fn count(&self) -> usize {
        self.erased.iter().filter(|&&e| e).count()
    }

    /// Flat indices of the cells that are not erased.
    pub fn survivors(&self) -> Vec<usize> {
        (0..self.erased.len()).filter(|&c| !self.erased[c]).collect()
    }

    pub fn union(&self, other: &ErasureMask) -> ErasureMask {
        assert_eq!(self.n, other.n);
        let erased = self.erased.iter().zip(&other.erased).map(|(&a, &b)| a || b).collect();
        ErasureMask { n: self.n, erased }
    }

    /// Moves cell `(i, j)` to `(rows[i], cols[j])`.
    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> ErasureMask {
        let mut out = ErasureMask::empty(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.is_erased(i, j) {
                    out.set(rows[i], cols[j], true);
                }
            }
        }
        out
    }

    fn rect(&mut self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) {
        for i in rows {
            for j in cols.clone() {
                self.set(i, j, true);
            }
        }
    }

    /// Black part of the grid-bound pattern: columns split `a | r - a | n - r`,
    /// rows split `b | r - b | n - r`; black is the first and last row blocks
    /// crossed with the first and last column blocks, `(a + n - r)(b + n - r)`
    /// cells.
    pub fn grid_pattern_black(n: usize, r: usize, a: usize, b: usize) -> Result<ErasureMask> {
        if r == 0 || r > n || a > r || b > r {
            return param(format!(
                "grid pattern needs a, b <= r <= n, got a = {a}, b = {b}, r = {r}, n = {n}"
            ));
        }
        let mut m = ErasureMask::empty(n);
        for rows in [0..b, r..n] {
            for cols in [0..a, r..n] {
                m.rect(rows.clone(), cols);
            }
        }
        Ok(m)
    }

    /// Gray part of the grid-bound pattern: the last row block crossed with
    /// the middle column block, and the middle row block crossed with the last
    /// column block, `(n - r)(2r - a - b)` cells. Each affected column or row
    /// then has exactly `n - r` erasures.
    pub fn grid_pattern_gray(n: usize, r: usize, a: usize, b: usize) -> Result<ErasureMask> {
        ErasureMask::grid_pattern_black(n, r, a, b)?;
        let mut m = ErasureMask::empty(n);
        m.rect(r..n, a..r);
        m.rect(b..r, r..n);
        Ok(m)
    }

    /// Black and gray parts of the grid-bound pattern together.
    pub fn grid_pattern(n: usize, r: usize, a: usize, b: usize) -> Result<ErasureMask> {
        Ok(ErasureMask::grid_pattern_black(n, r, a, b)?.union(&ErasureMask::grid_pattern_gray(n, r, a, b)?))
    }

    /// Black part of the strip pattern: the first `a` rows minus the last
    /// column, and the first `b` cells of row `a`; `a(n - 1) + b` cells.
    pub fn strip_pattern_black(n: usize, r: usize, a: usize, b: usize) -> Result<ErasureMask> {
        if r < 2 || r + 1 > n || a + 1 > n || b + 1 > n {
            return param(format!(
                "strip pattern needs 2 <= r <= n - 1 and a, b <= n - 1, got a = {a}, b = {b}, r = {r}, n = {n}"
            ));
        }
        let mut m = ErasureMask::empty(n);
        m.rect(0..a, 0..n - 1);
        m.rect(a..a + 1, 0..b);
        Ok(m)
    }

    /// Gray part of the strip pattern: rows below row `a` in the first
    /// `delta - 1` columns, and the bottom `delta - 1` cells of the last column.
    pub fn strip_pattern_gray(n: usize, r: usize, a: usize, b: usize) -> Result<ErasureMask> {
        ErasureMask::strip_pattern_black(n, r, a, b)?;
        let d1 = n - r;
        let mut m = ErasureMask::empty(n);
        m.rect(a + 1..n, 0..d1);
        m.rect(n - d1..n, n - 1..n);
        Ok(m)
    }

    pub fn strip_pattern(n: usize, r: usize, a: usize, b: usize) -> Result<ErasureMask> {
        Ok(ErasureMask::strip_pattern_black(n, r, a, b)?.union(&ErasureMask::strip_pattern_gray(n, r, a, b)?))
    }

    pub fn to_rle(&self) -> MaskRle {
        let mut runs = Vec::new();
        let mut cur = false;
        let mut len = 0usize;
        for &e in &self.erased {
            if e == cur {
                len += 1;
            } else {
                runs.push(len);
                cur = e;
                len = 1;
            }
        }
        runs.push(len);
        let rle = runs.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        MaskRle { n_frak: self.n, rle }
    }

    pub fn from_rle(rle: &MaskRle) -> Result<ErasureMask> {
        let n = rle.n_frak;
        let mut erased = Vec::with_capacity(n * n);
        let mut cur = false;
        for part in rle.rle.split(',').filter(|s| !s.trim().is_empty()) {
            let len: usize =
                part.trim().parse().map_err(|_| Error::Parse(format!("bad run length {part:?}")))?;
            erased.extend(std::iter::repeat_n(cur, len));
            cur = !cur;
        }
        if erased.len() != n * n {
            return Err(Error::Parse(format!("runs cover {} cells, expected {}", erased.len(), n * n)));
        }
        Ok(ErasureMask { n, erased })
    }
}

fn check_dims(code: &CodeInstance, mask: &ErasureMask) -> Result<()> {
    if mask.n != code.n_frak() {
        return Err(Error::LengthMismatch { expected: code.n_frak(), got: mask.n });
    }
    Ok(())
}

/// True iff the generator restricted to the surviving coordinates has rank `k`.
pub fn erasure_recoverable(code: &CodeInstance, mask: &ErasureMask) -> Result<bool> {
    check_dims(code, mask)?;
    let survivors = mask.survivors();
    if survivors.len() < code.k() {
        return Ok(false);
    }
    Ok(code.generator().select_cols(&survivors).rank(code.ctx()) == code.k())
}

/// Cells still erased after repeatedly clearing every row and column that has
/// at least `r` known cells.
pub fn peel_residual(mask: &ErasureMask, r: usize) -> ErasureMask {
    let n = mask.n;
    let mut m = mask.clone();
    loop {
        let mut progress = false;
        for i in 0..n {
            let erased = (0..n).filter(|&j| m.is_erased(i, j)).count();
            if erased > 0 && n - erased >= r {
                (0..n).for_each(|j| m.set(i, j, false));
                progress = true;
            }
        }
        for j in 0..n {
            let erased = (0..n).filter(|&i| m.is_erased(i, j)).count();
            if erased > 0 && n - erased >= r {
                (0..n).for_each(|i| m.set(i, j, false));
                progress = true;
            }
        }
        if !progress {
            return m;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeelOutcome {
    Recovered {
        word: Vec<Elem>,
        /// true when row and column interpolation alone filled every erasure
        peeled_only: bool,
    },
    Failed {
        residual: ErasureMask,
    },
}

impl PeelOutcome {
    pub fn is_recovered(&self) -> bool {
        matches!(self, PeelOutcome::Recovered { .. })
    }
}

/// Fills one line (row or column) from its known cells, or returns `false`
/// when it has fewer than `r` of them.
fn fill_line(
    code: &CodeInstance,
    points: &[Elem],
    cells: &[usize],
    word: &mut [Elem],
    known: &mut [bool],
) -> Result<bool> {
    let r = code.r();
    let known_idx: Vec<usize> = (0..cells.len()).filter(|&t| known[cells[t]]).collect();
    if known_idx.len() == cells.len() || known_idx.len() < r {
        return Ok(false);
    }
    let xs: Vec<Elem> = known_idx[..r].iter().map(|&t| points[t]).collect();
    let ys: Vec<Elem> = known_idx[..r].iter().map(|&t| word[cells[t]]).collect();
    let ctx = code.ctx();
    let p = lagrange(ctx, &xs, &ys);
    for &t in &known_idx[r..] {
        if p.eval(ctx, points[t]) != word[cells[t]] {
            return Err(Error::Inconsistent(format!(
                "known symbol at coordinate {} disagrees with its line interpolation",
                cells[t]
            )));
        }
    }
    for (t, &c) in cells.iter().enumerate() {
        if !known[c] {
            word[c] = p.eval(ctx, points[t]);
            known[c] = true;
        }
    }
    Ok(true)
}

/// Peels rows and columns to a fixpoint, then solves globally against the
/// generator on the known coordinates. Values of `word` at erased positions
/// are ignored.
pub fn peel_decode(code: &CodeInstance, word: &[Elem], mask: &ErasureMask) -> Result<PeelOutcome> {
    check_dims(code, mask)?;
    let n = code.n_frak();
    if word.len() != n * n {
        return Err(Error::LengthMismatch { expected: n * n, got: word.len() });
    }
    let ctx = code.ctx();
    let pair = code.pair();
    let mut w = word.to_vec();
    let mut known: Vec<bool> = mask.as_flat().iter().map(|&e| !e).collect();
    for c in 0..n * n {
        if !known[c] {
            w[c] = Elem::ZERO;
        }
    }
    let row_cells: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| i * n + j).collect()).collect();
    let col_cells: Vec<Vec<usize>> = (0..n).map(|j| (0..n).map(|i| i * n + j).collect()).collect();
    loop {
        let mut progress = false;
        for cells in &row_cells {
            progress |= fill_line(code, pair.zg(), cells, &mut w, &mut known)?;
        }
        for cells in &col_cells {
            progress |= fill_line(code, pair.zf(), cells, &mut w, &mut known)?;
        }
        if !progress {
            break;
        }
    }
    if known.iter().all(|&k| k) {
        return Ok(PeelOutcome::Recovered { word: w, peeled_only: true });
    }
    let known_cols: Vec<usize> = (0..n * n).filter(|&c| known[c]).collect();
    let ys: Vec<Elem> = known_cols.iter().map(|&c| w[c]).collect();
    match code.generator().select_cols(&known_cols).solve_left(ctx, &ys) {
        Solution::Unique(msg) => Ok(PeelOutcome::Recovered { word: code.encode(&msg)?, peeled_only: false }),
        Solution::Underdetermined => {
            let erased = known.iter().map(|&k| !k).collect();
            Ok(PeelOutcome::Failed { residual: ErasureMask { n, erased } })
        }
        Solution::Inconsistent => {
            Err(Error::Inconsistent("known symbols do not extend to a codeword of C_k".into()))
        }
    }
}
