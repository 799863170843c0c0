//! The codes `C_k`: evaluations on `Z_f + Z_g` of the polynomials in
//! `span{g^i f^j}` of degree at most `partial_k`.

use serde::Serialize;

use crate::degrees::{degree_profile, ref_basis, DegreeProfile};
use crate::error::{param, Error, Result};
use crate::field::{Elem, FieldCtx, UniPoly};
use crate::linalg::Matrix;
use crate::linearized::LinearizedPair;
use crate::par::Exec;

/// A concrete `C_k` with its generator matrix.
///
/// Row `i` of the generator is `basis_polys[i]` evaluated on the pair's
/// evaluation points, so a message `m` encodes to the evaluations of
/// `sum_i m[i] * basis_polys[i]`.
#[derive(Clone, Debug)]
pub struct CodeInstance {
    pair: LinearizedPair,
    r: usize,
    k: usize,
    profile: DegreeProfile,
    basis_polys: Vec<UniPoly>,
    generator: Matrix,
}

/// A word laid out on the `n x n` grid: cell `(i, j)` is the coordinate
/// `zf[i] + zg[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridWord {
    n: usize,
    entries: Vec<Elem>,
}

impl GridWord {
    pub fn zeros(n: usize) -> GridWord {
        GridWord { n, entries: vec![Elem::ZERO; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.row(i).iter().all(|e| e.is_zero())).collect()
    }

    pub fn zero_cols(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| (0..self.n).all(|i| self.get(i, j).is_zero())).collect()
    }

    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|e| !e.is_zero()).count()
    }
}

pub fn relabel(pair: &LinearizedPair, word: &[Elem]) -> Result<GridWord> {
    let n = pair.n_frak();
    if word.len() != n * n {
        return Err(Error::LengthMismatch { expected: n * n, got: word.len() });
    }
    Ok(GridWord { n, entries: word.to_vec() })
}

pub fn unrelabel(pair: &LinearizedPair, gw: &GridWord) -> Result<Vec<Elem>> {
    if gw.n != pair.n_frak() {
        return Err(Error::LengthMismatch { expected: pair.n_frak(), got: gw.n });
    }
    Ok(gw.entries.clone())
}

/// Lagrange interpolation on a fixed point set with precomputed barycentric
/// weights `w_j = 1 / prod_{m != j} (x_j - x_m)`.
#[derive(Clone, Debug)]
pub struct Interpolator {
    ctx: FieldCtx,
    points: Vec<Elem>,
    weights: Vec<Elem>,
    // prod_j (x - x_j) / (x - x_i), one per point
    cofactors: Vec<UniPoly>,
}

impl Interpolator {
    pub fn new(ctx: FieldCtx, points: &[Elem]) -> Interpolator {
        let annihilator = points.iter().fold(UniPoly::one(), |acc, &p| acc.mul(ctx, &UniPoly::linear(p)));
        let cofactors: Vec<UniPoly> = points.iter().map(|&p| annihilator.div_linear(ctx, p).0).collect();
        let weights = points
            .iter()
            .zip(&cofactors)
            .map(|(&p, c)| ctx.inv(c.eval(ctx, p)).expect("points are distinct"))
            .collect();
        Interpolator { ctx, points: points.to_vec(), weights, cofactors }
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    /// The unique polynomial of degree `< len` through `(points[j], values[j])`.
    pub fn interpolate(&self, values: &[Elem]) -> UniPoly {
        let mut acc = UniPoly::zero();
        for ((&y, &w), cof) in values.iter().zip(&self.weights).zip(&self.cofactors) {
            acc.add_scaled(self.ctx, self.ctx.mul(y, w), cof);
        }
        acc
    }

    pub fn fits_degree_below(&self, values: &[Elem], r: usize) -> bool {
        self.interpolate(values).degree().is_none_or(|d| d < r)
    }
}

/// Interpolation through an arbitrary subset of points.
pub fn lagrange(ctx: FieldCtx, xs: &[Elem], ys: &[Elem]) -> UniPoly {
    Interpolator::new(ctx, xs).interpolate(ys)
}

/// True iff every grid row is the evaluation on `Z_g` of a polynomial of
/// degree `< r`, and every grid column likewise on `Z_f`.
pub fn local_membership(pair: &LinearizedPair, r: usize, gw: &GridWord) -> bool {
    let ctx = pair.ctx();
    let rows = Interpolator::new(ctx, pair.zg());
    let cols = Interpolator::new(ctx, pair.zf());
    let n = gw.n;
    (0..n).all(|i| rows.fits_degree_below(gw.row(i), r))
        && (0..n).all(|j| cols.fits_degree_below(&gw.col(j), r))
}

pub fn build_code(pair: &LinearizedPair, r: usize, k: usize) -> Result<CodeInstance> {
    build_code_with(pair, r, k, Exec::default())
}

pub fn build_code_with(pair: &LinearizedPair, r: usize, k: usize, exec: Exec) -> Result<CodeInstance> {
    let n = pair.n_frak();
    if r == 0 || r > n {
        return param(format!("need 1 <= r <= n, got r = {r}, n = {n}"));
    }
    if k == 0 || k > r * r {
        return param(format!("need 1 <= k <= r^2 = {}, got k = {k}", r * r));
    }
    let profile = degree_profile(n, r)?;
    let mut basis = ref_basis(pair, r)?;
    basis.truncate(k);
    let ctx = pair.ctx();
    let points = pair.eval_points();
    let cols: Vec<Vec<Elem>> =
        exec.map(points.len(), |j| basis.iter().map(|p| p.eval(ctx, points[j])).collect());
    let mut generator = Matrix::zeros(k, points.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            generator.set(i, j, v);
        }
    }
    Ok(CodeInstance { pair: pair.clone(), r, k, profile, basis_polys: basis, generator })
}

impl CodeInstance {
    pub fn pair(&self) -> &LinearizedPair {
        &self.pair
    }

    pub fn ctx(&self) -> FieldCtx {
        self.pair.ctx()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_frak(&self) -> usize {
        self.pair.n_frak()
    }

    pub fn length(&self) -> usize {
        self.pair.length()
    }

    /// Number of heavy parities `r^2 - k`.
    pub fn heavy_parities(&self) -> usize {
        self.r * self.r - self.k
    }

    /// Local distance `n - r + 1`.
    pub fn local_distance(&self) -> usize {
        self.n_frak() - self.r + 1
    }

    pub fn profile(&self) -> &DegreeProfile {
        &self.profile
    }

    pub fn basis_polys(&self) -> &[UniPoly] {
        &self.basis_polys
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn encode(&self, msg: &[Elem]) -> Result<Vec<Elem>> {
        if msg.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: msg.len() });
        }
        for &m in msg {
            self.ctx().check(m)?;
        }
        Ok(self.generator.left_mul(self.ctx(), msg))
    }

    /// `sum_i msg[i] * basis_polys[i]`.
    pub fn message_poly(&self, msg: &[Elem]) -> Result<UniPoly> {
        if msg.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: msg.len() });
        }
        let mut h = UniPoly::zero();
        for (&c, p) in msg.iter().zip(&self.basis_polys) {
            h.add_scaled(self.ctx(), c, p);
        }
        Ok(h)
    }

    /// Inverse of [`message_poly`](Self::message_poly): the message whose
    /// polynomial is `h`, or `None` when `h` is not in the code's span.
    pub fn message_for(&self, h: &UniPoly) -> Option<Vec<Elem>> {
        let ctx = self.ctx();
        let mut rest = h.clone();
        let mut msg = vec![Elem::ZERO; self.k];
        for i in (0..self.k).rev() {
            let p = &self.basis_polys[i];
            if rest.degree() == p.degree() {
                let c = rest.leading();
                msg[i] = c;
                rest.add_scaled(ctx, c, p);
            }
            if rest.is_zero() {
                return Some(msg);
            }
            if rest.degree() > p.degree() {
                return None;
            }
        }
        rest.is_zero().then_some(msg)
    }

    pub fn export_header(&self) -> GeneratorHeader {
        let ctx = self.ctx();
        GeneratorHeader {
            q: self.pair.q(),
            m: ctx.extension_degree(),
            reduction_poly_hex: ctx.spec().reduction_poly_hex,
            r: self.r,
            k: self.k,
            coordinate_order: "Zf-major".into(),
        }
    }
}

/// JSON header line of the generator-matrix export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct GeneratorHeader {
    pub q: u64,
    #[serde(rename = "M")]
    pub m: u32,
    pub reduction_poly_hex: String,
    pub r: usize,
    pub k: usize,
    pub coordinate_order: String,
}
