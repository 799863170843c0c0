//! Attainable degrees in `span{g^i f^j : 0 <= i, j < r}`.
//!
//! [`degree_profile`] gives them in closed form: the union over
//! `0 <= t <= 2(r-1)` of the intervals `I_t = {t n + l : 0 <= l <= r-1-ceil(t/2)}`.
//! [`ref_degree_oracle`] recomputes the same set by expanding every product
//! and row-reducing the coefficient matrix.

use serde::Serialize;

use crate::error::{param, Result};
use crate::field::{Elem, FieldCtx, UniPoly};
use crate::linalg::Matrix;
use crate::linearized::LinearizedPair;

/// Largest `r * n` for which the symbolic row reduction is attempted.
pub const REF_ORACLE_CAP: usize = 1 << 13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Breakpoint {
    pub t: usize,
    /// `k_t = |I_0| + ... + |I_t|`
    pub k: usize,
    /// `max I_t`, the degree bound of `C_{k_t}`.
    pub partial: usize,
}

/// `I_t = {start, ..., start + len - 1}` with `start = t n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub t: usize,
    pub start: usize,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub n_frak: usize,
    pub r: usize,
    /// The degree set, ascending.
    pub degree_set: Vec<usize>,
    /// `partials[k - 1]` is the k-th smallest degree, from the breakpoint rule.
    pub partials: Vec<usize>,
    pub breakpoints: Vec<Breakpoint>,
    pub intervals: Vec<Interval>,
}

/// `k_t = (t+1) r - floor((t+1)/2) * ceil((t+1)/2)`.
pub fn breakpoint_dimension(r: usize, t: usize) -> usize {
    let s = t + 1;
    s * r - (s / 2) * s.div_ceil(2)
}

/// `t n + r - 1 - floor((t+1)/2)`.
pub fn breakpoint_degree(n: usize, r: usize, t: usize) -> usize {
    t * n + r - 1 - (t + 1) / 2
}

pub fn degree_profile(n_frak: usize, r: usize) -> Result<DegreeProfile> {
    if r == 0 || r > n_frak {
        return param(format!("need 1 <= r <= n, got r = {r}, n = {n_frak}"));
    }
    let n = n_frak;
    let t_max = 2 * (r - 1);
    let intervals: Vec<Interval> =
        (0..=t_max).map(|t| Interval { t, start: t * n, len: r - t.div_ceil(2) }).collect();
    let degree_set: Vec<usize> = intervals.iter().flat_map(|iv| iv.start..iv.start + iv.len).collect();

    let breakpoints: Vec<Breakpoint> = (0..=t_max)
        .map(|t| Breakpoint { t, k: breakpoint_dimension(r, t), partial: breakpoint_degree(n, r, t) })
        .collect();
    let mut partials = Vec::with_capacity(r * r);
    let mut prev_k = 0;
    for bp in &breakpoints {
        for k in prev_k + 1..=bp.k {
            partials.push(bp.partial - (bp.k - k));
        }
        prev_k = bp.k;
    }
    Ok(DegreeProfile { n_frak, r, degree_set, partials, breakpoints, intervals })
}

impl DegreeProfile {
    pub fn dimension(&self) -> usize {
        self.r * self.r
    }

    /// `partial_k` for `1 <= k <= r^2`.
    pub fn partial(&self, k: usize) -> usize {
        self.partials[k - 1]
    }

    pub fn max_degree(&self) -> usize {
        *self.partials.last().expect("profile is nonempty")
    }

    /// True when the top degree `2(r-1)n` reaches the code length `n^2`,
    /// i.e. `r >= n/2 + 1`. Reduction modulo the annihilator of the evaluation
    /// set would then change the code; this crate does not do it.
    pub fn reaches_length(&self) -> bool {
        self.max_degree() >= self.n_frak * self.n_frak
    }

    pub fn breakpoint_for(&self, k: usize) -> Option<&Breakpoint> {
        self.breakpoints.iter().find(|b| b.k == k)
    }
}

/// The products `g^i f^j`, ordered by `(i, j)`.
pub fn product_basis(pair: &LinearizedPair, r: usize) -> Vec<UniPoly> {
    let ctx = pair.ctx();
    let powers = |p: &UniPoly| {
        let mut v = Vec::with_capacity(r);
        let mut acc = UniPoly::one();
        for _ in 0..r {
            v.push(acc.clone());
            acc = acc.mul(ctx, p);
        }
        v
    };
    let gp = powers(pair.g_poly());
    let fp = powers(pair.f_poly());
    let mut out = Vec::with_capacity(r * r);
    for gi in &gp {
        for fj in &fp {
            out.push(gi.mul(ctx, fj));
        }
    }
    out
}

/// Row-reduces polynomials (highest degree first, downward elimination,
/// monic pivots) and returns the pivot rows sorted by ascending degree.
pub fn echelon_polys(ctx: FieldCtx, polys: &[UniPoly]) -> Vec<UniPoly> {
    let top = polys.iter().filter_map(UniPoly::degree).max().unwrap_or(0);
    let mut order: Vec<&UniPoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    order.sort_by_key(|p| std::cmp::Reverse(p.degree()));
    let cols = top + 1;
    let mut m = Matrix::zeros(order.len(), cols);
    for (i, p) in order.iter().enumerate() {
        for (d, &c) in p.coeffs().iter().enumerate() {
            m.set(i, top - d, c);
        }
    }
    let pivots = m.echelon(ctx);
    let mut basis: Vec<UniPoly> = (0..pivots.len())
        .map(|i| {
            let coeffs: Vec<Elem> = (0..cols).map(|d| m.get(i, top - d)).collect();
            UniPoly::from_coeffs(coeffs)
        })
        .collect();
    basis.reverse();
    basis
}

/// Degree set of a row echelon basis of `span{g^i f^j}`, ascending.
pub fn ref_degree_oracle(pair: &LinearizedPair, r: usize) -> Result<Vec<usize>> {
    let basis = ref_basis(pair, r)?;
    Ok(basis.iter().map(|p| p.degree().expect("pivot rows are nonzero")).collect())
}

/// Row echelon basis of `span{g^i f^j}`, monic, ascending by degree.
pub fn ref_basis(pair: &LinearizedPair, r: usize) -> Result<Vec<UniPoly>> {
    let n = pair.n_frak();
    if r == 0 || r > n {
        return param(format!("need 1 <= r <= n, got r = {r}, n = {n}"));
    }
    if r * n > REF_ORACLE_CAP {
        return param(format!("r * n = {} exceeds the row-reduction cap {REF_ORACLE_CAP}", r * n));
    }
    Ok(echelon_polys(pair.ctx(), &product_basis(pair, r)))
}

/// Rank of the coefficient matrix of `{g^i f^j}`.
pub fn rank_check_b(pair: &LinearizedPair, r: usize) -> Result<usize> {
    Ok(ref_basis(pair, r)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linearized::instantiate_standard;

    #[test]
    fn profile_examples() {
        let p = degree_profile(4, 2).unwrap();
        assert_eq!(p.degree_set, vec![0, 1, 4, 8]);
        let p = degree_profile(4, 3).unwrap();
        assert_eq!(p.degree_set, vec![0, 1, 2, 4, 5, 8, 9, 12, 16]);
        let ks: Vec<usize> = p.breakpoints.iter().map(|b| b.k).collect();
        let ds: Vec<usize> = p.breakpoints.iter().map(|b| b.partial).collect();
        assert_eq!(ks, vec![3, 5, 7, 8, 9]);
        assert_eq!(ds, vec![2, 5, 9, 12, 16]);
        let sizes: Vec<usize> = p.intervals.iter().map(|i| i.len).collect();
        assert_eq!(sizes, vec![3, 2, 2, 1, 1]);
        assert_eq!(degree_profile(4, 1).unwrap().degree_set, vec![0]);
        assert!(degree_profile(4, 5).is_err());
        assert!(degree_profile(4, 0).is_err());
    }

    #[test]
    fn formula_routes_agree() {
        for n in [2usize, 3, 4, 5, 8, 16, 32, 128] {
            for r in 1..=n.min(40) {
                let p = degree_profile(n, r).unwrap();
                assert_eq!(p.partials, p.degree_set, "n={n} r={r}");
                assert_eq!(p.degree_set.len(), r * r);
                assert!(p.partials.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(p.max_degree(), 2 * (r - 1) * n);
                if r >= 2 {
                    assert_eq!(p.partial(r * r - 1), (2 * r - 3) * n);
                }
                if r >= 3 {
                    assert_eq!(p.partial(r * r - 2), (2 * r - 4) * n + 1);
                }
                assert_eq!(p.breakpoints.last().unwrap().k, r * r);
                assert!(p.breakpoints.windows(2).all(|w| w[0].k < w[1].k));
                // telescoping interval sizes
                let mut acc = 0;
                for (t, iv) in p.intervals.iter().enumerate() {
                    acc += iv.len;
                    assert_eq!(acc, breakpoint_dimension(r, t));
                }
                assert_eq!(p.reaches_length(), 2 * (r - 1) * n >= n * n);
                assert_eq!(p.reaches_length(), 2 * r >= n + 2);
            }
        }
    }

    #[test]
    fn ref_oracle_q4() {
        let pair = instantiate_standard(2).unwrap();
        assert_eq!(ref_degree_oracle(&pair, 2).unwrap(), vec![0, 1, 4, 8]);
        assert_eq!(ref_degree_oracle(&pair, 3).unwrap(), vec![0, 1, 2, 4, 5, 8, 9, 12, 16]);
        assert_eq!(ref_degree_oracle(&pair, 1).unwrap(), vec![0]);
        assert_eq!(rank_check_b(&pair, 2).unwrap(), 4);
        assert_eq!(rank_check_b(&pair, 3).unwrap(), 9);
        assert_eq!(rank_check_b(&pair, 1).unwrap(), 1);
    }

    #[test]
    fn ref_basis_is_monic_with_distinct_degrees() {
        let pair = instantiate_standard(3).unwrap();
        let basis = ref_basis(&pair, 4).unwrap();
        assert!(basis.iter().all(UniPoly::is_monic));
        let degs: Vec<usize> = basis.iter().map(|p| p.degree().unwrap()).collect();
        assert!(degs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(degs, degree_profile(8, 4).unwrap().degree_set);
    }
}
