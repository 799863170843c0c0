//! Separable q-linearized polynomials `f`, their complements `g = x - f`, and
//! the evaluation set `Z_f + Z_g` on which the codes live.

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::field::{Elem, FieldCtx, UniPoly};

/// `sum_i a_i x^(q^i)` with `q = 2^q_log`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedPoly {
    ctx: FieldCtx,
    q_log: u32,
    coeffs: Vec<Elem>,
}

impl LinearizedPoly {
    /// Coefficients are on the powers `x^(q^0), x^(q^1), ...`; trailing zeros
    /// are dropped and the remaining list must be nonempty.
    pub fn new(ctx: FieldCtx, q_log: u32, mut coeffs: Vec<Elem>) -> Result<LinearizedPoly> {
        if q_log == 0 {
            return param("q_log must be at least 1");
        }
        for &c in &coeffs {
            ctx.check(c)?;
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return param("linearized polynomial must be nonzero");
        }
        let top = (coeffs.len() - 1) as u32;
        if q_log.checked_mul(top).is_none_or(|b| b > 40) {
            return param("degree q^n is too large");
        }
        Ok(LinearizedPoly { ctx, q_log, coeffs })
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn q_log(&self) -> u32 {
        self.q_log
    }

    pub fn q(&self) -> u64 {
        1 << self.q_log
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// `a_0`, the coefficient of `x`.
    pub fn low(&self) -> Elem {
        self.coeffs[0]
    }

    /// `q^n` where `a_n` is the top coefficient.
    pub fn degree(&self) -> usize {
        1usize << (self.q_log as usize * (self.coeffs.len() - 1))
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut pw = x;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                pw = self.ctx.frobenius(pw, self.q_log);
            }
            acc += self.ctx.mul(a, pw);
        }
        acc
    }

    pub fn to_unipoly(&self) -> UniPoly {
        let mut dense = vec![Elem::ZERO; self.degree() + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            dense[1usize << (self.q_log as usize * i)] = a;
        }
        UniPoly::from_coeffs(dense)
    }

    /// `x - self`.
    pub fn complement(&self) -> LinearizedPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] += Elem::ONE;
        LinearizedPoly { ctx: self.ctx, q_log: self.q_log, coeffs }
    }
}

/// All roots of a separable linearized polynomial in its field, ascending.
///
/// The roots form the kernel of the GF(2)-linear map `a -> p(a)` on the
/// M-bit coordinate space, so they are found by elimination on the images of
/// the basis vectors rather than by scanning the field.
pub fn root_space(p: &LinearizedPoly) -> Result<Vec<Elem>> {
    if p.low().is_zero() {
        return Err(Error::NotSeparable);
    }
    let m = p.ctx.extension_degree();
    // pivots[bit] = (image, combination) with image's top set bit == bit
    let mut pivots: Vec<Option<(u32, u32)>> = vec![None; m as usize];
    let mut kernel: Vec<u32> = Vec::new();
    for j in 0..m {
        let mut img = p.eval(Elem(1 << j)).0;
        let mut combo = 1u32 << j;
        loop {
            if img == 0 {
                kernel.push(combo);
                break;
            }
            let top = 31 - img.leading_zeros();
            match pivots[top as usize] {
                Some((pi, pc)) => {
                    img ^= pi;
                    combo ^= pc;
                }
                None => {
                    pivots[top as usize] = Some((img, combo));
                    break;
                }
            }
        }
    }
    let found = 1usize << kernel.len();
    let expected = p.degree();
    if found < expected {
        return Err(Error::SplittingFieldTooSmall { found, expected });
    }
    let mut roots: Vec<Elem> = (0..found as u32)
        .map(|mask| {
            Elem(
                kernel.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0, |acc, (_, &v)| acc ^ v),
            )
        })
        .collect();
    roots.sort_unstable();
    Ok(roots)
}

/// The pair `(f, g = x - f)` with root spaces and the ordered evaluation set.
///
/// Coordinates are Zf-major: `eval_points[i * n + j] = zf[i] + zg[j]`, with
/// `zf`, `zg` ascending by bit value. Cell `(i, j)` of a grid word is therefore
/// the coordinate with `g(alpha) = zf[i]` and `f(alpha) = zg[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedPair {
    f: LinearizedPoly,
    g: LinearizedPoly,
    f_dense: UniPoly,
    g_dense: UniPoly,
    zf: Vec<Elem>,
    zg: Vec<Elem>,
    eval_points: Vec<Elem>,
}

impl LinearizedPair {
    pub fn ctx(&self) -> FieldCtx {
        self.f.ctx
    }

    pub fn f(&self) -> &LinearizedPoly {
        &self.f
    }

    pub fn g(&self) -> &LinearizedPoly {
        &self.g
    }

    pub fn f_poly(&self) -> &UniPoly {
        &self.f_dense
    }

    pub fn g_poly(&self) -> &UniPoly {
        &self.g_dense
    }

    pub fn zf(&self) -> &[Elem] {
        &self.zf
    }

    pub fn zg(&self) -> &[Elem] {
        &self.zg
    }

    pub fn eval_points(&self) -> &[Elem] {
        &self.eval_points
    }

    /// Local length `deg f = deg g`.
    pub fn n_frak(&self) -> usize {
        self.zf.len()
    }

    pub fn length(&self) -> usize {
        self.eval_points.len()
    }

    pub fn q(&self) -> u64 {
        self.f.q()
    }

    pub fn to_json(&self) -> PairJson {
        let ctx = self.ctx();
        PairJson {
            q: self.q(),
            m: ctx.extension_degree(),
            reduction_poly_hex: ctx.spec().reduction_poly_hex,
            f_coeffs_hex: self.f.coeffs.iter().map(|c| c.to_hex()).collect(),
            zf_hex: self.zf.iter().map(|c| c.to_hex()).collect(),
            zg_hex: self.zg.iter().map(|c| c.to_hex()).collect(),
        }
    }
}

/// Serialized pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub q: u64,
    #[serde(rename = "M")]
    pub m: u32,
    pub reduction_poly_hex: String,
    pub f_coeffs_hex: Vec<String>,
    #[serde(rename = "Zf_hex")]
    pub zf_hex: Vec<String>,
    #[serde(rename = "Zg_hex")]
    pub zg_hex: Vec<String>,
}

impl PairJson {
    /// Rebuilds the pair from `f`; the stored root lists are checked against
    /// the recomputed ones.
    pub fn to_pair(&self) -> Result<LinearizedPair> {
        let ctx = FieldCtx::from_spec(&crate::field::FieldSpec {
            m: self.m,
            reduction_poly_hex: self.reduction_poly_hex.clone(),
        })?;
        if !self.q.is_power_of_two() || self.q < 2 {
            return param(format!("q = {} is not a power of two", self.q));
        }
        let coeffs = self.f_coeffs_hex.iter().map(|s| Elem::from_hex(s)).collect::<Result<_>>()?;
        let f = LinearizedPoly::new(ctx, self.q.trailing_zeros(), coeffs)?;
        let pair = build_pair(f)?;
        let zf = self.zf_hex.iter().map(|s| Elem::from_hex(s)).collect::<Result<Vec<_>>>()?;
        let zg = self.zg_hex.iter().map(|s| Elem::from_hex(s)).collect::<Result<Vec<_>>>()?;
        if zf != pair.zf || zg != pair.zg {
            return Err(Error::Parse("stored root spaces do not match f".into()));
        }
        Ok(pair)
    }
}

/// General constructor: computes `g = x - f`, both root spaces, and the
/// evaluation set. `f.ctx()` must contain the splitting field of `f` and `g`.
pub fn build_pair(f: LinearizedPoly) -> Result<LinearizedPair> {
    let a0 = f.low();
    if a0 == Elem::ZERO || a0 == Elem::ONE {
        return Err(Error::DegenerateLowCoefficient);
    }
    if f.degree() <= 1 {
        return param("deg f must exceed 1");
    }
    let g = f.complement();
    let zf = root_space(&f)?;
    let zg = root_space(&g)?;
    let n = zf.len();
    let mut eval_points = Vec::with_capacity(n * n);
    for &b in &zf {
        for &c in &zg {
            eval_points.push(b + c);
        }
    }
    Ok(LinearizedPair { f_dense: f.to_unipoly(), g_dense: g.to_unipoly(), f, g, zf, zg, eval_points })
}

/// The standard pair over GF(q^2), `q = 2^q_log`:
/// `f = (x^q - x) / (c^(q-1) - 1)` with `c` the smallest element outside GF(q).
/// Then `Z_f = GF(q)`, `Z_g = c * GF(q)` and `Z_f + Z_g` is the whole field.
pub fn instantiate_standard(q_log: u32) -> Result<LinearizedPair> {
    instantiate_with(q_log, None, None)
}

/// [`instantiate_standard`] with an optional reduction polynomial for
/// GF(2^(2 q_log)) and an optional override for `c`.
pub fn instantiate_with(q_log: u32, field_poly: Option<u64>, c: Option<Elem>) -> Result<LinearizedPair> {
    if q_log == 0 || 2 * q_log > crate::field::MAX_EXTENSION_DEGREE {
        return param(format!("q_log = {q_log} out of range 1..=12"));
    }
    let ctx = FieldCtx::new(2 * q_log, field_poly)?;
    let subfield = root_space(&LinearizedPoly::new(ctx, q_log, vec![Elem::ONE, Elem::ONE])?)?;
    let c = match c {
        Some(c) => {
            ctx.check(c)?;
            if subfield.binary_search(&c).is_ok() {
                return param(format!("c = {c} lies in the subfield of order 2^{q_log}"));
            }
            c
        }
        None => {
            ctx.elements().find(|e| subfield.binary_search(e).is_err()).expect("GF(q^2) is larger than GF(q)")
        }
    };
    let q = 1u64 << q_log;
    let denom = ctx.pow(c, q - 1) + Elem::ONE;
    let a = ctx.inv(denom)?;
    build_pair(LinearizedPoly::new(ctx, q_log, vec![a, a])?)
}

/// Smallest field element outside `Z_f`. For a pair from
/// [`instantiate_standard`] this is the `c` it used.
pub fn standard_c(pair: &LinearizedPair) -> Elem {
    pair.ctx().elements().find(|e| pair.zf.binary_search(e).is_err()).expect("field larger than Z_f")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exhaustive_roots(p: &LinearizedPoly) -> Vec<Elem> {
        p.ctx().elements().filter(|&a| p.eval(a).is_zero()).collect()
    }

    #[test]
    fn standard_q4() {
        let pair = instantiate_standard(2).unwrap();
        let ctx = pair.ctx();
        assert_eq!(ctx.reduction_poly(), 0b10011);
        assert_eq!(pair.zf(), &[Elem(0), Elem(1), Elem(6), Elem(7)]);
        assert_eq!(pair.zg(), &[Elem(0), Elem(2), Elem(0xc), Elem(0xe)]);
        // oracle: fixed points of a -> a^4
        let fixed: Vec<Elem> = ctx.elements().filter(|&a| ctx.pow(a, 4) == a).collect();
        assert_eq!(pair.zf(), fixed.as_slice());
        let c = standard_c(&pair);
        assert_eq!(c, Elem(2));
        let mut czf: Vec<Elem> = pair.zf().iter().map(|&b| ctx.mul(c, b)).collect();
        czf.sort();
        assert_eq!(pair.zg(), czf.as_slice());
        assert_eq!(pair.n_frak(), 4);
    }

    #[test]
    fn standard_q2_is_valid() {
        let pair = instantiate_standard(1).unwrap();
        let ctx = pair.ctx();
        let c = standard_c(&pair);
        let cq1 = ctx.pow(c, 1);
        assert!(cq1 != Elem::ZERO && cq1 != Elem::ONE);
        assert_eq!(pair.n_frak(), 2);
        assert_eq!(pair.length(), 4);
    }

    #[test]
    fn pair_invariants_small_q() {
        for e in 1..=5 {
            let pair = instantiate_standard(e).unwrap();
            let ctx = pair.ctx();
            let n = pair.n_frak();
            assert_eq!(n, 1 << e);
            // f + g = x
            assert_eq!(pair.f_poly().add(pair.g_poly()), UniPoly::x());
            assert_eq!(pair.zg().len(), n);
            for &b in pair.zf() {
                assert!(pair.f().eval(b).is_zero());
            }
            for &c in pair.zg() {
                assert!(pair.g().eval(c).is_zero());
            }
            let common: Vec<_> = pair.zf().iter().filter(|b| pair.zg().contains(b)).collect();
            assert_eq!(common, vec![&Elem::ZERO]);
            for (i, &b) in pair.zf().iter().enumerate() {
                for (j, &c) in pair.zg().iter().enumerate() {
                    let a = pair.eval_points()[i * n + j];
                    assert_eq!(a, b + c);
                    assert_eq!(pair.g().eval(a), b);
                    assert_eq!(pair.f().eval(a), c);
                }
            }
            let mut pts = pair.eval_points().to_vec();
            pts.sort();
            pts.dedup();
            assert_eq!(pts.len(), n * n);
            // closure under addition and GF(q) scaling
            let sub = root_space(&LinearizedPoly::new(ctx, e, vec![Elem::ONE, Elem::ONE]).unwrap()).unwrap();
            for z in [pair.zf(), pair.zg()] {
                for &a in z {
                    for &b in z {
                        assert!(z.binary_search(&(a + b)).is_ok());
                    }
                    for &l in &sub {
                        assert!(z.binary_search(&ctx.mul(l, a)).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn root_space_examples() {
        let gf16 = FieldCtx::new(4, None).unwrap();
        let x = LinearizedPoly::new(gf16, 2, vec![Elem::ONE]).unwrap();
        assert_eq!(root_space(&x).unwrap(), vec![Elem::ZERO]);
        let p = LinearizedPoly::new(gf16, 2, vec![Elem::ONE, Elem::ONE]).unwrap();
        assert_eq!(root_space(&p).unwrap(), exhaustive_roots(&p));
        assert_eq!(root_space(&p).unwrap().len(), 4);

        let gf8 = FieldCtx::new(3, None).unwrap();
        let p = LinearizedPoly::new(gf8, 2, vec![Elem::ONE, Elem::ONE]).unwrap();
        assert_eq!(exhaustive_roots(&p), vec![Elem(0), Elem(1)]);
        assert_eq!(root_space(&p), Err(Error::SplittingFieldTooSmall { found: 2, expected: 4 }));

        let bad = LinearizedPoly::new(gf16, 1, vec![Elem::ZERO, Elem::ONE]).unwrap();
        assert_eq!(root_space(&bad), Err(Error::NotSeparable));
    }

    #[test]
    fn build_pair_reproduces_standard() {
        let pair = instantiate_standard(2).unwrap();
        let again = build_pair(pair.f().clone()).unwrap();
        assert_eq!(again, pair);
    }

    #[test]
    fn rejects_low_coefficient_one() {
        let ctx = FieldCtx::new(4, None).unwrap();
        let f = LinearizedPoly::new(ctx, 2, vec![Elem::ONE, Elem(3)]).unwrap();
        assert_eq!(build_pair(f), Err(Error::DegenerateLowCoefficient));
        let f = LinearizedPoly::new(ctx, 2, vec![Elem::ZERO, Elem(3)]).unwrap();
        assert_eq!(build_pair(f), Err(Error::DegenerateLowCoefficient));
    }

    #[test]
    fn general_pair_with_two_step_degree() {
        // f = a2 x^4 + a0 x over GF(16), q = 2: search for coefficients where
        // both f and x - f split, then confirm |Z_f| = 4 by kernel rank.
        let ctx = FieldCtx::new(4, None).unwrap();
        let mut found = None;
        'outer: for a0 in ctx.elements().skip(2) {
            for a2 in ctx.elements().skip(1) {
                let f = LinearizedPoly::new(ctx, 1, vec![a0, Elem::ZERO, a2]).unwrap();
                if let Ok(pair) = build_pair(f) {
                    found = Some(pair);
                    break 'outer;
                }
            }
        }
        let pair = found.expect("some (a0, a2) splits in GF(16)");
        assert_eq!(pair.f().degree(), 4);
        assert_eq!(pair.n_frak(), 4);
        assert_eq!(pair.zf(), exhaustive_roots(pair.f()).as_slice());
        assert_eq!(pair.zg(), exhaustive_roots(pair.g()).as_slice());
    }

    #[test]
    fn c_override() {
        let pair = instantiate_with(2, None, Some(Elem(3))).unwrap();
        let ctx = pair.ctx();
        let mut czf: Vec<Elem> = pair.zf().iter().map(|&b| ctx.mul(Elem(3), b)).collect();
        czf.sort();
        assert_eq!(pair.zg(), czf.as_slice());
        assert!(instantiate_with(2, None, Some(Elem(6))).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let pair = instantiate_standard(3).unwrap();
        let js = serde_json::to_string(&pair.to_json()).unwrap();
        assert!(js.contains("\"Zf_hex\""));
        let back: PairJson = serde_json::from_str(&js).unwrap();
        assert_eq!(back.to_pair().unwrap(), pair);
    }
}
