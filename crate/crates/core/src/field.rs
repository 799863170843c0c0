//! Arithmetic in GF(2^M) and dense polynomial algebra over it.
//!
//! Elements are bit vectors in the polynomial basis: bit `i` of an [`Elem`]
//! is the coefficient of `x^i`. Addition is XOR and multiplication is a
//! carry-less product reduced by the context's reduction polynomial.

use std::fmt;
use std::ops::{Add, AddAssign, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_EXTENSION_DEGREE: u32 = 24;

/// An element of GF(2^M), stored as its polynomial-basis coordinates.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Lowercase hex of the coordinate bits, without prefix.
    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    pub fn from_hex(s: &str) -> Result<Elem> {
        let s = s.trim();
        let s = s.strip_prefix("0x").unwrap_or(s);
        u32::from_str_radix(s, 16)
            .map(Elem)
            .map_err(|e| Error::Parse(format!("bad field element {s:?}: {e}")))
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl Add for Elem {
    type Output = Elem;
    #[inline]
    fn add(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

// Characteristic 2: subtraction is addition.
impl Sub for Elem {
    type Output = Elem;
    #[inline]
    fn sub(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

impl AddAssign for Elem {
    #[inline]
    fn add_assign(&mut self, rhs: Elem) {
        self.0 ^= rhs.0;
    }
}

/// The field GF(2^M) with a fixed reduction polynomial.
///
/// The context is two words and `Copy`; pass it by value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    m: u32,
    poly: u32,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.m, self.poly)
    }
}

/// Serialized form of a [`FieldCtx`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(rename = "M")]
    pub m: u32,
    pub reduction_poly_hex: String,
}

/// Returns true when `poly` (bit `i` = coefficient of `x^i`) has no factor of
/// degree `1..=deg/2` over GF(2).
pub fn is_irreducible(poly: u64) -> bool {
    if poly < 2 {
        return false;
    }
    let deg = 63 - poly.leading_zeros();
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for divisor in (1u64 << d)..(1u64 << (d + 1)) {
            if gf2_rem(poly, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// Remainder of GF(2)[x] polynomial division.
fn gf2_rem(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 {
        let da = 63 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

impl FieldCtx {
    /// Builds GF(2^m). With `reduction_poly = None` the lexicographically
    /// smallest irreducible polynomial of degree `m` is used.
    pub fn new(m: u32, reduction_poly: Option<u64>) -> Result<FieldCtx> {
        if m == 0 || m > MAX_EXTENSION_DEGREE {
            return Err(Error::ExtensionDegree(m));
        }
        let poly = match reduction_poly {
            Some(p) => {
                if p >> m != 1 {
                    return Err(Error::WrongDegree { poly: p, expected: m });
                }
                if !is_irreducible(p) {
                    return Err(Error::Reducible(p));
                }
                p
            }
            None => ((1u64 << m)..(1u64 << (m + 1)))
                .find(|&p| is_irreducible(p))
                .expect("an irreducible polynomial exists in every degree"),
        };
        Ok(FieldCtx { m, poly: poly as u32 })
    }

    /// Builds a context without checking irreducibility. The result is a ring
    /// that is generally not a field; only useful for fault injection.
    #[doc(hidden)]
    pub fn new_unchecked(m: u32, reduction_poly: u64) -> Result<FieldCtx> {
        if m == 0 || m > MAX_EXTENSION_DEGREE {
            return Err(Error::ExtensionDegree(m));
        }
        if reduction_poly >> m != 1 {
            return Err(Error::WrongDegree { poly: reduction_poly, expected: m });
        }
        Ok(FieldCtx { m, poly: reduction_poly as u32 })
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<FieldCtx> {
        let s = spec.reduction_poly_hex.trim();
        let poly = u64::from_str_radix(s.strip_prefix("0x").unwrap_or(s), 16)
            .map_err(|e| Error::Parse(format!("bad reduction polynomial {s:?}: {e}")))?;
        FieldCtx::new(spec.m, Some(poly))
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { m: self.m, reduction_poly_hex: format!("{:x}", self.poly) }
    }

    #[inline]
    pub fn extension_degree(&self) -> u32 {
        self.m
    }

    /// Reduction polynomial bits, including the leading `x^M` term.
    #[inline]
    pub fn reduction_poly(&self) -> u64 {
        self.poly as u64
    }

    /// Number of field elements, `2^M`.
    #[inline]
    pub fn order(&self) -> u64 {
        1u64 << self.m
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        (a.0 as u64) < self.order()
    }

    pub fn check(&self, a: Elem) -> Result<Elem> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::NotInField { value: a.0, m: self.m })
        }
    }

    /// All field elements in ascending bit order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order() as u32).map(Elem)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.random_range(0..self.order()) as u32)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.random_range(1..self.order()) as u32)
    }

    #[inline]
    fn reduce(&self, mut acc: u64) -> u32 {
        let m = self.m;
        let poly = self.poly as u64;
        while acc >> m != 0 {
            let top = 63 - acc.leading_zeros();
            acc ^= poly << (top - m);
        }
        acc as u32
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let (a, mut b) = (a.0 as u64, b.0);
        let mut acc = 0u64;
        while b != 0 {
            let i = b.trailing_zeros();
            acc ^= a << i;
            b &= b - 1;
        }
        Elem(self.reduce(acc))
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `a^(2^k)`, the k-fold Frobenius image.
    pub fn frobenius(&self, a: Elem, k: u32) -> Elem {
        (0..k).fold(a, |x, _| self.square(x))
    }

    /// Inverse via `a^(2^M - 2)`.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Elem>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{:x}*x^{}", c.0, i))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> UniPoly {
        UniPoly::constant(Elem::ONE)
    }

    pub fn x() -> UniPoly {
        UniPoly::monomial(Elem::ONE, 1)
    }

    pub fn constant(c: Elem) -> UniPoly {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Elem, degree: usize) -> UniPoly {
        let mut coeffs = vec![Elem::ZERO; degree + 1];
        coeffs[degree] = c;
        UniPoly::from_coeffs(coeffs)
    }

    /// `x - a`.
    pub fn linear(a: Elem) -> UniPoly {
        UniPoly::from_coeffs(vec![a, Elem::ONE])
    }

    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    #[inline]
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Elem::ONE
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let (long, short) =
            if self.coeffs.len() >= other.coeffs.len() { (self, other) } else { (other, self) };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += *s;
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, ctx: FieldCtx, c: Elem, other: &UniPoly) {
        if c.is_zero() {
            return;
        }
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Elem::ZERO);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += ctx.mul(c, *b);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn scale(&self, ctx: FieldCtx, c: Elem) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    pub fn mul(&self, ctx: FieldCtx, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += ctx.mul(a, b);
            }
        }
        UniPoly::from_coeffs(out)
    }

    /// Horner evaluation.
    pub fn eval(&self, ctx: FieldCtx, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| ctx.mul(acc, x) + c)
    }

    /// Formal derivative. In characteristic 2 only odd-degree terms survive.
    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { Elem::ZERO })
            .collect();
        UniPoly::from_coeffs(coeffs)
    }

    /// Synthetic division by `x - a`: returns `(quotient, remainder)`.
    pub fn div_linear(&self, ctx: FieldCtx, a: Elem) -> (UniPoly, Elem) {
        if self.is_zero() {
            return (UniPoly::zero(), Elem::ZERO);
        }
        let n = self.coeffs.len();
        let mut q = vec![Elem::ZERO; n - 1];
        let mut carry = Elem::ZERO;
        for i in (0..n).rev() {
            let v = self.coeffs[i] + ctx.mul(carry, a);
            if i == 0 {
                return (UniPoly::from_coeffs(q), v);
            }
            q[i - 1] = v;
            carry = v;
        }
        unreachable!()
    }

    pub fn pow(&self, ctx: FieldCtx, e: usize) -> UniPoly {
        let mut acc = UniPoly::one();
        for _ in 0..e {
            acc = acc.mul(ctx, self);
        }
        acc
    }
}

/// Dense bivariate polynomial with `deg_x < rx` and `deg_y < ry`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiPoly {
    rx: usize,
    ry: usize,
    // coefficient of x^i y^j at i * ry + j
    coeffs: Vec<Elem>,
}

impl BiPoly {
    pub fn zero(rx: usize, ry: usize) -> BiPoly {
        BiPoly { rx, ry, coeffs: vec![Elem::ZERO; rx * ry] }
    }

    pub fn from_coeffs(rx: usize, ry: usize, coeffs: Vec<Elem>) -> Result<BiPoly> {
        if coeffs.len() != rx * ry {
            return Err(Error::LengthMismatch { expected: rx * ry, got: coeffs.len() });
        }
        Ok(BiPoly { rx, ry, coeffs })
    }

    pub fn random<R: Rng + ?Sized>(ctx: FieldCtx, rx: usize, ry: usize, rng: &mut R) -> BiPoly {
        BiPoly { rx, ry, coeffs: (0..rx * ry).map(|_| ctx.random(rng)).collect() }
    }

    /// `u(x) * v(y)` for univariate factors that fit the box.
    pub fn outer(ctx: FieldCtx, u: &UniPoly, v: &UniPoly, rx: usize, ry: usize) -> Result<BiPoly> {
        if u.coeffs().len() > rx || v.coeffs().len() > ry {
            return Err(Error::Param("factor degrees exceed the (rx, ry) box".into()));
        }
        let mut out = BiPoly::zero(rx, ry);
        for (i, &a) in u.coeffs().iter().enumerate() {
            for (j, &b) in v.coeffs().iter().enumerate() {
                out.coeffs[i * ry + j] = ctx.mul(a, b);
            }
        }
        Ok(out)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rx, self.ry)
    }

    pub fn coeff(&self, i: usize, j: usize) -> Elem {
        self.coeffs[i * self.ry + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Elem) {
        self.coeffs[i * self.ry + j] = c;
    }

    pub fn eval(&self, ctx: FieldCtx, x: Elem, y: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        for i in (0..self.rx).rev() {
            let row = &self.coeffs[i * self.ry..(i + 1) * self.ry];
            let inner = row.iter().rev().fold(Elem::ZERO, |a, &c| ctx.mul(a, y) + c);
            acc = ctx.mul(acc, x) + inner;
        }
        acc
    }
}

/// `s(g(x), f(x))` expanded as a univariate polynomial.
pub fn poly_compose(ctx: FieldCtx, outer: &BiPoly, gx: &UniPoly, fx: &UniPoly) -> UniPoly {
    let (rx, ry) = outer.dims();
    let mut f_pows = Vec::with_capacity(ry);
    let mut p = UniPoly::one();
    for _ in 0..ry {
        f_pows.push(p.clone());
        p = p.mul(ctx, fx);
    }
    let mut acc = UniPoly::zero();
    for i in (0..rx).rev() {
        let mut inner = UniPoly::zero();
        for (j, fp) in f_pows.iter().enumerate() {
            inner.add_scaled(ctx, outer.coeff(i, j), fp);
        }
        acc = acc.mul(ctx, gx).add(&inner);
    }
    acc
}
