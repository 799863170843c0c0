//! Minimum distance and weight spectrum by enumerating the message space.
//!
//! Codewords are packed `floor(64 / M)` symbols per `u64`. Each nonzero
//! codeword is visited once per projective point: for every leading position
//! `p` the message has `m[p] = 1`, `m[j] = 0` for `j > p`, and the lower
//! `p * M` message bits run through a binary reflected Gray code. One step
//! flips one bit of one coordinate, i.e. XORs in `x^b * row_i`. Scaling by the
//! `|F| - 1` nonzero scalars recovers the full spectrum.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codec::CodeInstance;
use crate::error::{param, Error, Result};
use crate::field::Elem;
use crate::par::Exec;

/// Default cap on `|F|^k`, the number of messages enumerated.
pub const DEFAULT_BUDGET: u128 = 1 << 28;

/// Low Gray-code bits handled by one work item; higher bits pick the item.
const CHUNK_LOW_BITS: usize = 16;
const MAX_CHUNK_TOP_BITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightSpectrum {
    /// weight -> number of codewords of that weight
    pub counts: BTreeMap<usize, u64>,
    /// true when every codeword was enumerated
    pub exact: bool,
}

impl WeightSpectrum {
    pub fn total(&self) -> u128 {
        self.counts.values().map(|&c| c as u128).sum()
    }

    pub fn min_nonzero(&self) -> Option<usize> {
        self.nonzero_weights().next()
    }

    /// Smallest weight strictly above the minimum nonzero weight.
    pub fn second_nonzero(&self) -> Option<usize> {
        self.nonzero_weights().nth(1)
    }

    fn nonzero_weights(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.iter().filter(|&(&w, &c)| w > 0 && c > 0).map(|(&w, _)| w)
    }
}

/// `|F|^k`, saturating.
fn message_count(m: u32, k: usize) -> u128 {
    let bits = m as usize * k;
    if bits >= 128 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

trait Packed: Copy + Send + Sync {
    fn zero() -> Self;
    fn words_mut(&mut self) -> &mut [u64];
    fn xor(&mut self, other: &Self);
    fn weight(&self, lo: u64, hi: u64) -> usize;
}

impl<const W: usize> Packed for [u64; W] {
    #[inline]
    fn zero() -> Self {
        [0; W]
    }

    fn words_mut(&mut self) -> &mut [u64] {
        self
    }

    #[inline(always)]
    fn xor(&mut self, other: &Self) {
        for (a, b) in self.iter_mut().zip(other) {
            *a ^= b;
        }
    }

    // Per lane: adding the low-bit mask carries into the lane's top bit iff
    // some low bit is set; OR in the original top bit and count top bits.
    #[inline(always)]
    fn weight(&self, lo: u64, hi: u64) -> usize {
        self.iter().map(|&x| ((((x & lo) + lo) | x) & hi).count_ones() as usize).sum()
    }
}

struct Layout {
    m: u32,
    lanes: usize,
    lo: u64,
    hi: u64,
}

impl Layout {
    fn new(m: u32) -> Layout {
        let lanes = 64 / m as usize;
        let (mut lo, mut hi) = (0u64, 0u64);
        for l in 0..lanes {
            let shift = l as u32 * m;
            lo |= ((1u64 << (m - 1)) - 1) << shift;
            hi |= 1u64 << (shift + m - 1);
        }
        Layout { m, lanes, lo, hi }
    }

    fn words(&self, len: usize) -> usize {
        len.div_ceil(self.lanes)
    }

    fn pack<P: Packed>(&self, symbols: &[Elem]) -> P {
        let mut out = P::zero();
        let words = out.words_mut();
        for (j, s) in symbols.iter().enumerate() {
            words[j / self.lanes] |= (s.0 as u64) << ((j % self.lanes) as u32 * self.m);
        }
        out
    }
}

pub fn exhaustive_distance(code: &CodeInstance, budget: u128) -> Result<(usize, WeightSpectrum)> {
    exhaustive_distance_with(code, budget, Exec::default())
}

pub fn exhaustive_distance_with(
    code: &CodeInstance,
    budget: u128,
    exec: Exec,
) -> Result<(usize, WeightSpectrum)> {
    let m = code.ctx().extension_degree();
    let needed = message_count(m, code.k());
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let layout = Layout::new(m);
    let hist = match layout.words(code.length()) {
        1 => enumerate::<[u64; 1]>(code, &layout, exec),
        2 => enumerate::<[u64; 2]>(code, &layout, exec),
        3..=4 => enumerate::<[u64; 4]>(code, &layout, exec),
        5..=8 => enumerate::<[u64; 8]>(code, &layout, exec),
        9..=16 => enumerate::<[u64; 16]>(code, &layout, exec),
        17..=32 => enumerate::<[u64; 32]>(code, &layout, exec),
        33..=64 => enumerate::<[u64; 64]>(code, &layout, exec),
        w => {
            return param(format!(
                "codewords need {w} packed words; exhaustive enumeration supports at most 64"
            ))
        }
    };
    let scale = code.ctx().order() - 1;
    let mut counts = BTreeMap::new();
    counts.insert(0, 1);
    for (w, &c) in hist.iter().enumerate() {
        if c > 0 {
            *counts.entry(w).or_insert(0) += c * scale;
        }
    }
    let spectrum = WeightSpectrum { counts, exact: true };
    let d = spectrum.min_nonzero().expect("a code of dimension k >= 1 has nonzero words");
    Ok((d, spectrum))
}

/// Histogram of weights over projective representatives.
fn enumerate<P: Packed>(code: &CodeInstance, layout: &Layout, exec: Exec) -> Vec<u64> {
    let ctx = code.ctx();
    let m = layout.m as usize;
    let k = code.k();
    let g = code.generator();
    let rows: Vec<P> = (0..k).map(|i| layout.pack(g.row(i))).collect();
    // flips[i * M + b] = x^b * row_i
    let flips: Vec<P> = (0..k)
        .flat_map(|i| (0..m).map(move |b| (i, b)))
        .map(|(i, b)| {
            let x_b = Elem(1 << b);
            let scaled: Vec<Elem> = g.row(i).iter().map(|&v| ctx.mul(x_b, v)).collect();
            layout.pack(&scaled)
        })
        .collect();

    // Work items: (leading position, value of the top Gray bits).
    let mut items: Vec<(usize, u64)> = Vec::new();
    for p in 0..k {
        let bits = p * m;
        let top = bits.saturating_sub(CHUNK_LOW_BITS).min(MAX_CHUNK_TOP_BITS);
        items.extend((0..1u64 << top).map(|c| (p, c)));
    }
    let len = code.length();
    exec.map_reduce(
        items.len(),
        vec![0u64; len + 1],
        |idx| {
            let (p, c) = items[idx];
            let bits = p * m;
            let top = bits.saturating_sub(CHUNK_LOW_BITS).min(MAX_CHUNK_TOP_BITS);
            let low = bits - top;
            let mut acc = rows[p];
            for j in 0..top {
                if c >> j & 1 == 1 {
                    acc.xor(&flips[low + j]);
                }
            }
            let mut hist = vec![0u64; len + 1];
            hist[acc.weight(layout.lo, layout.hi)] += 1;
            for s in 1u64..1 << low {
                acc.xor(&flips[s.trailing_zeros() as usize]);
                hist[acc.weight(layout.lo, layout.hi)] += 1;
            }
            hist
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(&b) {
                *x += y;
            }
            a
        },
    )
}

/// Smallest weight among `trials` encodings of random nonzero messages.
///
/// This is an upper estimate of the minimum distance, never below it.
pub fn sampled_distance(code: &CodeInstance, trials: usize, seed: u64) -> Result<usize> {
    if trials == 0 {
        return param("sampled_distance needs at least one trial");
    }
    let ctx = code.ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = usize::MAX;
    for _ in 0..trials {
        let msg: Vec<Elem> = loop {
            let msg: Vec<Elem> = (0..code.k()).map(|_| ctx.random(&mut rng)).collect();
            if msg.iter().any(|e| !e.is_zero()) {
                break msg;
            }
        };
        let word = code.generator().left_mul(ctx, &msg);
        best = best.min(word.iter().filter(|e| !e.is_zero()).count());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::build_code;
    use crate::linearized::instantiate_standard;

    /// Direct enumeration of every message, no packing or Gray code.
    fn brute_spectrum(code: &CodeInstance) -> BTreeMap<usize, u64> {
        let ctx = code.ctx();
        let q = ctx.order();
        let k = code.k();
        let mut counts = BTreeMap::new();
        for idx in 0..q.pow(k as u32) {
            let msg: Vec<Elem> = (0..k).map(|i| Elem((idx / q.pow(i as u32) % q) as u32)).collect();
            let w = code.encode(&msg).unwrap().iter().filter(|e| !e.is_zero()).count();
            *counts.entry(w).or_insert(0) += 1;
        }
        counts
    }

    #[test]
    fn packed_weight_counts_nonzero_lanes() {
        for m in [1u32, 2, 3, 4, 6, 8, 10] {
            let layout = Layout::new(m);
            let syms: Vec<Elem> = (0..layout.lanes as u32).map(|j| Elem(j % (1 << m))).collect();
            let p: [u64; 1] = layout.pack(&syms);
            let expect = syms.iter().filter(|e| !e.is_zero()).count();
            assert_eq!(p.weight(layout.lo, layout.hi), expect, "m={m}");
        }
    }

    #[test]
    fn matches_brute_force_q4() {
        let pair = instantiate_standard(2).unwrap();
        for (r, k) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (4, 2)] {
            let code = build_code(&pair, r, k).unwrap();
            let (d, spec) = exhaustive_distance(&code, DEFAULT_BUDGET).unwrap();
            assert_eq!(spec.counts, brute_spectrum(&code), "r={r} k={k}");
            assert_eq!(spec.total(), 16u128.pow(k as u32));
            assert_eq!(Some(d), spec.min_nonzero());
        }
    }

    #[test]
    fn sequential_and_default_agree() {
        let pair = instantiate_standard(2).unwrap();
        let code = build_code(&pair, 3, 5).unwrap();
        let a = exhaustive_distance_with(&code, DEFAULT_BUDGET, Exec::Sequential).unwrap();
        let b = exhaustive_distance_with(&code, DEFAULT_BUDGET, Exec::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn q4_r2_distances() {
        let pair = instantiate_standard(2).unwrap();
        let ds: Vec<usize> = (1..=4)
            .map(|k| exhaustive_distance(&build_code(&pair, 2, k).unwrap(), DEFAULT_BUDGET).unwrap().0)
            .collect();
        assert_eq!(ds, vec![16, 15, 12, 9]);
    }

    #[test]
    fn multiword_layout_q8() {
        let pair = instantiate_standard(3).unwrap();
        let code = build_code(&pair, 2, 2).unwrap();
        let (d, spec) = exhaustive_distance(&code, DEFAULT_BUDGET).unwrap();
        assert_eq!(spec.counts, brute_spectrum(&code));
        assert_eq!(d, 63);
    }

    #[test]
    fn budget_and_sampling() {
        let pair = instantiate_standard(2).unwrap();
        let code = build_code(&pair, 2, 4).unwrap();
        assert!(matches!(
            exhaustive_distance(&code, 1000),
            Err(Error::BudgetExceeded { needed: 65536, budget: 1000 })
        ));
        assert!(sampled_distance(&code, 0, 1).is_err());
        let est = sampled_distance(&code, 20_000, 7).unwrap();
        assert!(est >= 9);
        assert_eq!(est, 9);
    }
}
