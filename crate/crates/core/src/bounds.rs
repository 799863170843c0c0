//! Closed-form bounds on the minimum distance of `C_k` and of any
//! `k`-dimensional subcode of a product of two `[n, r, n - r + 1]` codes.
//!
//! Everything is exact integer arithmetic except [`profile_lower`].

use serde::Serialize;

use crate::degrees::{degree_profile, DegreeProfile};
use crate::error::{param, Error, Result};
use crate::par::Exec;

/// Above this `r` the grid bound switches from the full `(a, b)` scan to the
/// one-dimensional scan over `a`.
pub const GRID_FULL_SCAN_MAX_R: u64 = 1 << 12;

#[inline]
fn delta(n: u64, r: u64) -> u64 {
    n - r + 1
}

/// Singleton-type bound for codes with all-symbol `(r, delta)` locality:
/// `n^2 - k + 1 - floor((k - 1) / r) (delta - 1)`.
pub fn lrc_upper(n: u64, r: u64, k: u64) -> u64 {
    n * n - k + 1 - (k - 1) / r * (delta(n, r) - 1)
}

/// Minimum of `(a + n - r)(b + n - r)` over `0 <= a, b <= r` with
/// `ab >= r^2 - k + 1`, with the minimizing `(a, b)` (smallest `a`, then `b`).
pub fn grid_upper(n: u64, r: u64, k: u64) -> (u64, (u64, u64)) {
    let need = r * r - k + 1;
    let s = n - r;
    let mut best = (u64::MAX, (0, 0));
    if r <= GRID_FULL_SCAN_MAX_R {
        for a in 0..=r {
            for b in 0..=r {
                if a * b >= need {
                    let v = (a + s) * (b + s);
                    if v < best.0 {
                        best = (v, (a, b));
                    }
                }
            }
        }
    } else {
        // For fixed a the best b is ceil(need / a); a below ceil(need / r)
        // leaves no feasible b.
        for a in need.div_ceil(r).max(1)..=r {
            let b = need.div_ceil(a);
            let v = (a + s) * (b + s);
            if v < best.0 {
                best = (v, (a, b));
            }
        }
    }
    best
}

/// `(ceil(sqrt(r^2 - k + 1)) + n - r)^2`, the symmetric choice `a = b`.
pub fn grid_upper_symmetric(n: u64, r: u64, k: u64) -> u64 {
    let a = ceil_sqrt(r * r - k + 1);
    (a + n - r) * (a + n - r)
}

fn ceil_sqrt(x: u64) -> u64 {
    let mut s = (x as f64).sqrt() as u64;
    while s * s > x {
        s -= 1;
    }
    while s * s < x {
        s += 1;
    }
    s
}

/// `n^2 - k + 1 - floor((k - 2) / (r - 1)) (delta - 1)`, defined for
/// `k >= 2` and `2 <= r <= n - 1`.
pub fn gridv2_upper(n: u64, r: u64, k: u64) -> Option<u64> {
    if k < 2 || r < 2 || r + 1 > n {
        return None;
    }
    Some(n * n - k + 1 - (k - 2) / (r - 1) * (delta(n, r) - 1))
}

/// `max{n^2 - partial + (n - n_r)(n - n_c), n_r delta, n_c delta}`.
pub fn b_value(n: u64, r: u64, partial: u64, n_r: u64, n_c: u64) -> u64 {
    let d = delta(n, r);
    let first = (n * n + (n - n_r) * (n - n_c)).saturating_sub(partial);
    first.max(n_r * d).max(n_c * d)
}

/// Minimum of [`b_value`] over `delta <= n_r, n_c <= n`, with the
/// lexicographically smallest minimizing `(n_r, n_c)`.
pub fn lower_opt(n: u64, r: u64, k: u64, partial_k: u64) -> (u64, (u64, u64)) {
    debug_assert!(k >= 1 && k <= r * r);
    let d = delta(n, r);
    let mut best = (u64::MAX, (0, 0));
    for n_r in d..=n {
        for n_c in d..=n {
            let v = b_value(n, r, partial_k, n_r, n_c);
            if v < best.0 {
                best = (v, (n_r, n_c));
            }
        }
    }
    best
}

/// `n^2 - partial_k`, or 0 when the degree reaches the length (possible
/// once `r >= n/2 + 1`) and the bound says nothing.
pub fn rs_degree_lower(n: u64, partial_k: u64) -> u64 {
    (n * n).saturating_sub(partial_k)
}

/// Known exact minimum distance of `C_k`, when one of the closed forms applies.
pub fn exact_distance(n: u64, r: u64, k: u64) -> Option<u64> {
    let d = delta(n, r);
    if k == 0 || k > r * r {
        return None;
    }
    if k == r * r {
        return Some(d * d);
    }
    if k == r * r - 1 {
        return Some(d * (d + 1));
    }
    if r >= 3 && k == r * r - 2 {
        return Some(d * (d + 2));
    }
    if k < 2 * r {
        return Some(n * n - k + 1 - (k - 1) / r * (n - r));
    }
    None
}

/// `(n - (r - sqrt(r^2 - k_t)))^2 - (r - sqrt(r^2 - k_t))^2` at a breakpoint.
pub fn profile_lower(n: u64, r: u64, k_t: u64) -> Result<f64> {
    let profile = degree_profile(n as usize, r as usize)?;
    if profile.breakpoint_for(k_t as usize).is_none() {
        return Err(Error::NotBreakpoint(k_t as usize));
    }
    let u = r as f64 - ((r * r - k_t) as f64).sqrt();
    Ok((n as f64 - u).powi(2) - u * u)
}

/// Distance `(n - r1 + 1)(n - r2 + 1)` of the plain product subcode
/// `RS[n, r1] x RS[n, r2]`, of dimension `r1 r2`.
pub fn product_subcode_distance(n: u64, r1: u64, r2: u64) -> u64 {
    (n - r1 + 1) * (n - r2 + 1)
}

/// Next-to-minimum weight `delta (delta + 1)` of a product of two MDS codes
/// with distance `delta`.
pub fn secondweight(_n: u64, delta: u64) -> u64 {
    delta * (delta + 1)
}

/// All bounds for one dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n_frak: u64,
    pub r: u64,
    pub k: u64,
    pub delta: u64,
    pub partial_k: u64,
    pub rs_degree_lower: u64,
    pub lower_opt: u64,
    pub lrc_upper: u64,
    pub grid_upper: u64,
    pub gridv2_upper: Option<u64>,
    pub exact: Option<u64>,
    pub witness_ab: (u64, u64),
    pub witness_nrnc: (u64, u64),
}

impl BoundReport {
    /// The smallest upper bound that applies.
    pub fn best_upper(&self) -> u64 {
        let m = self.lrc_upper.min(self.grid_upper);
        self.gridv2_upper.map_or(m, |v| m.min(v))
    }

    /// `rs_degree_lower <= lower_opt <= every upper bound`, and `exact`
    /// equals `lower_opt` and the best upper bound when present.
    pub fn is_consistent(&self) -> bool {
        let ordered = self.rs_degree_lower <= self.lower_opt && self.lower_opt <= self.best_upper();
        let exact_ok = self.exact.is_none_or(|e| e == self.lower_opt && e == self.best_upper());
        ordered && exact_ok
    }
}

pub fn bound_report(profile: &DegreeProfile, k: u64) -> BoundReport {
    let (n, r) = (profile.n_frak as u64, profile.r as u64);
    let partial_k = profile.partial(k as usize) as u64;
    let (grid, ab) = grid_upper(n, r, k);
    let (low, nrnc) = lower_opt(n, r, k, partial_k);
    BoundReport {
        n_frak: n,
        r,
        k,
        delta: delta(n, r),
        partial_k,
        rs_degree_lower: rs_degree_lower(n, partial_k),
        lower_opt: low,
        lrc_upper: lrc_upper(n, r, k),
        grid_upper: grid,
        gridv2_upper: gridv2_upper(n, r, k),
        exact: exact_distance(n, r, k),
        witness_ab: ab,
        witness_nrnc: nrnc,
    }
}

/// Bound reports for every `k` in `ks`, in order.
pub fn bound_sweep(
    n: u64,
    r: u64,
    ks: std::ops::RangeInclusive<u64>,
    exec: Exec,
) -> Result<Vec<BoundReport>> {
    if r == 0 || r > n {
        return param(format!("need 1 <= r <= n, got r = {r}, n = {n}"));
    }
    if *ks.start() == 0 || *ks.end() > r * r || ks.start() > ks.end() {
        return param(format!("k range {}..{} must lie in 1..{}", ks.start(), ks.end(), r * r));
    }
    let profile = degree_profile(n as usize, r as usize)?;
    let start = *ks.start();
    let len = (ks.end() - start + 1) as usize;
    Ok(exec.map(len, |i| bound_report(&profile, start + i as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lrc_examples() {
        assert_eq!(lrc_upper(4, 2, 3), 12);
        assert_eq!(lrc_upper(4, 2, 1), 16);
        assert_eq!(lrc_upper(32, 8, 63), 794);
    }

    #[test]
    fn grid_examples() {
        assert_eq!(grid_upper(32, 8, 63), (650, (1, 2)));
        assert_eq!(grid_upper(32, 8, 64), (625, (1, 1)));
        assert_eq!(grid_upper(32, 8, 1).0, 1024);
        assert_eq!(grid_upper(32, 8, 1).1, (8, 8));
    }

    #[test]
    fn grid_scans_agree() {
        // one-dimensional reduction vs the full scan
        for (n, r) in [(32u64, 8u64), (32, 16), (32, 25), (16, 16), (9, 4)] {
            for k in 1..=r * r {
                let need = r * r - k + 1;
                let s = n - r;
                let one_d =
                    (need.div_ceil(r).max(1)..=r).map(|a| (a + s) * (need.div_ceil(a) + s)).min().unwrap();
                assert_eq!(grid_upper(n, r, k).0, one_d);
                assert!(grid_upper(n, r, k).0 <= grid_upper_symmetric(n, r, k));
            }
        }
    }

    #[test]
    fn gridv2_examples() {
        assert_eq!(gridv2_upper(4, 2, 4), Some(9));
        assert_eq!(gridv2_upper(4, 2, 1), None);
        assert_eq!(gridv2_upper(32, 8, 63), Some(770));
        assert_eq!(gridv2_upper(4, 4, 5), None);
    }

    #[test]
    fn lower_opt_at_128_64() {
        let p = degree_profile(128, 64).unwrap();
        let partial = p.partial(4032) as u64;
        assert_eq!(lower_opt(128, 64, 4032, partial).0, 4940);
    }

    #[test]
    fn lower_opt_closed_forms() {
        for (n, r) in [(4u64, 2u64), (4, 3), (8, 3), (32, 8), (32, 25), (16, 16)] {
            let p = degree_profile(n as usize, r as usize).unwrap();
            let d = n - r + 1;
            let at = |k: u64| lower_opt(n, r, k, p.partial(k as usize) as u64).0;
            assert_eq!(at(r * r), d * d);
            if r >= 2 {
                assert_eq!(at(r * r - 1), d * (d + 1));
            }
            if r >= 3 {
                assert_eq!(at(r * r - 2), d * (d + 2));
            }
        }
    }

    #[test]
    fn rs_degree_examples() {
        assert_eq!(rs_degree_lower(4, 1), 15);
        assert_eq!(rs_degree_lower(4, 8), 8);
        let p = degree_profile(32, 8).unwrap();
        assert_eq!(rs_degree_lower(32, p.partial(64) as u64), 576);
        let p = degree_profile(32, 25).unwrap();
        assert_eq!(rs_degree_lower(32, p.partial(625) as u64), 0);
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact_distance(4, 2, 3), Some(12));
        assert_eq!(exact_distance(4, 3, 7), Some(8));
        assert_eq!(exact_distance(4, 3, 4), Some(12));
        assert_eq!(exact_distance(4, 3, 6), None);
        assert_eq!(exact_distance(128, 64, 4096), Some(4225));
        assert_eq!(exact_distance(4, 2, 0), None);
    }

    #[test]
    fn profile_lower_examples() {
        let v = profile_lower(32, 8, 64).unwrap();
        assert!((v - (1024.0 - 2.0 * 8.0 * 32.0)).abs() < 1e-9);
        let v = profile_lower(32, 8, 8).unwrap();
        assert!((v - 990.9).abs() < 0.05, "{v}");
        assert!(v <= 1017.0 + 1e-9);
        assert_eq!(profile_lower(32, 8, 9), Err(Error::NotBreakpoint(9)));
    }

    #[test]
    fn product_subcode_comparison() {
        assert_eq!(product_subcode_distance(128, 63, 64), 4290);
        assert_eq!(product_subcode_distance(128, 64, 64), 4225);
    }

    #[test]
    fn secondweight_examples() {
        assert_eq!(secondweight(4, 3), 12);
        assert_eq!(secondweight(4, 2), 6);
        assert_eq!(secondweight(32, 8), 72);
    }

    #[test]
    fn sweep_is_ordered_and_consistent() {
        for (n, r) in [(32u64, 8u64), (32, 16), (32, 25)] {
            let rows = bound_sweep(n, r, 1..=r * r, Exec::default()).unwrap();
            assert_eq!(rows, bound_sweep(n, r, 1..=r * r, Exec::Sequential).unwrap());
            for w in rows.windows(2) {
                assert!(w[1].grid_upper <= w[0].grid_upper);
                assert!(w[1].lower_opt <= w[0].lower_opt);
                assert!(w[1].partial_k > w[0].partial_k);
            }
            for row in &rows {
                assert!(row.is_consistent(), "{row:?}");
            }
        }
        assert!(bound_sweep(4, 2, 0..=3, Exec::default()).is_err());
        assert!(bound_sweep(4, 2, 1..=5, Exec::default()).is_err());
    }

    proptest::proptest! {
        #[test]
        fn reports_are_ordered(n in 2u64..80, r_frac in 0.0f64..1.0, k_frac in 0.0f64..1.0) {
            let r = 1 + ((n - 1) as f64 * r_frac) as u64;
            let k = 1 + ((r * r - 1) as f64 * k_frac) as u64;
            let profile = degree_profile(n as usize, r as usize).unwrap();
            let b = bound_report(&profile, k);
            proptest::prop_assert!(b.is_consistent(), "{b:?}");
        }
    }
}
