//! Monte-Carlo erasure recovery.
//!
//! Trial `t` draws its mask from `ChaCha8Rng::seed_from_u64(seed)` switched to
//! stream `t`, so results do not depend on thread count or trial order, and
//! two codes with the same `(n, r)` see exactly the same masks.

use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::erasure::{erasure_recoverable, peel_residual, ErasureMask};
use crate::codec::CodeInstance;
use crate::error::{param, Error, Result};
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MaskModel {
    /// Each cell erased independently with probability `p`.
    UniformP(f64),
    /// Exactly `t` distinct cells erased, uniformly.
    RandomCells(usize),
    /// Grid-bound pattern (black and gray) under random row and column
    /// permutations.
    Fig1 { a: usize, b: usize },
    /// Strip pattern (black and gray) under random row and column permutations.
    Fig2 { a: usize, b: usize },
}

impl fmt::Display for MaskModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaskModel::UniformP(p) => write!(f, "uniform-p:{p}"),
            MaskModel::RandomCells(t) => write!(f, "random-t-cells:{t}"),
            MaskModel::Fig1 { a, b } => write!(f, "fig1:{a},{b}"),
            MaskModel::Fig2 { a, b } => write!(f, "fig2:{a},{b}"),
        }
    }
}

impl FromStr for MaskModel {
    type Err = Error;

    /// `uniform-p:P`, `random-t-cells:T`, `fig1:A,B` or `fig2:A,B`.
    fn from_str(s: &str) -> Result<MaskModel> {
        let bad = || Error::Parse(format!("unknown mask model {s:?}"));
        let (name, arg) = s.split_once(':').ok_or_else(bad)?;
        let pair = |arg: &str| -> Result<(usize, usize)> {
            let (a, b) = arg.split_once(',').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        };
        match name {
            "uniform-p" => Ok(MaskModel::UniformP(arg.trim().parse().map_err(|_| bad())?)),
            "random-t-cells" => Ok(MaskModel::RandomCells(arg.trim().parse().map_err(|_| bad())?)),
            "fig1" => pair(arg).map(|(a, b)| MaskModel::Fig1 { a, b }),
            "fig2" => pair(arg).map(|(a, b)| MaskModel::Fig2 { a, b }),
            _ => Err(bad()),
        }
    }
}

impl MaskModel {
    pub fn validate(&self, n: usize, r: usize) -> Result<()> {
        match *self {
            MaskModel::UniformP(p) if !(0.0..=1.0).contains(&p) => {
                param(format!("erasure probability {p} is outside [0, 1]"))
            }
            MaskModel::RandomCells(t) if t > n * n => {
                param(format!("cannot erase {t} cells of an {n} x {n} grid"))
            }
            MaskModel::Fig1 { a, b } => ErasureMask::grid_pattern(n, r, a, b).map(drop),
            MaskModel::Fig2 { a, b } => ErasureMask::strip_pattern(n, r, a, b).map(drop),
            _ => Ok(()),
        }
    }

    /// Draws one mask. Assumes [`validate`](Self::validate) passed.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, r: usize, rng: &mut R) -> ErasureMask {
        match *self {
            MaskModel::UniformP(p) => {
                let flat = (0..n * n).map(|_| rng.random_bool(p)).collect();
                ErasureMask::from_flat(n, flat).expect("n * n cells")
            }
            MaskModel::RandomCells(t) => {
                let mut m = ErasureMask::empty(n);
                for c in index::sample(rng, n * n, t) {
                    m.set(c / n, c % n, true);
                }
                m
            }
            MaskModel::Fig1 { a, b } => {
                permute(ErasureMask::grid_pattern(n, r, a, b).expect("validated"), rng)
            }
            MaskModel::Fig2 { a, b } => {
                permute(ErasureMask::strip_pattern(n, r, a, b).expect("validated"), rng)
            }
        }
    }
}

fn permute<R: Rng + ?Sized>(mask: ErasureMask, rng: &mut R) -> ErasureMask {
    let n = mask.n();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    mask.permuted(&rows, &cols)
}

/// Deterministic generator for trial `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimStats {
    pub n_frak: usize,
    pub r: usize,
    pub k: usize,
    pub model: String,
    pub trials: u64,
    pub seed: u64,
    /// masks on which the rank oracle says the code recovers
    pub recoverable: u64,
    pub rate: f64,
    /// masks cleared by row and column peeling alone
    pub peel_recoverable: u64,
    pub peel_rate: f64,
    pub mean_erasures: f64,
}

pub fn simulate(
    code: &CodeInstance,
    model: MaskModel,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<SimStats> {
    let (n, r) = (code.n_frak(), code.r());
    model.validate(n, r)?;
    if trials == 0 {
        return param("simulation needs at least one trial");
    }
    let (rec, peel, erased) = exec.map_reduce(
        trials as usize,
        (0u64, 0u64, 0u64),
        |t| {
            let mask = model.sample(n, r, &mut trial_rng(seed, t as u64));
            let rec = erasure_recoverable(code, &mask).expect("mask matches the code");
            let peel = peel_residual(&mask, r).count() == 0;
            (rec as u64, peel as u64, mask.count() as u64)
        },
        |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
    );
    Ok(SimStats {
        n_frak: n,
        r,
        k: code.k(),
        model: model.to_string(),
        trials,
        seed,
        recoverable: rec,
        rate: rec as f64 / trials as f64,
        peel_recoverable: peel,
        peel_rate: peel as f64 / trials as f64,
        mean_erasures: erased as f64 / trials as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::build_code;
    use crate::linearized::instantiate_standard;

    #[test]
    fn parse_models() {
        assert_eq!("uniform-p:0.25".parse::<MaskModel>().unwrap(), MaskModel::UniformP(0.25));
        assert_eq!("random-t-cells:3".parse::<MaskModel>().unwrap(), MaskModel::RandomCells(3));
        assert_eq!("fig1:1,2".parse::<MaskModel>().unwrap(), MaskModel::Fig1 { a: 1, b: 2 });
        assert_eq!("fig2:0,3".parse::<MaskModel>().unwrap(), MaskModel::Fig2 { a: 0, b: 3 });
        for bad in ["uniform-p", "fig1:1", "bogus:1", "random-t-cells:x"] {
            assert!(bad.parse::<MaskModel>().is_err(), "{bad}");
        }
        let m = MaskModel::Fig1 { a: 1, b: 2 };
        assert_eq!(m.to_string().parse::<MaskModel>().unwrap(), m);
    }

    #[test]
    fn validation() {
        assert!(MaskModel::UniformP(1.5).validate(4, 2).is_err());
        assert!(MaskModel::RandomCells(17).validate(4, 2).is_err());
        assert!(MaskModel::Fig1 { a: 3, b: 0 }.validate(4, 2).is_err());
        assert!(MaskModel::Fig2 { a: 1, b: 1 }.validate(4, 4).is_err());
        assert!(MaskModel::Fig2 { a: 3, b: 3 }.validate(4, 2).is_ok());
    }

    #[test]
    fn zero_erasures_always_recover() {
        let pair = instantiate_standard(2).unwrap();
        let code = build_code(&pair, 2, 4).unwrap();
        let s = simulate(&code, MaskModel::RandomCells(0), 50, 1, Exec::default()).unwrap();
        assert_eq!(s.rate, 1.0);
        assert_eq!(s.peel_rate, 1.0);
        assert!(simulate(&code, MaskModel::RandomCells(0), 0, 1, Exec::default()).is_err());
    }

    #[test]
    fn grid_pattern_with_enough_cells_never_recovers() {
        let pair = instantiate_standard(3).unwrap();
        let code = build_code(&pair, 3, 7).unwrap();
        // ab = 3 >= r^2 - k + 1 = 3
        let s = simulate(&code, MaskModel::Fig1 { a: 1, b: 3 }, 100, 4, Exec::default()).unwrap();
        assert_eq!(s.recoverable, 0);
    }

    #[test]
    fn reproducible_and_thread_independent() {
        let pair = instantiate_standard(2).unwrap();
        let code = build_code(&pair, 3, 8).unwrap();
        let model = MaskModel::UniformP(0.3);
        let a = simulate(&code, model, 200, 11, Exec::Sequential).unwrap();
        let b = simulate(&code, model, 200, 11, Exec::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn subcode_recovers_at_least_as_often() {
        let pair = instantiate_standard(3).unwrap();
        let full = build_code(&pair, 3, 9).unwrap();
        let sub = build_code(&pair, 3, 8).unwrap();
        for p in [0.3, 0.5, 0.7] {
            let a = simulate(&full, MaskModel::UniformP(p), 200, 3, Exec::default()).unwrap();
            let b = simulate(&sub, MaskModel::UniformP(p), 200, 3, Exec::default()).unwrap();
            assert!(b.rate >= a.rate, "p={p}");
            assert_eq!(a.mean_erasures, b.mean_erasures);
        }
    }
}
