//! Self-check suites behind `rsprod verify`.
//!
//! `Fast` covers fields with `q` in {2, 4}; `Full` adds the `q = 8` row
//! echelon oracle and exhaustive distances at `k = r^2 - 1` wherever they fit
//! the enumeration budget.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    double_root_check, erasure_recoverable, exhaustive_distance_with, peel_decode, ErasureMask,
};
use crate::bounds::{bound_sweep, exact_distance, grid_upper, lower_opt, rs_degree_lower};
use crate::codec::build_code_with;
use crate::degrees::{degree_profile, ref_degree_oracle};
use crate::error::Result;
use crate::field::{poly_compose, BiPoly, Elem, FieldCtx};
use crate::linearized::{instantiate_with, LinearizedPair};
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail { expected: String, got: String },
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn record(&mut self, suite: &'static str, name: impl Into<String>, outcome: Outcome) {
        self.checks.push(Check { suite, name: name.into(), outcome });
    }

    fn expect_eq<T: fmt::Debug + PartialEq>(
        &mut self,
        suite: &'static str,
        name: impl Into<String>,
        expected: T,
        got: T,
    ) {
        let outcome = if expected == got {
            Outcome::Pass
        } else {
            Outcome::Fail { expected: format!("{expected:?}"), got: format!("{got:?}") }
        };
        self.record(suite, name, outcome);
    }

    fn expect(
        &mut self,
        suite: &'static str,
        name: impl Into<String>,
        ok: bool,
        detail: impl FnOnce() -> String,
    ) {
        let outcome =
            if ok { Outcome::Pass } else { Outcome::Fail { expected: "true".into(), got: detail() } };
        self.record(suite, name, outcome);
    }

    fn error(&mut self, suite: &'static str, name: impl Into<String>, err: impl fmt::Display) {
        self.record(suite, name, Outcome::Fail { expected: "no error".into(), got: err.to_string() });
    }

    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| matches!(c.outcome, Outcome::Fail { .. }))
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for check in &self.checks {
            match check.outcome {
                Outcome::Pass => c.0 += 1,
                Outcome::Fail { .. } => c.1 += 1,
                Outcome::Skipped(_) => c.2 += 1,
            }
        }
        c
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut suites: Vec<&str> = Vec::new();
        for c in &self.checks {
            if !suites.contains(&c.suite) {
                suites.push(c.suite);
            }
        }
        for s in suites {
            let of_suite: Vec<&Check> = self.checks.iter().filter(|c| c.suite == s).collect();
            let failed = of_suite.iter().filter(|c| matches!(c.outcome, Outcome::Fail { .. })).count();
            let skipped: Vec<&&Check> =
                of_suite.iter().filter(|c| matches!(c.outcome, Outcome::Skipped(_))).collect();
            let status = if failed == 0 { "ok" } else { "FAILED" };
            writeln!(
                f,
                "{s:<10} {status:<6} {} checks, {failed} failed, {} skipped",
                of_suite.len(),
                skipped.len()
            )?;
            for c in skipped {
                if let Outcome::Skipped(why) = &c.outcome {
                    writeln!(f, "    skipped {}: {why}", c.name)?;
                }
            }
        }
        if let Some(c) = self.first_failure() {
            if let Outcome::Fail { expected, got } = &c.outcome {
                writeln!(f, "first failure: [{}] {}", c.suite, c.name)?;
                writeln!(f, "  - expected: {expected}")?;
                writeln!(f, "  + got:      {got}")?;
            }
        }
        let (p, fl, sk) = self.counts();
        write!(f, "{p} passed, {fl} failed, {sk} skipped")
    }
}

/// What to run. `field_poly` replaces the default reduction polynomial for
/// every field whose degree matches it; it is not checked for
/// irreducibility, so a bad value shows up as failed field axioms.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub level: Level,
    pub field_poly: Option<u64>,
    pub exec: Exec,
    pub seed: u64,
}

impl Options {
    pub fn new(level: Level) -> Options {
        Options { level, field_poly: None, exec: Exec::default(), seed: 1 }
    }

    fn poly_for(&self, m: u32) -> Option<u64> {
        self.field_poly.filter(|&p| 63u32.saturating_sub(p.leading_zeros()) == m)
    }
}

pub fn run(opts: &Options) -> Report {
    let mut report = Report::default();
    field_suite(opts, &mut report);
    let q_logs: &[u32] = match opts.level {
        Level::Fast => &[1, 2],
        Level::Full => &[1, 2, 3],
    };
    let mut pairs = Vec::new();
    for &e in q_logs {
        match instantiate_with(e, opts.poly_for(2 * e), None) {
            Ok(pair) => pairs.push(pair),
            Err(err) => report.error("linearized", format!("instantiate q = {}", 1u64 << e), err),
        }
    }
    for pair in &pairs {
        linearized_suite(pair, &mut report);
        degree_suite(pair, &mut report);
        compose_suite(pair, opts, &mut report);
    }
    bounds_suite(opts, &mut report);
    for pair in pairs.iter().filter(|p| p.q() <= 4) {
        distance_suite(pair, opts, &mut report);
        erasure_suite(pair, opts, &mut report);
        roots_suite(pair, opts, &mut report);
    }
    if opts.level == Level::Full {
        heavy_parity_suite(&pairs, opts, &mut report);
    }
    report
}

fn field_suite(opts: &Options, report: &mut Report) {
    let degrees: &[u32] = match opts.level {
        Level::Fast => &[2, 4, 8],
        Level::Full => &[2, 4, 6, 8, 10],
    };
    let mut ctxs: Vec<FieldCtx> = Vec::new();
    for &m in degrees {
        match opts.poly_for(m) {
            Some(p) => match FieldCtx::new_unchecked(m, p) {
                Ok(c) => ctxs.push(c),
                Err(e) => report.error("field", format!("context M = {m}"), e),
            },
            None => ctxs.push(FieldCtx::new(m, None).expect("default field")),
        }
    }
    if let Some(p) = opts.field_poly {
        let m = 63u32.saturating_sub(p.leading_zeros());
        if !degrees.contains(&m) {
            match FieldCtx::new_unchecked(m, p) {
                Ok(c) => ctxs.push(c),
                Err(e) => report.error("field", format!("context M = {m}"), e),
            }
        }
    }
    for ctx in ctxs {
        let m = ctx.extension_degree();
        let name = format!("axioms GF(2^{m}) poly {:#x}", ctx.reduction_poly());
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut bad: Option<String> = None;
        for _ in 0..2000 {
            let (a, b, c) = (ctx.random(&mut rng), ctx.random(&mut rng), ctx.random(&mut rng));
            if ctx.mul(ctx.mul(a, b), c) != ctx.mul(a, ctx.mul(b, c)) {
                bad = Some(format!("(a*b)*c != a*(b*c) for a = {a:?}, b = {b:?}, c = {c:?}"));
            } else if ctx.mul(a, b + c) != ctx.mul(a, b) + ctx.mul(a, c) {
                bad = Some(format!("a*(b+c) != a*b + a*c for a = {a:?}, b = {b:?}, c = {c:?}"));
            } else if !a.is_zero() && ctx.inv(a).map(|i| ctx.mul(a, i)) != Ok(Elem::ONE) {
                bad = Some(format!("field axiom violated: a * inv(a) != 1 for a = {a:?}"));
            }
            if bad.is_some() {
                break;
            }
        }
        if bad.is_none() {
            // every nonzero element must be invertible
            bad = ctx
                .elements()
                .skip(1)
                .take(1 << 12)
                .find(|&a| ctx.inv(a).map(|i| ctx.mul(a, i)) != Ok(Elem::ONE))
                .map(|a| format!("field axiom violated: a * inv(a) != 1 for a = {a:?}"));
        }
        report.expect("field", name, bad.is_none(), || bad.unwrap_or_default());
    }
}

fn linearized_suite(pair: &LinearizedPair, report: &mut Report) {
    let q = pair.q();
    let ctx = pair.ctx();
    let n = pair.n_frak();
    report.expect_eq(
        "linearized",
        format!("q = {q}: f + g = x"),
        crate::field::UniPoly::x(),
        pair.f_poly().add(pair.g_poly()),
    );
    report.expect_eq(
        "linearized",
        format!("q = {q}: |Zf|, |Zg|"),
        (n, n),
        (pair.zf().len(), pair.zg().len()),
    );
    let common: Vec<Elem> = pair.zf().iter().filter(|a| pair.zg().contains(a)).copied().collect();
    report.expect_eq("linearized", format!("q = {q}: Zf and Zg meet in 0"), vec![Elem::ZERO], common);
    let f_vanishes = pair.zf().iter().all(|&a| pair.f_poly().eval(ctx, a).is_zero())
        && pair.zg().iter().all(|&a| pair.g_poly().eval(ctx, a).is_zero());
    report.expect("linearized", format!("q = {q}: root spaces"), f_vanishes, || {
        "f or g nonzero on its root space".into()
    });
    let mut pts = pair.eval_points().to_vec();
    pts.sort();
    pts.dedup();
    report.expect_eq(
        "linearized",
        format!("q = {q}: Zf + Zg covers GF(q^2)"),
        ctx.order() as usize,
        pts.len(),
    );
}

fn degree_suite(pair: &LinearizedPair, report: &mut Report) {
    let n = pair.n_frak();
    for r in 1..=n {
        let name = format!("q = {}, r = {r}: row echelon degrees", pair.q());
        match (ref_degree_oracle(pair, r), degree_profile(n, r)) {
            (Ok(got), Ok(p)) => report.expect_eq("degrees", name, p.degree_set, got),
            (Err(e), _) | (_, Err(e)) => report.error("degrees", name, e),
        }
    }
}

fn compose_suite(pair: &LinearizedPair, opts: &Options, report: &mut Report) {
    let ctx = pair.ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n = pair.n_frak();
    let trials = if opts.level == Level::Fast { 20 } else { 100 };
    for r in 1..=n {
        let ok = (0..trials).all(|_| {
            let s = BiPoly::random(ctx, r, r, &mut rng);
            let h = poly_compose(ctx, &s, pair.g_poly(), pair.f_poly());
            pair.zf().iter().all(|&b| pair.zg().iter().all(|&c| h.eval(ctx, b + c) == s.eval(ctx, b, c)))
        });
        report.expect(
            "compose",
            format!("q = {}, r = {r}: s(g, f) at beta + gamma = s(beta, gamma)", pair.q()),
            ok,
            || "composition disagrees with bivariate evaluation".into(),
        );
    }
}

fn bounds_suite(opts: &Options, report: &mut Report) {
    for (n, r) in [(32u64, 8u64), (32, 16), (32, 25), (128, 64)] {
        match bound_sweep(n, r, 1..=r * r, opts.exec) {
            Ok(rows) => {
                let bad = rows.iter().find(|b| !b.is_consistent());
                report.expect(
                    "bounds",
                    format!("({n}, {r}): lower <= upper, exact matches"),
                    bad.is_none(),
                    || format!("{bad:?}"),
                );
                let monotone = rows.windows(2).all(|w| {
                    w[1].grid_upper <= w[0].grid_upper
                        && w[1].lower_opt <= w[0].lower_opt
                        && w[1].partial_k > w[0].partial_k
                });
                report.expect("bounds", format!("({n}, {r}): monotone in k"), monotone, || {
                    "not monotone".into()
                });
                let d = n - r + 1;
                report.expect_eq(
                    "bounds",
                    format!("({n}, {r}): lower_opt at k = r^2"),
                    d * d,
                    rows.last().unwrap().lower_opt,
                );
            }
            Err(e) => report.error("bounds", format!("({n}, {r}) sweep"), e),
        }
    }
    let p = degree_profile(128, 64).expect("valid");
    report.expect_eq(
        "bounds",
        "lower_opt(128, 64, 4032)",
        4940,
        lower_opt(128, 64, 4032, p.partial(4032) as u64).0,
    );
    report.expect_eq("bounds", "exact(128, 64, r^2)", Some(4225), exact_distance(128, 64, 4096));
    report.expect_eq("bounds", "grid_upper(32, 8, 63)", (650, (1, 2)), grid_upper(32, 8, 63));
    for (n, r) in [(32u64, 16u64), (128, 64)] {
        let p = degree_profile(n as usize, r as usize).expect("valid");
        for bp in p.breakpoints.iter().filter(|b| 100 * b.k as u64 <= 33 * r * r) {
            let lo = rs_degree_lower(n, bp.partial as u64);
            let up = grid_upper(n, r, bp.k as u64).0;
            report.expect(
                "bounds",
                format!("({n}, {r}) k_t = {}: 10 * rs_degree_lower >= 9 * grid_upper", bp.k),
                10 * lo >= 9 * up,
                || format!("rs_degree_lower = {lo}, grid_upper = {up}"),
            );
        }
    }
}

/// Exhaustive distance matches the closed forms where known and is never
/// below `lower_opt`.
fn distance_suite(pair: &LinearizedPair, opts: &Options, report: &mut Report) {
    let n = pair.n_frak();
    let budget: u128 = if opts.level == Level::Fast { 1 << 24 } else { 1 << 28 };
    for r in 1..=n {
        for k in 1..=r * r {
            let name = format!("q = {}, r = {r}, k = {k}", pair.q());
            let code = match build_code_with(pair, r, k, opts.exec) {
                Ok(c) => c,
                Err(e) => {
                    report.error("distance", name, e);
                    continue;
                }
            };
            let d = match exhaustive_distance_with(&code, budget, opts.exec) {
                Ok((d, _)) => d as u64,
                Err(e) => {
                    report.record("distance", name, Outcome::Skipped(e.to_string()));
                    continue;
                }
            };
            let (n64, r64, k64) = (n as u64, r as u64, k as u64);
            let partial = code.profile().partial(k) as u64;
            let lower = lower_opt(n64, r64, k64, partial).0;
            report.expect("distance", format!("{name}: d >= lower_opt"), d >= lower, || {
                format!("d = {d}, lower_opt = {lower}")
            });
            if let Some(e) = exact_distance(n64, r64, k64) {
                report.expect_eq("distance", format!("{name}: d = exact"), e, d);
            }
        }
    }
}

fn random_mask(n: usize, rng: &mut ChaCha8Rng) -> ErasureMask {
    use rand::Rng;
    let p = rng.random_range(0.0..1.0);
    ErasureMask::from_flat(n, (0..n * n).map(|_| rng.random_bool(p)).collect()).expect("n * n cells")
}

fn erasure_suite(pair: &LinearizedPair, opts: &Options, report: &mut Report) {
    let ctx = pair.ctx();
    let n = pair.n_frak();
    let masks = if opts.level == Level::Fast { 100 } else { 1000 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for r in 1..=n {
        let ks: std::collections::BTreeSet<usize> =
            [1, r * r / 2 + 1, r * r - 1, r * r].into_iter().filter(|&k| k > 0).collect();
        for k in ks {
            let name = format!("q = {}, r = {r}, k = {k}: peeling + solve agrees with rank", pair.q());
            let code = match build_code_with(pair, r, k, opts.exec) {
                Ok(c) => c,
                Err(e) => {
                    report.error("erasure", name, e);
                    continue;
                }
            };
            let mut failure = None;
            for _ in 0..masks {
                let mask = random_mask(n, &mut rng);
                let msg: Vec<Elem> = (0..k).map(|_| ctx.random(&mut rng)).collect();
                let word = code.encode(&msg).expect("message length k");
                let outcome = peel_decode(&code, &word, &mask).map(|o| o.is_recovered());
                let rank = erasure_recoverable(&code, &mask);
                if outcome != rank {
                    failure = Some(format!(
                        "mask {:?}: decoder {outcome:?}, rank oracle {rank:?}",
                        mask.to_rle().rle
                    ));
                    break;
                }
            }
            report.expect("erasure", name, failure.is_none(), || failure.unwrap_or_default());
        }
    }
}

fn roots_suite(pair: &LinearizedPair, opts: &Options, report: &mut Report) {
    let ctx = pair.ctx();
    let n = pair.n_frak();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for r in 1..=n {
        let code = match build_code_with(pair, r, r * r, opts.exec) {
            Ok(c) => c,
            Err(e) => {
                report.error("roots", format!("q = {}, r = {r}", pair.q()), e);
                continue;
            }
        };
        let ok = (0..50).all(|_| {
            let msg: Vec<Elem> = (0..r * r).map(|_| ctx.random_nonzero(&mut rng)).collect();
            double_root_check(&code, &msg).unwrap_or(false)
        });
        report.expect(
            "roots",
            format!("q = {}, r = {r}: double roots at zero crossings", pair.q()),
            ok,
            || "h or h' nonzero at a crossing".into(),
        );
    }
}

/// `k = r^2 - 1` exhaustive distances equal `delta (delta + 1)`.
fn heavy_parity_suite(pairs: &[LinearizedPair], opts: &Options, report: &mut Report) {
    let budget: u128 = 1 << 32;
    for pair in pairs {
        let n = pair.n_frak();
        for r in 2..=n {
            let k = r * r - 1;
            let name = format!("q = {}, r = {r}, k = r^2 - 1: d = delta (delta + 1)", pair.q());
            let result: Result<usize> = build_code_with(pair, r, k, opts.exec)
                .and_then(|code| exhaustive_distance_with(&code, budget, opts.exec))
                .map(|(d, _)| d);
            let delta = n - r + 1;
            match result {
                Ok(d) => report.expect_eq("heavy", name, delta * (delta + 1), d),
                Err(crate::error::Error::BudgetExceeded { .. }) => {
                    report.record("heavy", name, Outcome::Skipped("over the 2^32 enumeration budget".into()))
                }
                Err(e) => report.error("heavy", name, e),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suite_passes() {
        let report = run(&Options::new(Level::Fast));
        assert!(report.passed(), "{report}");
        assert!(report.counts().0 > 100);
    }

    #[test]
    fn reducible_poly_fails_field_axioms() {
        let mut opts = Options::new(Level::Fast);
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        opts.field_poly = Some(0b10101);
        let report = run(&opts);
        let first = report.first_failure().expect("a failure");
        assert_eq!(first.suite, "field");
        assert!(report.to_string().contains("field axiom"), "{report}");
    }
}
