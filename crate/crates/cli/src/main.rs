//! `rsprod`: bound tables, figure data, code construction and the
//! exhaustive oracles from the command line.
//!
//! Exit status: 0 on success, 1 when a verification fails or an I/O error
//! occurs, 2 for invalid arguments.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use rsprod::analysis::erasure::{peel_decode, MaskRle};
use rsprod::analysis::{
    erasure_recoverable, exhaustive_distance_with, sampled_distance, simulate, ErasureMask, MaskModel,
    DEFAULT_BUDGET,
};
use rsprod::bounds::{bound_sweep, exact_distance, lower_opt};
use rsprod::export::{
    bounds_csv, bounds_json, figure_csv, figure_points, generator_csv, spectrum_csv, to_json, Figure,
};
use rsprod::verify::{self, Level};
use rsprod::{build_code_with, degree_profile, instantiate_with, CodeInstance, Elem, Error, Exec};

/// Enumerations above this many messages print a runtime warning.
const BUDGET_WARN: u128 = 1 << 32;

#[derive(Parser, Debug)]
#[command(
    name = "rsprod",
    version,
    about = "Subcodes of Reed-Solomon product codes: bounds, construction, oracles"
)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// `a..b` (inclusive) or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct KRange(u64, u64);

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> Result<KRange, String> {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("invalid k {t:?}"));
        match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range {s}"));
                }
                Ok(KRange(a, b))
            }
            None => num(s).map(|k| KRange(k, k)),
        }
    }
}

fn parse_hex_poly(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let t = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u64::from_str_radix(t, 16).map_err(|_| format!("invalid hex polynomial {s:?}"))
}

/// Field and code selection shared by the code-level commands.
#[derive(clap::Args, Debug)]
struct CodeArgs {
    /// q = 2^e; the code lives in GF(q^2) with n = q.
    #[arg(long = "q-log")]
    q_log: u32,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    k: usize,
    /// Reduction polynomial of GF(q^2) in hex (default: smallest irreducible).
    #[arg(long = "field-poly", value_parser = parse_hex_poly)]
    field_poly: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All distance bounds for each k.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: u64,
        /// Single k or a range a..b (default 1..r^2).
        #[arg(long)]
        k: Option<KRange>,
    },
    /// Attainable degrees, breakpoints and intervals.
    Profile {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Builds C_k and writes its generator matrix.
    Build {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Encodes a message given as comma-separated hex symbols.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        msg: String,
    },
    /// Minimum distance: exhaustive within the budget, otherwise sampled.
    Distance {
        #[command(flatten)]
        code: CodeArgs,
        /// Largest number of messages to enumerate.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        /// Random messages to try when the budget is exceeded.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the weight spectrum instead of the summary.
        #[arg(long)]
        spectrum: bool,
    },
    /// Monte-Carlo erasure recovery, or a single mask given as RLE JSON.
    ErasureSim {
        #[command(flatten)]
        code: CodeArgs,
        /// uniform-p:P, random-t-cells:T, fig1:A,B or fig2:A,B
        #[arg(long, default_value = "uniform-p:0.1")]
        model: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Evaluate this mask ({"n_frak": n, "rle": "..."}) instead of sampling.
        #[arg(long)]
        mask: Option<PathBuf>,
    },
    /// Runs the self-check suites.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
        /// Use this reduction polynomial (hex) wherever its degree fits,
        /// without checking irreducibility.
        #[arg(long = "field-poly", value_parser = parse_hex_poly)]
        field_poly: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Bound curves for one of the comparison figures, in long format.
    Figure {
        /// eg1 (32,8), eg2a (32,16), eg2b (128,64) or eg3 (32,25)
        #[arg(long)]
        name: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

/// A failure that maps to exit status 1 rather than 2.
#[derive(Debug)]
struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for VerificationFailed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<VerificationFailed>() || err.is::<std::io::Error>() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Inconsistent(_)) | Some(Error::ZeroInverse) => 1,
        _ => 2,
    }
}

fn setup_threads(threads: Option<usize>) -> anyhow::Result<Exec> {
    if threads == Some(0) {
        bail!(Error::Param("--threads must be at least 1".into()));
    }
    #[cfg(feature = "parallel")]
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    }
    Ok(Exec::default())
}

fn code_for(args: &CodeArgs, exec: Exec) -> anyhow::Result<CodeInstance> {
    let pair = instantiate_with(args.q_log, args.field_poly, None)?;
    Ok(build_code_with(&pair, args.r, args.k, exec)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let exec = setup_threads(cli.threads)?;
    let fmt = cli.format;
    let text = match cli.command {
        Command::Bounds { n, r, k } => {
            if r == 0 || r > n {
                bail!(Error::Param(format!("need 1 <= r <= n, got r = {r}, n = {n}")));
            }
            let KRange(a, b) = k.unwrap_or(KRange(1, r * r));
            let rows = bound_sweep(n, r, a..=b, exec)?;
            match fmt {
                Format::Csv => bounds_csv(&rows)?,
                Format::Json => bounds_json(&rows)?,
            }
        }
        Command::Profile { n, r } => {
            let p = degree_profile(n, r)?;
            match fmt {
                Format::Json => to_json(&p)?,
                Format::Csv => {
                    let mut s = String::from("k,partial_k,t,breakpoint\n");
                    for k in 1..=p.dimension() {
                        let t = p.breakpoints.iter().find(|b| b.k >= k).map_or(0, |b| b.t);
                        let bp = p.breakpoint_for(k).is_some() as u8;
                        s.push_str(&format!("{k},{},{t},{bp}\n", p.partial(k)));
                    }
                    s
                }
            }
        }
        Command::Build { code } => {
            let c = code_for(&code, exec)?;
            match fmt {
                Format::Csv => generator_csv(&c)?,
                Format::Json => {
                    let g = c.generator();
                    let rows: Vec<Vec<String>> =
                        (0..g.rows()).map(|i| g.row(i).iter().map(|e| e.to_hex()).collect()).collect();
                    let degrees: Vec<Option<usize>> = c.basis_polys().iter().map(|p| p.degree()).collect();
                    to_json(&json!({
                        "header": c.export_header(),
                        "pair": c.pair().to_json(),
                        "basis_degrees": degrees,
                        "generator": rows,
                    }))?
                }
            }
        }
        Command::Encode { code, msg } => {
            let c = code_for(&code, exec)?;
            let msg: Vec<Elem> =
                msg.split(',').map(|h| Elem::from_hex(h.trim())).collect::<Result<_, _>>()?;
            let word = c.encode(&msg)?;
            let n = c.n_frak();
            let grid: Vec<Vec<String>> =
                word.chunks(n).map(|row| row.iter().map(|e| e.to_hex()).collect()).collect();
            match fmt {
                Format::Csv => grid.iter().map(|row| row.join(",") + "\n").collect(),
                Format::Json => to_json(&json!({ "header": c.export_header(), "grid": grid }))?,
            }
        }
        Command::Distance { code, budget, samples, seed, spectrum } => {
            let c = code_for(&code, exec)?;
            if budget > BUDGET_WARN {
                eprintln!("warning: budget {budget} exceeds 2^32 messages; exhaustive runs may take hours");
            }
            let (n, r, k) = (c.n_frak() as u64, c.r() as u64, c.k() as u64);
            let low = lower_opt(n, r, k, c.profile().partial(c.k()) as u64).0;
            let exact = exact_distance(n, r, k);
            match exhaustive_distance_with(&c, budget, exec) {
                Ok((d, spec)) if spectrum => match fmt {
                    Format::Csv => spectrum_csv(&spec)?,
                    Format::Json => to_json(&json!({ "distance": d, "spectrum": spec }))?,
                },
                Ok((d, _)) => {
                    let cmp = if d as u64 == low { "equal" } else { "exceeds" };
                    distance_summary(fmt, &c, "exhaustive", d, low, exact, cmp)?
                }
                Err(Error::BudgetExceeded { needed, .. }) => {
                    if spectrum {
                        bail!(Error::Param(format!(
                            "a full spectrum needs {needed} messages, over --budget"
                        )));
                    }
                    eprintln!(
                        "note: {needed} messages exceed the budget; sampling {samples} random messages"
                    );
                    let d = sampled_distance(&c, samples, seed)?;
                    distance_summary(fmt, &c, "sampled", d, low, exact, "inconclusive")?
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::ErasureSim { code, model, trials, seed, mask } => {
            let c = code_for(&code, exec)?;
            match mask {
                Some(path) => {
                    let text =
                        fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let rle: MaskRle =
                        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("mask file: {e}")))?;
                    let m = ErasureMask::from_rle(&rle)?;
                    let recoverable = erasure_recoverable(&c, &m)?;
                    let zero = vec![Elem::ZERO; c.length()];
                    let peel = peel_decode(&c, &zero, &m)?;
                    let peeled_only =
                        matches!(peel, rsprod::analysis::PeelOutcome::Recovered { peeled_only: true, .. });
                    let v = json!({
                        "n_frak": c.n_frak(), "r": c.r(), "k": c.k(),
                        "erasures": m.count(), "recoverable": recoverable, "peeling_alone": peeled_only,
                    });
                    match fmt {
                        Format::Json => to_json(&v)?,
                        Format::Csv => format!(
                            "n_frak,r,k,erasures,recoverable,peeling_alone\n{},{},{},{},{recoverable},{peeled_only}\n",
                            c.n_frak(), c.r(), c.k(), m.count()
                        ),
                    }
                }
                None => {
                    let model: MaskModel = model.parse()?;
                    let s = simulate(&c, model, trials, seed, exec)?;
                    match fmt {
                        Format::Json => to_json(&s)?,
                        Format::Csv => format!(
                            "n_frak,r,k,model,trials,seed,recoverable,rate,peel_recoverable,peel_rate,mean_erasures\n{},{},{},\"{}\",{},{},{},{},{},{},{}\n",
                            s.n_frak, s.r, s.k, s.model, s.trials, s.seed, s.recoverable, s.rate, s.peel_recoverable, s.peel_rate, s.mean_erasures
                        ),
                    }
                }
            }
        }
        Command::Verify { level, field_poly, seed } => {
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            let opts = verify::Options { level, field_poly, exec, seed };
            let report = verify::run(&opts);
            emit(&cli.out, &format!("{report}\n"))?;
            if !report.passed() {
                return Err(VerificationFailed.into());
            }
            return Ok(());
        }
        Command::Figure { name } => {
            let fig: Figure = name.parse()?;
            let rows = fig.sweep(exec)?;
            match fmt {
                Format::Csv => figure_csv(&rows)?,
                Format::Json => to_json(&figure_points(&rows))?,
            }
        }
    };
    emit(&cli.out, &text)
}

fn distance_summary(
    fmt: Format,
    c: &CodeInstance,
    method: &str,
    d: usize,
    lower: u64,
    exact: Option<u64>,
    vs_lower: &str,
) -> anyhow::Result<String> {
    Ok(match fmt {
        Format::Json => to_json(&json!({
            "q": c.pair().q(), "r": c.r(), "k": c.k(), "method": method,
            "distance": d, "lower_opt": lower, "exact": exact, "vs_lower_opt": vs_lower,
        }))?,
        Format::Csv => format!(
            "q,r,k,method,distance,lower_opt,exact,vs_lower_opt\n{},{},{},{method},{d},{lower},{},{vs_lower}\n",
            c.pair().q(),
            c.r(),
            c.k(),
            exact.map(|e| e.to_string()).unwrap_or_default()
        ),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.is::<VerificationFailed>() {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
