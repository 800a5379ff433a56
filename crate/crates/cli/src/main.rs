mod cache;
mod check;
mod commands;
mod output;
mod plot;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use recoupling::families::Family;
use recoupling::limits::DEFAULT_SCALES;
use recoupling::volume::DEFAULT_TOL;
use recoupling::{HalfInt, Representation};

use crate::cache::SpectrumCache;
use crate::check::{parse_base, LimitBase, Suite, SweepOptions};
use crate::output::{Format, Rendered};
use crate::plot::PlotKind;

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

fn parse_half(s: &str) -> Result<HalfInt, String> {
    s.parse::<HalfInt>().map_err(|e| e.to_string())
}

fn parse_rep(s: &str) -> Result<Representation, String> {
    s.parse::<Representation>().map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got {s:?}")),
    }
}

/// Exact SU(2) recoupling coefficients and volume-operator spectra.
///
/// Spins accept `3/2` or `1.5`.
#[derive(Parser, Debug)]
#[command(name = "recoupling", version)]
struct Cli {
    /// Output format (default: pretty; csv for plotdata).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Relative eigensolver tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL, value_parser = parse_tol)]
    tol: f64,
    /// Phase convention of the volume matrix: sym or antisym.
    #[arg(long, global = true, default_value = "antisym", value_parser = parse_rep)]
    rep: Representation,
    /// Largest twice-spin in sweeps.
    #[arg(long = "max-2j", global = true, default_value_t = 6, value_parser = clap::value_parser!(i64).range(1..))]
    max_2j: i64,
    /// Spectrum cache directory.
    #[arg(long, global = true, env = "RECOUPLING_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Bypass the spectrum cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads for sweeps.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Wigner 6j symbol {j1 j2 j3 / j4 j5 j6}.
    Sixj {
        #[arg(num_args = 6, value_parser = parse_half, allow_negative_numbers = true, required = true)]
        j: Vec<HalfInt>,
    },
    /// Wigner 3j symbol (j1 j2 j3; m1 m2 m3).
    Threej {
        #[arg(num_args = 6, value_parser = parse_half, allow_negative_numbers = true, required = true)]
        j: Vec<HalfInt>,
    },
    /// Heron couplings alpha_l of the quadrilateral (a, b, c, d).
    Alpha {
        #[arg(num_args = 4, value_parser = parse_half, required = true)]
        sides: Vec<HalfInt>,
        #[arg(long, value_parser = parse_half)]
        ell: Option<HalfInt>,
    },
    /// Volume-operator spectrum of (a, b, c, d).
    Spectrum {
        #[arg(num_args = 4, value_parser = parse_half, required = true)]
        sides: Vec<HalfInt>,
        /// Also print the eigenfunctions.
        #[arg(long)]
        vectors: bool,
    },
    /// Recoupling overlaps <l~|l>, or one of the six overlap families.
    Overlap {
        #[arg(num_args = 4, value_parser = parse_half, required = true)]
        sides: Vec<HalfInt>,
        #[arg(long, value_parser = parse_half)]
        ell: Option<HalfInt>,
        #[arg(long, value_parser = parse_half)]
        ell_tilde: Option<HalfInt>,
        /// I.A, I.B, II.A, II.B, III.A or III.B.
        #[arg(long, value_parser = parse_family, conflicts_with_all = ["ell", "ell_tilde"])]
        family: Option<Family>,
    },
    /// Regge image of a 6j argument set (six values) or of a quadrilateral (four).
    Regge {
        #[arg(num_args = 4..=6, value_parser = parse_half, required = true)]
        j: Vec<HalfInt>,
    },
    /// Verification sweep over gauge-fixed quadrilaterals.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        /// Limit bases, e.g. iia:3/2,2,2s+1/2,2s (repeatable; limits only).
        #[arg(long)]
        base: Vec<String>,
        /// Comma-separated scales (limits only).
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..))]
        scales: Vec<u32>,
    },
    /// Plot-ready CSV.
    Plotdata {
        #[arg(value_enum)]
        kind: PlotKind,
        /// Quadrilateral sides (eigenfunctions, alpha-profile).
        #[arg(value_parser = parse_half)]
        sides: Vec<HalfInt>,
        #[arg(long)]
        base: Vec<String>,
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..))]
        scales: Vec<u32>,
    },
}

struct Done {
    rendered: Rendered,
    code: u8,
}

impl From<Rendered> for Done {
    fn from(rendered: Rendered) -> Self {
        Done { rendered, code: 0 }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn limit_bases(specs: &[String]) -> anyhow::Result<Vec<LimitBase>> {
    if specs.is_empty() {
        return Ok(LimitBase::defaults());
    }
    specs.iter().map(|s| parse_base(s).map_err(|e| usage(format!("{e:#}")))).collect()
}

fn four(sides: &[HalfInt]) -> anyhow::Result<recoupling::Quadrilateral> {
    if sides.len() != 4 {
        return Err(usage(format!("expected four sides, got {}", sides.len())));
    }
    Ok(commands::quad(sides)?)
}

fn run(cli: &Cli) -> anyhow::Result<Done> {
    let cache = match (&cli.cache_dir, cli.no_cache) {
        (Some(dir), false) => SpectrumCache::open(dir),
        _ => None,
    };
    let jobs = cli.jobs.map(|j| j as usize);
    Ok(match &cli.command {
        Command::Sixj { j } => commands::sixj(j)?.into(),
        Command::Threej { j } => commands::threej(j)?.into(),
        Command::Alpha { sides, ell } => commands::alpha_cmd(&four(sides)?, *ell)?.into(),
        Command::Spectrum { sides, vectors } => {
            let q = four(sides)?;
            let (s, hit) = commands::cached_spectrum(&q, cli.rep, cli.tol, cache.as_ref())?;
            if hit {
                eprintln!("served from cache");
            }
            commands::spectrum_cmd(&s, *vectors)?.into()
        }
        Command::Overlap { sides, ell, ell_tilde, family } => {
            let q = four(sides)?;
            match family {
                Some(f) => commands::family_cmd(&q, *f, cli.rep, cli.tol)?.into(),
                None => commands::overlap_cmd(&q, *ell, *ell_tilde)?.into(),
            }
        }
        Command::Regge { j } => match j.len() {
            6 => commands::regge_sixj(j)?.into(),
            4 => commands::regge_quad(&four(j)?)?.into(),
            n => return Err(usage(format!("regge takes four sides or six 6j entries, got {n}"))),
        },
        Command::Check { suite, base, scales } => {
            let opts = SweepOptions {
                max_twice: cli.max_2j,
                rep: cli.rep,
                tol: cli.tol,
                jobs,
            };
            let outcome = match suite {
                Suite::Families => check::families(&opts)?,
                Suite::Algebra => check::algebra(&opts)?,
                Suite::Triangular => check::triangular(&opts)?,
                Suite::Limits => {
                    let scales = if scales.is_empty() { DEFAULT_SCALES.to_vec() } else { scales.clone() };
                    check::limits(&limit_bases(base)?, &scales, jobs)?
                }
            };
            Done {
                rendered: outcome.rendered,
                code: if outcome.pass { 0 } else { EXIT_FAILED_CHECK },
            }
        }
        Command::Plotdata { kind, sides, base, scales } => match kind {
            PlotKind::Eigenfunctions => {
                let q = four(sides)?;
                let (s, _) = commands::cached_spectrum(&q, cli.rep, cli.tol, cache.as_ref())?;
                plot::eigenfunctions(&s).into()
            }
            PlotKind::AlphaProfile => plot::alpha_profile(&four(sides)?)?.into(),
            PlotKind::Convergence => {
                if !sides.is_empty() {
                    return Err(usage("convergence takes --base, not positional sides"));
                }
                let scales = if scales.is_empty() { DEFAULT_SCALES.to_vec() } else { scales.clone() };
                plot::convergence(&limit_bases(base)?, &scales).into()
            }
        },
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<recoupling::Error>() {
        Some(recoupling::Error::Domain(_)) => EXIT_DOMAIN,
        Some(recoupling::Error::Parse { .. }) => EXIT_USAGE,
        Some(recoupling::Error::Numeric(_) | recoupling::Error::Structural(_)) => EXIT_NUMERIC,
        None => EXIT_FAILED_CHECK,
    }
}

/// `-3/2` → `-1.5` and `-4/1` → `-4`, so that negative fractions read as
/// numbers rather than flags.
fn negative_fractions(arg: String) -> String {
    let Some((num, den)) = arg.strip_prefix('-').and_then(|r| r.split_once('/')) else {
        return arg;
    };
    match (num.parse::<u64>(), den) {
        (Ok(n), "1") => format!("-{n}"),
        (Ok(n), "2") => format!("-{}.{}", n / 2, if n % 2 == 1 { "5" } else { "0" }),
        _ => arg,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(std::env::args().map(negative_fractions)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let default_format = match cli.command {
        Command::Plotdata { .. } => Format::Csv,
        _ => Format::Pretty,
    };
    let format = cli.format.unwrap_or(default_format);
    match run(&cli).and_then(|d| Ok((d.rendered.bytes(format)?, d.code))) {
        Ok((bytes, code)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(&bytes).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(EXIT_FAILED_CHECK);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
