//! `apwen` command-line driver.

mod report;
mod selftest;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use apwen::recgen::{EtaCase, PsiTable, PsiValue, Strategy};
use apwen::{named, Pattern};

#[derive(Parser, Debug)]
#[command(name = "apwen", version, about = "Decide the Apwenian property of ±1 product patterns")]
struct Cli {
    /// Worker threads; never changes any output byte.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    /// Use the dynamic-programming generator.
    #[arg(long)]
    pub fast: bool,
    /// List every contributing type (forces the enumerating generator).
    #[arg(long)]
    pub verbose: bool,
    /// Resumable per-unit scratch file.
    #[arg(long, value_name = "FILE")]
    pub resume: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate, validate and prove.
    Analyze {
        pattern: String,
        #[command(flatten)]
        gen: GenArgs,
        /// Validation depth `nMax`.
        #[arg(long, default_value_t = apwen::prover::DEFAULT_CHECK_DEPTH)]
        depth: usize,
        /// Also write the proof certificate (JSON with `--json`).
        #[arg(long, value_name = "FILE")]
        certificate: Option<PathBuf>,
    },
    /// Print the recurrence system only.
    Recurrences {
        pattern: String,
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Tabulate the brute-force oracles.
    Oracle {
        #[command(subcommand)]
        what: OracleCmd,
    },
    /// Try every pattern of length `d`.
    Search {
        d: usize,
        /// Determinant prefilter depth.
        #[arg(long, default_value_t = 128)]
        scan: usize,
        #[arg(long)]
        fast: bool,
        #[arg(long, default_value_t = apwen::prover::DEFAULT_CHECK_DEPTH)]
        depth: usize,
    },
    /// Run the invariant suite at desk scale.
    Selftest {
        #[arg(long)]
        quick: bool,
        #[arg(long, hide = true, value_name = "CASE")]
        corrupt_psi: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    /// Hankel determinants, exact or modulo a prime.
    Hankel {
        pattern: String,
        range: String,
        #[arg(long = "mod", value_name = "Q")]
        modulus: Option<u64>,
    },
    /// Parity of H_m / 2^(m-1).
    Bits { pattern: String, range: String },
    /// Parity states X Y Z [U V W].
    State { pattern: String, range: String },
    /// Exact permutation counts by brute force.
    Counts {
        pattern: String,
        range: String,
        #[arg(long, default_value_t = 12)]
        max_brute: usize,
    },
    /// P, Q and prefixes of J and K.
    Sets { pattern: String, count: usize },
}

pub fn parse_pattern_arg(s: &str) -> Result<Pattern> {
    if let Some(p) = named(s) {
        return Ok(p);
    }
    s.parse().with_context(|| format!("bad pattern `{s}`"))
}

/// `a..b`, `a..=b` (both inclusive) or `b` for `1..=b`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>> {
    let num = |t: &str| t.trim().parse::<usize>().with_context(|| format!("bad range `{s}`"));
    let r = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.trim_start_matches('='))?,
        None => 1..=num(s)?,
    };
    if r.is_empty() || *r.start() == 0 {
        bail!("range `{s}` must be nonempty and start at 1 or later");
    }
    Ok(r)
}

fn corrupted_table(case: &str) -> Result<PsiTable> {
    let case = EtaCase::parse(case).with_context(|| format!("bad case `{case}`"))?;
    let mut t = PsiTable::standard();
    let flipped = match t.lookup(case) {
        Some(_) => None,
        None => Some(PsiValue { bar: apwen::recgen::Bar::X, shift: apwen::Shift::N }),
    };
    t.set(case, flipped);
    Ok(t)
}

fn strategy(fast: bool) -> Strategy {
    if fast {
        Strategy::Fast
    } else {
        Strategy::Naive
    }
}

fn run(cli: Cli) -> Result<(String, u8)> {
    let json = cli.json;
    match cli.command {
        Command::Analyze { pattern, gen, depth, certificate } => {
            let p = parse_pattern_arg(&pattern)?;
            report::analyze(&p, &gen, depth, certificate.as_deref(), json)
        }
        Command::Recurrences { pattern, gen } => {
            let p = parse_pattern_arg(&pattern)?;
            Ok((report::recurrences(&p, &gen, json)?, 0))
        }
        Command::Oracle { what } => Ok((report::oracle(&what, json)?, 0)),
        Command::Search { d, scan, fast, depth } => Ok((report::search(d, scan, strategy(fast), depth, json)?, 0)),
        Command::Selftest { quick, corrupt_psi } => {
            let table = match corrupt_psi {
                Some(c) => corrupted_table(&c)?,
                None => PsiTable::standard(),
            };
            let (text, ok) = selftest::run(quick, &table, json);
            Ok((text, if ok { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = cli.out.clone();
    match run(cli) {
        Ok((text, code)) => {
            let written = match &out {
                Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
