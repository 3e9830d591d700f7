//! `bmorrey`: batch front end for embedding decisions, norms, witnesses,
//! wavelet analysis and parameter sweeps.
//!
//! Exit codes: 0 holds, 1 fails, 2 undetermined (check only; other commands
//! exit 0 on success), 64 usage or malformed config, 65 unreadable data file,
//! 66 capacity exceeded, 74 output write failure.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use besov_morrey::Error;
use clap::Parser;

use config::{Command, Format, RunConfig, WitnessKind};

pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_CAPACITY: u8 = 66;
pub const EXIT_IO: u8 = 74;

#[derive(Debug, Parser)]
#[command(name = "bmorrey", version, about = "Embeddings and norms of generalised Besov-Morrey spaces")]
pub struct Cli {
    /// check | norm | witness | analyze | sweep (may also come from [run] command = ...)
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// INI file with [source], [target], [run] and [grid] sections
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Inline source block, e.g. "s=1, p=2, q=2, phi=power(2), d=1"
    #[arg(long)]
    pub source: Option<String>,

    #[arg(long)]
    pub target: Option<String>,

    /// Sequence CSV for `norm`
    #[arg(long)]
    pub seq: Option<PathBuf>,

    /// Sampled-function CSV for `analyze`
    #[arg(long)]
    pub samples: Option<PathBuf>,

    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    #[arg(long)]
    pub jmax: Option<u32>,

    #[arg(long, allow_hyphen_values = true)]
    pub numin: Option<i64>,

    /// Seed for the random battery of `check --battery`
    #[arg(long)]
    pub seed: Option<u64>,

    /// Witness levels scanned by the battery
    #[arg(long)]
    pub scan_depth: Option<u32>,

    /// Number of random sequences in the ratio battery (0 disables it)
    #[arg(long)]
    pub battery: Option<usize>,

    /// Skip the asymptotic profiles and use the truncated numeric path
    #[arg(long)]
    pub force_numeric: bool,

    /// Grid variable for `sweep`: name=lo..hi:n or name=v1,v2,...; repeatable
    #[arg(long)]
    pub grid: Vec<String>,

    #[arg(long, value_enum)]
    pub kind: Option<WitnessKind>,

    #[arg(long)]
    pub j0: Option<u32>,

    #[arg(long, allow_hyphen_values = true)]
    pub nu0: Option<i64>,

    /// Level i of a beta witness
    #[arg(long)]
    pub level: Option<u32>,

    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<i64>,

    /// Wavelet vanishing moments (default: the minimum the source block needs)
    #[arg(long)]
    pub order: Option<u32>,

    #[arg(long)]
    pub depth: Option<u32>,

    /// Also print the per-level quantities in `norm`
    #[arg(long)]
    pub levels: bool,

    /// Also recompute `norm` by direct cube enumeration and print the relative delta
    #[arg(long)]
    pub cross_check: bool,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DATA,
            message: msg.into(),
        }
    }

    pub fn from_lib(e: &Error, context: &str) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Io(_) => EXIT_DATA,
            Error::Capacity(_) => EXIT_CAPACITY,
            Error::UndeterminedWitness(_) => 2,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: format!("{context}: {e}"),
        }
    }
}

fn execute() -> Result<u8, Failure> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return Ok(0);
        }
        Err(e) => return Err(Failure::usage(e.to_string().trim_end())),
    };
    let cfg = RunConfig::resolve(&cli)?;
    let out = commands::run(&cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &out.text).map_err(|e| Failure {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        })?,
        None => print!("{}", out.text),
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    match execute() {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("bmorrey: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
