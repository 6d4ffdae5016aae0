//! `qrep` command-line front end.
//!
//! Every command writes a JSON report (to `--out`, else stdout) that embeds
//! the resolved run configuration. Sweeps also write one CSV row per case
//! to `--csv`. Exit codes: 0 success, 1 failed hypothesis or precondition,
//! 2 numerical failure or an invariant mismatch, 3 I/O, JSON or syntax error.

mod commands;
mod io;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::TraceMode;
use crate::tolerances::Tolerances;

#[derive(Debug, Parser)]
#[command(name = "qrep", version, about = "Invariants of unitary quasi-representations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Trace used by `invariant kappa`.
    #[arg(long, global = true, default_value = "standard", value_parser = parse_trace)]
    pub trace: TraceMode,
    /// Tolerance override, e.g. `--tol branch_margin=1e-4` (also `--tol-branch-margin 1e-4`).
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o', long = "out", global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Omit the timestamp so identical runs give byte-identical reports.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

fn parse_trace(s: &str) -> std::result::Result<TraceMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate quasi-representation files.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Compute κ, the determinant winding number or k(u, v).
    Invariant(InvariantArgs),
    /// Relator and multiplicativity defects.
    Defect {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        /// Comma-separated words; defaults to the generators and their inverses.
        #[arg(long)]
        set: Option<String>,
    },
    /// Check identities between the invariants on the clock/shift family.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Perturbation experiment on the genus-g clock/shift datum.
    Stability {
        #[arg(long, default_value_t = 1)]
        g: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        radius: f64,
        /// Number of seeds, starting at `--seed`.
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        /// Keep going when the size hypotheses fail.
        #[arg(long)]
        probe: bool,
    },
    /// Maximal distance between the straight segment and the exponential path.
    HomotopyGap {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long)]
        word: Option<String>,
        /// Grid size of the CSV profile.
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Clock and shift matrices of size n.
    Voiculescu {
        #[arg(long)]
        n: usize,
    },
    /// Multiply generator images by seeded unitaries at a fixed distance from 1.
    Perturbed {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long)]
        radius: f64,
        /// Comma-separated generators; all by default.
        #[arg(long)]
        targets: Option<String>,
    },
    /// Pull a ℤ² quasi-representation back to a surface group.
    Pullback {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        /// e.g. `s1=a,t1=b,s2=1,t2=1`.
        #[arg(long)]
        map: String,
    },
    DirectSum {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long = "with")]
        with: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InvariantKind {
    Kappa,
    Winding,
    K,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    #[arg(value_enum)]
    pub kind: InvariantKind,
    /// Word evaluated on a quasi-representation; defaults to its first relator.
    #[arg(long)]
    pub word: Option<String>,
    /// Quasi-representation or matrix file.
    #[arg(short = 'i', long = "input")]
    pub input: PathBuf,
    /// For `k`: words for u and v on a quasi-representation.
    #[arg(long, default_value = "a")]
    pub u: String,
    #[arg(long, default_value = "b")]
    pub v: String,
    /// For `k` on a matrix input: the matrix file for v.
    #[arg(long = "with")]
    pub with: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// k(u_n, v_n) against the winding number and κ of [v_n, u_n].
    ExelLoring {
        #[arg(long, conflicts_with = "n_range", required_unless_present = "n_range")]
        n: Option<usize>,
        /// `a:b:step`, inclusive.
        #[arg(long = "n-range")]
        n_range: Option<String>,
    },
    /// κ of equivalent commutator representatives of the ℤ² class.
    #[command(name = "remark25")]
    RepresentativeIndependence {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "a b")]
        conjugator: String,
    },
}

/// Resolved configuration embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub args: Vec<String>,
    pub trace: TraceMode,
    pub seed: u64,
    pub out: Option<String>,
    pub csv: Option<String>,
    pub deterministic: bool,
    pub tolerances: Tolerances,
}

/// Rewrite `--tol-name value` and `--tol-name=value` as `--tol name=value`.
fn expand_tol_flags(args: Vec<String>) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        match a.strip_prefix("--tol-") {
            Some(rest) if !rest.is_empty() => {
                out.push("--tol".to_string());
                match rest.split_once('=') {
                    Some((k, v)) => out.push(format!("{k}={v}")),
                    None => out.push(format!("{rest}={}", it.next().unwrap_or_default())),
                }
            }
            _ => out.push(a),
        }
    }
    out
}

fn resolve_tolerances(global: &GlobalArgs) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    tol.apply_env()?;
    for kv in &global.tol {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("expected NAME=VALUE, got `{kv}`")))?;
        tol.set(k.trim(), v.trim())?;
    }
    Ok(tol)
}

/// Parse `args` (including the program name), run the command and return
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let args = expand_tol_flags(args);
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    let tol = match resolve_tolerances(&cli.global) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let config = RunConfig {
        args: args.iter().skip(1).cloned().collect(),
        trace: cli.global.trace,
        seed: cli.global.seed,
        out: cli.global.out.as_ref().map(|p| p.display().to_string()),
        csv: cli.global.csv.as_ref().map(|p| p.display().to_string()),
        deterministic: cli.global.deterministic,
        tolerances: tol,
    };
    match commands::dispatch(&cli, &config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
