//! `framelab` command-line front-end.
//!
//! Every command prints one report (JSON by default, text with `--human`) and
//! exits 0 when all asserted checks pass, 1 when one fails and 2 on bad input.
//! Wherever a document path is expected, a committed fixture name such as
//! `FIX-A` or `FIX-R07` works too.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod report;

pub use report::{Report, Verdict, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};

#[derive(Debug, Parser)]
#[command(name = "framelab", version, about = "Verify k-g-fusion frames, duals and perturbations")]
pub struct Cli {
    /// Print aligned text instead of JSON.
    #[arg(long, global = true)]
    pub human: bool,
    /// Absolute tolerance.
    #[arg(long, global = true, value_name = "X")]
    pub tol_abs: Option<f64>,
    /// Relative tolerance.
    #[arg(long, global = true, value_name = "X", env = "FRAMELAB_TOL_REL")]
    pub tol_rel: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame verdicts and optimal bounds, optionally checking claimed bounds.
    Analyze(AnalyzeArgs),
    /// Construct a Q-dual or the canonical k-g-fusion dual.
    Dual(DualArgs),
    /// Check the dual-frame identities and the 3/4 inequality.
    Identities(IdentitiesArgs),
    /// Check a perturbation theorem for a perturbed family Θ.
    Perturb(PerturbArgs),
    /// Write fixture documents, oracle sidecars or case suites.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Document path or fixture name.
    pub document: String,
    /// Operator k, by name in the document.
    #[arg(long = "k", default_value = "k")]
    pub k: String,
    /// Claimed lower and upper bounds.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub bounds: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DualMethod {
    Q,
    Canonical,
}

#[derive(Debug, Args)]
pub struct DualArgs {
    pub document: String,
    #[arg(long = "k", default_value = "k")]
    pub k: String,
    #[arg(long, value_enum, default_value = "q")]
    pub method: DualMethod,
    /// Where to write the dual document.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    pub document: String,
    #[arg(long = "k", default_value = "k")]
    pub k: String,
    /// A k-g-fusion dual of the document; the canonical dual is built when omitted.
    #[arg(long)]
    pub dual: Option<String>,
    /// Random probe vectors per subset, on top of the standard basis.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Replace k by S^{1/2}, which makes any system Parseval.
    #[arg(long)]
    pub parsevalize: bool,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    pub document: String,
    /// Document whose local operators are Θ_j.
    #[arg(long, conflicts_with = "scale", required_unless_present = "scale")]
    pub theta: Option<String>,
    /// Use Θ_j = c·Λ_j instead of a theta document.
    #[arg(long, value_name = "C")]
    pub scale: Option<f64>,
    #[arg(long = "k", default_value = "k")]
    pub k: String,
    #[arg(long, default_value = "T-sqsum")]
    pub mode: String,
    /// `key=value` pairs for lambda1, lambda2, gamma and R.
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Exit 1 when the hypothesis is falsified.
    #[arg(long)]
    pub require_hypothesis: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["fixture", "spec", "suite"]))]
pub struct GenArgs {
    /// Regenerate a committed fixture (document and oracle sidecar).
    #[arg(long)]
    pub fixture: Option<String>,
    /// Random system: `DIM CxD ...`, e.g. `6 3x2`.
    #[arg(long, num_args = 1..)]
    pub spec: Option<Vec<String>>,
    /// Regenerate a committed case suite.
    #[arg(long)]
    pub suite: Option<String>,
    /// Seed for `--spec`.
    #[arg(long, requires = "spec")]
    pub seed: Option<u64>,
    /// Field for `--spec`.
    #[arg(long, value_enum, default_value = "real", requires = "spec")]
    pub field: FieldArg,
    /// Name recorded in a `--spec` document and used for its file names.
    #[arg(long, requires = "spec")]
    pub name: Option<String>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

/// Runs a parsed command line and returns the report.
pub fn run(cli: &Cli) -> Report {
    commands::dispatch(cli)
}
