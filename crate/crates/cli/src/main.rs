//! `nspgap`: certify, solve, bound, and run the gap construction from the shell.
//!
//! Every command prints one summary line and writes a JSON report to `--out`
//! (stdout when absent). Exit status: 0 success, 1 invalid input, 2 resource
//! limit, 3 internal consistency failure.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "nspgap", version, about = "Null space property certification and the NSP/RIP gap construction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Certify the null space constant of ker(Phi) at order s.
    CertifyNsp(CertifyNspArgs),
    /// Certify the restricted isometry constant of Phi at order k.
    CertifyRip(CertifyRipArgs),
    /// Solve basis pursuit (eps = 0) or basis pursuit denoising.
    Solve(SolveArgs),
    /// Evaluate one named stability bound.
    Bounds(BoundsArgs),
    /// Build the gap matrix and write it to a directory.
    GapBuild(GapBuildArgs),
    /// Build, certify, and attack the gap matrix; compare both regimes.
    GapDemo(GapDemoArgs),
    /// Sparsity threshold beyond which the gap contradiction applies.
    GapThreshold(GapThresholdArgs),
    /// Random recovery trials compared against the enabled bounds.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Report path; the report goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Tolerances {
    /// LP feasibility and optimality tolerance.
    #[arg(long)]
    pub lp_tol: Option<f64>,
    /// Relative singular value cutoff for rank decisions.
    #[arg(long)]
    pub rank_tol: Option<f64>,
    /// Largest number of subproblems an exhaustive certificate may enumerate.
    #[arg(long)]
    pub cap: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CertifyNspArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub s: usize,
    /// Target constant; the report then says whether it is met.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[command(flatten)]
    pub tol: Tolerances,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct CertifyRipArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub k: usize,
    /// Examine this many random supports instead of all; the result is then a lower bound.
    #[arg(long)]
    pub subsample: Option<usize>,
    #[arg(long, requires = "subsample")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub cap: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// Measurement vector, one value per line or a single row.
    #[arg(long)]
    pub y: PathBuf,
    #[arg(long)]
    pub eps: f64,
    /// Also write the recovered vector as CSV.
    #[arg(long)]
    pub xhat_out: Option<PathBuf>,
    #[arg(long)]
    pub opt_tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// One of cai_zhang_l2, nsp_l1, ripnsp_l2.
    #[arg(long)]
    pub name: String,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Smallest positive singular value of Phi.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Best s-term approximation error of the signal in l1.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct GapParams {
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub gamma: f64,
    /// Rows of Phi; the inner matrix gets M - s of them.
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// First seed of the inner matrix search.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub max_attempts: usize,
    #[command(flatten)]
    pub tol: Tolerances,
}

#[derive(Args, Debug)]
pub struct GapBuildArgs {
    #[command(flatten)]
    pub params: GapParams,
    /// Directory receiving A.csv, Phi.csv, d.csv, phi1.csv, params.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct GapDemoArgs {
    #[command(flatten)]
    pub params: GapParams,
    /// RIP constant tested against the adversarial instance at matrix scale.
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long = "formula-N", default_value_t = 17654)]
    pub formula_n: usize,
    #[arg(long, default_value_t = 1300)]
    pub formula_s: usize,
    #[arg(long, default_value_t = 0.9)]
    pub formula_gamma: f64,
    /// Directory receiving the construction and the adversarial instance.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct GapThresholdArgs {
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub gamma: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Certify the RIP constant of order 2s and the NSP constant of order s first.
    #[arg(long)]
    pub certify: bool,
    /// Known RIP constant of order 2s of Phi.
    #[arg(long, conflicts_with = "certify")]
    pub delta: Option<f64>,
    /// Known NSP constant of order s of ker(Phi).
    #[arg(long, conflicts_with = "certify")]
    pub gamma: Option<f64>,
    /// Known RIP constant of order 2s of a matrix with the same kernel as Phi.
    #[arg(long)]
    pub kernel_delta: Option<f64>,
    #[command(flatten)]
    pub tol: Tolerances,
    #[command(flatten)]
    pub common: Common,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("NSPGAP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Validation(format!("NSPGAP_THREADS = {raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| CliError::Internal(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = configure_threads().and_then(|()| commands::run(cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
