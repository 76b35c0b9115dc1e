//! The `elastweak` command line: `solve`, `convergence`, `check` and `infsup`.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

use crate::assembly::AssemblyError;
use crate::fespace::FeError;
use crate::mesh::MeshError;
use crate::solver::SolverError;
use crate::verify::VerifyError;

pub use commands::run_command;
pub use config::{Command, Fault, MeshSource, Overrides, RunConfig, Suite};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("mesh error: {0}")]
    Mesh(#[from] MeshError),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("{0}")]
    Failed(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Mesh(_) => 3,
            CliError::Solver(_) => 4,
            CliError::Failed(_) | CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::UnknownCase(_) | VerifyError::InvalidStudy(_) => CliError::Config(e.to_string()),
            VerifyError::Mesh(m) | VerifyError::Space(FeError::Mesh(m)) => CliError::Mesh(m),
            VerifyError::Space(FeError::Unsupported(s)) => CliError::Config(s),
            VerifyError::Solver(s) => CliError::Solver(s.to_string()),
            VerifyError::Assembly(AssemblyError::Material(m)) => CliError::Config(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        CliError::Solver(e.to_string())
    }
}

/// Mixed finite elements for linear elasticity with weakly imposed stress symmetry.
#[derive(Debug, Parser)]
#[command(name = "elastweak", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Flat `key = value` file; flags given here take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `box:N`, `box:N1,N2,..` or `file:PATH[,PATH..]` (MSH 2.2 ASCII).
    #[arg(long)]
    pub mesh: Option<String>,
    /// Polynomial degree r (0 or 1).
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    /// Manufactured solution: trig, poly-quadratic or poly-linear.
    #[arg(long = "case")]
    pub case: Option<String>,
    /// Use the reduced 24-dimensional stress element (degree 0 only).
    #[arg(long)]
    pub simplified: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Fail unless every fitted convergence rate reaches this value.
    #[arg(long)]
    pub assert_rates: Option<f64>,
    /// Suites for `check`.
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Random inputs per randomized suite.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Relative residual required of the linear solver.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Fail `infsup` unless β varies by less than 20% and stays above 1e-3.
    #[arg(long)]
    pub assert_stable: bool,
    /// Pair the stresses with rotations of degree r+1, a deliberately unstable choice.
    #[arg(long)]
    pub unstable_control: bool,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(p) => config::read_config_file(p)?,
            None => Default::default(),
        };
        let flags = Overrides {
            mesh: self.mesh,
            degree: self.degree,
            lambda: self.lambda,
            mu: self.mu,
            case: self.case,
            simplified: self.simplified,
            out: self.out,
            seed: self.seed,
            threads: self.threads,
            assert_rates: self.assert_rates,
            suite: self.suite,
            trials: self.trials,
            tol: self.tol,
            assert_stable: self.assert_stable,
            unstable_control: self.unstable_control,
            inject_fault: self.inject_fault,
        };
        RunConfig::resolve(self.command, file, flags)
    }
}

/// Parse arguments, run the command and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.into_config().and_then(|cfg| run_command(&cfg)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
