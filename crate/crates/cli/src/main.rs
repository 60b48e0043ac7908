//! `cschwarz`: evaluates contact Schwarzians, Hessians and curvature on the
//! flat model and reports verification residuals.

mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "cschwarz", version, about = "Contact Schwarzian toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate S(φ) at sample points and check its symmetries.
    Schwarzian(Common),
    /// Contactomorphism, λ identities and the normalized representative.
    Check(Common),
    /// Cocycle law and inverse identity over consecutive map pairs.
    Cocycle(Common),
    /// Hessian kernel, transformed operator and reconstruction.
    Hessian(Common),
    /// Curvature identity suite and W/C oracles.
    Curvature(Common),
    /// Integrability defect against the Weyl oracle (n ≥ 3).
    Integrability(Common),
    /// Three-dimensional geodesic integration and line flattening.
    Ode(OdeArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Half dimension: the manifold has dimension 2n − 1.
    #[arg(long)]
    pub n: Option<usize>,
    /// Map description (JSON); repeatable. Defaults to a seeded corpus.
    #[arg(long = "map", value_name = "FILE")]
    pub maps: Vec<PathBuf>,
    /// Difference tensor description (JSON).
    #[arg(long, value_name = "FILE")]
    pub pi: Option<PathBuf>,
    /// Number of generated maps or difference tensors when no file is given.
    #[arg(long = "maps-count", default_value_t = 5)]
    pub count: usize,
    /// Sample points per map.
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Tolerance for algebraic identities.
    #[arg(long, default_value_t = 1e-10)]
    pub tol_alg: f64,
    /// Tolerance for identities using jets of order three.
    #[arg(long, default_value_t = 1e-8)]
    pub tol_jet3: f64,
    /// Tolerance for identities using jets of order four and the ODE.
    #[arg(long, default_value_t = 1e-6)]
    pub tol_jet4: f64,
}

#[derive(Args, Debug, Clone)]
pub struct OdeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Initial slope dx^0/dx^∞.
    #[arg(long, default_value_t = 0.2)]
    pub slope: f64,
    /// Length of the x^∞ interval.
    #[arg(long, default_value_t = 0.5)]
    pub span: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub step: f64,
    /// Write the first trajectory as CSV.
    #[arg(long, value_name = "PATH")]
    pub trajectory: Option<PathBuf>,
}

impl Common {
    fn validate(&self) -> anyhow::Result<()> {
        for (name, t) in [("--tol-alg", self.tol_alg), ("--tol-jet3", self.tol_jet3), ("--tol-jet4", self.tol_jet4)] {
            anyhow::ensure!(t > 0.0 && t.is_finite(), "{name} must be positive");
        }
        anyhow::ensure!(self.points > 0, "--points must be positive");
        anyhow::ensure!(self.count > 0, "--maps-count must be positive");
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Schwarzian(c)
        | Command::Check(c)
        | Command::Cocycle(c)
        | Command::Hessian(c)
        | Command::Curvature(c)
        | Command::Integrability(c) => c.clone(),
        Command::Ode(o) => o.common.clone(),
    };
    let result = common.validate().and_then(|()| match &cli.command {
        Command::Schwarzian(c) => suites::schwarzian(c),
        Command::Check(c) => suites::check(c),
        Command::Cocycle(c) => suites::cocycle(c),
        Command::Hessian(c) => suites::hessian(c),
        Command::Curvature(c) => suites::curvature(c),
        Command::Integrability(c) => suites::integrability(c),
        Command::Ode(o) => suites::ode(o),
    });
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = report::emit(&report.render(common.format), common.out.as_deref()) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    for r in report.records().filter(|r| !r.pass) {
        eprintln!("FAIL {}: {} > {}", r.name, report::number(r.max_residual), report::number(r.tolerance));
    }
    if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
