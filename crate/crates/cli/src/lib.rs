//! The `corrdyn` command line tool.
//!
//! Every subcommand prints one JSON report to stdout (or a table with
//! `--pretty`); `kgroups --format csv` and `render` without an output file
//! print raw data instead. Failures map onto exit codes through
//! [`exit_code`].

pub mod commands;
pub mod input;
pub mod render;
pub mod report;

use clap::{Parser, Subcommand};
use commands::{
    BranchArgs, ExpansiveArgs, FibersArgs, FockArgs, FreeArgs, InnerArgs, InvariantArgs,
    KgroupsArgs, Output, PathsArgs, RenderArgs, TolArgs,
};
use corrdyn_core::Error;
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(
    name = "corrdyn",
    version,
    about = "Algebraic correspondences on the Riemann sphere"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub tol: TolArgs,
    /// Indented output: a key/value table for reports, indented JSON with --json
    #[arg(long, global = true)]
    pub pretty: bool,
    /// With --pretty, keep JSON instead of the table
    #[arg(long, global = true, requires = "pretty")]
    pub json: bool,
    /// Add the wall time to the report (makes output nondeterministic)
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forward and backward fibers over a point, with multiplicities
    Fibers(FibersArgs),
    /// Branched points and values, optionally restricted
    Branch(BranchArgs),
    /// Weighted paths of a given length from a finite set
    Paths(PathsArgs),
    /// Whether a finite set is invariant in both directions
    Invariant(InvariantArgs),
    /// Expansivity on the unit circle, with the exact covering oracle
    Expansive(ExpansiveArgs),
    /// Freeness decision and generalized periodic points
    Free(FreeArgs),
    /// Sampled A-valued inner products (f|g)_A(w)
    Inner(InnerArgs),
    /// Truncated Fock module over a finite invariant set
    Fock(FockArgs),
    /// K-groups of the Cuntz-Pimsner algebra over the circle
    Kgroups(KgroupsArgs),
    /// Orbit sampling of the limit set as CSV points or a PPM image
    Render(RenderArgs),
}

/// Runs the command and returns the bytes for stdout.
pub fn run(cli: &Cli) -> anyhow::Result<Vec<u8>> {
    let start = Instant::now();
    let tol = &cli.tol;
    let out = match &cli.command {
        Command::Fibers(a) => Output::Report(commands::fibers(a, tol)?),
        Command::Branch(a) => Output::Report(commands::branch(a, tol)?),
        Command::Paths(a) => Output::Report(commands::paths(a, tol)?),
        Command::Invariant(a) => Output::Report(commands::invariant(a, tol)?),
        Command::Expansive(a) => Output::Report(commands::expansive(a, tol)?),
        Command::Free(a) => Output::Report(commands::free(a, tol)?),
        Command::Inner(a) => Output::Report(commands::inner(a, tol)?),
        Command::Fock(a) => Output::Report(commands::fock(a, tol)?),
        Command::Kgroups(a) => commands::kgroups(a, tol)?,
        Command::Render(a) => commands::render(a, tol)?,
    };
    Ok(match out {
        Output::Raw(bytes) => bytes,
        Output::Report(mut r) => {
            if cli.timing {
                r.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            let mut s = if cli.pretty && !cli.json {
                r.to_table()
            } else {
                r.to_json(cli.pretty)
            };
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s.into_bytes()
        }
    })
}

/// 2 for invalid input, 3 for resource refusals, 4 for undecided or
/// ambiguous answers, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e {
            Error::InvalidInput(_) => 2,
            Error::Resource(_) => 3,
            Error::Undecided(_) | Error::ExtensionAmbiguous(_) => 4,
            Error::NonConvergence { .. } => 1,
        };
    }
    if err.downcast_ref::<serde_json::Error>().is_some() {
        return 2;
    }
    1
}
