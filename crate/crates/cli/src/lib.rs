//! The `oigb` command-line tool: sessions, commands and JSON reports.

pub mod commands;
pub mod error;
pub mod session;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use oigb_core::{FieldSpec, Flavor, ResolveTarget, VariableScheme};

pub use error::{CliError, Result};
use session::{GenLine, IntList, SlotList};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "oigb",
    version,
    about = "Equivariant Gröbner bases and Betti numbers over OI-algebras"
)]
pub struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "OIGB_JOBS")]
    pub jobs: Option<usize>,
    /// Session file with `key = value` lines.
    #[arg(long, global = true)]
    pub session: Option<PathBuf>,
    /// Coefficient field: `Q` or `Fp(p)`.
    #[arg(long, global = true)]
    pub field: Option<FieldSpec>,
    /// `tensor(c)` or `degree(d)`.
    #[arg(long, global = true)]
    pub scheme: Option<VariableScheme>,
    /// Free module summands `(d,shift),…`.
    #[arg(long, global = true)]
    pub slots: Option<SlotList>,
    #[arg(long, global = true)]
    pub order: Option<String>,
    /// Suppress the human-readable summary on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    /// A generator, optionally prefixed with `@width`. Replaces the session
    /// generators when given.
    #[arg(long = "gen", value_name = "ELEMENT")]
    pub gens: Vec<GenLine>,
    #[arg(long)]
    pub flavor: Option<Flavor>,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub max_width: Option<usize>,
    #[arg(long)]
    pub lookahead: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide OI- (or FI-) divisibility of two module monomials.
    Divides {
        mu: GenLine,
        nu: GenLine,
        #[arg(long)]
        flavor: Option<Flavor>,
        /// Emit a JSON report instead of the witness line.
        #[arg(long)]
        json: bool,
    },
    /// Print the Higman code of a module monomial.
    Encode { mu: GenLine },
    /// Normal form of an element modulo the generators.
    Nf {
        q: Option<GenLine>,
        #[command(flatten)]
        gens: GenArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Reduce modulo the equivariant Gröbner basis instead.
        #[arg(long)]
        groebner: bool,
    },
    /// Equivariant Gröbner basis by width sweep.
    Gb {
        #[command(flatten)]
        gens: GenArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Exit with 3 when the sweep hits the width cap.
        #[arg(long)]
        strict: bool,
    },
    /// Graded Betti numbers over a range of widths.
    Betti {
        #[command(flatten)]
        gens: GenArgs,
        #[arg(long)]
        widths: Option<IntList>,
        #[arg(long)]
        max_p: Option<usize>,
        #[arg(long)]
        target: Option<ResolveTarget>,
    },
    /// Homology of the Koszul complex of one width-1 element.
    Koszul {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        max_degree: Option<i64>,
        #[arg(long)]
        max_p: Option<usize>,
    },
    /// Stabilization report for a Betti table written by `betti`.
    Stabilize {
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        p: Option<IntList>,
        #[arg(long)]
        min_consecutive: Option<usize>,
    },
}

/// What a command writes and how it exits.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub stdout: String,
    pub stderr: String,
    pub exit: u8,
}

/// Runs a parsed command line on a worker pool sized by `--jobs`.
pub fn run(cli: Cli) -> Result<Report> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| commands::execute(&cli))
}
