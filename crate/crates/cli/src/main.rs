mod commands;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use isopair_core::InstanceKind;

use crate::report::Failure;

#[derive(Parser, Debug)]
#[command(name = "isopair", version, about = "Generalized resolvents of commuting operator pairs")]
pub struct Cli {
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Override the tolerance of every reported check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Spectral grid size `n` (an `n × n` grid on the torus).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Use the minimal dilation in `reconstruct`.
    #[arg(long, global = true)]
    pub minimal: bool,
    /// Seed for `generate`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Pair,
    IsoUnitary,
    Measure,
    ResolventSamples,
}

impl From<KindArg> for InstanceKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Pair => InstanceKind::Pair,
            KindArg::IsoUnitary => InstanceKind::IsoUnitary,
            KindArg::Measure => InstanceKind::Measure,
            KindArg::ResolventSamples => InstanceKind::ResolventSamples,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    /// Single-variable conditions for a given point and subspace.
    T12,
    /// Single-variable conditions for a given isometry.
    T13,
    /// Two-variable conditions for the trivial pair.
    T31,
    /// Two-variable conditions for a pair of isometries.
    T32,
    /// Two-variable class conditions on the quadratic forms.
    H2,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a seeded instance file.
    Generate {
        #[arg(long, value_enum, default_value = "pair")]
        kind: KindArg,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        big_dim: usize,
    },
    /// Run a verification suite on an instance file.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Schur parameter for iso-unitary instances (zero if absent).
        #[arg(long)]
        phi_file: Option<PathBuf>,
    },
    /// Recover the measure, dilate it and certify the rebuilt pair.
    Reconstruct {
        file: PathBuf,
        /// Also write the dilation JSON here.
        #[arg(long)]
        dilation_out: Option<PathBuf>,
    },
    /// Factor a unitary into two conjugations.
    Factor { file: PathBuf },
    /// Dump one entry of the resolvent on the sample grid as CSV.
    Sample {
        file: PathBuf,
        /// Matrix entry as `row,col`.
        #[arg(long, default_value = "0,0")]
        entry: String,
        #[arg(long)]
        phi_file: Option<PathBuf>,
    },
    /// Build the conjugation frame of an iso-unitary instance.
    Frame { file: PathBuf },
    /// Evaluate the resolvent of an instance at one point.
    Resolvent {
        file: PathBuf,
        /// `re,im` or `inf`.
        #[arg(long, allow_hyphen_values = true)]
        z1: String,
        #[arg(long, allow_hyphen_values = true)]
        z2: String,
        #[arg(long)]
        phi_file: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("input error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
