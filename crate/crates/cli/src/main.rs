//! `noisyops` — decompose unital qubit channels and build noisy-operation
//! dilations.

use clap::{Parser, Subcommand, ValueEnum};
use noisyops_cli::{cmd_census, cmd_decompose, cmd_dilate, cmd_random};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "noisyops",
    version,
    about = "Decompose unital qubit channels into mixed-unitary form and \
             represent them as noisy operations with explicit dilation unitaries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKindArg {
    /// A single Haar-random unitary as a Kraus channel.
    HaarUnitaryChannel,
    /// Dirichlet-weighted mixture of Haar-random unitaries.
    RandomMixedUnitary,
    /// A unital channel carried only by its Choi matrix.
    RandomUnitalChoi,
}

impl From<RandomKindArg> for noisyops_cli::RandomKind {
    fn from(kind: RandomKindArg) -> Self {
        match kind {
            RandomKindArg::HaarUnitaryChannel => Self::HaarUnitaryChannel,
            RandomKindArg::RandomMixedUnitary => Self::RandomMixedUnitary,
            RandomKindArg::RandomUnitalChoi => Self::RandomUnitalChoi,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for noisyops_cli::OutputFormat {
    fn from(fmt: FormatArg) -> Self {
        match fmt {
            FormatArg::Json => Self::Json,
            FormatArg::Csv => Self::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the canonical mixed-unitary decomposition of a unital qubit
    /// channel (at most four terms).
    Decompose {
        /// Channel JSON file to read.
        #[arg(long)]
        input: PathBuf,
        /// Destination for the decomposition JSON (default: standard output).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Represent a unital qubit channel as a k-noisy operation: a unitary on
    /// system ⊗ k-dimensional environment with maximally mixed environment.
    Dilate {
        /// Channel JSON file to read.
        #[arg(long)]
        input: PathBuf,
        /// Environment dimension k; must be at least the Kraus rank (k = 4
        /// always suffices).
        #[arg(short = 'k', long = "env-dim")]
        env_dim: usize,
        /// Largest acceptable Choi distance between the channel and its
        /// dilation.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Destination for the dilation JSON (default: standard output).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sample a reproducible random channel and print it as channel JSON.
    Random {
        /// Family to sample from.
        #[arg(long, value_enum)]
        kind: RandomKindArg,
        /// Seed for the deterministic generator (ChaCha8, 64-bit seed).
        #[arg(long)]
        seed: u64,
        /// Number of unitary terms for the mixture-based kinds.
        #[arg(short = 'k', long = "terms", default_value_t = 4)]
        terms: usize,
        /// Destination for the channel JSON (default: standard output).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Histogram the operator Schmidt ranks of Haar-random unitaries on
    /// system ⊗ environment; for two qubits, assert that rank 3 never occurs.
    Census {
        /// System dimension.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Environment dimension.
        #[arg(long = "env-dim", default_value_t = 2)]
        env_dim: usize,
        /// Number of unitaries to sample.
        #[arg(long)]
        trials: u64,
        /// Base seed; each trial uses its own derived stream.
        #[arg(long)]
        seed: u64,
        /// Output encoding.
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Destination for the histogram (default: standard output).
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose { input, output } => cmd_decompose(&input, output.as_ref()),
        Command::Dilate {
            input,
            env_dim,
            tol,
            output,
        } => cmd_dilate(&input, env_dim, tol, output.as_ref()),
        Command::Random {
            kind,
            seed,
            terms,
            output,
        } => cmd_random(kind.into(), seed, terms, output.as_ref()),
        Command::Census {
            dim,
            env_dim,
            trials,
            seed,
            format,
            output,
        } => cmd_census(dim, env_dim, trials, seed, format.into(), output.as_ref()),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
