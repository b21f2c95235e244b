//! Command implementations for the `noisyops` binary.
//!
//! Each command reads/writes the JSON interchange formats of the `noisyops`
//! library, sends data to standard output (or `--output`), keeps diagnostics
//! on standard error, and maps every failure class to a distinct exit code:
//!
//! | code | meaning                                   |
//! |------|-------------------------------------------|
//! | 0    | success, all asserted tolerances met      |
//! | 1    | other error                               |
//! | 2    | command-line usage error                  |
//! | 3    | input failed to parse                     |
//! | 4    | channel is not unital                     |
//! | 5    | channel is not completely positive        |
//! | 6    | requested environment dimension too small |
//! | 7    | a verification/assertion failed           |
//! | 8    | file I/O failed                           |

use std::fs;
use std::path::{Path, PathBuf};

use noisyops::channel::{choi_distance, validate, Channel};
use noisyops::canonical::mixed_unitary_decomposition;
use noisyops::dilation::{noisy_dilation, verify_noisy_representation};
use noisyops::random::{base_rng, haar_unitary, random_mixed_unitary, random_unital_choi};
use noisyops::schmidt::rank_census;
use noisyops::channel::KrausDecomposition;
use thiserror::Error;

/// Failure classes with stable exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("failed to parse input: {0}")]
    Parse(String),
    #[error("channel is not unital (defect {0:.3e})")]
    NotUnital(f64),
    #[error("channel is not completely positive: {0}")]
    NotCp(String),
    #[error("environment dimension {requested} is below the Kraus rank {required}")]
    KTooSmall { requested: usize, required: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 3,
            CliError::NotUnital(_) => 4,
            CliError::NotCp(_) => 5,
            CliError::KTooSmall { .. } => 6,
            CliError::Verification(_) => 7,
            CliError::Io(_) => 8,
            CliError::Other(_) => 1,
        }
    }
}

impl From<noisyops::Error> for CliError {
    fn from(err: noisyops::Error) -> Self {
        match err {
            noisyops::Error::NotUnital(v) => CliError::NotUnital(v),
            noisyops::Error::NotCp(msg) => CliError::NotCp(msg),
            noisyops::Error::NotPsd(v) => {
                CliError::NotCp(format!("Choi matrix has eigenvalue defect {v:.3e}"))
            }
            noisyops::Error::KTooSmall {
                requested,
                required,
            } => CliError::KTooSmall {
                requested,
                required,
            },
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

/// The random-channel families the `random` command can draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    /// A single Haar-random unitary, wrapped as a Kraus channel.
    HaarUnitaryChannel,
    /// A mixed-unitary channel with Dirichlet weights over `k` Haar terms.
    RandomMixedUnitary,
    /// A unital channel presented only through its Choi matrix.
    RandomUnitalChoi,
}

/// Output encodings for the census histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

fn read_channel(input: &Path) -> Result<Channel, CliError> {
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))
}

fn same_path(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(ca), Ok(cb)) => ca == cb,
        _ => a == b,
    }
}

/// Guards the "paths distinct" invariant shared by every command that both
/// reads and writes.
fn check_distinct(input: &Path, output: Option<&PathBuf>) -> Result<(), CliError> {
    if let Some(out) = output {
        if same_path(input, out) {
            return Err(CliError::Io(format!(
                "input and output both refer to {}",
                out.display()
            )));
        }
    }
    Ok(())
}

fn emit(data: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, data)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Other(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Reads a channel, validates it, and writes its canonical mixed-unitary
/// decomposition (as a channel JSON, so it can be re-ingested). Reports the
/// term count and the recovery distance on standard error.
pub fn cmd_decompose(input: &Path, output: Option<&PathBuf>) -> Result<(), CliError> {
    check_distinct(input, output)?;
    let channel = read_channel(input)?;
    let report = validate(&channel)?;
    if !report.completely_positive {
        return Err(CliError::NotCp(format!(
            "Choi eigenvalue defect {:.3e}",
            report.cp_violation
        )));
    }
    let dec = mixed_unitary_decomposition(&channel)?;
    let rebuilt = Channel::MixedUnitary(dec);
    let distance = choi_distance(&channel, &rebuilt)?;
    let Channel::MixedUnitary(ref dec) = rebuilt else {
        unreachable!()
    };
    eprintln!(
        "decomposed into {} unitary terms, recovery distance {distance:.3e}",
        dec.len()
    );
    emit(&to_json(&rebuilt)?, output)
}

/// Runs the full dilation pipeline (decompose → pad to `k` → flatten weights
/// → assemble the controlled unitary), verifies the represented channel
/// against the input, and writes the dilation JSON. The verification
/// distance goes to standard output when the JSON goes to a file, otherwise
/// to standard error so standard output stays machine-readable.
pub fn cmd_dilate(
    input: &Path,
    k: usize,
    tol: f64,
    output: Option<&PathBuf>,
) -> Result<(), CliError> {
    check_distinct(input, output)?;
    if k == 0 {
        return Err(CliError::Other(
            "environment dimension must be at least 1".into(),
        ));
    }
    let channel = read_channel(input)?;
    let dilation = noisy_dilation(&channel, k)?;
    let distance = verify_noisy_representation(&channel, &dilation)?;
    if distance > tol {
        return Err(CliError::Verification(format!(
            "dilation reproduces the channel only to distance {distance:.3e} > {tol:.3e}"
        )));
    }
    if output.is_some() {
        println!("distance {distance:.6e}");
    } else {
        eprintln!("distance {distance:.6e}");
    }
    emit(&to_json(&dilation)?, output)
}

/// Samples one channel of the requested kind from a seeded generator and
/// writes it as channel JSON. Identical seeds give byte-identical output.
pub fn cmd_random(
    kind: RandomKind,
    seed: u64,
    terms: usize,
    output: Option<&PathBuf>,
) -> Result<(), CliError> {
    if terms == 0 {
        return Err(CliError::Other("term count must be at least 1".into()));
    }
    let mut rng = base_rng(seed);
    let channel = match kind {
        RandomKind::HaarUnitaryChannel => Channel::Kraus(
            KrausDecomposition::single(haar_unitary(2, &mut rng)).map_err(CliError::from)?,
        ),
        RandomKind::RandomMixedUnitary => {
            Channel::MixedUnitary(random_mixed_unitary(terms, &mut rng))
        }
        RandomKind::RandomUnitalChoi => Channel::Choi(random_unital_choi(terms, &mut rng)),
    };
    emit(&to_json(&channel)?, output)
}

/// Histograms operator Schmidt ranks of Haar-random unitaries on a
/// `dim·env_dim`-dimensional space. For two qubits (`dim = env_dim = 2`)
/// the absence of rank 3 is asserted; observing one is reported as a
/// verification failure.
pub fn cmd_census(
    dim: usize,
    env_dim: usize,
    trials: u64,
    seed: u64,
    format: OutputFormat,
    output: Option<&PathBuf>,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Other("trial count must be at least 1".into()));
    }
    let histogram = rank_census(dim, env_dim, trials, seed)?;
    if dim == 2 && env_dim == 2 {
        if let Some(&count) = histogram.counts.get(&3) {
            return Err(CliError::Verification(format!(
                "{count} two-qubit unitaries with operator Schmidt rank 3 observed \
                 (minimum singular-value gap {:.3e})",
                histogram.min_gap
            )));
        }
        eprintln!(
            "no rank-3 unitaries in {trials} trials; minimum singular-value gap {:.3e}",
            histogram.min_gap
        );
    }
    let rendered = match format {
        OutputFormat::Json => to_json(&histogram)?,
        OutputFormat::Csv => histogram.to_csv(),
    };
    emit(&rendered, output)
}
