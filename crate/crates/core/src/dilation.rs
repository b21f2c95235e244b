//! Environment dilations of mixed-unitary channels.
//!
//! A channel of the form `T(X) = (1/n)·Σᵢ VᵢXVᵢ†` with `n` uniform terms is
//! exactly an `n`-noisy operation: attaching an environment in the maximally
//! mixed state `𝟙ₙ/n`, applying the single controlled unitary
//! `U = Σᵢ Vᵢ ⊗ |i⟩⟨i|`, and discarding the environment reproduces `T`,
//!
//! `T(X) = Tr_env(U·(X ⊗ 𝟙ₙ/n)·U†)`.
//!
//! [`noisy_dilation`] runs the full pipeline for a unital qubit channel:
//! canonical decomposition into at most four unitary terms, padding to `k`
//! terms, flattening the weights to `1/k` by two-term exchanges, and
//! assembling the controlled unitary.

use crate::canonical::mixed_unitary_decomposition;
use crate::channel::{Channel, ChoiMatrix, MixedUnitaryDecomposition};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, DEFAULT_TOL};
use crate::rebalance::uniformize;
use serde::{Deserialize, Serialize};

/// Tolerated deviation of individual weights from `1/k` when assembling a
/// dilation.
const UNIFORM_TOL: f64 = 1e-12;

/// A unitary on system ⊗ environment together with the environment
/// dimension, ordered with the system as the major tensor factor.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "DilationData", into = "DilationData")]
pub struct DilationUnitary {
    env_dim: usize,
    matrix: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
struct DilationData {
    env_dim: usize,
    matrix: ComplexMatrix,
}

impl DilationUnitary {
    /// Validates that `matrix` is square with side divisible by `env_dim`
    /// and unitary.
    pub fn new(env_dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if env_dim == 0 {
            return Err(Error::DimensionMismatch(
                "environment dimension must be positive".into(),
            ));
        }
        if !matrix.is_square() || matrix.rows() % env_dim != 0 || matrix.rows() < env_dim {
            return Err(Error::DimensionMismatch(format!(
                "a {}x{} matrix cannot act on system ⊗ environment with environment dimension {}",
                matrix.rows(),
                matrix.cols(),
                env_dim
            )));
        }
        let violation = matrix.unitarity_violation();
        if violation > DEFAULT_TOL {
            return Err(Error::NotUnitary(violation));
        }
        Ok(Self { env_dim, matrix })
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn system_dim(&self) -> usize {
        self.matrix.rows() / self.env_dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl TryFrom<DilationData> for DilationUnitary {
    type Error = Error;

    fn try_from(data: DilationData) -> Result<Self> {
        Self::new(data.env_dim, data.matrix)
    }
}

impl From<DilationUnitary> for DilationData {
    fn from(u: DilationUnitary) -> Self {
        Self {
            env_dim: u.env_dim,
            matrix: u.matrix,
        }
    }
}

/// Assembles the controlled unitary `U = Σᵢ Vᵢ ⊗ |i⟩⟨i|` of a decomposition
/// with uniform weights; each weight must sit within `1e−12` of `1/k`.
pub fn build_dilation(dec: &MixedUnitaryDecomposition) -> Result<DilationUnitary> {
    let k = dec.len();
    let uniform = 1.0 / k as f64;
    let worst = dec
        .weights()
        .iter()
        .map(|w| (w - uniform).abs())
        .fold(0.0, f64::max);
    if worst > UNIFORM_TOL {
        return Err(Error::NonUniformWeights(worst));
    }
    let d = dec.dim();
    let mut u = ComplexMatrix::zeros(d * k, d * k);
    for (i, v) in dec.unitaries().iter().enumerate() {
        let block = v.kron(&ComplexMatrix::matrix_unit(k, i, i));
        u = &u + &block;
    }
    DilationUnitary::new(k, u)
}

/// The channel a dilation implements: `T(X) = Tr_env(U·(X ⊗ 𝟙ₙ/n)·U†)`,
/// returned as its Choi matrix.
pub fn noisy_operation_channel(u: &DilationUnitary) -> Result<ChoiMatrix> {
    let d = u.system_dim();
    let n = u.env_dim();
    let mixed_env = ComplexMatrix::identity(n).scale_re(1.0 / n as f64);
    let u_adj = u.matrix().adjoint();
    let mut choi = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for c in 0..d {
            let input = ComplexMatrix::matrix_unit(d, a, c).kron(&mixed_env);
            let image = (&(u.matrix() * &input) * &u_adj).partial_trace_env(d, n)?;
            for b in 0..d {
                for e in 0..d {
                    choi.set(a * d + b, c * d + e, image.get(b, e) / d as f64);
                }
            }
        }
    }
    ChoiMatrix::new(d, choi)
}

/// Choi distance between a channel and the channel its dilation implements.
pub fn verify_noisy_representation(channel: &Channel, u: &DilationUnitary) -> Result<f64> {
    let implemented = Channel::Choi(noisy_operation_channel(u)?);
    crate::channel::choi_distance(channel, &implemented)
}

/// Full pipeline: represents a unital qubit channel as a `k`-noisy
/// operation. Decomposes into at most four unitary terms, pads to `k`,
/// flattens the weights to `1/k`, and assembles the controlled unitary on
/// the `2k`-dimensional joint space. Fails with [`Error::KTooSmall`] when
/// the channel needs more than `k` terms.
pub fn noisy_dilation(channel: &Channel, k: usize) -> Result<DilationUnitary> {
    let dec = mixed_unitary_decomposition(channel)?;
    let flat = uniformize(&dec, k)?;
    build_dilation(&flat.decomposition)
}
