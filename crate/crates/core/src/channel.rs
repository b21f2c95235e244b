//! Quantum channel representations and conversions between them.
//!
//! Three interchangeable forms are supported: a Kraus decomposition
//! `T(X) = Σᵢ AᵢXAᵢ†`, a mixed-unitary decomposition `T(X) = Σᵢ pᵢUᵢXUᵢ†`,
//! and the normalized Choi matrix. Conversions route through the Choi form,
//! which is the canonical meeting point for equality tests.
//!
//! # Conventions (fixed, load-bearing)
//!
//! * `vec` is **column-stacking**: the entry `A[i,j]` of a `d×d` matrix lands
//!   at flat position `j·d + i`.
//! * The Choi matrix is `C = (1/d)·Σᵢ vec(Aᵢ)vec(Aᵢ)†`, i.e. the channel
//!   applied to one half of the normalized maximally entangled state. It has
//!   trace one.
//! * Under the crate-wide major/minor flattening of `ℂ^d ⊗ ℂ^d`, column
//!   stacking places the channel *input* indices on the major factor and the
//!   *output* indices on the minor factor:
//!   `C[(a·d+b), (c·d+e)] = (1/d)·T(|a⟩⟨c|)[b,e]`.
//! * Consequently the channel is trace preserving iff the partial trace over
//!   the output (minor) factor is `𝟙_d/d`, and unital iff the partial trace
//!   over the input (major) factor is `𝟙_d/d`.

use serde::{Deserialize, Serialize};

use crate::eig::hermitian_eig;
use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix, DEFAULT_TOL};

/// Relative eigenvalue threshold that separates the numerical rank of a Choi
/// matrix (and the operator Schmidt rank) from rounding noise.
pub const RANK_TOL: f64 = 1e-8;

/// Tolerance used by [`validate`] for its boolean verdicts and by
/// [`kraus_from_choi`] for positivity / trace-preservation gates.
pub const VALIDATE_TOL: f64 = 1e-8;

/// Kraus decomposition `T(X) = Σᵢ AᵢXAᵢ†` of a map on `M(ℂ^d)`.
#[derive(Debug, Clone)]
pub struct KrausDecomposition {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausDecomposition {
    /// Validates that at least one operator is present and that all operators
    /// are square with the stated dimension.
    pub fn new(dim: usize, operators: Vec<ComplexMatrix>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidKraus("no operators".into()));
        }
        for (i, op) in operators.iter().enumerate() {
            if !op.is_square() || op.rows() != dim {
                return Err(Error::InvalidKraus(format!(
                    "operator {i} has shape {}x{}, expected {dim}x{dim}",
                    op.rows(),
                    op.cols()
                )));
            }
        }
        Ok(KrausDecomposition { dim, operators })
    }

    /// Single-operator decomposition, e.g. a unitary conjugation.
    pub fn single(op: ComplexMatrix) -> Result<Self> {
        let dim = op.rows();
        Self::new(dim, vec![op])
    }

    /// Hilbert-space dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The Kraus operators.
    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }
}

/// Mixed-unitary decomposition `T(X) = Σᵢ pᵢ UᵢXUᵢ†`.
#[derive(Debug, Clone)]
pub struct MixedUnitaryDecomposition {
    dim: usize,
    weights: Vec<f64>,
    unitaries: Vec<ComplexMatrix>,
}

impl MixedUnitaryDecomposition {
    /// Validates matching lengths, non-negative weights summing to one within
    /// `1e−12`, and unitarity of every operator at the default tolerance.
    pub fn new(weights: Vec<f64>, unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        if weights.is_empty() || weights.len() != unitaries.len() {
            return Err(Error::InvalidProbability(format!(
                "{} weights for {} unitaries",
                weights.len(),
                unitaries.len()
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidProbability(format!("negative or non-finite weight {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbability(format!(
                "weights sum to {sum}, expected 1 within 1e-12"
            )));
        }
        let dim = unitaries[0].rows();
        for (i, u) in unitaries.iter().enumerate() {
            if !u.is_square() || u.rows() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "unitary {i} has shape {}x{}, expected {dim}x{dim}",
                    u.rows(),
                    u.cols()
                )));
            }
            let violation = u.unitarity_violation();
            if violation > DEFAULT_TOL {
                return Err(Error::NotUnitary(violation));
            }
        }
        Ok(MixedUnitaryDecomposition { dim, weights, unitaries })
    }

    /// Hilbert-space dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of terms `k`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// True when the decomposition has no terms (never holds for validated
    /// instances).
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// The mixing weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The unitaries, index-aligned with [`Self::weights`].
    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    /// Equivalent Kraus decomposition with operators `√pᵢ·Uᵢ`.
    pub fn to_kraus(&self) -> KrausDecomposition {
        let ops = self
            .weights
            .iter()
            .zip(&self.unitaries)
            .map(|(&p, u)| u.scale_re(p.sqrt()))
            .collect();
        KrausDecomposition::new(self.dim, ops).expect("validated terms")
    }
}

/// Normalized Choi matrix of a map on `M(ℂ^d)`: Hermitian, `d²×d²`, trace one.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    /// Validates shape, Hermiticity (relative to the Frobenius norm), and
    /// unit trace.
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != dim * dim {
            let side = dim * dim;
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix has shape {}x{}, expected {side}x{side}",
                matrix.rows(),
                matrix.cols(),
            )));
        }
        let violation = matrix.hermiticity_violation();
        if violation > DEFAULT_TOL * matrix.frobenius_norm().max(1.0) {
            return Err(Error::NotHermitian(violation));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::InvalidMatrix(format!(
                "Choi trace is {trace}, expected 1"
            )));
        }
        Ok(ChoiMatrix { dim, matrix })
    }

    /// Hilbert-space dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The underlying `d²×d²` matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Frobenius distance to another Choi matrix of the same dimension.
    pub fn distance(&self, other: &ChoiMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "Choi distance between dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(self.matrix.distance(&other.matrix))
    }
}

/// A channel in any of the three supported representations.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ChannelData", into = "ChannelData")]
pub enum Channel {
    /// Kraus form.
    Kraus(KrausDecomposition),
    /// Mixed-unitary form.
    MixedUnitary(MixedUnitaryDecomposition),
    /// Choi form.
    Choi(ChoiMatrix),
}

impl Channel {
    /// Hilbert-space dimension `d`.
    pub fn dim(&self) -> usize {
        match self {
            Channel::Kraus(k) => k.dim(),
            Channel::MixedUnitary(m) => m.dim(),
            Channel::Choi(c) => c.dim(),
        }
    }

    /// Converts to the Choi form.
    pub fn to_choi(&self) -> ChoiMatrix {
        match self {
            Channel::Kraus(k) => choi_from_kraus(k),
            Channel::MixedUnitary(m) => choi_from_kraus(&m.to_kraus()),
            Channel::Choi(c) => c.clone(),
        }
    }

    /// Converts to a Kraus form (spectral decomposition when starting from a
    /// Choi matrix).
    pub fn to_kraus(&self) -> Result<KrausDecomposition> {
        match self {
            Channel::Kraus(k) => Ok(k.clone()),
            Channel::MixedUnitary(m) => Ok(m.to_kraus()),
            Channel::Choi(c) => kraus_from_choi(c),
        }
    }

    /// Applies the channel to a `d×d` matrix.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        apply_channel(self, x)
    }
}

/// Column-stacks a matrix: entry `(i, j)` lands at flat index `j·rows + i`.
pub fn vec_columns(m: &ComplexMatrix) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            out.push(m.get(i, j));
        }
    }
    out
}

/// Inverse of [`vec_columns`] for square matrices of dimension `d`.
pub fn unvec_columns(v: &[Complex64], d: usize) -> Result<ComplexMatrix> {
    if v.len() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "unstacking {} entries into a {d}x{d} matrix",
            v.len()
        )));
    }
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        for i in 0..d {
            m.set(i, j, v[j * d + i]);
        }
    }
    Ok(m)
}

/// Choi matrix of a Kraus decomposition: `C = (1/d)·Σᵢ vec(Aᵢ)vec(Aᵢ)†`.
pub fn choi_from_kraus(kraus: &KrausDecomposition) -> ChoiMatrix {
    let d = kraus.dim();
    let side = d * d;
    let mut c = ComplexMatrix::zeros(side, side);
    for op in kraus.operators() {
        let v = vec_columns(op);
        for a in 0..side {
            for b in 0..side {
                let cur = c.get(a, b);
                c.set(a, b, cur + v[a] * v[b].conj());
            }
        }
    }
    let c = c.scale_re(1.0 / d as f64);
    ChoiMatrix { dim: d, matrix: c }
}

/// Spectral Kraus decomposition of a Choi matrix: eigenpairs `(pᵢ, ψᵢ)` with
/// `pᵢ` above the rank threshold become `Aᵢ = √(d·pᵢ)·unvec(ψᵢ)`.
///
/// Rejects matrices that are not positive semidefinite or whose output-factor
/// marginal is not `𝟙/d` (trace preservation) at [`VALIDATE_TOL`].
pub fn kraus_from_choi(choi: &ChoiMatrix) -> Result<KrausDecomposition> {
    let d = choi.dim();
    let eig = hermitian_eig(choi.matrix())?;
    let min = *eig.values.last().expect("non-empty spectrum");
    if min < -VALIDATE_TOL {
        return Err(Error::NotPsd(min));
    }
    let tp_violation = trace_preservation_violation_choi(choi)?;
    if tp_violation > VALIDATE_TOL {
        return Err(Error::NotTracePreserving(tp_violation));
    }
    let max = eig.values[0].max(0.0);
    let mut operators = Vec::new();
    for (i, &p) in eig.values.iter().enumerate() {
        if p > RANK_TOL * max {
            let scale = (d as f64 * p).sqrt();
            let psi = eig.vectors.col(i);
            operators.push(unvec_columns(&psi, d)?.scale_re(scale));
        }
    }
    KrausDecomposition::new(d, operators)
}

/// `‖d·Tr_out(C) − 𝟙‖_F`, the trace-preservation defect read off the Choi
/// matrix (zero for TP channels).
fn trace_preservation_violation_choi(choi: &ChoiMatrix) -> Result<f64> {
    let d = choi.dim();
    let marginal = choi.matrix().partial_trace_env(d, d)?;
    Ok(marginal.scale_re(d as f64).distance(&ComplexMatrix::identity(d)))
}

/// `‖d·Tr_in(C) − 𝟙‖_F`, the unitality defect read off the Choi matrix.
fn unitality_violation_choi(choi: &ChoiMatrix) -> Result<f64> {
    let d = choi.dim();
    let marginal = choi.matrix().partial_trace_sys(d, d)?;
    Ok(marginal.scale_re(d as f64).distance(&ComplexMatrix::identity(d)))
}

/// Applies a channel (any representation) to a `d×d` input.
pub fn apply_channel(channel: &Channel, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = channel.dim();
    if !x.is_square() || x.rows() != d {
        return Err(Error::DimensionMismatch(format!(
            "input has shape {}x{}, channel dimension is {d}",
            x.rows(),
            x.cols()
        )));
    }
    match channel {
        Channel::Kraus(k) => {
            let mut out = ComplexMatrix::zeros(d, d);
            for op in k.operators() {
                out = &out + &(&(op * x) * &op.adjoint());
            }
            Ok(out)
        }
        Channel::MixedUnitary(m) => {
            let mut out = ComplexMatrix::zeros(d, d);
            for (&p, u) in m.weights().iter().zip(m.unitaries()) {
                out = &out + &(&(u * x) * &u.adjoint()).scale_re(p);
            }
            Ok(out)
        }
        Channel::Choi(c) => {
            // T(X)[b,e] = d·Σ_{a,c} X[a,c]·C[(a·d+b),(c·d+e)]
            let mut out = ComplexMatrix::zeros(d, d);
            for b in 0..d {
                for e in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a in 0..d {
                        for cc in 0..d {
                            acc += x.get(a, cc) * c.matrix().get(a * d + b, cc * d + e);
                        }
                    }
                    out.set(b, e, acc * d as f64);
                }
            }
            Ok(out)
        }
    }
}

/// Structural report produced by [`validate`].
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    /// Choi matrix is positive semidefinite within [`VALIDATE_TOL`].
    pub completely_positive: bool,
    /// `Σ Aᵢ†Aᵢ = 𝟙` within [`VALIDATE_TOL`].
    pub trace_preserving: bool,
    /// `Σ AᵢAᵢ† = 𝟙` within [`VALIDATE_TOL`].
    pub unital: bool,
    /// Positivity defect `max(0, −λ_min)` of the Choi matrix.
    pub cp_violation: f64,
    /// Frobenius defect of the trace-preservation condition.
    pub tp_violation: f64,
    /// Frobenius defect of the unitality condition.
    pub unital_violation: f64,
}

/// Checks complete positivity, trace preservation, and unitality, reporting
/// the worst violation of each alongside boolean verdicts at
/// [`VALIDATE_TOL`].
pub fn validate(channel: &Channel) -> Result<ValidationReport> {
    let choi = channel.to_choi();
    let eig = hermitian_eig(choi.matrix())?;
    let min_eig = *eig.values.last().expect("non-empty spectrum");
    let cp_violation = (-min_eig).max(0.0);

    // Operator-sum conditions are evaluated on the native representation
    // where one exists; the Choi marginals are the fallback.
    let (tp_violation, unital_violation) = match channel {
        Channel::Kraus(k) => operator_sum_violations(k),
        Channel::MixedUnitary(m) => operator_sum_violations(&m.to_kraus()),
        Channel::Choi(c) => (
            trace_preservation_violation_choi(c)?,
            unitality_violation_choi(c)?,
        ),
    };
    Ok(ValidationReport {
        completely_positive: cp_violation <= VALIDATE_TOL,
        trace_preserving: tp_violation <= VALIDATE_TOL,
        unital: unital_violation <= VALIDATE_TOL,
        cp_violation,
        tp_violation,
        unital_violation,
    })
}

/// `(‖ΣA†A − 𝟙‖_F, ‖ΣAA† − 𝟙‖_F)` for a Kraus decomposition.
fn operator_sum_violations(kraus: &KrausDecomposition) -> (f64, f64) {
    let d = kraus.dim();
    let mut tp = ComplexMatrix::zeros(d, d);
    let mut un = ComplexMatrix::zeros(d, d);
    for op in kraus.operators() {
        tp = &tp + &(&op.adjoint() * op);
        un = &un + &(op * &op.adjoint());
    }
    let id = ComplexMatrix::identity(d);
    (tp.distance(&id), un.distance(&id))
}

/// Number of Choi eigenvalues above `RANK_TOL` relative to the largest —
/// the Kraus rank of the channel.
pub fn kraus_rank(channel: &Channel) -> Result<usize> {
    let choi = channel.to_choi();
    let eig = hermitian_eig(choi.matrix())?;
    let max = eig.values[0].max(0.0);
    Ok(eig.values.iter().filter(|&&v| v > RANK_TOL * max).count())
}

/// Frobenius distance between the Choi matrices of two channels; the crate's
/// canonical equality measure.
pub fn choi_distance(a: &Channel, b: &Channel) -> Result<f64> {
    a.to_choi().distance(&b.to_choi())
}

// ---------------------------------------------------------------------------
// Serialization: {"dim": d, <exactly one of "kraus" | "mixed_unitary" | "choi">}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MixedUnitaryData {
    weights: Vec<f64>,
    unitaries: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct ChannelData {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kraus: Option<Vec<ComplexMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mixed_unitary: Option<MixedUnitaryData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    choi: Option<ComplexMatrix>,
}

impl TryFrom<ChannelData> for Channel {
    type Error = Error;

    fn try_from(data: ChannelData) -> Result<Self> {
        let present = usize::from(data.kraus.is_some())
            + usize::from(data.mixed_unitary.is_some())
            + usize::from(data.choi.is_some());
        if present != 1 {
            return Err(Error::InvalidMatrix(format!(
                "channel object must carry exactly one representation, found {present}"
            )));
        }
        if let Some(ops) = data.kraus {
            let kraus = KrausDecomposition::new(data.dim, ops)?;
            return Ok(Channel::Kraus(kraus));
        }
        if let Some(mu) = data.mixed_unitary {
            let dec = MixedUnitaryDecomposition::new(mu.weights, mu.unitaries)?;
            if dec.dim() != data.dim {
                return Err(Error::DimensionMismatch(format!(
                    "declared dim {} but unitaries are {}x{}",
                    data.dim,
                    dec.dim(),
                    dec.dim()
                )));
            }
            return Ok(Channel::MixedUnitary(dec));
        }
        let choi = ChoiMatrix::new(data.dim, data.choi.expect("exactly one present"))?;
        Ok(Channel::Choi(choi))
    }
}

impl From<Channel> for ChannelData {
    fn from(ch: Channel) -> Self {
        let dim = ch.dim();
        match ch {
            Channel::Kraus(k) => ChannelData {
                dim,
                kraus: Some(k.operators),
                mixed_unitary: None,
                choi: None,
            },
            Channel::MixedUnitary(m) => ChannelData {
                dim,
                kraus: None,
                mixed_unitary: Some(MixedUnitaryData {
                    weights: m.weights,
                    unitaries: m.unitaries,
                }),
                choi: None,
            },
            Channel::Choi(c) => ChannelData {
                dim,
                kraus: None,
                mixed_unitary: None,
                choi: Some(c.matrix),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn identity_channel() -> Channel {
        Channel::Kraus(KrausDecomposition::single(ComplexMatrix::identity(2)).unwrap())
    }

    /// `T(X) = (1/3)(σ₁Xσ₁ + σ₂Xσ₂ + σ₃Xσ₃)`.
    fn pauli_third_channel() -> Channel {
        let w = 1.0 / 3.0;
        Channel::MixedUnitary(
            MixedUnitaryDecomposition::new(
                vec![w, w, w],
                vec![pauli::sigma1(), pauli::sigma2(), pauli::sigma3()],
            )
            .unwrap(),
        )
    }

    fn depolarizing_channel() -> Channel {
        Channel::MixedUnitary(
            MixedUnitaryDecomposition::new(vec![0.25; 4], pauli::basis().to_vec()).unwrap(),
        )
    }

    #[test]
    fn vec_columns_follows_column_stacking() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(3.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ])
        .unwrap();
        let v = vec_columns(&m);
        assert_eq!(v, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(unvec_columns(&v, 2).unwrap(), m);
    }

    #[test]
    fn identity_choi_is_maximally_entangled_projector() {
        let choi = identity_channel().to_choi();
        // (1/2)·vec(𝟙)vec(𝟙)† with vec(𝟙₂) = (1,0,0,1).
        for a in 0..4 {
            for b in 0..4 {
                let expected = if (a == 0 || a == 3) && (b == 0 || b == 3) {
                    0.5
                } else {
                    0.0
                };
                assert!((choi.matrix().get(a, b) - c(expected, 0.0)).norm() < 1e-15);
            }
        }
        let eig = hermitian_eig(choi.matrix()).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-12);
        for &v in &eig.values[1..] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn pauli_third_channel_has_flat_rank_three_spectrum() {
        let choi = pauli_third_channel().to_choi();
        let eig = hermitian_eig(choi.matrix()).unwrap();
        for &v in &eig.values[..3] {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!(eig.values[3].abs() < 1e-12);
        assert_eq!(kraus_rank(&pauli_third_channel()).unwrap(), 3);
    }

    #[test]
    fn kraus_rank_examples() {
        assert_eq!(kraus_rank(&identity_channel()).unwrap(), 1);
        assert_eq!(kraus_rank(&depolarizing_channel()).unwrap(), 4);
        let depol_choi = depolarizing_channel().to_choi();
        // The fully depolarizing channel's Choi matrix is 𝟙₄/4.
        assert!(depol_choi
            .matrix()
            .distance(&ComplexMatrix::identity(4).scale_re(0.25))
            < 1e-14);
    }

    #[test]
    fn choi_round_trip_preserves_the_channel() {
        for ch in [identity_channel(), pauli_third_channel(), depolarizing_channel()] {
            let choi = ch.to_choi();
            let back = kraus_from_choi(&choi).unwrap();
            let dist = choi_distance(&ch, &Channel::Kraus(back)).unwrap();
            assert!(dist < 1e-10, "round trip distance {dist}");
        }
    }

    #[test]
    fn apply_agrees_across_representations() {
        let ch = pauli_third_channel();
        let as_kraus = Channel::Kraus(ch.to_kraus().unwrap());
        let as_choi = Channel::Choi(ch.to_choi());
        let x = ComplexMatrix::from_rows(vec![
            vec![c(0.3, 0.0), c(0.2, -0.7)],
            vec![c(0.2, 0.7), c(0.7, 0.0)],
        ])
        .unwrap();
        let a = ch.apply(&x).unwrap();
        let b = as_kraus.apply(&x).unwrap();
        let d = as_choi.apply(&x).unwrap();
        assert!(a.distance(&b) < 1e-12);
        assert!(a.distance(&d) < 1e-12);
    }

    #[test]
    fn pauli_third_channel_contracts_sigma3() {
        // σᵢσ₃σᵢ = −σ₃ for i ∈ {1,2} and +σ₃ for i = 3, so the image is −σ₃/3.
        let out = pauli_third_channel().apply(&pauli::sigma3()).unwrap();
        assert!(out.distance(&pauli::sigma3().scale_re(-1.0 / 3.0)) < 1e-13);
    }

    #[test]
    fn validate_identity_and_damping() {
        let report = validate(&identity_channel()).unwrap();
        assert!(report.completely_positive && report.trace_preserving && report.unital);
        assert!(report.cp_violation < 1e-12);
        assert!(report.tp_violation < 1e-12);
        assert!(report.unital_violation < 1e-12);

        // Full amplitude damping: TP but not unital.
        let a0 = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let a1 = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let damping = Channel::Kraus(KrausDecomposition::new(2, vec![a0, a1]).unwrap());
        let report = validate(&damping).unwrap();
        assert!(report.completely_positive);
        assert!(report.trace_preserving);
        assert!(!report.unital);
        assert!(report.unital_violation > 1.0);
    }

    #[test]
    fn validate_flags_a_negative_choi_eigenvalue() {
        // Start from the identity Choi and shift 0.1 of spectral weight from
        // the vec(σ₃) direction to vec(σ₁), keeping trace one and Hermiticity.
        let base = identity_channel().to_choi();
        let mut m = base.matrix().clone();
        let dirs = [pauli::sigma1(), pauli::sigma3()];
        let signs = [0.1, -0.1];
        for (dir, sign) in dirs.iter().zip(signs) {
            let v = vec_columns(&dir.scale_re(std::f64::consts::FRAC_1_SQRT_2));
            for a in 0..4 {
                for b in 0..4 {
                    let cur = m.get(a, b);
                    m.set(a, b, cur + v[a] * v[b].conj() * sign);
                }
            }
        }
        let tampered = Channel::Choi(ChoiMatrix::new(2, m).unwrap());
        let report = validate(&tampered).unwrap();
        assert!(!report.completely_positive);
        assert!((report.cp_violation - 0.1).abs() < 1e-10);
        assert!(matches!(
            kraus_from_choi(&tampered.to_choi()),
            Err(Error::NotPsd(_))
        ));
    }

    #[test]
    fn choi_distance_separates_distinct_unitaries() {
        let sigma1_conj = Channel::Kraus(KrausDecomposition::single(pauli::sigma1()).unwrap());
        let d = choi_distance(&identity_channel(), &sigma1_conj).unwrap();
        assert!((d - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(d > 0.5);
        let self_d = choi_distance(&identity_channel(), &identity_channel()).unwrap();
        assert!(self_d < 1e-15);
    }

    #[test]
    fn serde_round_trips_all_representations() {
        for ch in [identity_channel(), pauli_third_channel()] {
            let text = serde_json::to_string(&ch).unwrap();
            let back: Channel = serde_json::from_str(&text).unwrap();
            assert!(choi_distance(&ch, &back).unwrap() < 1e-14);
        }
        let choi_ch = Channel::Choi(depolarizing_channel().to_choi());
        let text = serde_json::to_string(&choi_ch).unwrap();
        assert!(text.contains("\"choi\""));
        let back: Channel = serde_json::from_str(&text).unwrap();
        assert!(choi_distance(&choi_ch, &back).unwrap() < 1e-14);
    }

    #[test]
    fn serde_requires_exactly_one_representation() {
        let none = r#"{"dim": 2}"#;
        assert!(serde_json::from_str::<Channel>(none).is_err());
        let both = format!(
            r#"{{"dim": 2, "kraus": [{id}], "choi": {id4}}}"#,
            id = serde_json::to_string(&ComplexMatrix::identity(2)).unwrap(),
            id4 = serde_json::to_string(&ComplexMatrix::identity(4).scale_re(0.25)).unwrap(),
        );
        assert!(serde_json::from_str::<Channel>(&both).is_err());
    }

    #[test]
    fn serde_rejects_invalid_mixed_unitary_payloads() {
        let bad_weights = format!(
            r#"{{"dim": 2, "mixed_unitary": {{"weights": [0.7, 0.7], "unitaries": [{u}, {u}]}}}}"#,
            u = serde_json::to_string(&pauli::sigma1()).unwrap()
        );
        assert!(serde_json::from_str::<Channel>(&bad_weights).is_err());
        let not_unitary = format!(
            r#"{{"dim": 2, "mixed_unitary": {{"weights": [1.0], "unitaries": [{u}]}}}}"#,
            u = serde_json::to_string(&pauli::sigma1().scale_re(2.0)).unwrap()
        );
        assert!(serde_json::from_str::<Channel>(&not_unitary).is_err());
    }
}
