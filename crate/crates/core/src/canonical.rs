//! Canonical mixed-unitary decomposition of unital qubit channels.
//!
//! Every unital qubit channel acts on the traceless Pauli components through
//! a real 3×3 matrix `t[i][j] = ½·Tr(σᵢ·T(σⱼ))`. A signed singular value
//! decomposition `t = R_L·diag(λ)·R_R` with both factors in `SO(3)` reduces
//! the channel to a Pauli channel sandwiched between two unitary rotations:
//! lifting `R_L`, `R_R` to `V_L`, `V_R ∈ SU(2)` through the adjoint action
//! and converting the signed spectrum `λ` into Pauli probabilities `p` gives
//!
//! `T(X) = Σᵢ pᵢ·(V_L σᵢ V_R)·X·(V_L σᵢ V_R)†`,
//!
//! a mixed-unitary decomposition with at most four terms. The probabilities
//! are the Choi eigenvalues of the channel, so the number of retained terms
//! equals its Kraus rank.

use crate::channel::{validate, Channel, MixedUnitaryDecomposition};
use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix};
use crate::pauli;
use crate::svd::svd;

/// Real 3×3 matrix used for rotations and the Pauli transfer block.
pub type Mat3 = [[f64; 3]; 3];

/// Unitality / trace-preservation gate for channel ingestion.
const CHANNEL_TOL: f64 = 1e-8;

/// Imaginary parts of the Pauli transfer block beyond this bound indicate a
/// malformed channel.
const REAL_TOL: f64 = 1e-12;

/// Probabilities this far below zero are rounding artifacts and are clamped;
/// anything lower fails complete positivity.
const CLAMP_TOL: f64 = 1e-9;

/// Clamped probabilities at or below this threshold are dropped as
/// exact zeros of the decomposition.
const DROP_TOL: f64 = 1e-12;

/// Canonical factorization data of a unital qubit channel.
#[derive(Debug, Clone)]
pub struct PauliTransferMatrix {
    /// The 3×3 Pauli transfer block.
    pub t: Mat3,
    /// Signed singular values with `|λ₁| ≥ |λ₂| ≥ |λ₃|`.
    pub lambdas: [f64; 3],
    /// Left rotation factor in `SO(3)`.
    pub rot_left: Mat3,
    /// Right rotation factor in `SO(3)`.
    pub rot_right: Mat3,
    /// SU(2) lift of `rot_left`, phase-fixed.
    pub u_left: ComplexMatrix,
    /// SU(2) lift of `rot_right`, phase-fixed.
    pub u_right: ComplexMatrix,
}

// --- small real 3×3 helpers -------------------------------------------------

/// 3×3 identity.
pub fn mat3_identity() -> Mat3 {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

/// 3×3 product.
pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// 3×3 transpose.
pub fn mat3_transpose(a: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[j][i];
        }
    }
    out
}

/// 3×3 determinant.
pub fn mat3_det(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Frobenius distance between 3×3 matrices.
pub fn mat3_distance(a: &Mat3, b: &Mat3) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += (a[i][j] - b[i][j]).powi(2);
        }
    }
    acc.sqrt()
}

/// `‖RᵀR − 𝟙‖_F`, the orthogonality defect.
pub fn orthogonality_violation(r: &Mat3) -> f64 {
    mat3_distance(&mat3_mul(&mat3_transpose(r), r), &mat3_identity())
}

/// Rodrigues rotation about a (not necessarily normalized) axis.
pub fn rotation_from_axis_angle(axis: &[f64; 3], angle: f64) -> Mat3 {
    let norm = (axis[0].powi(2) + axis[1].powi(2) + axis[2].powi(2)).sqrt();
    assert!(norm > 0.0, "rotation axis must be nonzero");
    let n = [axis[0] / norm, axis[1] / norm, axis[2] / norm];
    let (s, c) = angle.sin_cos();
    let k = [
        [0.0, -n[2], n[1]],
        [n[2], 0.0, -n[0]],
        [-n[1], n[0], 0.0],
    ];
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let id = if i == j { 1.0 } else { 0.0 };
            *cell = c * id + s * k[i][j] + (1.0 - c) * n[i] * n[j];
        }
    }
    out
}

// --- channel-facing operations ---------------------------------------------

/// The 3×3 Pauli transfer block `t[i][j] = ½·Tr(σᵢ·T(σⱼ))` of a unital
/// trace-preserving qubit channel.
///
/// Rejects channels of the wrong dimension, channels whose unitality or
/// trace-preservation defect exceeds `1e−8`, and transfer blocks with
/// imaginary parts above `1e−12`.
pub fn pauli_transfer(channel: &Channel) -> Result<Mat3> {
    if channel.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Pauli transfer of a dimension-{} channel",
            channel.dim()
        )));
    }
    let report = validate(channel)?;
    if report.unital_violation > CHANNEL_TOL {
        return Err(Error::NotUnital(report.unital_violation));
    }
    if report.tp_violation > CHANNEL_TOL {
        return Err(Error::NotTracePreserving(report.tp_violation));
    }
    let mut t = [[0.0; 3]; 3];
    let mut worst_imag: f64 = 0.0;
    for j in 0..3 {
        let image = channel.apply(&pauli::sigma(j + 1))?;
        for (i, row) in t.iter_mut().enumerate() {
            let entry = (&pauli::sigma(i + 1) * &image).trace() * 0.5;
            worst_imag = worst_imag.max(entry.im.abs());
            row[j] = entry.re;
        }
    }
    if worst_imag > REAL_TOL {
        return Err(Error::NotReal(worst_imag));
    }
    Ok(t)
}

/// Signed singular value decomposition of a real 3×3 matrix:
/// `t = R_L·diag(λ)·R_R` with `R_L, R_R ∈ SO(3)` and `|λ₁| ≥ |λ₂| ≥ |λ₃|`.
///
/// A negative determinant in either orthogonal factor is absorbed by
/// negating its last column (respectively row) together with the sign of
/// `λ₃`, which leaves the product unchanged.
pub fn signed_svd_so3(t: &Mat3) -> Result<(Mat3, [f64; 3], Mat3)> {
    let mut tm = ComplexMatrix::zeros(3, 3);
    for (i, row) in t.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            tm.set(i, j, Complex64::new(x, 0.0));
        }
    }
    let s = svd(&tm)?;
    let worst_imag = s.left.max_imag().max(s.right.max_imag());
    if worst_imag > REAL_TOL {
        return Err(Error::NotReal(worst_imag));
    }
    let mut r_left = [[0.0; 3]; 3];
    let mut r_right = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r_left[i][j] = s.left.get(i, j).re;
            // t = left·Σ·right†, so the right rotation factor is the adjoint.
            r_right[i][j] = s.right.get(j, i).re;
        }
    }
    let mut lambdas = [s.singulars[0], s.singulars[1], s.singulars[2]];
    if mat3_det(&r_left) < 0.0 {
        for row in &mut r_left {
            row[2] = -row[2];
        }
        lambdas[2] = -lambdas[2];
    }
    if mat3_det(&r_right) < 0.0 {
        for x in &mut r_right[2] {
            *x = -*x;
        }
        lambdas[2] = -lambdas[2];
    }
    Ok((r_left, lambdas, r_right))
}

/// Lifts a rotation to `SU(2)` through the adjoint action: the returned `V`
/// satisfies `V(n·σ)V† = (Rn)·σ`, with the global phase fixed by making the
/// first nonzero entry (row-major) real and positive.
pub fn su2_from_so3(r: &Mat3) -> Result<ComplexMatrix> {
    let ortho = orthogonality_violation(r);
    let det = mat3_det(r);
    if ortho > CHANNEL_TOL || (det - 1.0).abs() > CHANNEL_TOL {
        return Err(Error::NotRotation(format!(
            "orthogonality defect {ortho:.3e}, determinant {det:.6}"
        )));
    }
    // The antisymmetric part encodes 2·sin(angle)·axis.
    let v = [
        r[2][1] - r[1][2],
        r[0][2] - r[2][0],
        r[1][0] - r[0][1],
    ];
    let v_norm = (v[0].powi(2) + v[1].powi(2) + v[2].powi(2)).sqrt();
    // Recover the angle from both the trace (cosine) and the antisymmetric
    // part (sine): atan2 stays fully accurate where acos alone would lose
    // half its digits, near 0 and near π.
    let trace = r[0][0] + r[1][1] + r[2][2];
    let angle = (v_norm / 2.0).atan2((trace - 1.0) / 2.0);

    let axis = if std::f64::consts::PI - angle < 1e-6 {
        // Near a half turn the antisymmetric part degenerates; recover the
        // axis from the symmetric part of (R + 𝟙)/2 ≈ nnᵀ via its dominant
        // column (symmetrizing removes the residual sinθ contamination),
        // then restore the sign from the antisymmetric part where it is
        // still resolvable.
        let b = |i: usize, j: usize| {
            ((r[i][j] + r[j][i]) / 2.0 + if i == j { 1.0 } else { 0.0 }) / 2.0
        };
        let diag = [b(0, 0), b(1, 1), b(2, 2)];
        let dominant = (0..3)
            .max_by(|&x, &y| diag[x].partial_cmp(&diag[y]).expect("finite"))
            .expect("three candidates");
        let col = [b(0, dominant), b(1, dominant), b(2, dominant)];
        let norm = (col[0].powi(2) + col[1].powi(2) + col[2].powi(2)).sqrt();
        let mut axis = [col[0] / norm, col[1] / norm, col[2] / norm];
        let orientation = v[0] * axis[0] + v[1] * axis[1] + v[2] * axis[2];
        if orientation < 0.0 {
            for x in &mut axis {
                *x = -*x;
            }
        }
        axis
    } else if v_norm > 0.0 {
        [v[0] / v_norm, v[1] / v_norm, v[2] / v_norm]
    } else {
        // angle ≈ 0: the lift is the identity, any axis serves.
        [0.0, 0.0, 1.0]
    };

    let half = angle / 2.0;
    let (s, c) = half.sin_cos();
    let mi = Complex64::new(0.0, -1.0);
    let mut u = ComplexMatrix::identity(2).scale_re(c);
    for (i, &n) in axis.iter().enumerate() {
        u = &u + &pauli::sigma(i + 1).scale(mi * (s * n));
    }
    Ok(fix_global_phase(&u))
}

/// Rescales a matrix by a unit phase so its first nonzero entry in row-major
/// order is real and positive.
pub fn fix_global_phase(u: &ComplexMatrix) -> ComplexMatrix {
    let threshold = u.max_abs() * 1e-8;
    for i in 0..u.rows() {
        for j in 0..u.cols() {
            let z = u.get(i, j);
            if z.norm() > threshold {
                return u.scale((z / z.norm()).conj());
            }
        }
    }
    u.clone()
}

/// Rotation implemented on Bloch vectors by conjugation with a 2×2 unitary:
/// `R[i][j] = ½·Re Tr(σᵢ·U·σⱼ·U†)`.
pub fn bloch_rotation(u: &ComplexMatrix) -> Result<Mat3> {
    if !u.is_square() || u.rows() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Bloch rotation of a {}x{} matrix",
            u.rows(),
            u.cols()
        )));
    }
    let violation = u.unitarity_violation();
    if violation > CHANNEL_TOL {
        return Err(Error::NotUnitary(violation));
    }
    let mut r = [[0.0; 3]; 3];
    let udag = u.adjoint();
    for j in 0..3 {
        let image = &(u * &pauli::sigma(j + 1)) * &udag;
        for (i, row) in r.iter_mut().enumerate() {
            row[j] = ((&pauli::sigma(i + 1) * &image).trace() * 0.5).re;
        }
    }
    Ok(r)
}

/// Converts the signed Pauli-transfer spectrum into Pauli probabilities:
/// `λ₁ = p₀+p₁−p₂−p₃`, `λ₂ = p₀−p₁+p₂−p₃`, `λ₃ = p₀−p₁−p₂+p₃` inverted under
/// `Σpᵢ = 1`. Values inside `[−1e−9, 0)` are clamped to zero; lower values
/// mean the spectrum leaves the tetrahedron of channels and fail complete
/// positivity.
pub fn pauli_probabilities(lambdas: &[f64; 3]) -> Result<[f64; 4]> {
    let [l1, l2, l3] = *lambdas;
    let raw = [
        (1.0 + l1 + l2 + l3) / 4.0,
        (1.0 + l1 - l2 - l3) / 4.0,
        (1.0 - l1 + l2 - l3) / 4.0,
        (1.0 - l1 - l2 + l3) / 4.0,
    ];
    let mut p = [0.0; 4];
    for (i, (&r, out)) in raw.iter().zip(p.iter_mut()).enumerate() {
        if r < -CLAMP_TOL {
            return Err(Error::NotCp(format!(
                "Pauli probability p{i} = {r:.3e} lies outside the channel tetrahedron"
            )));
        }
        *out = r.max(0.0);
    }
    Ok(p)
}

/// Signed spectrum corresponding to Pauli probabilities.
pub fn lambdas_from_probabilities(p: &[f64; 4]) -> [f64; 3] {
    [
        p[0] + p[1] - p[2] - p[3],
        p[0] - p[1] + p[2] - p[3],
        p[0] - p[1] - p[2] + p[3],
    ]
}

/// Computes the full canonical factorization of a unital qubit channel.
pub fn canonical_form(channel: &Channel) -> Result<PauliTransferMatrix> {
    let t = pauli_transfer(channel)?;
    let (rot_left, lambdas, rot_right) = signed_svd_so3(&t)?;
    let u_left = su2_from_so3(&rot_left)?;
    let u_right = su2_from_so3(&rot_right)?;
    Ok(PauliTransferMatrix {
        t,
        lambdas,
        rot_left,
        rot_right,
        u_left,
        u_right,
    })
}

/// Canonical mixed-unitary decomposition `T(X) = Σᵢ pᵢ·UᵢXUᵢ†` with
/// `Uᵢ = V_L·σᵢ·V_R` and at most four terms; zero-probability terms are
/// dropped and the remaining weights renormalized.
pub fn mixed_unitary_decomposition(channel: &Channel) -> Result<MixedUnitaryDecomposition> {
    let form = canonical_form(channel)?;
    let p = pauli_probabilities(&form.lambdas)?;
    let mut weights = Vec::new();
    let mut unitaries = Vec::new();
    for (i, &w) in p.iter().enumerate() {
        if w > DROP_TOL {
            weights.push(w);
            unitaries.push(&(&form.u_left * &pauli::sigma(i)) * &form.u_right);
        }
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    MixedUnitaryDecomposition::new(weights, unitaries)
}

/// Grows a mixed-unitary decomposition to exactly `k` terms without changing
/// the channel: the largest weight (ties break toward the lowest index) is
/// split in half and its unitary duplicated until `k` terms exist.
pub fn pad_decomposition(
    dec: &MixedUnitaryDecomposition,
    k: usize,
) -> Result<MixedUnitaryDecomposition> {
    if k < dec.len() {
        return Err(Error::KTooSmall {
            requested: k,
            required: dec.len(),
        });
    }
    let mut weights = dec.weights().to_vec();
    let mut unitaries = dec.unitaries().to_vec();
    while weights.len() < k {
        let largest = weights
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.partial_cmp(b).expect("finite weights"))
            .map(|(i, _)| i)
            .expect("non-empty decomposition");
        let half = weights[largest] / 2.0;
        weights[largest] = half;
        weights.push(half);
        unitaries.push(unitaries[largest].clone());
    }
    MixedUnitaryDecomposition::new(weights, unitaries)
}
