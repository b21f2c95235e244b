//! Singular value decomposition via the Hermitian eigensolver.
//!
//! For `M` with at least as many rows as columns, the right singular vectors
//! come from the eigendecomposition of `M†M`, singular values are the square
//! roots of its (clamped) eigenvalues, and each left vector is recovered
//! through the pairing `u_i = M·v_i/σ_i`. Columns whose singular value falls
//! below a relative floor — the numerical null space — are filled in by
//! Gram–Schmidt against standard basis vectors, so both factors are always
//! full square unitaries. Wide matrices are handled by decomposing the
//! adjoint and swapping the factors, which is the same construction driven by
//! `MM†`.

use num_complex::Complex;

use crate::eig::hermitian_eig;
use crate::error::Result;
use crate::matrix::{Complex64, ComplexMatrix};

/// Relative singular-value floor below which a column is treated as part of
/// the numerical null space and completed by Gram–Schmidt instead of the
/// `M·v/σ` pairing.
const NULL_SPACE_FLOOR: f64 = 1e-13;

/// Result of [`svd`]: `left·diag(singulars)·right†` reconstructs the input,
/// with `left` and `right` square unitaries and `singulars` of length
/// `min(rows, cols)` sorted descending.
#[derive(Debug, Clone)]
pub struct SingularValueDecomposition {
    /// Unitary factor on the left, `rows × rows`.
    pub left: ComplexMatrix,
    /// Non-negative singular values, descending.
    pub singulars: Vec<f64>,
    /// Unitary factor on the right, `cols × cols`; the decomposition uses its
    /// adjoint.
    pub right: ComplexMatrix,
}

impl SingularValueDecomposition {
    /// Rebuilds `left·Σ·right†` with the rectangular diagonal `Σ`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let rows = self.left.rows();
        let cols = self.right.rows();
        let mut sigma = ComplexMatrix::zeros(rows, cols);
        for (i, &s) in self.singulars.iter().enumerate() {
            sigma.set(i, i, Complex::new(s, 0.0));
        }
        &(&self.left * &sigma) * &self.right.adjoint()
    }
}

/// Full singular value decomposition of an arbitrary rectangular matrix.
pub fn svd(m: &ComplexMatrix) -> Result<SingularValueDecomposition> {
    if m.rows() < m.cols() {
        let t = svd(&m.adjoint())?;
        return Ok(SingularValueDecomposition {
            left: t.right,
            singulars: t.singulars,
            right: t.left,
        });
    }

    let gram = &m.adjoint() * m;
    let eig = hermitian_eig(&gram)?;
    let singulars: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let sigma_max = singulars.first().copied().unwrap_or(0.0);

    let mut left_cols: Vec<Vec<Complex64>> = Vec::with_capacity(m.rows());
    for (i, &s) in singulars.iter().enumerate() {
        if sigma_max == 0.0 || s <= sigma_max * NULL_SPACE_FLOOR {
            break; // values are descending; the rest belong to the null space
        }
        let mut u = m.mul_vec(&eig.vectors.col(i));
        for z in &mut u {
            *z /= s;
        }
        // Re-orthogonalize against the columns already kept; for separated
        // singular values this is a no-op up to rounding, for clustered ones
        // it pins down exact orthonormality.
        project_out(&mut u, &left_cols);
        let norm = vec_norm(&u);
        if norm <= 0.5 {
            break; // defensive: pairing degenerated, fall back to completion
        }
        for z in &mut u {
            *z /= norm;
        }
        left_cols.push(u);
    }
    complete_basis(&mut left_cols, m.rows());

    // Polish each singular value through the final factors: σᵢ = |uᵢ†·M·vᵢ|.
    // The Gram route floors small values near √ε relative to the largest
    // (squaring halves the usable digits); the bilinear form restores full
    // precision and sends numerical null directions to ~ε, after which the
    // triplets are re-sorted.
    let mut singulars = singulars;
    for (i, s) in singulars.iter_mut().enumerate() {
        let mv = m.mul_vec(&eig.vectors.col(i));
        *s = left_cols[i]
            .iter()
            .zip(&mv)
            .map(|(u, y)| u.conj() * y)
            .sum::<Complex64>()
            .norm();
    }
    let mut order: Vec<usize> = (0..singulars.len()).collect();
    order.sort_by(|&x, &y| singulars[y].partial_cmp(&singulars[x]).expect("finite"));
    let singulars: Vec<f64> = order.iter().map(|&i| singulars[i]).collect();
    let right_cols: Vec<Vec<Complex64>> = order.iter().map(|&i| eig.vectors.col(i)).collect();
    let permuted_left: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&i| left_cols[i].clone())
        .chain(left_cols[order.len()..].iter().cloned())
        .collect();

    Ok(SingularValueDecomposition {
        left: ComplexMatrix::from_cols(&permuted_left)?,
        singulars,
        right: ComplexMatrix::from_cols(&right_cols)?,
    })
}

/// Removes the components of `v` along each (orthonormal) basis vector.
fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for b in basis {
        let coeff: Complex64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi -= coeff * bi;
        }
    }
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Extends an orthonormal set to a full basis of `ℂ^dim` by sweeping standard
/// basis vectors through Gram–Schmidt (two passes for stability).
fn complete_basis(cols: &mut Vec<Vec<Complex64>>, dim: usize) {
    let mut candidate = 0;
    while cols.len() < dim && candidate < dim {
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[candidate] = Complex64::new(1.0, 0.0);
        candidate += 1;
        project_out(&mut e, cols);
        let norm = vec_norm(&e);
        if norm < 1e-6 {
            continue; // essentially inside the span already
        }
        for z in &mut e {
            *z /= norm;
        }
        project_out(&mut e, cols);
        let norm = vec_norm(&e);
        for z in &mut e {
            *z /= norm;
        }
        cols.push(e);
    }
    assert_eq!(cols.len(), dim, "basis completion exhausted candidates");
}
