//! Eigendecomposition of complex Hermitian matrices.
//!
//! The solver runs cyclic Jacobi sweeps with complex plane rotations. Each
//! off-diagonal element `a_pq = r·e^{iφ}` is first de-phased so the 2×2 block
//! becomes real symmetric, then annihilated with the classical stable choice
//! of rotation angle. The accumulated rotations form the eigenvector matrix,
//! so orthonormality holds by construction. Dimensions in this crate stay at
//! or below 16, where Jacobi converges in a handful of sweeps and is accurate
//! to a small multiple of machine precision.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix, DEFAULT_TOL};

/// Stop sweeping once the off-diagonal Frobenius mass drops below this
/// multiple of the input norm.
const SWEEP_TOL: f64 = 1e-14;

/// Cap on Jacobi sweeps; a handful suffices for the dimensions used here.
const MAX_SWEEPS: usize = 100;

/// Result of [`hermitian_eig`]: `values` are real and sorted descending,
/// `vectors` holds the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose column `i` is the eigenvector for `values[i]`.
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuilds `V·diag(values)·V†`; useful for residual checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled.set(i, j, scaled.get(i, j) * self.values[j]);
            }
        }
        &scaled * &self.vectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix with the default Hermiticity
/// tolerance.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    hermitian_eig_with_tol(h, DEFAULT_TOL)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// `herm_tol` bounds the accepted deviation `‖H − H†‖_F` relative to
/// `max(1, ‖H‖_F)`; beyond it the input is rejected with
/// [`Error::NotHermitian`]. Within it, the strictly Hermitian part
/// `(H + H†)/2` is diagonalized.
pub fn hermitian_eig_with_tol(h: &ComplexMatrix, herm_tol: f64) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    let norm = h.frobenius_norm();
    let violation = h.hermiticity_violation();
    if violation > herm_tol * norm.max(1.0) {
        return Err(Error::NotHermitian(violation));
    }

    let n = h.rows();
    // Work on the exactly-Hermitian part so rounding in the input cannot
    // leak complex parts onto the diagonal.
    let mut a = h.clone();
    for i in 0..n {
        for j in 0..n {
            let sym = (h.get(i, j) + h.get(j, i).conj()).scale(0.5);
            a.set(i, j, sym);
        }
        let d = a.get(i, i);
        a.set(i, i, Complex::new(d.re, 0.0));
    }

    let mut v = ComplexMatrix::identity(n);
    let target = SWEEP_TOL * norm;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::ConvergenceFailure(format!(
            "Jacobi sweeps left off-diagonal mass {:.3e} above target {:.3e}",
            off_diagonal_norm(&a),
            target
        )));
    }

    // Sort eigenpairs by descending eigenvalue, keeping sweep order within
    // degenerate clusters for determinism.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(j, j)
            .re
            .partial_cmp(&a.get(i, i).re)
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&i| a.get(i, i).re).collect();
    let cols: Vec<Vec<Complex64>> = order.iter().map(|&j| v.col(j)).collect();
    Ok(EigenDecomposition {
        values,
        vectors: ComplexMatrix::from_cols(&cols)?,
    })
}

/// Frobenius norm of the strictly off-diagonal part.
fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `a[p][q]` with a complex Jacobi rotation, updating `a` in
/// place and accumulating the rotation into the columns of `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    // De-phase: u = a_pq/|a_pq| turns the (p,q) block real symmetric.
    let u = apq / r;
    let theta = (a.get(q, q).re - a.get(p, p).re) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.rows();

    // Combined rotation G: columns (p,q) mix with coefficients
    //   G[p][p] = c, G[p][q] = s, G[q][p] = −s·ū, G[q][q] = c·ū.
    let ubar = u.conj();
    for j in 0..n {
        let ajp = a.get(j, p);
        let ajq = a.get(j, q);
        a.set(j, p, ajp * c - ajq * (ubar * s));
        a.set(j, q, ajp * s + ajq * (ubar * c));
    }
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, apj * c - aqj * (u * s));
        a.set(q, j, apj * s + aqj * (u * c));
    }
    // The rotation zeroes (p,q) analytically; scrub the rounding residue so
    // the iterate stays exactly Hermitian.
    a.set(p, q, Complex::new(0.0, 0.0));
    a.set(q, p, Complex::new(0.0, 0.0));
    let dp = a.get(p, p);
    let dq = a.get(q, q);
    a.set(p, p, Complex::new(dp.re, 0.0));
    a.set(q, q, Complex::new(dq.re, 0.0));

    for j in 0..v.rows() {
        let vjp = v.get(j, p);
        let vjq = v.get(j, q);
        v.set(j, p, vjp * c - vjq * (ubar * s));
        v.set(j, q, vjp * s + vjq * (ubar * c));
    }
}
