//! The Pauli matrices and the associated operator basis of `M(ℂ²)`.
//!
//! Indexing follows the usual convention: `σ₀ = 𝟙₂`, `σ₁ = [[0,1],[1,0]]`,
//! `σ₂ = [[0,−i],[i,0]]`, `σ₃ = [[1,0],[0,−1]]`. All four are Hermitian,
//! unitary, and orthogonal in the Hilbert–Schmidt inner product with
//! `⟨σᵢ, σⱼ⟩ = 2δ_{ij}`, so `{σᵢ/√2}` is an orthonormal basis.

use crate::matrix::{Complex64, ComplexMatrix};

/// 2×2 identity `σ₀`.
pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

/// Pauli `σ₁` (bit flip).
pub fn sigma1() -> ComplexMatrix {
    ComplexMatrix::from_rows(vec![
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    ])
    .expect("static Pauli data")
}

/// Pauli `σ₂`.
pub fn sigma2() -> ComplexMatrix {
    ComplexMatrix::from_rows(vec![
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
        vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
    ])
    .expect("static Pauli data")
}

/// Pauli `σ₃` (phase flip).
pub fn sigma3() -> ComplexMatrix {
    ComplexMatrix::from_rows(vec![
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
    ])
    .expect("static Pauli data")
}

/// The basis `[σ₀, σ₁, σ₂, σ₃]` in index order.
pub fn basis() -> [ComplexMatrix; 4] {
    [identity2(), sigma1(), sigma2(), sigma3()]
}

/// `σᵢ` by index; panics for `i > 3`.
pub fn sigma(i: usize) -> ComplexMatrix {
    match i {
        0 => identity2(),
        1 => sigma1(),
        2 => sigma2(),
        3 => sigma3(),
        _ => panic!("Pauli index {i} out of range"),
    }
}
