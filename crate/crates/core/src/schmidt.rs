//! Operator Schmidt analysis of bipartite operators.
//!
//! An operator `Y` on a `d₁·d₂`-dimensional tensor product (first factor
//! major) expands uniquely as `Y = Σₜ cₜ·Aₜ ⊗ Bₜ` with `cₜ > 0` and the
//! `Aₜ`, `Bₜ` orthonormal in the Hilbert–Schmidt inner product. The number
//! of terms — the operator Schmidt rank — measures how entangling `Y` is as
//! an operation. The expansion is computed by a singular value
//! decomposition of the realignment of `Y`, the `d₁² × d₂²` matrix that
//! regroups row/column indices by tensor factor.
//!
//! For a dilation unitary the operator Schmidt rank equals the Kraus rank
//! of the channel it implements, and for two-qubit unitaries it can only be
//! 1, 2, or 4 — never 3.

use crate::channel::{kraus_rank, Channel, RANK_TOL};
use crate::dilation::{noisy_operation_channel, DilationUnitary};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::random::{haar_unitary, trial_rng};
use crate::svd::svd;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Relative threshold below which Schmidt coefficients are dropped from the
/// decomposition (kept coefficients still carry ranks computed at the
/// coarser [`RANK_TOL`]).
const KEEP_TOL: f64 = 1e-12;

/// Realignment of an operator on a `d₁·d₂`-dimensional tensor product: the
/// `d₁² × d₂²` matrix `R[(i·d₁+j), (k·d₂+l)] = Y[(i·d₂+k), (j·d₂+l)]`.
///
/// Row indices of `R` enumerate first-factor index pairs, columns
/// second-factor pairs, so a product operator realigns to a rank-one
/// matrix.
pub fn realignment(y: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    if d1 == 0 || d2 == 0 || !y.is_square() || y.rows() != d1 * d2 {
        return Err(Error::DimensionMismatch(format!(
            "cannot realign a {}x{} matrix as an operator on a {d1}·{d2} tensor product",
            y.rows(),
            y.cols()
        )));
    }
    let mut r = ComplexMatrix::zeros(d1 * d1, d2 * d2);
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d2 {
                for l in 0..d2 {
                    r.set(i * d1 + j, k * d2 + l, y.get(i * d2 + k, j * d2 + l));
                }
            }
        }
    }
    Ok(r)
}

/// The expansion `Y = Σₜ cₜ·Aₜ ⊗ Bₜ` with positive coefficients in
/// descending order and Hilbert–Schmidt-orthonormal factor operators.
#[derive(Debug, Clone)]
pub struct OperatorSchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_ops: Vec<ComplexMatrix>,
    pub right_ops: Vec<ComplexMatrix>,
}

impl OperatorSchmidtDecomposition {
    /// Number of retained terms.
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Rebuilds `Σₜ cₜ·Aₜ ⊗ Bₜ`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d1 = self.left_ops.first().map_or(1, ComplexMatrix::rows);
        let d2 = self.right_ops.first().map_or(1, ComplexMatrix::rows);
        let mut out = ComplexMatrix::zeros(d1 * d2, d1 * d2);
        for ((c, a), b) in self
            .coefficients
            .iter()
            .zip(&self.left_ops)
            .zip(&self.right_ops)
        {
            out = &out + &a.scale_re(*c).kron(b);
        }
        out
    }
}

/// Computes the operator Schmidt decomposition of `Y`, keeping terms with
/// coefficients above `1e−12` of the largest.
pub fn operator_schmidt_decomposition(
    y: &ComplexMatrix,
    d1: usize,
    d2: usize,
) -> Result<OperatorSchmidtDecomposition> {
    let r = realignment(y, d1, d2)?;
    let s = svd(&r)?;
    let floor = s.singulars.first().copied().unwrap_or(0.0) * KEEP_TOL;
    let mut out = OperatorSchmidtDecomposition {
        coefficients: Vec::new(),
        left_ops: Vec::new(),
        right_ops: Vec::new(),
    };
    for (t, &sigma) in s.singulars.iter().enumerate() {
        if sigma <= floor {
            break;
        }
        let mut a = ComplexMatrix::zeros(d1, d1);
        for i in 0..d1 {
            for j in 0..d1 {
                a.set(i, j, s.left.get(i * d1 + j, t));
            }
        }
        let mut b = ComplexMatrix::zeros(d2, d2);
        for k in 0..d2 {
            for l in 0..d2 {
                b.set(k, l, s.right.get(k * d2 + l, t).conj());
            }
        }
        out.coefficients.push(sigma);
        out.left_ops.push(a);
        out.right_ops.push(b);
    }
    Ok(out)
}

/// Operator Schmidt rank of `Y`: the number of realignment singular values
/// above `1e−8` of the largest.
pub fn operator_schmidt_rank(y: &ComplexMatrix, d1: usize, d2: usize) -> Result<usize> {
    let r = realignment(y, d1, d2)?;
    let s = svd(&r)?;
    let top = s.singulars.first().copied().unwrap_or(0.0);
    Ok(s.singulars.iter().filter(|&&x| x > top * RANK_TOL).count())
}

/// Comparison of the two rank notions attached to a dilation unitary.
#[derive(Debug, Clone, Serialize)]
pub struct RankComparison {
    /// Kraus rank of the channel the dilation implements.
    pub kraus_rank: usize,
    /// Operator Schmidt rank of the dilation unitary itself.
    pub schmidt_rank: usize,
    /// Whether the two agree.
    pub equal: bool,
}

/// Computes both the Kraus rank of the channel implemented by `u` (system
/// dimension `d`, environment dimension `n`, maximally mixed environment)
/// and the operator Schmidt rank of `u`, which coincide for every unitary.
pub fn check_rank_equality(u: &ComplexMatrix, d: usize, n: usize) -> Result<RankComparison> {
    let dilation = DilationUnitary::new(n, u.clone())?;
    if dilation.system_dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "a {}x{} unitary does not act on a {d}·{n} tensor product",
            u.rows(),
            u.cols()
        )));
    }
    let channel = Channel::Choi(noisy_operation_channel(&dilation)?);
    let kraus = kraus_rank(&channel)?;
    let schmidt = operator_schmidt_rank(u, d, n)?;
    Ok(RankComparison {
        kraus_rank: kraus,
        schmidt_rank: schmidt,
        equal: kraus == schmidt,
    })
}

/// Distribution of operator Schmidt ranks over Haar-random unitaries,
/// together with the data needed to audit the rank threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankHistogram {
    /// Rank → number of sampled unitaries with that rank.
    pub counts: BTreeMap<usize, u64>,
    /// Number of samples drawn.
    pub trials: u64,
    /// Base seed; trial `t` uses an independent stream derived from it.
    pub seed: u64,
    /// Relative singular-value threshold that defined the ranks.
    pub tolerance: f64,
    /// Smallest observed separation between accepted and rejected relative
    /// singular values across all trials; a large value means every rank
    /// decision was unambiguous.
    pub min_gap: f64,
}

impl RankHistogram {
    /// Renders the histogram as CSV with a `rank,count` header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,count\n");
        for (rank, count) in &self.counts {
            out.push_str(&format!("{rank},{count}\n"));
        }
        out
    }
}

/// Samples `trials` Haar-random unitaries on a `d·n`-dimensional space and
/// histograms their operator Schmidt ranks. Each trial draws from its own
/// deterministic stream of `seed`, so results are reproducible and
/// independent of trial order.
pub fn rank_census(d: usize, n: usize, trials: u64, seed: u64) -> Result<RankHistogram> {
    if d == 0 || n == 0 {
        return Err(Error::DimensionMismatch(
            "census dimensions must be positive".into(),
        ));
    }
    let mut counts = BTreeMap::new();
    let mut min_gap = f64::INFINITY;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let u = haar_unitary(d * n, &mut rng);
        let r = realignment(&u, d, n)?;
        let s = svd(&r)?;
        let top = s.singulars.first().copied().unwrap_or(0.0);
        if top <= 0.0 {
            return Err(Error::ConvergenceFailure(
                "sampled unitary realigned to zero".into(),
            ));
        }
        let mut rank = 0usize;
        let mut smallest_accepted = f64::INFINITY;
        let mut largest_rejected = 0.0f64;
        for &sigma in &s.singulars {
            let rel = sigma / top;
            if rel > RANK_TOL {
                rank += 1;
                smallest_accepted = smallest_accepted.min(rel);
            } else {
                largest_rejected = largest_rejected.max(rel);
            }
        }
        min_gap = min_gap.min(smallest_accepted - largest_rejected);
        *counts.entry(rank).or_insert(0) += 1;
    }
    Ok(RankHistogram {
        counts,
        trials,
        seed,
        tolerance: RANK_TOL,
        min_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Complex64;
    use crate::pauli;
    use crate::random::base_rng;
    use rand::Rng;

    fn random_matrix(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(
                    i,
                    j,
                    Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                );
            }
        }
        m
    }

    fn swap_gate() -> ComplexMatrix {
        let mut swap = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for e in 0..2 {
                swap.set(e * 2 + i, i * 2 + e, Complex64::new(1.0, 0.0));
            }
        }
        swap
    }

    #[test]
    fn realignment_is_an_involution_on_square_splits() {
        let mut rng = base_rng(61);
        let y = random_matrix(4, &mut rng);
        let r = realignment(&y, 2, 2).unwrap();
        let back = realignment(&r, 2, 2).unwrap();
        assert!(back.distance(&y) < 1e-15);
    }

    #[test]
    fn realignment_rejects_mismatched_shapes() {
        let y = ComplexMatrix::identity(6);
        assert!(realignment(&y, 2, 2).is_err());
        assert!(realignment(&y, 2, 3).is_ok());
        assert!(realignment(&y, 0, 6).is_err());
    }

    #[test]
    fn product_operators_have_rank_one() {
        let mut rng = base_rng(62);
        let a = random_matrix(2, &mut rng);
        let b = random_matrix(3, &mut rng);
        let y = a.kron(&b);
        assert_eq!(operator_schmidt_rank(&y, 2, 3).unwrap(), 1);
        let dec = operator_schmidt_decomposition(&y, 2, 3).unwrap();
        assert_eq!(dec.len(), 1);
        let expected = a.frobenius_norm() * b.frobenius_norm();
        assert!((dec.coefficients[0] - expected).abs() < 1e-12);
        assert!(dec.reconstruct().distance(&y) < 1e-12);
    }

    #[test]
    fn swap_has_full_rank_with_unit_coefficients() {
        // SWAP = ½·Σᵢ σᵢ ⊗ σᵢ, so all four coefficients equal 1.
        let dec = operator_schmidt_decomposition(&swap_gate(), 2, 2).unwrap();
        assert_eq!(dec.len(), 4);
        for &c in &dec.coefficients {
            assert!((c - 1.0).abs() < 1e-12);
        }
        assert_eq!(operator_schmidt_rank(&swap_gate(), 2, 2).unwrap(), 4);
    }

    #[test]
    fn controlled_unitary_has_rank_two() {
        let u = &ComplexMatrix::identity(2).kron(&ComplexMatrix::matrix_unit(2, 0, 0))
            + &pauli::sigma1().kron(&ComplexMatrix::matrix_unit(2, 1, 1));
        let dec = operator_schmidt_decomposition(&u, 2, 2).unwrap();
        assert_eq!(dec.len(), 2);
        assert_eq!(operator_schmidt_rank(&u, 2, 2).unwrap(), 2);
        for &c in &dec.coefficients {
            assert!((c - std::f64::consts::SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn decomposition_factors_are_orthonormal_and_parseval_holds() {
        let mut rng = base_rng(63);
        for (d1, d2) in [(2, 2), (2, 3), (3, 2)] {
            let y = random_matrix(d1 * d2, &mut rng);
            let dec = operator_schmidt_decomposition(&y, d1, d2).unwrap();
            assert!(dec.reconstruct().distance(&y) < 1e-10);
            let total: f64 = dec.coefficients.iter().map(|c| c * c).sum();
            let norm_sq = y.frobenius_norm().powi(2);
            assert!((total - norm_sq).abs() < 1e-10 * norm_sq.max(1.0));
            for s in 0..dec.len() {
                for t in 0..dec.len() {
                    let expected = if s == t { 1.0 } else { 0.0 };
                    let ga = crate::matrix::hs_inner(&dec.left_ops[s], &dec.left_ops[t]).unwrap();
                    let gb = crate::matrix::hs_inner(&dec.right_ops[s], &dec.right_ops[t]).unwrap();
                    assert!((ga - Complex64::new(expected, 0.0)).norm() < 1e-12);
                    assert!((gb - Complex64::new(expected, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn haar_two_qubit_unitaries_never_have_rank_three() {
        let mut rng = base_rng(64);
        for _ in 0..200 {
            let u = haar_unitary(4, &mut rng);
            let rank = operator_schmidt_rank(&u, 2, 2).unwrap();
            assert!(
                rank == 1 || rank == 2 || rank == 4,
                "observed forbidden Schmidt rank {rank}"
            );
        }
    }

    #[test]
    fn kraus_rank_matches_schmidt_rank_on_structured_examples() {
        let id = check_rank_equality(&ComplexMatrix::identity(4), 2, 2).unwrap();
        assert_eq!((id.kraus_rank, id.schmidt_rank), (1, 1));
        assert!(id.equal);

        let swap = check_rank_equality(&swap_gate(), 2, 2).unwrap();
        assert_eq!((swap.kraus_rank, swap.schmidt_rank), (4, 4));
        assert!(swap.equal);

        let controlled = &ComplexMatrix::identity(2).kron(&ComplexMatrix::matrix_unit(2, 0, 0))
            + &pauli::sigma1().kron(&ComplexMatrix::matrix_unit(2, 1, 1));
        let ctrl = check_rank_equality(&controlled, 2, 2).unwrap();
        assert_eq!((ctrl.kraus_rank, ctrl.schmidt_rank), (2, 2));
        assert!(ctrl.equal);
    }

    #[test]
    fn kraus_rank_matches_schmidt_rank_on_haar_samples() {
        let mut rng = base_rng(65);
        for (d, n) in [(2, 2), (2, 3), (3, 2)] {
            for _ in 0..25 {
                let u = haar_unitary(d * n, &mut rng);
                let cmp = check_rank_equality(&u, d, n).unwrap();
                assert!(
                    cmp.equal,
                    "({d},{n}): Kraus rank {} vs Schmidt rank {}",
                    cmp.kraus_rank, cmp.schmidt_rank
                );
            }
        }
    }

    #[test]
    fn census_is_deterministic_and_well_separated() {
        let a = rank_census(2, 2, 100, 7).unwrap();
        let b = rank_census(2, 2, 100, 7).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.min_gap, b.min_gap);
        assert_eq!(a.counts.values().sum::<u64>(), 100);
        assert!(!a.counts.contains_key(&3), "rank 3 observed: {:?}", a.counts);
        assert!(a.counts[&4] > 90, "rank 4 should dominate: {:?}", a.counts);
        assert!(a.min_gap > 1e-5, "ambiguous rank threshold, gap {}", a.min_gap);

        let csv = a.to_csv();
        assert!(csv.starts_with("rank,count\n"));
        assert!(csv.lines().count() >= 2);

        // A different seed shifts individual draws.
        let c = rank_census(2, 2, 100, 8).unwrap();
        assert_eq!(c.counts.values().sum::<u64>(), 100);
    }
}
