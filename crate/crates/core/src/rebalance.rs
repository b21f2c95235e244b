//! Weight rebalancing for mixed-unitary decompositions of qubit channels.
//!
//! The central primitive trades weight between two unitary terms without
//! changing the channel: given `a ≥ b ≥ c ≥ d ≥ 0` with `a + d = b + c`,
//!
//! `a·U₁XU₁† + d·U₂XU₂† = b·V₁XV₁† + c·V₂XV₂†`
//!
//! for explicitly constructed unitaries `V₁, V₂`. Writing `U₁†U₂ = S·D·S†`
//! with `D = diag(z₁, z₂)` and `θ = arg(z₁·z̄₂)`, the construction reduces to
//! one scalar equation: find `α` with `|a + d·e^{iθ} − b·e^{iα}| = c`, set
//! `β` to the phase of that complex number, and conjugate the diagonal phase
//! pair `W₁ = diag(e^{iα}, 1)`, `W₂ = diag(e^{iβ}, 1)` back through `U₁S`.
//!
//! Chaining such exchanges moves any weight vector to any target it
//! majorizes in at most `k − 1` steps (a T-transform schedule), which is how
//! a decomposition is flattened to uniform weights.

use crate::error::{Error, Result};
use crate::matrix::{Complex64, ComplexMatrix, DEFAULT_TOL};
use crate::channel::MixedUnitaryDecomposition;
use serde::{Deserialize, Serialize};

/// Slack for validating weight orderings, balance, and probability sums.
const BALANCE_TOL: f64 = 1e-12;

/// Bisection bracket width at which the phase `α` is accepted.
const PHASE_TOL: f64 = 1e-13;

/// Off-diagonal magnitude below which a relative unitary counts as already
/// diagonal.
const DIAGONAL_TOL: f64 = 1e-13;

/// Allowed mismatch between `|a + d·e^{iθ} − b·e^{iα}|` and `c` when
/// extracting `β`; larger gaps mean `α` does not solve the phase equation.
const BETA_TOL: f64 = 1e-9;

/// Accumulated drift beyond which the reweighting schedule aborts.
const DRIFT_TOL: f64 = 1e-10;

/// Weight gaps at or below this floor count as already converged when the
/// schedule picks its next exchange. Rounding can leave crumbs of a few ulp
/// on either side of a target entry (for example, an "excess" in the very
/// last position, which exact majorization forbids); chasing them would
/// stall or waste exchanges. The floor equals the majorization slack
/// `BALANCE_TOL`, so a skipped gap is one the majorization check could not
/// certify as real anyway, and any gaps left behind total well under
/// `DRIFT_TOL`.
const STEP_FLOOR: f64 = BALANCE_TOL;

// --- probability vectors and majorization -----------------------------------

/// A validated probability vector: nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    entries: Vec<f64>,
}

impl ProbVector {
    /// Validates nonnegativity, finiteness, and normalization (within
    /// `1e−12`).
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidProbability(
                "probability vector must be non-empty".into(),
            ));
        }
        for (i, &p) in entries.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidProbability(format!(
                    "entry {i} is {p}, expected a nonnegative finite value"
                )));
            }
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > BALANCE_TOL {
            return Err(Error::InvalidProbability(format!(
                "entries sum to {sum}, expected 1"
            )));
        }
        Ok(Self { entries })
    }

    /// Uniform distribution on `k` outcomes.
    pub fn uniform(k: usize) -> Result<Self> {
        Self::new(vec![1.0 / k as f64; k.max(1)])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Entries in descending order.
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.entries.clone();
        v.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));
        v
    }
}

/// Whether `p` majorizes `q`: after sorting both in descending order and
/// zero-padding to a common length, every prefix sum of `p` dominates the
/// corresponding prefix sum of `q` and the totals agree, all within `1e−12`.
pub fn majorizes(p: &[f64], q: &[f64]) -> bool {
    let k = p.len().max(q.len());
    let pad_sorted = |v: &[f64]| {
        let mut s = v.to_vec();
        s.resize(k, 0.0);
        s.sort_by(|a, b| b.partial_cmp(a).expect("finite entries"));
        s
    };
    let ps = pad_sorted(p);
    let qs = pad_sorted(q);
    let mut prefix_p = 0.0;
    let mut prefix_q = 0.0;
    for i in 0..k {
        prefix_p += ps[i];
        prefix_q += qs[i];
        if prefix_p < prefix_q - BALANCE_TOL {
            return false;
        }
    }
    (prefix_p - prefix_q).abs() <= BALANCE_TOL
}

// --- the two-term exchange ---------------------------------------------------

/// An ordered, balanced weight quadruple `a ≥ b ≥ c ≥ d ≥ 0` with
/// `a + d = b + c`: the data of one two-term exchange.
#[derive(Debug, Clone, Copy)]
pub struct RebalanceWeights {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl RebalanceWeights {
    /// Validates the ordering and the balance condition within `1e−12`,
    /// then snaps the stored quadruple onto the exact constraint surface:
    /// `d` is clamped to zero from below, `b` to `a` from above, `c` is
    /// recomputed as `a + d − b`, and a crossed middle pair is replaced by
    /// the common midpoint.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !v.is_finite() || v < -BALANCE_TOL {
                return Err(Error::InvalidWeights(format!(
                    "{name} = {v}, expected a nonnegative finite value"
                )));
            }
        }
        if b - a > BALANCE_TOL || c - b > BALANCE_TOL || d - c > BALANCE_TOL {
            return Err(Error::InvalidWeights(format!(
                "({a}, {b}, {c}, {d}) is not ordered a ≥ b ≥ c ≥ d"
            )));
        }
        if ((a + d) - (b + c)).abs() > BALANCE_TOL {
            return Err(Error::InvalidWeights(format!(
                "a + d = {} but b + c = {}",
                a + d,
                b + c
            )));
        }
        if a <= 0.0 {
            return Err(Error::DegenerateWeights);
        }
        let d = d.max(0.0);
        let mut b = b.min(a);
        let mut c = a + d - b;
        if c > b {
            let mid = (a + d) / 2.0;
            b = mid;
            c = mid;
        }
        Ok(Self { a, b, c, d })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
}

/// Simultaneous diagonalization data of `U₁†U₂`: a unitary `S` and unit
/// phases `z₁, z₂` with `U₁†U₂ = S·diag(z₁, z₂)·S†`, together with the
/// relative phase `θ = arg(z₁·z̄₂)` normalized to `[0, 2π)`.
#[derive(Debug, Clone)]
pub struct RelativeDiagonalization {
    pub s: ComplexMatrix,
    pub z1: Complex64,
    pub z2: Complex64,
    pub theta: f64,
}

/// Diagonalizes the relative unitary `M = U₁†U₂` of two 2×2 unitaries.
///
/// Uses the closed-form 2×2 eigendecomposition: eigenvalues from the trace
/// and determinant, an eigenvector from the better-conditioned of the two
/// candidate columns, and the second eigenvector as its orthogonal
/// complement (valid because `M` is normal). The phases are re-extracted
/// from `S†MS` and normalized to unit modulus.
pub fn diagonalize_relative(
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
) -> Result<RelativeDiagonalization> {
    for u in [u1, u2] {
        if !u.is_square() || u.rows() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "relative diagonalization needs 2x2 unitaries, got {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        let violation = u.unitarity_violation();
        if violation > DEFAULT_TOL {
            return Err(Error::NotUnitary(violation));
        }
    }
    let m = &u1.adjoint() * u2;
    let (m00, m01) = (m.get(0, 0), m.get(0, 1));
    let (m10, m11) = (m.get(1, 0), m.get(1, 1));

    let s = if m01.norm().max(m10.norm()) <= DIAGONAL_TOL {
        ComplexMatrix::identity(2)
    } else {
        let det = m00 * m11 - m01 * m10;
        let q = (m00 + m11) / 2.0;
        let disc = (q * q - det).sqrt();
        let lam1 = if (q + disc).norm() >= (q - disc).norm() {
            q + disc
        } else {
            q - disc
        };
        // Two algebraically equivalent eigenvector formulas; pick the one
        // with the larger norm for conditioning.
        let cand_a = (m01, lam1 - m00);
        let cand_b = (lam1 - m11, m10);
        let (vx, vy) = if (cand_a.0.norm_sqr() + cand_a.1.norm_sqr())
            >= (cand_b.0.norm_sqr() + cand_b.1.norm_sqr())
        {
            cand_a
        } else {
            cand_b
        };
        let norm = (vx.norm_sqr() + vy.norm_sqr()).sqrt();
        let (vx, vy) = (vx / norm, vy / norm);
        // M is normal, so the orthogonal complement is the other eigenvector.
        ComplexMatrix::from_rows(vec![vec![vx, -vy.conj()], vec![vy, vx.conj()]])
            .expect("2x2 shape")
    };

    let diag = &(&s.adjoint() * &m) * &s;
    let off = diag.get(0, 1).norm().max(diag.get(1, 0).norm());
    if off > 1e-8 {
        return Err(Error::ConvergenceFailure(format!(
            "relative unitary failed to diagonalize, off-diagonal {off:.3e}"
        )));
    }
    let unit = |z: Complex64| {
        let n = z.norm();
        if n > 0.0 {
            z / n
        } else {
            Complex64::new(1.0, 0.0)
        }
    };
    let z1 = unit(diag.get(0, 0));
    let z2 = unit(diag.get(1, 1));
    let theta = (z1 * z2.conj()).arg().rem_euclid(2.0 * std::f64::consts::PI);
    Ok(RelativeDiagonalization { s, z1, z2, theta })
}

/// Residual of the phase equation at `α`:
/// `f(α) = a² + b² − c² + d² + 2ad·cosθ − 2ab·cosα − 2db·cos(θ − α)`.
///
/// `f(α) = |a + d·e^{iθ} − b·e^{iα}|² − c²`, so a root makes the two-term
/// exchange exact. For balanced ordered weights `f(0) ≤ 0 ≤ f(θ)`.
pub fn phase_residual(w: &RebalanceWeights, theta: f64, alpha: f64) -> f64 {
    let (a, b, c, d) = (w.a(), w.b(), w.c(), w.d());
    a * a + b * b - c * c + d * d + 2.0 * a * d * theta.cos()
        - 2.0 * a * b * alpha.cos()
        - 2.0 * d * b * (theta - alpha).cos()
}

/// Solves the phase equation for `α ∈ [0, θ]` by bisection.
///
/// The endpoint signs `f(0) ≤ 0 ≤ f(θ)` are guaranteed by the weight
/// ordering, so a root always lies in the bracket; the bisection runs until
/// the bracket is `1e−13` wide. The width criterion (rather than a residual
/// one) keeps the final exchange accurate even when `c` is close to zero,
/// where the residual scale degenerates together with its derivative.
pub fn solve_alpha(w: &RebalanceWeights, theta: f64) -> Result<f64> {
    if theta <= 0.0 {
        return Ok(0.0);
    }
    let scale = w.a() * w.a() + w.b() * w.b() + w.c() * w.c() + w.d() * w.d() + 1.0;
    let f0 = phase_residual(w, theta, 0.0);
    let ft = phase_residual(w, theta, theta);
    if f0 > 1e-12 * scale || ft < -1e-12 * scale {
        return Err(Error::ConvergenceFailure(format!(
            "phase equation endpoints f(0) = {f0:.3e}, f(θ) = {ft:.3e} do not bracket a root"
        )));
    }
    // An endpoint residual of the wrong sign within the slack means the
    // endpoint itself is (numerically) a root.
    if f0 >= 0.0 {
        return Ok(0.0);
    }
    if ft <= 0.0 {
        return Ok(theta);
    }
    let (mut lo, mut hi) = (0.0, theta);
    for _ in 0..200 {
        if hi - lo <= PHASE_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if phase_residual(w, theta, mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Extracts `β = arg(a + d·e^{iθ} − b·e^{iα})` in `[0, 2π)`, verifying that
/// the modulus of that number matches `c` (the consistency condition the
/// phase equation encodes).
pub fn solve_beta(w: &RebalanceWeights, theta: f64, alpha: f64) -> Result<f64> {
    if w.c() == 0.0 {
        return Ok(0.0);
    }
    let wv = Complex64::new(
        w.a() + w.d() * theta.cos() - w.b() * alpha.cos(),
        w.d() * theta.sin() - w.b() * alpha.sin(),
    );
    let gap = (wv.norm() - w.c()).abs();
    if gap > BETA_TOL {
        return Err(Error::InconsistentAlpha(gap));
    }
    Ok(wv.arg().rem_euclid(2.0 * std::f64::consts::PI))
}

/// Result of one two-term exchange: the replacement unitaries together with
/// the phases the construction used.
#[derive(Debug, Clone)]
pub struct TwoTermRebalance {
    pub v1: ComplexMatrix,
    pub v2: ComplexMatrix,
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
}

/// Performs the two-term weight exchange: returns `V₁, V₂` with
/// `a·U₁XU₁† + d·U₂XU₂† = b·V₁XV₁† + c·V₂XV₂†`.
///
/// When `d = 0` the pair `(U₁, U₁)` already works, since the left side is a
/// single unitary term being split in two.
pub fn two_term_exchange(
    w: &RebalanceWeights,
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
) -> Result<TwoTermRebalance> {
    if w.d() == 0.0 {
        return Ok(TwoTermRebalance {
            v1: u1.clone(),
            v2: u1.clone(),
            alpha: 0.0,
            beta: 0.0,
            theta: 0.0,
        });
    }
    let rel = diagonalize_relative(u1, u2)?;
    let alpha = solve_alpha(w, rel.theta)?;
    let beta = solve_beta(w, rel.theta, alpha)?;
    let phase_pair = |phi: f64| {
        let mut m = ComplexMatrix::identity(2);
        m.set(0, 0, Complex64::from_polar(1.0, phi));
        m
    };
    let base = u1 * &rel.s;
    let s_adj = rel.s.adjoint();
    let v1 = &(&base * &phase_pair(alpha)) * &s_adj;
    let v2 = &(&base * &phase_pair(beta)) * &s_adj;
    Ok(TwoTermRebalance {
        v1,
        v2,
        alpha,
        beta,
        theta: rel.theta,
    })
}

// --- the T-transform schedule ------------------------------------------------

/// One step of the reweighting schedule: weight `delta` moved from position
/// `n` to position `m` of the descending-sorted weight list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TTransformStep {
    /// Donor position (largest index where the target is still below the
    /// current weight).
    pub n: usize,
    /// Receiver position (smallest index past `n` where the target exceeds
    /// the current weight).
    pub m: usize,
    /// Amount of weight moved.
    pub delta: f64,
    /// Weights at positions `(n, m)` before the step.
    pub before: [f64; 2],
    /// Weights at positions `(n, m)` after the step.
    pub after: [f64; 2],
}

/// A reweighted decomposition together with the schedule that produced it.
#[derive(Debug, Clone)]
pub struct ReweightOutcome {
    pub decomposition: MixedUnitaryDecomposition,
    pub steps: Vec<TTransformStep>,
}

/// Rewrites a qubit mixed-unitary decomposition so its weight vector becomes
/// `target`, which the current weights must majorize. Runs at most `k − 1`
/// two-term exchanges on a descending-sorted working list; each step drives
/// at least one weight exactly onto its target value. The output carries the
/// target weights verbatim (sorted descending, truncated to the target
/// length) and the exchange schedule.
pub fn reweight(
    dec: &MixedUnitaryDecomposition,
    target: &ProbVector,
) -> Result<ReweightOutcome> {
    if dec.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "reweighting works on qubit decompositions, got dimension {}",
            dec.dim()
        )));
    }
    if !majorizes(dec.weights(), target.entries()) {
        return Err(Error::NotMajorized);
    }
    let k = dec.len().max(target.len());
    let mut q = target.sorted_desc();
    q.resize(k, 0.0);

    let mut terms: Vec<(f64, ComplexMatrix)> = dec
        .weights()
        .iter()
        .copied()
        .zip(dec.unitaries().iter().cloned())
        .collect();
    terms.resize(k, (0.0, ComplexMatrix::identity(2)));
    terms.sort_by(|x, y| y.0.partial_cmp(&x.0).expect("finite weights"));

    let mut steps = Vec::new();
    for _ in 0..k.saturating_sub(1) {
        let weights: Vec<f64> = terms.iter().map(|t| t.0).collect();
        if !majorizes(&weights, &q) {
            return Err(Error::ConvergenceFailure(
                "weight list drifted off the majorization order".into(),
            ));
        }
        let Some(n) = (0..k).rev().find(|&i| terms[i].0 - q[i] > STEP_FLOOR) else {
            break;
        };
        let Some(m) = ((n + 1)..k).find(|&i| q[i] - terms[i].0 > STEP_FLOOR) else {
            break;
        };
        let gap_n = terms[n].0 - q[n];
        let gap_m = q[m] - terms[m].0;
        let delta = gap_n.min(gap_m);
        // Snap the driving side (both on a tie) exactly onto the target so
        // every step finishes at least one entry for good.
        let new_n = if gap_n <= gap_m { q[n] } else { terms[n].0 - delta };
        let new_m = if gap_m <= gap_n { q[m] } else { terms[m].0 + delta };
        let w = RebalanceWeights::new(terms[n].0, new_n, new_m, terms[m].0)?;
        let exchanged = two_term_exchange(&w, &terms[n].1, &terms[m].1)?;
        steps.push(TTransformStep {
            n,
            m,
            delta,
            before: [terms[n].0, terms[m].0],
            after: [new_n, new_m],
        });
        terms[n] = (new_n, exchanged.v1);
        terms[m] = (new_m, exchanged.v2);
        terms.sort_by(|x, y| y.0.partial_cmp(&x.0).expect("finite weights"));
    }

    for (i, term) in terms.iter().enumerate() {
        if (term.0 - q[i]).abs() > DRIFT_TOL {
            return Err(Error::ConvergenceFailure(format!(
                "weight {i} finished at {} instead of {}",
                term.0, q[i]
            )));
        }
    }
    let kept = target.len().min(k);
    let weights = q[..kept].to_vec();
    let unitaries = terms
        .into_iter()
        .take(kept)
        .map(|t| t.1)
        .collect::<Vec<_>>();
    let decomposition = MixedUnitaryDecomposition::new(weights, unitaries)?;
    Ok(ReweightOutcome {
        decomposition,
        steps,
    })
}

/// Pads a qubit decomposition to exactly `k` terms and flattens its weights
/// to the uniform distribution `1/k` through the exchange schedule.
pub fn uniformize(dec: &MixedUnitaryDecomposition, k: usize) -> Result<ReweightOutcome> {
    let padded = crate::canonical::pad_decomposition(dec, k)?;
    reweight(&padded, &ProbVector::uniform(k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{choi_distance, Channel};
    use crate::matrix::ComplexMatrix;
    use crate::pauli;
    use crate::random::{base_rng, haar_unitary, random_mixed_unitary, simplex_weights};
    use rand::seq::SliceRandom;
    use rand::Rng;
    use std::f64::consts::PI;

    fn mu_channel(weights: Vec<f64>, unitaries: Vec<ComplexMatrix>) -> Channel {
        Channel::MixedUnitary(MixedUnitaryDecomposition::new(weights, unitaries).unwrap())
    }

    fn exchange_distance(
        w: &RebalanceWeights,
        u1: &ComplexMatrix,
        u2: &ComplexMatrix,
    ) -> f64 {
        let out = two_term_exchange(w, u1, u2).unwrap();
        let total = w.a() + w.d();
        let before = mu_channel(
            vec![w.a() / total, w.d() / total],
            vec![u1.clone(), u2.clone()],
        );
        let after = mu_channel(vec![w.b() / total, w.c() / total], vec![out.v1, out.v2]);
        choi_distance(&before, &after).unwrap()
    }

    #[test]
    fn prob_vector_validates_entries_and_sum() {
        assert!(ProbVector::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbVector::new(vec![0.5, -0.5, 1.0]).is_err());
        assert!(ProbVector::new(vec![0.4, 0.4]).is_err());
        assert!(ProbVector::new(vec![]).is_err());
        let v = ProbVector::new(vec![0.2, 0.5, 0.3]).unwrap();
        assert_eq!(v.sorted_desc(), vec![0.5, 0.3, 0.2]);
        let u = ProbVector::uniform(4).unwrap();
        assert_eq!(u.entries(), &[0.25; 4]);
    }

    #[test]
    fn majorization_matches_hand_checked_examples() {
        assert!(majorizes(&[1.0, 0.0], &[0.5, 0.5]));
        assert!(!majorizes(&[0.5, 0.5], &[1.0, 0.0]));
        assert!(majorizes(&[0.5, 0.3, 0.2], &[0.4, 0.3, 0.3]));
        assert!(!majorizes(&[0.4, 0.3, 0.3], &[0.5, 0.3, 0.2]));
        // Unsorted input and length padding are handled internally.
        assert!(majorizes(&[0.2, 0.8], &[0.25, 0.25, 0.25, 0.25]));
        assert!(majorizes(&[0.5, 0.5], &[0.5, 0.5]));
        // Totals must agree.
        assert!(!majorizes(&[0.9], &[0.5, 0.5]));
    }

    #[test]
    fn rebalance_weights_validate_ordering_and_balance() {
        let w = RebalanceWeights::new(0.7, 0.5, 0.5, 0.3).unwrap();
        assert_eq!((w.a(), w.b(), w.c(), w.d()), (0.7, 0.5, 0.5, 0.3));
        // Balance violated.
        assert!(RebalanceWeights::new(0.7, 0.6, 0.5, 0.3).is_err());
        // Ordering violated.
        assert!(RebalanceWeights::new(0.5, 0.7, 0.1, 0.3).is_err());
        // All-zero weights are degenerate.
        assert!(matches!(
            RebalanceWeights::new(0.0, 0.0, 0.0, 0.0),
            Err(Error::DegenerateWeights)
        ));
        // One-ulp crossings are repaired onto the constraint surface.
        let w = RebalanceWeights::new(0.6, 0.5 - 1e-13, 0.5 + 1e-13, 0.4).unwrap();
        assert!(w.b() >= w.c());
        assert!(((w.b() + w.c()) - (w.a() + w.d())).abs() < 1e-15);
    }

    #[test]
    fn relative_diagonalization_reconstructs_haar_pairs() {
        let mut rng = base_rng(41);
        for _ in 0..50 {
            let u1 = haar_unitary(2, &mut rng);
            let u2 = haar_unitary(2, &mut rng);
            let rel = diagonalize_relative(&u1, &u2).unwrap();
            assert!(rel.s.is_unitary(1e-12));
            let mut d = ComplexMatrix::zeros(2, 2);
            d.set(0, 0, rel.z1);
            d.set(1, 1, rel.z2);
            let rebuilt = &(&rel.s * &d) * &rel.s.adjoint();
            let m = &u1.adjoint() * &u2;
            assert!(rebuilt.distance(&m) < 1e-12);
            assert!((0.0..2.0 * PI).contains(&rel.theta));
        }
    }

    #[test]
    fn relative_diagonalization_of_equal_unitaries_is_trivial() {
        let mut rng = base_rng(42);
        let u = haar_unitary(2, &mut rng);
        let rel = diagonalize_relative(&u, &u).unwrap();
        assert!(rel.s.distance(&ComplexMatrix::identity(2)) < 1e-12);
        assert!(rel.theta < 1e-12);
    }

    #[test]
    fn alpha_and_beta_match_the_closed_form_solution() {
        // With (a, b, c, d) = (0.7, 0.5, 0.5, 0.3) and θ = π the phase
        // equation collapses to 0.16 − 0.4·cos α = 0, so α = arccos(0.4)
        // and β = arg(0.4 − 0.5·e^{iα}) = 2π − arccos(0.4).
        let w = RebalanceWeights::new(0.7, 0.5, 0.5, 0.3).unwrap();
        let alpha = solve_alpha(&w, PI).unwrap();
        let expected_alpha = 0.4f64.acos();
        assert!(
            (alpha - expected_alpha).abs() < 1e-12,
            "alpha = {alpha}, expected {expected_alpha}"
        );
        let beta = solve_beta(&w, PI, alpha).unwrap();
        let expected_beta = 2.0 * PI - expected_alpha;
        assert!(
            (beta - expected_beta).abs() < 1e-11,
            "beta = {beta}, expected {expected_beta}"
        );
    }

    #[test]
    fn equal_outer_weights_need_no_phase() {
        // a = b forces c = d and α = 0.
        let w = RebalanceWeights::new(0.6, 0.6, 0.4, 0.4).unwrap();
        for theta in [0.3, 1.0, PI, 5.0] {
            let alpha = solve_alpha(&w, theta).unwrap();
            assert_eq!(alpha, 0.0);
            let beta = solve_beta(&w, theta, alpha).unwrap();
            assert!((beta - theta).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_equation_endpoints_have_the_guaranteed_signs() {
        let mut rng = base_rng(43);
        for _ in 0..500 {
            let a: f64 = rng.random::<f64>() + 1e-3;
            let d: f64 = rng.random::<f64>() * a;
            let s = a + d;
            let b = s / 2.0 + rng.random::<f64>() * (a - s / 2.0);
            let c = s - b;
            let w = RebalanceWeights::new(a, b, c, d).unwrap();
            let theta = rng.random::<f64>() * 2.0 * PI;
            let scale = a * a + b * b + c * c + d * d + 1.0;
            assert!(phase_residual(&w, theta, 0.0) <= 1e-12 * scale);
            assert!(phase_residual(&w, theta, theta) >= -1e-12 * scale);
            let alpha = solve_alpha(&w, theta).unwrap();
            assert!((0.0..=theta.max(0.0)).contains(&alpha));
        }
    }

    #[test]
    fn exchange_with_identity_and_sigma3_preserves_the_channel() {
        let w = RebalanceWeights::new(0.7, 0.5, 0.5, 0.3).unwrap();
        let d = exchange_distance(&w, &ComplexMatrix::identity(2), &pauli::sigma3());
        assert!(d < 1e-12, "exchange changed the channel by {d}");
    }

    #[test]
    fn exchange_preserves_random_channels() {
        let mut rng = base_rng(44);
        for trial in 0..500 {
            let a: f64 = rng.random::<f64>() + 1e-3;
            let d: f64 = rng.random::<f64>() * a;
            let s = a + d;
            let b = s / 2.0 + rng.random::<f64>() * (a - s / 2.0);
            let c = s - b;
            let w = RebalanceWeights::new(a, b, c, d).unwrap();
            let u1 = haar_unitary(2, &mut rng);
            let u2 = haar_unitary(2, &mut rng);
            let dist = exchange_distance(&w, &u1, &u2);
            assert!(dist < 1e-10, "trial {trial}: channel moved by {dist:.3e}");
        }
    }

    #[test]
    fn exchange_with_zero_d_duplicates_the_first_unitary() {
        let mut rng = base_rng(45);
        let u1 = haar_unitary(2, &mut rng);
        let u2 = haar_unitary(2, &mut rng);
        let w = RebalanceWeights::new(0.8, 0.5, 0.3, 0.0).unwrap();
        let out = two_term_exchange(&w, &u1, &u2).unwrap();
        assert!(out.v1.distance(&u1) < 1e-15);
        assert!(out.v2.distance(&u1) < 1e-15);
        let d = exchange_distance(&w, &u1, &u2);
        assert!(d < 1e-12);
    }

    #[test]
    fn reweight_two_terms_in_one_step() {
        let dec = MixedUnitaryDecomposition::new(
            vec![0.7, 0.3],
            vec![ComplexMatrix::identity(2), pauli::sigma3()],
        )
        .unwrap();
        let out = reweight(&dec, &ProbVector::new(vec![0.5, 0.5]).unwrap()).unwrap();
        assert_eq!(out.steps.len(), 1);
        assert_eq!(out.decomposition.weights(), &[0.5, 0.5]);
        let d = choi_distance(
            &Channel::MixedUnitary(dec),
            &Channel::MixedUnitary(out.decomposition),
        )
        .unwrap();
        assert!(d < 1e-10, "reweighting moved the channel by {d:.3e}");
    }

    #[test]
    fn reweight_to_own_weights_is_a_no_op() {
        let mut rng = base_rng(46);
        let dec = random_mixed_unitary(3, &mut rng);
        let target = ProbVector::new(dec.weights().to_vec()).unwrap();
        let out = reweight(&dec, &target).unwrap();
        assert!(out.steps.is_empty());
        let d = choi_distance(
            &Channel::MixedUnitary(dec),
            &Channel::MixedUnitary(out.decomposition),
        )
        .unwrap();
        assert!(d < 1e-12);
    }

    #[test]
    fn reweight_rejects_targets_that_are_not_majorized() {
        let dec = MixedUnitaryDecomposition::new(
            vec![0.5, 0.5],
            vec![ComplexMatrix::identity(2), pauli::sigma1()],
        )
        .unwrap();
        let target = ProbVector::new(vec![0.7, 0.3]).unwrap();
        assert!(matches!(
            reweight(&dec, &target),
            Err(Error::NotMajorized)
        ));
    }

    #[test]
    fn reweight_handles_random_majorized_targets_with_step_bound() {
        let mut rng = base_rng(47);
        for trial in 0..20 {
            let k = 2 + (trial % 4);
            let dec = random_mixed_unitary(k, &mut rng);
            // Convex mixtures of permutations of the weights are always
            // majorized by them.
            let p = dec.weights().to_vec();
            let mix = simplex_weights(3, &mut rng);
            let mut q = vec![0.0; k];
            for &w in &mix {
                let mut perm: Vec<usize> = (0..k).collect();
                perm.shuffle(&mut rng);
                for (i, &pi) in perm.iter().enumerate() {
                    q[i] += w * p[pi];
                }
            }
            let target = ProbVector::new(q).unwrap();
            let out = reweight(&dec, &target).unwrap();
            assert!(out.steps.len() <= k - 1, "trial {trial}: too many steps");
            let mut sorted_target = target.sorted_desc();
            sorted_target.sort_by(|a, b| b.partial_cmp(a).unwrap());
            assert_eq!(out.decomposition.weights(), &sorted_target[..]);
            let d = choi_distance(
                &Channel::MixedUnitary(dec),
                &Channel::MixedUnitary(out.decomposition),
            )
            .unwrap();
            assert!(d < 1e-9, "trial {trial}: channel moved by {d:.3e}");
            // Replay the schedule: every step moves weight forward.
            for step in &out.steps {
                assert!(step.n < step.m);
                assert!(step.delta >= 0.0);
                assert!((step.before[0] - step.delta - step.after[0]).abs() < 1e-12);
                assert!((step.before[1] + step.delta - step.after[1]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn uniformize_flattens_a_three_term_pauli_channel() {
        let w = 1.0 / 3.0;
        let dec = MixedUnitaryDecomposition::new(
            vec![w, w, w],
            vec![pauli::sigma1(), pauli::sigma2(), pauli::sigma3()],
        )
        .unwrap();
        let out = uniformize(&dec, 4).unwrap();
        assert_eq!(out.decomposition.len(), 4);
        for &weight in out.decomposition.weights() {
            assert_eq!(weight, 0.25);
        }
        assert!(out.steps.len() <= 3);
        let d = choi_distance(
            &Channel::MixedUnitary(dec),
            &Channel::MixedUnitary(out.decomposition),
        )
        .unwrap();
        assert!(d < 1e-9, "uniformizing moved the channel by {d:.3e}");
    }

    #[test]
    fn uniformize_rejects_too_small_k() {
        let mut rng = base_rng(48);
        let dec = random_mixed_unitary(4, &mut rng);
        assert!(matches!(
            uniformize(&dec, 3),
            Err(Error::KTooSmall {
                requested: 3,
                required: 4
            })
        ));
    }
}
