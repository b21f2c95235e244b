//! Decomposition and dilation toolkit for unital qubit channels.
//!
//! The library turns a unital qubit channel — given as Kraus operators, a
//! mixed-unitary convex combination, or a Choi matrix — into a mixed-unitary
//! decomposition with at most four terms, rebalances the mixing weights to
//! any majorized target (in particular to exactly uniform weights), and
//! assembles the controlled-unitary dilation that realizes the channel as a
//! partial trace over a small maximally mixed environment. A companion
//! analysis layer computes operator Schmidt ranks of bipartite unitaries and
//! rank statistics over Haar-random samples.
//!
//! Numerical kernels (Hermitian eigensolver, SVD) are self-contained and
//! tuned for the tiny dense matrices involved (dimension ≤ 16).

pub mod canonical;
pub mod channel;
pub mod dilation;
pub mod eig;
pub mod error;
pub mod matrix;
pub mod pauli;
pub mod random;
pub mod rebalance;
pub mod schmidt;
pub mod svd;

pub use error::{Error, Result};
pub use matrix::{Complex64, ComplexMatrix};
