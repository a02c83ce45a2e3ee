//! Regularized MMSE/Wiener filtering with automatic selection of the
//! regularization parameter.
//!
//! The library solves the regularized Wiener equation
//! `(R_x + alpha*I) w = r_xd` and picks `alpha` by maximizing the marginal
//! likelihood of the observed output under a Gaussian linear model, using the
//! Gull-MacKay fixed-point iteration. A single eigendecomposition of the
//! sample covariance turns every iteration into O(L) work, so running the
//! fixed point costs little more than solving the Wiener equation once.
//!
//! Module layout:
//!
//! - [`linalg`]: dense symmetric eigendecomposition (cyclic Jacobi) and
//!   regularized Cholesky solves.
//! - [`estimation`]: sample covariance / cross-correlation statistics from
//!   raw signal pairs.
//! - [`wiener`]: regularized Wiener solutions and the eigen-domain identities
//!   (residual energy, trace of the regularized inverse, filter norm).
//! - [`autoreg`]: the Gull-MacKay iteration in eigen and matrix form,
//!   hyperparameter updates, and marginal-likelihood evaluation.
//! - [`experiments`]: synthetic system-identification harness (AR(1) input,
//!   decaying random impulse response, SNR calibration, misalignment, oracle
//!   regularization search, Monte Carlo sweeps).

pub mod accum;
pub mod autoreg;
pub mod error;
pub mod estimation;
pub mod experiments;
pub mod linalg;
pub mod wiener;

pub use error::Error;
