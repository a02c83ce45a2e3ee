//! Regularized Wiener solutions and their eigen-domain shortcuts.
//!
//! Once the covariance is diagonalized, the filter, its norm, the residual
//! energy, and the trace of the regularized inverse all become cheap scalar
//! sums over eigenvalues. The decomposition is done once per data set; every
//! candidate regularization value after that costs O(L).

use crate::accum::KahanSum;
use crate::error::{Error, Result};
use crate::estimation::{SampleStats, StatsOrigin};
use crate::linalg::{sym_eig, Cholesky, EigenDecomposition, SymmetricMatrix};

/// Sample statistics rotated into the eigenbasis of the input covariance.
#[derive(Debug, Clone)]
pub struct EigenStats {
    eigen: EigenDecomposition,
    z_xd: Vec<f64>,
    d_energy: f64,
    n: usize,
    l: usize,
    origin: StatsOrigin,
}

impl EigenStats {
    /// Eigenvalues of the input covariance, non-increasing.
    pub fn lambda(&self) -> &[f64] {
        self.eigen.eigenvalues()
    }

    /// Cross-correlation rotated into the eigenbasis.
    pub fn z_xd(&self) -> &[f64] {
        &self.z_xd
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eigen
    }

    pub fn d_energy(&self) -> f64 {
        self.d_energy
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn origin(&self) -> StatsOrigin {
        self.origin
    }
}

/// Filter solving `(R_x + alpha I) w = r_xd`, tagged with the alpha used.
#[derive(Debug, Clone, PartialEq)]
pub struct WienerSolution {
    pub w_hat: Vec<f64>,
    pub alpha: f64,
}

/// Posterior covariance of the filter weights given the noise variance.
#[derive(Debug, Clone)]
pub struct PosteriorCovariance {
    pub k: SymmetricMatrix,
    pub v_e: f64,
}

/// Diagonalizes the input covariance and rotates the cross-correlation.
pub fn to_eigen_domain(stats: &SampleStats) -> Result<EigenStats> {
    let eigen = sym_eig(stats.r_x())?;
    let z_xd = eigen.rotate_to_eigen(stats.r_xd());
    Ok(EigenStats {
        eigen,
        z_xd,
        d_energy: stats.d_energy(),
        n: stats.n(),
        l: stats.l(),
        origin: stats.origin(),
    })
}

fn check_shift(lambda: &[f64], alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidInput(format!(
            "regularization parameter must be finite and >= 0, got {alpha}"
        )));
    }
    let min = lambda.last().copied().unwrap_or(0.0);
    if alpha == 0.0 && min <= 0.0 {
        return Err(Error::Singular { min_pivot: min });
    }
    Ok(())
}

/// Regularized Wiener filter via the eigenbasis:
/// `w_hat = Q diag(1/(lambda + alpha)) Q^T r_xd`.
pub fn solve_wiener(es: &EigenStats, alpha: f64) -> Result<WienerSolution> {
    check_shift(es.lambda(), alpha)?;
    let scaled: Vec<f64> = es
        .z_xd
        .iter()
        .zip(es.lambda())
        .map(|(z, l)| z / (l + alpha))
        .collect();
    let w_hat = es.eigen.rotate_from_eigen(&scaled);
    Ok(WienerSolution { w_hat, alpha })
}

/// Mean squared residual `(1/N) |d - X^T w_hat|^2` of the regularized
/// solution, evaluated without forming the filter:
/// `|d|^2/N - sum_l z_l^2 (lambda_l + 2 alpha) / (lambda_l + alpha)^2`.
///
/// The value is clamped at zero; near-perfect fits can round a hair negative.
/// For externally supplied statistics the identity has no exact-data backing
/// and the clamp may hide a genuinely negative value.
pub fn residual_energy_per_sample(es: &EigenStats, alpha: f64) -> Result<f64> {
    check_shift(es.lambda(), alpha)?;
    let mut acc = KahanSum::new();
    acc.add(es.d_energy / es.n as f64);
    for (z, l) in es.z_xd.iter().zip(es.lambda()) {
        let denom = l + alpha;
        acc.add(-(z * z) * (l + 2.0 * alpha) / (denom * denom));
    }
    Ok(acc.value().max(0.0))
}

/// `Tr((R_x + alpha I)^{-1}) = sum_l 1/(lambda_l + alpha)`.
pub fn trace_inverse(lambda: &[f64], alpha: f64) -> Result<f64> {
    check_shift(lambda, alpha)?;
    let mut acc = KahanSum::new();
    for l in lambda {
        acc.add(1.0 / (l + alpha));
    }
    Ok(acc.value())
}

/// `|w_hat|^2 = sum_l z_l^2 / (lambda_l + alpha)^2`.
pub fn w_norm_sq(es: &EigenStats, alpha: f64) -> Result<f64> {
    check_shift(es.lambda(), alpha)?;
    let mut acc = KahanSum::new();
    for (z, l) in es.z_xd.iter().zip(es.lambda()) {
        let denom = l + alpha;
        acc.add((z * z) / (denom * denom));
    }
    Ok(acc.value())
}

/// Posterior covariance of the weights, `(v_e/N) (R_x + alpha I)^{-1}`.
pub fn posterior_covariance(
    stats: &SampleStats,
    alpha: f64,
    v_e: f64,
) -> Result<PosteriorCovariance> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "regularization parameter must be finite and > 0, got {alpha}"
        )));
    }
    if !v_e.is_finite() || v_e <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "noise variance must be finite and > 0, got {v_e}"
        )));
    }
    let inv = Cholesky::factor(stats.r_x(), alpha)?.inverse();
    Ok(PosteriorCovariance {
        k: inv.scaled(v_e / stats.n() as f64),
        v_e,
    })
}
