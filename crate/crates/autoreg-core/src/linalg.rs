//! Dense symmetric linear algebra: eigendecomposition of covariance matrices
//! and regularized linear solves.
//!
//! Covariance matrices here are small (a few hundred taps at most), so the
//! module uses a cyclic Jacobi eigensolver and an unblocked Cholesky
//! factorization. Jacobi keeps the eigenvector basis orthonormal to machine
//! precision by construction, which the eigen-domain identities downstream
//! rely on.

use crate::accum::{kahan_dot, KahanSum};
use crate::error::{Error, Result};

/// Relative tolerance for accepting and repairing asymmetric input.
const SYMMETRY_TOL: f64 = 1e-12;
/// Eigenvalues of a claimed-PSD matrix may round below zero by this relative
/// amount and are clamped; anything lower is treated as a failure.
const PSD_CLAMP_REL: f64 = 1e-10;
/// Jacobi sweep cap.
const MAX_JACOBI_SWEEPS: usize = 64;
/// A Cholesky pivot below this fraction of the largest diagonal entry is
/// treated as singular.
const PIVOT_REL_TOL: f64 = 1e-13;

/// Square symmetric matrix with `order x order` finite entries, stored
/// row-major. Construction symmetrizes `(A + A^T)/2`; asymmetry beyond
/// `1e-12 * max(1, |A|_max)` is rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds a matrix from row-major entries, symmetrizing small roundoff.
    pub fn new(order: usize, entries: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("matrix order must be >= 1".into()));
        }
        if entries.len() != order * order {
            return Err(Error::LengthMismatch {
                what: "matrix entries",
                expected: order * order,
                got: entries.len(),
            });
        }
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "matrix entries",
            });
        }
        let max_abs = entries.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = SYMMETRY_TOL * max_abs.max(1.0);
        let mut max_dev = 0.0f64;
        for i in 0..order {
            for j in (i + 1)..order {
                max_dev = max_dev.max((entries[i * order + j] - entries[j * order + i]).abs());
            }
        }
        if max_dev > tol {
            return Err(Error::Asymmetric { max_dev, tol });
        }
        let mut sym = entries;
        for i in 0..order {
            for j in (i + 1)..order {
                let m = 0.5 * (sym[i * order + j] + sym[j * order + i]);
                sym[i * order + j] = m;
                sym[j * order + i] = m;
            }
        }
        Ok(Self {
            order,
            entries: sym,
        })
    }

    /// Builds from a function of (row, col); the function is only called for
    /// `row <= col` and mirrored, so the result is exactly symmetric.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("matrix order must be >= 1".into()));
        }
        let mut entries = vec![0.0; order * order];
        for i in 0..order {
            for j in i..order {
                let v = f(i, j);
                entries[i * order + j] = v;
                entries[j * order + i] = v;
            }
        }
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "matrix entries",
            });
        }
        Ok(Self { order, entries })
    }

    pub fn identity(order: usize) -> Self {
        let mut entries = vec![0.0; order * order];
        for i in 0..order {
            entries[i * order + i] = 1.0;
        }
        Self { order, entries }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.order + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.order);
        (0..self.order)
            .map(|i| kahan_dot(&self.entries[i * self.order..(i + 1) * self.order], v))
            .collect()
    }

    /// `v^T * self * v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        kahan_dot(&self.mul_vec(v), v)
    }

    /// Returns `c * self`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            order: self.order,
            entries: self.entries.iter().map(|e| c * e).collect(),
        }
    }
}

/// Orthonormal eigenbasis and eigenvalues of a symmetric PSD matrix,
/// eigenvalues sorted non-increasing.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    order: usize,
    /// Row-major `order x order`; column `j` is the eigenvector for
    /// `eigenvalues[j]`.
    basis: Vec<f64>,
    eigenvalues: Vec<f64>,
}

impl EigenDecomposition {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn basis(&self) -> &[f64] {
        &self.basis
    }

    #[inline]
    pub fn basis_entry(&self, row: usize, col: usize) -> f64 {
        self.basis[row * self.order + col]
    }

    /// `Q^T * v`: coordinates of `v` in the eigenbasis.
    pub fn rotate_to_eigen(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.order);
        (0..self.order)
            .map(|j| {
                let mut acc = KahanSum::new();
                for (i, vi) in v.iter().enumerate() {
                    acc.add(self.basis_entry(i, j) * vi);
                }
                acc.value()
            })
            .collect()
    }

    /// `Q * v`: back from eigenbasis coordinates.
    pub fn rotate_from_eigen(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.order);
        (0..self.order)
            .map(|i| {
                let mut acc = KahanSum::new();
                for (j, vj) in v.iter().enumerate() {
                    acc.add(self.basis_entry(i, j) * vj);
                }
                acc.value()
            })
            .collect()
    }

    /// `Q diag(lambda) Q^T`, mainly for reconstruction checks.
    pub fn reconstruct(&self) -> SymmetricMatrix {
        let l = self.order;
        SymmetricMatrix::from_fn(l, |i, j| {
            let mut acc = KahanSum::new();
            for k in 0..l {
                acc.add(self.basis_entry(i, k) * self.eigenvalues[k] * self.basis_entry(j, k));
            }
            acc.value()
        })
        .expect("reconstruction entries are finite")
    }

    /// Largest deviation of `Q^T Q` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let l = self.order;
        let mut worst = 0.0f64;
        for a in 0..l {
            for b in a..l {
                let mut acc = KahanSum::new();
                for i in 0..l {
                    acc.add(self.basis_entry(i, a) * self.basis_entry(i, b));
                }
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((acc.value() - target).abs());
            }
        }
        worst
    }
}

/// Eigendecomposition of a symmetric PSD matrix via cyclic Jacobi rotations.
///
/// Eigenvalues in `[-1e-10 * lambda_max, 0)` are clamped to zero (roundoff on
/// a PSD input); anything more negative reports a decomposition failure, as
/// does failing to converge within the sweep cap.
pub fn sym_eig(a: &SymmetricMatrix) -> Result<EigenDecomposition> {
    let l = a.order;
    let mut b = a.entries.clone();
    let mut v = vec![0.0; l * l];
    for i in 0..l {
        v[i * l + i] = 1.0;
    }

    let fro_sq: f64 = a.entries.iter().map(|x| x * x).sum();
    let off_tol_sq = (1e-15f64 * fro_sq.sqrt()).powi(2).max(f64::MIN_POSITIVE);

    let mut converged = l == 1;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off_sq = 0.0;
        for p in 0..l {
            for q in (p + 1)..l {
                off_sq += b[p * l + q] * b[p * l + q];
            }
        }
        if 2.0 * off_sq <= off_tol_sq {
            converged = true;
            break;
        }
        for p in 0..l - 1 {
            for q in (p + 1)..l {
                let apq = b[p * l + q];
                if apq == 0.0 {
                    continue;
                }
                let app = b[p * l + p];
                let aqq = b[q * l + q];
                // Off-diagonal entries already negligible next to the
                // diagonal cannot be improved in f64; skip them.
                if apq.abs() <= f64::EPSILON * 0.5 * (app.abs() + aqq.abs()) {
                    continue;
                }
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // B <- J^T B J with J the rotation in the (p, q) plane.
                for k in 0..l {
                    let bkp = b[k * l + p];
                    let bkq = b[k * l + q];
                    b[k * l + p] = c * bkp - s * bkq;
                    b[k * l + q] = s * bkp + c * bkq;
                }
                for k in 0..l {
                    let bpk = b[p * l + k];
                    let bqk = b[q * l + k];
                    b[p * l + k] = c * bpk - s * bqk;
                    b[q * l + k] = s * bpk + c * bqk;
                }
                b[p * l + q] = 0.0;
                b[q * l + p] = 0.0;
                // V <- V J accumulates the eigenbasis.
                for k in 0..l {
                    let vkp = v[k * l + p];
                    let vkq = v[k * l + q];
                    v[k * l + p] = c * vkp - s * vkq;
                    v[k * l + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        // Re-check after the final sweep before giving up.
        let mut off_sq = 0.0;
        for p in 0..l {
            for q in (p + 1)..l {
                off_sq += b[p * l + q] * b[p * l + q];
            }
        }
        if 2.0 * off_sq > off_tol_sq {
            return Err(Error::DecompositionFailed {
                reason: format!("Jacobi iteration did not converge in {MAX_JACOBI_SWEEPS} sweeps"),
            });
        }
    }

    let mut pairs: Vec<(f64, usize)> = (0..l).map(|i| (b[i * l + i], i)).collect();
    // Descending by eigenvalue, stable on ties for reproducible bases.
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).expect("finite eigenvalues"));

    let lambda_max = pairs[0].0.max(0.0);
    let clamp_floor = -PSD_CLAMP_REL * lambda_max;
    let mut eigenvalues = Vec::with_capacity(l);
    for &(lam, _) in &pairs {
        if lam < clamp_floor {
            return Err(Error::DecompositionFailed {
                reason: format!(
                    "eigenvalue {lam:.6e} below PSD clamp floor {clamp_floor:.6e}; input is not positive semidefinite"
                ),
            });
        }
        eigenvalues.push(lam.max(0.0));
    }

    let mut basis = vec![0.0; l * l];
    for (new_col, &(_, old_col)) in pairs.iter().enumerate() {
        for row in 0..l {
            basis[row * l + new_col] = v[row * l + old_col];
        }
    }

    Ok(EigenDecomposition {
        order: l,
        basis,
        eigenvalues,
    })
}

/// Lower-triangular Cholesky factor of `A + shift*I`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    order: usize,
    /// Row-major lower triangle, upper part zero.
    factor: Vec<f64>,
    shift: f64,
    min_pivot: f64,
}

impl Cholesky {
    /// Factors `A + shift*I`, failing with the smallest pivot when the
    /// shifted matrix is numerically singular or indefinite.
    pub fn factor(a: &SymmetricMatrix, shift: f64) -> Result<Self> {
        let l = a.order;
        let mut fac = vec![0.0; l * l];
        let max_diag = (0..l)
            .map(|i| a.get(i, i) + shift)
            .fold(0.0f64, |m, v| m.max(v));
        let pivot_tol = PIVOT_REL_TOL * max_diag;
        let mut min_pivot = f64::INFINITY;
        for i in 0..l {
            for j in 0..=i {
                let mut acc = KahanSum::new();
                acc.add(a.get(i, j) + if i == j { shift } else { 0.0 });
                for k in 0..j {
                    acc.add(-fac[i * l + k] * fac[j * l + k]);
                }
                let s = acc.value();
                if i == j {
                    min_pivot = min_pivot.min(s);
                    if s <= pivot_tol || !s.is_finite() {
                        return Err(Error::Singular { min_pivot: s });
                    }
                    fac[i * l + i] = s.sqrt();
                } else {
                    fac[i * l + j] = s / fac[j * l + j];
                }
            }
        }
        Ok(Self {
            order: l,
            factor: fac,
            shift,
            min_pivot,
        })
    }

    /// Smallest diagonal pivot of `A + shift*I` seen during factorization.
    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    /// `log det(A + shift*I)`, from the factor diagonal.
    pub fn log_det(&self) -> f64 {
        let mut acc = KahanSum::new();
        for i in 0..self.order {
            acc.add(2.0 * self.factor[i * self.order + i].ln());
        }
        acc.value()
    }

    /// Solves `(A + shift*I) x = b` by forward/back substitution.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let l = self.order;
        assert_eq!(b.len(), l);
        let mut y = vec![0.0; l];
        for i in 0..l {
            let mut acc = KahanSum::new();
            acc.add(b[i]);
            for (k, &yk) in y.iter().enumerate().take(i) {
                acc.add(-self.factor[i * l + k] * yk);
            }
            y[i] = acc.value() / self.factor[i * l + i];
        }
        let mut x = vec![0.0; l];
        for i in (0..l).rev() {
            let mut acc = KahanSum::new();
            acc.add(y[i]);
            for (k, &xk) in x.iter().enumerate().skip(i + 1) {
                acc.add(-self.factor[k * l + i] * xk);
            }
            x[i] = acc.value() / self.factor[i * l + i];
        }
        x
    }

    /// Dense inverse `(A + shift*I)^{-1}` as a symmetric matrix.
    pub fn inverse(&self) -> SymmetricMatrix {
        let l = self.order;
        // Invert the lower factor column by column.
        let mut inv_l = vec![0.0; l * l];
        for j in 0..l {
            inv_l[j * l + j] = 1.0 / self.factor[j * l + j];
            for i in (j + 1)..l {
                let mut acc = KahanSum::new();
                for k in j..i {
                    acc.add(-self.factor[i * l + k] * inv_l[k * l + j]);
                }
                inv_l[i * l + j] = acc.value() / self.factor[i * l + i];
            }
        }
        // (A + shift*I)^{-1} = L^{-T} L^{-1}.
        SymmetricMatrix::from_fn(l, |i, j| {
            let mut acc = KahanSum::new();
            for k in j.max(i)..l {
                acc.add(inv_l[k * l + i] * inv_l[k * l + j]);
            }
            acc.value()
        })
        .expect("inverse entries are finite")
    }

    /// One step of iterative refinement against `(A + shift*I) x = b`.
    fn refine(&self, a: &SymmetricMatrix, b: &[f64], x: &mut [f64]) {
        let ax = a.mul_vec(x);
        let residual: Vec<f64> = (0..self.order)
            .map(|i| {
                let mut acc = KahanSum::new();
                acc.add(b[i]);
                acc.add(-ax[i]);
                acc.add(-self.shift * x[i]);
                acc.value()
            })
            .collect();
        let dx = self.solve(&residual);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
    }
}

/// Solves `(A + alpha*I) w = b` with a relative-residual target of
/// `1e-10 * |b|`.
///
/// With `alpha == 0` the matrix must be numerically nonsingular; otherwise a
/// singularity error naming the smallest pivot is returned.
pub fn solve_regularized(a: &SymmetricMatrix, alpha: f64, b: &[f64]) -> Result<Vec<f64>> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::InvalidInput(format!(
            "regularization parameter must be finite and >= 0, got {alpha}"
        )));
    }
    if b.len() != a.order {
        return Err(Error::LengthMismatch {
            what: "right-hand side",
            expected: a.order,
            got: b.len(),
        });
    }
    if !b.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite {
            what: "right-hand side",
        });
    }
    let chol = Cholesky::factor(a, alpha)?;
    let mut x = chol.solve(b);
    // Two refinement steps hold the residual contract well past the
    // conditioning where plain Cholesky alone starts to slip.
    chol.refine(a, b, &mut x);
    chol.refine(a, b, &mut x);
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_psd(order: usize, rng: &mut ChaCha8Rng) -> SymmetricMatrix {
        // Gram matrix of a random square factor: PSD by construction.
        let g: Vec<f64> = (0..order * order)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        SymmetricMatrix::from_fn(order, |i, j| {
            (0..order)
                .map(|k| g[i * order + k] * g[j * order + k])
                .sum()
        })
        .unwrap()
    }

    #[test]
    fn identity_eigen() {
        let a = SymmetricMatrix::identity(3);
        let eig = sym_eig(&a).unwrap();
        assert_eq!(eig.eigenvalues(), &[1.0, 1.0, 1.0]);
        assert!(eig.orthonormality_defect() <= 1e-12);
    }

    #[test]
    fn diagonal_eigen_sorts_descending() {
        let a = SymmetricMatrix::new(2, vec![3.0, 0.0, 0.0, 1.0]).unwrap();
        let eig = sym_eig(&a).unwrap();
        assert_eq!(eig.eigenvalues(), &[3.0, 1.0]);
        // Basis is a signed permutation of the identity; here the order is
        // already descending so it is the identity up to sign.
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(eig.basis_entry(i, j).abs(), expect, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn ascending_diagonal_is_reordered() {
        let a = SymmetricMatrix::new(2, vec![1.0, 0.0, 0.0, 3.0]).unwrap();
        let eig = sym_eig(&a).unwrap();
        assert_eq!(eig.eigenvalues(), &[3.0, 1.0]);
        assert_relative_eq!(eig.basis_entry(0, 1).abs(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(eig.basis_entry(1, 0).abs(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn random_psd_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_psd(5, &mut rng);
        let eig = sym_eig(&a).unwrap();
        let rec = eig.reconstruct();
        let mut worst = 0.0f64;
        for i in 0..5 {
            for j in 0..5 {
                worst = worst.max((rec.get(i, j) - a.get(i, j)).abs());
            }
        }
        assert!(worst <= 1e-10, "reconstruction error {worst}");
        assert!(eig.orthonormality_defect() <= 1e-10);
        assert!(eig.eigenvalues().iter().all(|&l| l >= 0.0));
    }

    #[test]
    fn tiny_negative_eigenvalue_clamps_to_zero() {
        // diag(1, -1e-12) is within the PSD roundoff band.
        let a = SymmetricMatrix::new(2, vec![1.0, 0.0, 0.0, -1e-12]).unwrap();
        let eig = sym_eig(&a).unwrap();
        assert_eq!(eig.eigenvalues(), &[1.0, 0.0]);
    }

    #[test]
    fn clearly_negative_eigenvalue_fails() {
        let a = SymmetricMatrix::new(2, vec![1.0, 0.0, 0.0, -1e-6]).unwrap();
        match sym_eig(&a) {
            Err(Error::DecompositionFailed { .. }) => {}
            other => panic!("expected decomposition failure, got {other:?}"),
        }
    }

    #[test]
    fn asymmetry_beyond_tolerance_rejected() {
        let err = SymmetricMatrix::new(2, vec![1.0, 0.5, 0.5 + 1e-6, 1.0]).unwrap_err();
        match err {
            Error::Asymmetric { .. } => {}
            other => panic!("expected asymmetry error, got {other:?}"),
        }
        // Roundoff-level asymmetry is repaired instead.
        let a = SymmetricMatrix::new(2, vec![1.0, 0.5, 0.5 + 1e-13, 1.0]).unwrap();
        assert_eq!(a.get(0, 1), a.get(1, 0));
    }

    #[test]
    fn non_finite_entries_rejected() {
        let err = SymmetricMatrix::new(2, vec![1.0, 0.0, 0.0, f64::NAN]).unwrap_err();
        match err {
            Error::NonFinite { .. } => {}
            other => panic!("expected non-finite error, got {other:?}"),
        }
    }

    #[test]
    fn solve_identity_unregularized() {
        let a = SymmetricMatrix::identity(2);
        let x = solve_regularized(&a, 0.0, &[1.0, 2.0]).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(x[1], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn solve_scalar_with_regularization() {
        let a = SymmetricMatrix::new(1, vec![1.0]).unwrap();
        let x = solve_regularized(&a, 1.0, &[2.0]).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn solve_zero_rhs_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_psd(4, &mut rng);
        let x = solve_regularized(&a, 0.5, &[0.0; 4]).unwrap();
        assert_eq!(x, vec![0.0; 4]);
    }

    #[test]
    fn singular_unregularized_solve_reports_pivot() {
        let a = SymmetricMatrix::new(2, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        match solve_regularized(&a, 0.0, &[1.0, 1.0]) {
            Err(Error::Singular { min_pivot }) => assert!(min_pivot.abs() < 1e-10),
            other => panic!("expected singularity error, got {other:?}"),
        }
    }

    #[test]
    fn solve_meets_relative_residual_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for &alpha in &[0.0, 1e-6, 1e-2, 1.0] {
            let a = random_psd(12, &mut rng);
            let b: Vec<f64> = (0..12).map(|_| rng.random_range(-2.0..2.0)).collect();
            let x = solve_regularized(&a, alpha, &b).unwrap();
            let ax = a.mul_vec(&x);
            let res_sq: f64 = (0..12)
                .map(|i| {
                    let r = b[i] - ax[i] - alpha * x[i];
                    r * r
                })
                .sum();
            let b_norm: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(
                res_sq.sqrt() <= 1e-10 * b_norm,
                "residual {} vs {}",
                res_sq.sqrt(),
                1e-10 * b_norm
            );
        }
    }

    #[test]
    fn eigen_matches_regularized_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let a = random_psd(8, &mut rng);
        let b: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
        let eig = sym_eig(&a).unwrap();
        for &alpha in &[1e-6, 1e-3, 1.0, 1e3] {
            let direct = solve_regularized(&a, alpha, &b).unwrap();
            let z = eig.rotate_to_eigen(&b);
            let scaled: Vec<f64> = z
                .iter()
                .zip(eig.eigenvalues())
                .map(|(zi, li)| zi / (li + alpha))
                .collect();
            let via_eigen = eig.rotate_from_eigen(&scaled);
            let norm: f64 = direct.iter().map(|v| v * v).sum::<f64>().sqrt();
            for i in 0..8 {
                assert!(
                    (direct[i] - via_eigen[i]).abs() <= 1e-8 * norm.max(1e-300),
                    "alpha {alpha}: component {i} differs"
                );
            }
        }
    }

    #[test]
    fn eigenvalues_scale_linearly() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let a = random_psd(6, &mut rng);
        let scaled = a.scaled(3.5);
        let ea = sym_eig(&a).unwrap();
        let es = sym_eig(&scaled).unwrap();
        for (l1, l2) in ea.eigenvalues().iter().zip(es.eigenvalues()) {
            assert_relative_eq!(3.5 * l1, *l2, max_relative = 1e-10, epsilon = 1e-12);
        }
        // Same eigenspaces: reconstruction of the scaled matrix matches.
        let rec = es.reconstruct();
        for i in 0..6 {
            for j in 0..6 {
                assert_relative_eq!(rec.get(i, j), scaled.get(i, j), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn cholesky_inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let a = random_psd(7, &mut rng);
        let inv = Cholesky::factor(&a, 0.3).unwrap().inverse();
        // (A + 0.3 I) * inv ~ I.
        for col in 0..7 {
            let e: Vec<f64> = (0..7).map(|i| inv.get(i, col)).collect();
            let prod = a.mul_vec(&e);
            for i in 0..7 {
                let target = if i == col { 1.0 } else { 0.0 };
                assert_relative_eq!(prod[i] + 0.3 * e[i], target, epsilon = 1e-10);
            }
        }
    }
}
