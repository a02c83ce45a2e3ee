//! Automatic selection of the regularization parameter.
//!
//! The regularizer alpha is tied to a noise variance `v_e` and a prior weight
//! variance `v_w` through `alpha = v_e / (N v_w)`. Maximizing the marginal
//! likelihood of the data over both variances yields a fixed-point update in
//! alpha driven by the effective number of parameters gamma. The update runs
//! entirely in the eigen-domain; a deliberately direct matrix-form twin of
//! the step exists as a cross-check.

use crate::accum::KahanSum;
use crate::error::{Error, Result};
use crate::estimation::{SampleStats, StatsOrigin};
use crate::linalg::{solve_regularized, Cholesky};
use crate::wiener::EigenStats;

/// Fraction of `|d|^2/N` used as the lower clamp on the residual term of the
/// update, keeping alpha positive on near-perfect fits.
const RESIDUAL_FLOOR_REL: f64 = 1e-15;

/// Noise and weight variances with the regularizer they imply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    pub v_e: f64,
    pub v_w: f64,
    /// `v_e / (N v_w)`, consistent with the variances by construction.
    pub alpha: f64,
}

impl HyperParams {
    pub fn new(v_e: f64, v_w: f64, n: usize) -> Result<Self> {
        if !(v_e.is_finite() && v_e > 0.0) || !(v_w.is_finite() && v_w > 0.0) {
            return Err(Error::InvalidInput(format!(
                "variances must be finite and > 0, got v_e = {v_e}, v_w = {v_w}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput("sample count must be >= 1".into()));
        }
        Ok(Self {
            v_e,
            v_w,
            alpha: v_e / (n as f64 * v_w),
        })
    }
}

/// One iteration of the fixed-point update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegState {
    /// Iteration index.
    pub iter: usize,
    /// Alpha at which this step was evaluated.
    pub alpha: f64,
    /// Effective number of parameters at that alpha.
    pub gamma: f64,
    /// Noise variance implied by the residual at that alpha.
    pub v_e: f64,
    /// Weight variance implied by the filter norm at that alpha.
    pub v_w: f64,
}

/// How an iteration run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStatus {
    /// Ran the full iteration budget.
    Completed,
    /// Stopped early because successive alphas agreed within tolerance.
    EarlyConverged,
    /// Data carried no usable signal (zero cross-correlation or filter).
    DegenerateData,
    /// Effective parameter count reached the sample count.
    IllPosed,
    /// Iteration could not start (invalid arguments).
    Aborted,
}

/// Record of a fixed-point run: the starting alpha, every evaluated step,
/// and the final alpha.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub alpha0: f64,
    pub steps: Vec<RegState>,
    pub final_alpha: f64,
    pub status: TraceStatus,
}

impl IterationTrace {
    /// The alpha sequence including both endpoints: `alpha0` through the
    /// final iterate, one more entry than there are steps.
    pub fn alphas(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.steps.iter().map(|s| s.alpha).collect();
        out.push(self.final_alpha);
        if out.len() == 1 {
            // No steps ran: the single point is alpha0 itself.
            out[0] = self.alpha0;
        }
        out
    }
}

/// A failed iteration run with whatever trace accumulated before the error.
#[derive(Debug)]
pub struct IterationError {
    pub source: Error,
    pub partial: IterationTrace,
}

impl std::fmt::Display for IterationError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "iteration failed after {} steps: {}",
            self.partial.steps.len(),
            self.source
        )
    }
}

impl std::error::Error for IterationError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

/// Effective number of parameters `gamma = sum_l lambda_l/(lambda_l + alpha)`.
///
/// Zero eigenvalues contribute zero, so at alpha -> 0 the value tends to the
/// rank of the covariance rather than blowing up.
pub fn effective_params(lambda: &[f64], alpha: f64) -> f64 {
    let mut acc = KahanSum::new();
    for &l in lambda {
        if l > 0.0 {
            acc.add(l / (l + alpha));
        }
    }
    acc.value()
}

struct StepQuantities {
    gamma: f64,
    v_e: f64,
    v_w: f64,
    alpha_next: f64,
}

fn step_from_sums(
    residual_per_sample: f64,
    w_sq: f64,
    gamma: f64,
    d_energy: f64,
    n: usize,
) -> Result<StepQuantities> {
    if w_sq <= 0.0 {
        return Err(Error::DegenerateData("no signal in r_xd".into()));
    }
    if gamma <= 0.0 {
        return Err(Error::DegenerateData(
            "zero effective parameters: input covariance vanishes".into(),
        ));
    }
    let nf = n as f64;
    if gamma >= nf {
        return Err(Error::IllPosed { gamma, n });
    }
    let floor = RESIDUAL_FLOOR_REL * d_energy / nf;
    let residual = residual_per_sample.max(floor);
    let v_e = nf * residual / (nf - gamma);
    let v_w = w_sq / gamma;
    let alpha_next = residual / ((nf / gamma - 1.0) * w_sq);
    Ok(StepQuantities {
        gamma,
        v_e,
        v_w,
        alpha_next,
    })
}

fn check_alpha_positive(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "regularization parameter must be finite and > 0, got {alpha}"
        )));
    }
    Ok(())
}

/// One fixed-point update in the eigen-domain. Returns the next alpha and
/// the state (gamma and implied variances) at the current one.
pub fn gm_step_eigen(es: &EigenStats, alpha: f64) -> Result<(f64, RegState)> {
    check_alpha_positive(alpha)?;
    let nf = es.n() as f64;
    let mut resid = KahanSum::new();
    resid.add(es.d_energy() / nf);
    let mut w_sq = KahanSum::new();
    for (z, l) in es.z_xd().iter().zip(es.lambda()) {
        let denom = l + alpha;
        let zz = z * z;
        resid.add(-zz * (l + 2.0 * alpha) / (denom * denom));
        w_sq.add(zz / (denom * denom));
    }
    let gamma = effective_params(es.lambda(), alpha);
    let q = step_from_sums(resid.value(), w_sq.value(), gamma, es.d_energy(), es.n())?;
    Ok((
        q.alpha_next,
        RegState {
            iter: 0,
            alpha,
            gamma: q.gamma,
            v_e: q.v_e,
            v_w: q.v_w,
        },
    ))
}

/// Matrix-form twin of [`gm_step_eigen`]: explicit regularized solve, trace
/// of the dense inverse, residual via the statistics. Slower by design; it
/// shares no eigen-domain code and serves as a reference path.
pub fn gm_step_matrix(stats: &SampleStats, alpha: f64) -> Result<(f64, RegState)> {
    check_alpha_positive(alpha)?;
    let nf = stats.n() as f64;
    let l = stats.l() as f64;
    let w = solve_regularized(stats.r_x(), alpha, stats.r_xd())?;
    let trace = Cholesky::factor(stats.r_x(), alpha)?.inverse().trace();
    let gamma = l - alpha * trace;
    // |d - X^T w|^2 = |d|^2 - 2N w.r_xd + N w^T R_x w.
    let mut resid = KahanSum::new();
    resid.add(stats.d_energy() / nf);
    let mut cross = KahanSum::new();
    for (wi, ri) in w.iter().zip(stats.r_xd()) {
        cross.add(wi * ri);
    }
    resid.add(-2.0 * cross.value());
    resid.add(stats.r_x().quadratic_form(&w));
    let w_sq: f64 = {
        let mut acc = KahanSum::new();
        for wi in &w {
            acc.add(wi * wi);
        }
        acc.value()
    };
    let q = step_from_sums(resid.value(), w_sq, gamma, stats.d_energy(), stats.n())?;
    Ok((
        q.alpha_next,
        RegState {
            iter: 0,
            alpha,
            gamma: q.gamma,
            v_e: q.v_e,
            v_w: q.v_w,
        },
    ))
}

/// Variances implied by the filter at the given alpha: residual-based noise
/// variance and norm-based weight variance, via the eigen-domain identities.
///
/// `w_hat` is the solution at `alpha`; only its length is inspected, the
/// norms come from the identities so the result is consistent with the
/// fixed-point step to the last bit.
pub fn variance_updates(es: &EigenStats, alpha: f64, w_hat: &[f64]) -> Result<HyperParams> {
    check_alpha_positive(alpha)?;
    if w_hat.len() != es.l() {
        return Err(Error::LengthMismatch {
            what: "filter coefficients",
            expected: es.l(),
            got: w_hat.len(),
        });
    }
    let (_, state) = gm_step_eigen(es, alpha)?;
    HyperParams::new(state.v_e, state.v_w, es.n())
}

/// Runs the fixed-point iteration from `alpha0`.
///
/// Stops after `max_iters` steps, or earlier once successive alphas agree
/// within `rel_tol` relatively. Every evaluated step lands in the trace; on
/// error the partial trace rides along with the failure.
pub fn estimate_alpha(
    es: &EigenStats,
    alpha0: f64,
    max_iters: usize,
    rel_tol: f64,
) -> std::result::Result<IterationTrace, Box<IterationError>> {
    let abort = |source: Error| {
        Box::new(IterationError {
            source,
            partial: IterationTrace {
                alpha0,
                steps: Vec::new(),
                final_alpha: alpha0,
                status: TraceStatus::Aborted,
            },
        })
    };
    if !alpha0.is_finite() || alpha0 <= 0.0 {
        return Err(abort(Error::InvalidInput(format!(
            "starting alpha must be finite and > 0, got {alpha0}"
        ))));
    }
    if !rel_tol.is_finite() || rel_tol < 0.0 {
        return Err(abort(Error::InvalidInput(format!(
            "relative tolerance must be finite and >= 0, got {rel_tol}"
        ))));
    }

    let mut steps = Vec::with_capacity(max_iters);
    let mut alpha = alpha0;
    let mut status = TraceStatus::Completed;
    for iter in 0..max_iters {
        match gm_step_eigen(es, alpha) {
            Ok((next, mut state)) => {
                state.iter = iter;
                steps.push(state);
                let converged = (next - alpha).abs() <= rel_tol * alpha;
                alpha = next;
                if converged {
                    status = TraceStatus::EarlyConverged;
                    break;
                }
            }
            Err(source) => {
                let status = match source {
                    Error::IllPosed { .. } => TraceStatus::IllPosed,
                    Error::DegenerateData(_) => TraceStatus::DegenerateData,
                    _ => TraceStatus::Aborted,
                };
                return Err(Box::new(IterationError {
                    source,
                    partial: IterationTrace {
                        alpha0,
                        steps,
                        final_alpha: alpha,
                        status,
                    },
                }));
            }
        }
    }
    Ok(IterationTrace {
        alpha0,
        steps,
        final_alpha: alpha,
        status,
    })
}

/// Log marginal likelihood of the desired signal under the Gaussian model
/// with noise variance `v_e` and weight variance `v_w`:
///
/// `-1/2 [ N log 2пи + (N-L) log v_e + sum_l log(v_e + v_w N lambda_l)
///         + (1/v_e) (|d|^2 - N sum_l z_l^2/(lambda_l + alpha)) ]`
///
/// with `alpha = v_e/(N v_w)`. The closed form relies on the statistics
/// being exact sample averages; externally supplied statistics are rejected.
pub fn log_evidence(es: &EigenStats, v_e: f64, v_w: f64) -> Result<f64> {
    if es.origin() != StatsOrigin::SampleAverage {
        return Err(Error::ExpectationFormStats { op: "log_evidence" });
    }
    if !(v_e.is_finite() && v_e > 0.0) || !(v_w.is_finite() && v_w > 0.0) {
        return Err(Error::InvalidInput(format!(
            "variances must be finite and > 0, got v_e = {v_e}, v_w = {v_w}"
        )));
    }
    let nf = es.n() as f64;
    let lf = es.l() as f64;
    let alpha = v_e / (nf * v_w);

    let mut log_det = KahanSum::new();
    log_det.add(nf * (2.0 * std::f64::consts::PI).ln());
    log_det.add((nf - lf) * v_e.ln());
    let mut quad = KahanSum::new();
    quad.add(es.d_energy());
    for (z, l) in es.z_xd().iter().zip(es.lambda()) {
        log_det.add((v_e + v_w * nf * l).ln());
        quad.add(-nf * z * z / (l + alpha));
    }
    Ok(-0.5 * (log_det.value() + quad.value() / v_e))
}
