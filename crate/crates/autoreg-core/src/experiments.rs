//! Synthetic system-identification harness.
//!
//! An AR(1) input drives an unknown impulse response; the observed output
//! adds white Gaussian noise calibrated to a target SNR. Scenarios sweep
//! sample count and SNR over many realizations, comparing the automatically
//! selected regularization against an oracle that knows the true response.
//!
//! Reproducibility: every random quantity comes from a ChaCha8 stream keyed
//! by (seed, realization index), so whole batches are pure functions of
//! their configuration, independent of thread count. At a fixed seed the
//! input and the unit-variance noise shape are shared across SNR levels;
//! only the noise scale changes.

use crate::accum::KahanSum;
use crate::error::{Error, Result};
use crate::estimation::{build_stats, SignalPair};
use crate::wiener::{solve_wiener, to_eigen_domain, EigenStats};
use crate::autoreg::{estimate_alpha, IterationTrace};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Default relative-change tolerance for declaring the fixed point converged.
pub const DEFAULT_REL_TOL: f64 = 1e-6;
/// Points in the default oracle search grid.
pub const DEFAULT_GRID_LEN: usize = 200;

/// First-order autoregressive input process `x(t) = a x(t-1) + u(t)` with
/// unit-variance white Gaussian drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ARConfig {
    pub a: f64,
    /// Samples discarded before the emitted record, letting the process
    /// reach its stationary distribution.
    pub burn_in: usize,
    pub seed: u64,
}

impl ARConfig {
    /// Burn-in defaults to `ceil(10/(1-|a|))`.
    pub fn new(a: f64, seed: u64) -> Result<Self> {
        if !(a.is_finite() && a.abs() < 1.0) {
            return Err(Error::InvalidInput(format!(
                "AR coefficient must satisfy |a| < 1, got {a}"
            )));
        }
        let burn_in = (10.0 / (1.0 - a.abs())).ceil() as usize;
        Ok(Self { a, burn_in, seed })
    }

    pub fn with_burn_in(a: f64, burn_in: usize, seed: u64) -> Result<Self> {
        let mut cfg = Self::new(a, seed)?;
        cfg.burn_in = burn_in;
        Ok(cfg)
    }

    /// Stationary variance `1/(1-a^2)`.
    pub fn stationary_variance(&self) -> f64 {
        1.0 / (1.0 - self.a * self.a)
    }
}

fn ar1_samples(n: usize, a: f64, burn_in: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut state = 0.0f64;
    for _ in 0..burn_in {
        let u: f64 = rng.sample(StandardNormal);
        state = a * state + u;
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.sample(StandardNormal);
        state = a * state + u;
        out.push(state);
    }
    out
}

/// Emits `n` consecutive samples of the AR(1) process after burn-in,
/// deterministic in the seed.
pub fn gen_ar1(n: usize, cfg: &ARConfig) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    ar1_samples(n, cfg.a, cfg.burn_in, &mut rng)
}

/// True system impulse response, unit-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseResponse {
    h: Vec<f64>,
}

impl ImpulseResponse {
    pub fn new(h: Vec<f64>) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::InvalidInput(
                "impulse response must have at least one tap".into(),
            ));
        }
        if !h.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "impulse response",
            });
        }
        if h.iter().all(|&v| v == 0.0) {
            return Err(Error::InvalidInput(
                "impulse response must not be identically zero".into(),
            ));
        }
        Ok(Self { h })
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn l_star(&self) -> usize {
        self.h.len()
    }

    pub fn norm(&self) -> f64 {
        self.h.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Norm of the taps at index `l` and beyond (the part a length-`l`
    /// filter cannot represent).
    pub fn tail_norm(&self, l: usize) -> f64 {
        if l >= self.h.len() {
            return 0.0;
        }
        self.h[l..].iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Draws a decaying random impulse response `h(t) = g(t) exp(-t/tau)` with
/// white Gaussian `g`, normalized to unit energy. Deterministic in the seed.
pub fn synth_impulse(l_star: usize, decay_time: f64, seed: u64) -> Result<ImpulseResponse> {
    if l_star == 0 {
        return Err(Error::InvalidInput(
            "impulse response length must be >= 1".into(),
        ));
    }
    if !(decay_time.is_finite() && decay_time > 0.0) {
        return Err(Error::InvalidInput(format!(
            "decay time must be finite and > 0, got {decay_time}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h: Vec<f64> = (0..l_star)
        .map(|t| {
            let g: f64 = rng.sample(StandardNormal);
            g * (-(t as f64) / decay_time).exp()
        })
        .collect();
    let norm = h.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateData(
            "drawn impulse response has zero energy".into(),
        ));
    }
    for v in &mut h {
        *v /= norm;
    }
    ImpulseResponse::new(h)
}

/// Noise variance hitting a target SNR for an AR(1) input:
/// `v_e* = h^T R h / 10^(snr_db/10)` with the analytic stationary covariance
/// `R_ij = a^|i-j| / (1 - a^2)`.
pub fn calibrate_noise(h: &ImpulseResponse, a: f64, snr_db: f64) -> Result<f64> {
    if !(a.is_finite() && a.abs() < 1.0) {
        return Err(Error::InvalidInput(format!(
            "AR coefficient must satisfy |a| < 1, got {a}"
        )));
    }
    if snr_db.is_nan() {
        return Err(Error::InvalidInput("SNR must not be NaN".into()));
    }
    let taps = h.h();
    let var = 1.0 / (1.0 - a * a);
    let mut power = KahanSum::new();
    for (i, &hi) in taps.iter().enumerate() {
        for (j, &hj) in taps.iter().enumerate() {
            power.add(hi * hj * a.powi((i as i32 - j as i32).abs()) * var);
        }
    }
    let v = power.value() / 10f64.powf(snr_db / 10.0);
    if !v.is_finite() || v < 0.0 {
        return Err(Error::InvalidInput(format!(
            "SNR {snr_db} dB yields unusable noise variance {v}"
        )));
    }
    Ok(v)
}

/// One cell of the experiment sweep: data volume, filter length, system,
/// SNR, and iteration settings.
///
/// The scenario seed governs all randomness during simulation; the AR
/// config's own seed applies only to standalone [`gen_ar1`] calls.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n: usize,
    pub l: usize,
    pub impulse: ImpulseResponse,
    pub snr_db: f64,
    pub realizations: usize,
    pub alpha0: f64,
    pub iters: usize,
    pub seed: u64,
    pub ar: ARConfig,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.n == 0 {
            problems.push("sample count must be >= 1".to_string());
        }
        if self.l == 0 {
            problems.push("filter length must be >= 1".to_string());
        }
        if self.l > self.impulse.l_star() {
            problems.push(format!(
                "filter length {} exceeds impulse response length {}",
                self.l,
                self.impulse.l_star()
            ));
        }
        if self.realizations == 0 {
            problems.push("realization count must be >= 1".to_string());
        }
        if !(self.alpha0.is_finite() && self.alpha0 > 0.0) {
            problems.push(format!(
                "starting alpha must be finite and > 0, got {}",
                self.alpha0
            ));
        }
        if self.snr_db.is_nan() {
            problems.push("SNR must not be NaN".to_string());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(problems.join("; ")))
        }
    }
}

/// Outcome of one realization: the automatically selected alpha, the oracle
/// alpha, their misalignments, and the full iteration trace.
#[derive(Debug, Clone)]
pub struct RealizationResult {
    pub alpha_auto: f64,
    pub m_auto_db: f64,
    pub alpha_oracle: f64,
    pub m_oracle_db: f64,
    pub trace: IterationTrace,
}

fn simulate_streams(scn: &ScenarioConfig, x_stream: u64, e_stream: u64) -> Result<SignalPair> {
    scn.validate()?;
    let l_star = scn.impulse.l_star();
    let h = scn.impulse.h();
    let v_e_star = calibrate_noise(&scn.impulse, scn.ar.a, scn.snr_db)?;
    let noise_scale = v_e_star.sqrt();

    let mut x_rng = ChaCha8Rng::seed_from_u64(scn.seed);
    x_rng.set_stream(x_stream);
    // Chronological record: l_star - 1 prehistory samples, then the body.
    let s = ar1_samples(l_star - 1 + scn.n, scn.ar.a, scn.ar.burn_in, &mut x_rng);

    let mut e_rng = ChaCha8Rng::seed_from_u64(scn.seed);
    e_rng.set_stream(e_stream);
    let d: Vec<f64> = (0..scn.n)
        .map(|t| {
            let mut acc = KahanSum::new();
            for (k, &hk) in h.iter().enumerate() {
                acc.add(hk * s[l_star - 1 + t - k]);
            }
            let g: f64 = e_rng.sample(StandardNormal);
            acc.value() + noise_scale * g
        })
        .collect();

    let x_pre = s[l_star - scn.l..l_star - 1].to_vec();
    let x = s[l_star - 1..].to_vec();
    SignalPair::new(x_pre, x, d, scn.l)
}

/// Simulates one record: the true system convolves the full-length AR(1)
/// input (windows of length `L*`), observation noise is white Gaussian at
/// the calibrated variance, and the returned pair carries true prehistory
/// for the estimation window length `L`.
pub fn simulate(scn: &ScenarioConfig) -> Result<SignalPair> {
    simulate_streams(scn, 0, 1)
}

/// Relative estimation error in dB, `20 log10(|pad(w_hat) - h| / |h|)`.
/// Shorter estimates are zero-padded to the response length. An exact match
/// returns negative infinity.
pub fn misalignment(w_hat: &[f64], h: &ImpulseResponse) -> Result<f64> {
    let l_star = h.l_star();
    if w_hat.len() > l_star {
        return Err(Error::LengthMismatch {
            what: "filter coefficients",
            expected: l_star,
            got: w_hat.len(),
        });
    }
    let h_norm = h.norm();
    if h_norm == 0.0 {
        return Err(Error::InvalidInput(
            "impulse response norm must be positive".into(),
        ));
    }
    let mut diff = KahanSum::new();
    for (k, &hk) in h.h().iter().enumerate() {
        let w = w_hat.get(k).copied().unwrap_or(0.0);
        let e = w - hk;
        diff.add(e * e);
    }
    let d = diff.value().sqrt();
    if d == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(20.0 * (d / h_norm).log10())
}

/// Misalignment floor for a length-`l` filter against this response,
/// `20 log10(|h_tail| / |h|)`; negative infinity when `l` covers everything.
pub fn mismatch_floor_db(h: &ImpulseResponse, l: usize) -> f64 {
    let tail = h.tail_norm(l);
    if tail == 0.0 {
        return f64::NEG_INFINITY;
    }
    20.0 * (tail / h.norm()).log10()
}

/// Log-spaced search grid spanning `[1e-8 lambda_max, 10 lambda_max]`.
pub fn default_grid(lambda_max: f64) -> Result<Vec<f64>> {
    if !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::InvalidInput(format!(
            "grid anchor eigenvalue must be finite and > 0, got {lambda_max}"
        )));
    }
    let lo = (1e-8 * lambda_max).ln();
    let hi = (10.0 * lambda_max).ln();
    Ok((0..DEFAULT_GRID_LEN)
        .map(|i| (lo + (hi - lo) * i as f64 / (DEFAULT_GRID_LEN - 1) as f64).exp())
        .collect())
}

/// Best regularization in hindsight: scans the grid for the alpha minimizing
/// misalignment against the true response, then refines the best interior
/// bracket by golden-section search in log space. Exact ties go to the
/// smallest alpha.
pub fn oracle_alpha(
    es: &EigenStats,
    h: &ImpulseResponse,
    grid: &[f64],
) -> Result<(f64, f64)> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("oracle grid must be non-empty".into()));
    }
    if !grid.iter().all(|a| a.is_finite() && *a >= 0.0) {
        return Err(Error::InvalidInput(
            "oracle grid values must be finite and >= 0".into(),
        ));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));

    let m_of = |alpha: f64| -> Result<f64> {
        let sol = solve_wiener(es, alpha)?;
        misalignment(&sol.w_hat, h)
    };

    let mut best_i = 0usize;
    let mut best_alpha = sorted[0];
    let mut best_m = m_of(sorted[0])?;
    for (i, &alpha) in sorted.iter().enumerate().skip(1) {
        let m = m_of(alpha)?;
        if m < best_m {
            best_i = i;
            best_alpha = alpha;
            best_m = m;
        }
    }

    // Refine inside the surrounding bracket when one exists.
    if best_i > 0 && best_i + 1 < sorted.len() && sorted[best_i - 1] > 0.0 {
        let mut lo = sorted[best_i - 1].ln();
        let mut hi = sorted[best_i + 1].ln();
        let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = hi - inv_phi * (hi - lo);
        let mut d = lo + inv_phi * (hi - lo);
        let mut m_c = m_of(c.exp())?;
        let mut m_d = m_of(d.exp())?;
        for _ in 0..48 {
            if m_c <= m_d {
                hi = d;
                d = c;
                m_d = m_c;
                c = hi - inv_phi * (hi - lo);
                m_c = m_of(c.exp())?;
            } else {
                lo = c;
                c = d;
                m_c = m_d;
                d = lo + inv_phi * (hi - lo);
                m_d = m_of(d.exp())?;
            }
        }
        for (lnp, m) in [(c, m_c), (d, m_d)] {
            let p = lnp.exp();
            if m < best_m || (m == best_m && p < best_alpha) {
                best_alpha = p;
                best_m = m;
            }
        }
    }
    Ok((best_alpha, best_m))
}

/// Runs every realization of a scenario in parallel. Realization `r` draws
/// its own random streams from `(seed, r)`, so results are a pure function
/// of the configuration; per-realization failures are recorded, not fatal.
pub fn run_scenario(scn: &ScenarioConfig) -> Vec<Result<RealizationResult>> {
    if let Err(e) = scn.validate() {
        return vec![Err(e)];
    }
    (0..scn.realizations)
        .into_par_iter()
        .map(|r| run_realization(scn, r))
        .collect()
}

fn run_realization(scn: &ScenarioConfig, r: usize) -> Result<RealizationResult> {
    let sig = simulate_streams(scn, 2 * r as u64, 2 * r as u64 + 1)?;
    let stats = build_stats(&sig)?;
    let es = to_eigen_domain(&stats)?;
    let trace = estimate_alpha(&es, scn.alpha0, scn.iters, DEFAULT_REL_TOL)
        .map_err(|e| e.source)?;
    let alpha_auto = trace.final_alpha;
    let sol = solve_wiener(&es, alpha_auto)?;
    let m_auto_db = misalignment(&sol.w_hat, &scn.impulse)?;

    let lambda_max = es.lambda().first().copied().unwrap_or(0.0);
    let mut grid = default_grid(lambda_max)?;
    grid.push(alpha_auto);
    let (alpha_oracle, m_oracle_db) = oracle_alpha(&es, &scn.impulse, &grid)?;

    Ok(RealizationResult {
        alpha_auto,
        m_auto_db,
        alpha_oracle,
        m_oracle_db,
        trace,
    })
}
