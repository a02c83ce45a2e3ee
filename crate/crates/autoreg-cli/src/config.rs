//! Experiment configuration files.
//!
//! A config describes a sweep over sample counts and SNR levels for one
//! system. Unknown keys are rejected so typos fail loudly instead of
//! silently running the default.

use crate::error::{io_ctx, CliError, Result};
use autoreg_core::experiments::{synth_impulse, ARConfig, ImpulseResponse, ScenarioConfig};
use serde::{Deserialize, Serialize};
use std::path::Path;

fn default_alpha0() -> f64 {
    0.5
}

fn default_iters() -> usize {
    5
}

/// Sweep configuration: every combination of `n` and `snr_db` becomes one
/// experiment cell, all sharing the impulse response, AR input model, and
/// base seed. The shared seed means cell (n, snr) and cell (n, snr') see the
/// same input realizations with only the noise scale differing.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Sample counts to sweep.
    pub n: Vec<usize>,
    /// SNR levels in dB to sweep.
    pub snr_db: Vec<f64>,
    /// Estimated filter length.
    pub l: usize,
    /// True impulse response length.
    pub l_star: usize,
    /// Impulse response decay time in samples; defaults to `l_star / 4`.
    #[serde(default)]
    pub tau: Option<f64>,
    /// Seed for drawing the impulse response.
    pub impulse_seed: u64,
    /// AR(1) coefficient of the input process.
    pub a: f64,
    /// AR burn-in; defaults to `ceil(10 / (1 - |a|))`.
    #[serde(default)]
    pub burn_in: Option<usize>,
    /// Realizations per cell.
    pub realizations: usize,
    #[serde(default = "default_alpha0")]
    pub alpha0: f64,
    #[serde(default = "default_iters")]
    pub iters: usize,
    /// Base seed for all cells; `AUTOREG_SEED` overrides it.
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_ctx(path, "reading"))?;
        Self::parse(&text, path)
    }

    /// Parses and validates config text; `origin` names the source in errors.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| CliError::usage(format!("{}: invalid config: {e}", origin.display())))?;
        cfg.validated()
    }

    /// Fills defaults and checks every constraint, reporting all violations
    /// at once.
    pub fn validated(mut self) -> Result<Self> {
        let mut problems = Vec::new();
        if self.n.is_empty() {
            problems.push("n must list at least one sample count".to_string());
        }
        if self.n.contains(&0) {
            problems.push("sample counts must be >= 1".to_string());
        }
        if self.snr_db.is_empty() {
            problems.push("snr_db must list at least one level".to_string());
        }
        if self.snr_db.iter().any(|s| s.is_nan()) {
            problems.push("snr_db values must not be NaN".to_string());
        }
        if self.l == 0 {
            problems.push("l must be >= 1".to_string());
        }
        if self.l_star == 0 {
            problems.push("l_star must be >= 1".to_string());
        }
        if self.l > self.l_star {
            problems.push(format!(
                "l = {} exceeds impulse response length l_star = {}",
                self.l, self.l_star
            ));
        }
        if self.realizations == 0 {
            problems.push("realizations must be >= 1".to_string());
        }
        if !(self.alpha0.is_finite() && self.alpha0 > 0.0) {
            problems.push(format!("alpha0 must be finite and > 0, got {}", self.alpha0));
        }
        if !(self.a.is_finite() && self.a.abs() < 1.0) {
            problems.push(format!("a must satisfy |a| < 1, got {}", self.a));
        }
        let tau = self.tau.unwrap_or(self.l_star as f64 / 4.0);
        if !(tau.is_finite() && tau > 0.0) {
            problems.push(format!("tau must be finite and > 0, got {tau}"));
        }
        if !problems.is_empty() {
            return Err(CliError::usage(format!(
                "invalid configuration: {}",
                problems.join("; ")
            )));
        }
        self.tau = Some(tau);
        if self.burn_in.is_none() {
            self.burn_in = Some((10.0 / (1.0 - self.a.abs())).ceil() as usize);
        }
        Ok(self)
    }

    pub fn impulse(&self) -> Result<ImpulseResponse> {
        let tau = self.tau.unwrap_or(self.l_star as f64 / 4.0);
        synth_impulse(self.l_star, tau, self.impulse_seed).map_err(CliError::from)
    }

    /// The scenario for one sweep cell.
    pub fn cell(&self, n: usize, snr_db: f64, impulse: &ImpulseResponse) -> Result<ScenarioConfig> {
        let ar = ARConfig::with_burn_in(
            self.a,
            self.burn_in.expect("validated config has burn_in"),
            self.seed,
        )?;
        Ok(ScenarioConfig {
            n,
            l: self.l,
            impulse: impulse.clone(),
            snr_db,
            realizations: self.realizations,
            alpha0: self.alpha0,
            iters: self.iters,
            seed: self.seed,
            ar,
        })
    }
}
