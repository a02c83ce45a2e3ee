//! Sample statistics of an input/desired signal pair.
//!
//! The filter sees the input through sliding windows
//! `x(t) = [x(t), x(t-1), ..., x(t-L+1)]`; windows at the start of the record
//! reach back into an explicit prehistory segment, so the statistics match
//! the data-matrix forms exactly with no edge effects.

use crate::accum::KahanSum;
use crate::error::{Error, Result};
use crate::linalg::SymmetricMatrix;

/// Input samples with prehistory, plus the desired signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalPair {
    /// `x(-L+1) ... x(-1)` in chronological order, length `L - 1`.
    x_pre: Vec<f64>,
    /// `x(0) ... x(N-1)`.
    x: Vec<f64>,
    /// `d(0) ... d(N-1)`.
    d: Vec<f64>,
    /// Window length `L`.
    l: usize,
}

impl SignalPair {
    pub fn new(x_pre: Vec<f64>, x: Vec<f64>, d: Vec<f64>, l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidInput("window length must be >= 1".into()));
        }
        if x.is_empty() {
            return Err(Error::InvalidInput(
                "signal must contain at least one sample".into(),
            ));
        }
        if x_pre.len() != l - 1 {
            return Err(Error::LengthMismatch {
                what: "input prehistory",
                expected: l - 1,
                got: x_pre.len(),
            });
        }
        if d.len() != x.len() {
            return Err(Error::LengthMismatch {
                what: "desired signal",
                expected: x.len(),
                got: d.len(),
            });
        }
        let finite = |s: &[f64]| s.iter().all(|v| v.is_finite());
        if !finite(&x_pre) || !finite(&x) || !finite(&d) {
            return Err(Error::NonFinite { what: "samples" });
        }
        Ok(Self { x_pre, x, d, l })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn x_pre(&self) -> &[f64] {
        &self.x_pre
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    /// Input sample at signed time `t`; negative times index the prehistory.
    #[inline]
    pub fn sample_at(&self, t: isize) -> f64 {
        if t >= 0 {
            self.x[t as usize]
        } else {
            self.x_pre[(t + self.l as isize - 1) as usize]
        }
    }

    /// Element `k` of the window at time `t`, i.e. `x(t - k)`.
    #[inline]
    pub fn window_sample(&self, t: usize, k: usize) -> f64 {
        self.sample_at(t as isize - k as isize)
    }
}

/// Zero-pads the prehistory, for callers whose records start cold.
pub fn zero_prehistory(x: Vec<f64>, d: Vec<f64>, l: usize) -> Result<SignalPair> {
    if l == 0 {
        return Err(Error::InvalidInput("window length must be >= 1".into()));
    }
    SignalPair::new(vec![0.0; l - 1], x, d, l)
}

/// Whether the statistics came from sample averaging over a record or were
/// supplied externally (e.g. analytic expectations).
///
/// Several identities downstream hold only for the sample-average form, where
/// `R_x = (1/N) X X^T` exactly; operations relying on that reject external
/// statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsOrigin {
    SampleAverage,
    External,
}

/// Second-order statistics of a signal pair: windowed input covariance,
/// input/desired cross-correlation, and desired-signal energy.
#[derive(Debug, Clone)]
pub struct SampleStats {
    r_x: SymmetricMatrix,
    r_xd: Vec<f64>,
    d_energy: f64,
    n: usize,
    l: usize,
    origin: StatsOrigin,
}

impl SampleStats {
    /// Wraps externally supplied statistics (analytic covariances, imported
    /// estimates). Marked [`StatsOrigin::External`].
    pub fn external(r_x: SymmetricMatrix, r_xd: Vec<f64>, d_energy: f64, n: usize) -> Result<Self> {
        let l = r_x.order();
        if r_xd.len() != l {
            return Err(Error::LengthMismatch {
                what: "cross-correlation",
                expected: l,
                got: r_xd.len(),
            });
        }
        if !r_xd.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "cross-correlation",
            });
        }
        if !d_energy.is_finite() || d_energy < 0.0 {
            return Err(Error::InvalidInput(format!(
                "desired-signal energy must be finite and >= 0, got {d_energy}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput("sample count must be >= 1".into()));
        }
        Ok(Self {
            r_x,
            r_xd,
            d_energy,
            n,
            l,
            origin: StatsOrigin::External,
        })
    }

    pub fn r_x(&self) -> &SymmetricMatrix {
        &self.r_x
    }

    pub fn r_xd(&self) -> &[f64] {
        &self.r_xd
    }

    /// Total desired-signal energy `sum_t d(t)^2`.
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

/// Averages windowed outer products and cross products over the record:
/// `R_x = (1/N) sum_t x(t) x(t)^T`, `r_xd = (1/N) sum_t x(t) d(t)`, plus the
/// desired-signal energy `sum_t d(t)^2`.
///
/// Accumulation is compensated throughout, so the result is deterministic and
/// the data-matrix identities hold to roughly ten digits even for long
/// records.
pub fn build_stats(sig: &SignalPair) -> Result<SampleStats> {
    let n = sig.n();
    let l = sig.l();
    let scale = 1.0 / n as f64;

    let r_x = SymmetricMatrix::from_fn(l, |i, j| {
        let mut acc = KahanSum::new();
        for t in 0..n {
            acc.add(sig.window_sample(t, i) * sig.window_sample(t, j));
        }
        scale * acc.value()
    })?;

    let r_xd: Vec<f64> = (0..l)
        .map(|k| {
            let mut acc = KahanSum::new();
            for t in 0..n {
                acc.add(sig.window_sample(t, k) * sig.d()[t]);
            }
            scale * acc.value()
        })
        .collect();
    if !r_xd.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite {
            what: "cross-correlation",
        });
    }

    let mut e = KahanSum::new();
    for &dv in sig.d() {
        e.add(dv * dv);
    }
    let d_energy = e.value();
    if !d_energy.is_finite() {
        return Err(Error::NonFinite {
            what: "desired-signal energy",
        });
    }

    Ok(SampleStats {
        r_x,
        r_xd,
        d_energy,
        n,
        l,
        origin: StatsOrigin::SampleAverage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_tap_hand_case() {
        let sig = SignalPair::new(vec![0.0], vec![1.0, 2.0], vec![1.0, 2.0], 2).unwrap();
        let stats = build_stats(&sig).unwrap();
        assert_eq!(stats.r_x().entries(), &[2.5, 1.0, 1.0, 0.5]);
        assert_eq!(stats.r_xd(), &[2.5, 1.0]);
        assert_eq!(stats.d_energy(), 5.0);
        assert_eq!(stats.n(), 2);
        assert_eq!(stats.l(), 2);
        assert_eq!(stats.origin(), StatsOrigin::SampleAverage);
    }

    #[test]
    fn zero_desired_signal() {
        let sig = zero_prehistory(vec![1.0, -2.0, 3.0], vec![0.0; 3], 2).unwrap();
        let stats = build_stats(&sig).unwrap();
        assert_eq!(stats.r_xd(), &[0.0, 0.0]);
        assert_eq!(stats.d_energy(), 0.0);
    }

    #[test]
    fn constant_signal_single_tap() {
        let c = 1.75;
        let sig = zero_prehistory(vec![c; 6], vec![c; 6], 1).unwrap();
        let stats = build_stats(&sig).unwrap();
        assert_relative_eq!(stats.r_x().get(0, 0), c * c, epsilon = 1e-15);
    }

    #[test]
    fn zero_prehistory_pads() {
        let sig = zero_prehistory(vec![1.0], vec![1.0], 3).unwrap();
        assert_eq!(sig.x_pre(), &[0.0, 0.0]);
        let sig = zero_prehistory(vec![1.0], vec![1.0], 1).unwrap();
        assert!(sig.x_pre().is_empty());
    }

    #[test]
    fn mismatched_lengths_rejected() {
        match zero_prehistory(vec![1.0, 2.0], vec![1.0], 2) {
            Err(Error::LengthMismatch { .. }) => {}
            other => panic!("expected length mismatch, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_samples_rejected() {
        match zero_prehistory(vec![1.0, f64::INFINITY], vec![0.0, 0.0], 1) {
            Err(Error::NonFinite { .. }) => {}
            other => panic!("expected non-finite error, got {other:?}"),
        }
    }

    #[test]
    fn matches_explicit_data_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 9;
        let l = 4;
        let x_pre: Vec<f64> = (0..l - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let d: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sig = SignalPair::new(x_pre, x, d, l).unwrap();
        let stats = build_stats(&sig).unwrap();

        // Column t of the data matrix is the window at time t.
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|t| (0..l).map(|k| sig.window_sample(t, k)).collect())
            .collect();
        for i in 0..l {
            for j in 0..l {
                let direct: f64 =
                    (0..n).map(|t| cols[t][i] * cols[t][j]).sum::<f64>() / n as f64;
                assert_relative_eq!(stats.r_x().get(i, j), direct, epsilon = 1e-12);
            }
        }
        for (k, rk) in stats.r_xd().iter().enumerate() {
            let direct: f64 = (0..n).map(|t| cols[t][k] * sig.d()[t]).sum::<f64>() / n as f64;
            assert_relative_eq!(*rk, direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn covariance_is_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x: Vec<f64> = (0..64).map(|_| rng.random_range(-2.0..2.0)).collect();
        let d: Vec<f64> = (0..64).map(|_| rng.random_range(-2.0..2.0)).collect();
        let stats = build_stats(&zero_prehistory(x, d, 6).unwrap()).unwrap();
        for _ in 0..20 {
            let v: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
            assert!(stats.r_x().quadratic_form(&v) >= -1e-12);
        }
    }

    #[test]
    fn deterministic_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let x: Vec<f64> = (0..50).map(|_| rng.random_range(-1.0..1.0)).collect();
        let d: Vec<f64> = (0..50).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sig = zero_prehistory(x, d, 5).unwrap();
        let a = build_stats(&sig).unwrap();
        let b = build_stats(&sig).unwrap();
        assert_eq!(a.r_x().entries(), b.r_x().entries());
        assert_eq!(a.r_xd(), b.r_xd());
        assert_eq!(a.d_energy().to_bits(), b.d_energy().to_bits());
    }

    #[test]
    fn prehistory_indexing_is_chronological() {
        // x(-2) = 10, x(-1) = 20; window at t=0 with L=3 is [x(0), x(-1), x(-2)].
        let sig = SignalPair::new(vec![10.0, 20.0], vec![1.0, 2.0], vec![0.0, 0.0], 3).unwrap();
        assert_eq!(sig.window_sample(0, 0), 1.0);
        assert_eq!(sig.window_sample(0, 1), 20.0);
        assert_eq!(sig.window_sample(0, 2), 10.0);
        assert_eq!(sig.window_sample(1, 2), 20.0);
    }
}
