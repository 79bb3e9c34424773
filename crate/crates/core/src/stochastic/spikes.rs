//! Spike detection and interspike-interval statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Schmitt trigger: a spike is recorded when the signal rises above `high` while armed; the
/// trigger re-arms once the signal falls below `low`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    /// Explicit `(low, high)`; when absent they are calibrated from the signal.
    pub thresholds: Option<(f64, f64)>,
    /// Number of leading samples used for calibration; `None` uses the whole signal.
    pub calibration_len: Option<usize>,
    /// Calibrated thresholds sit at `mean ± hysteresis·(max − min)/2`.
    pub hysteresis: f64,
    /// Samples after a spike during which no new spike is accepted.
    pub refractory: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            thresholds: None,
            calibration_len: None,
            hysteresis: 0.5,
            refractory: 5,
        }
    }
}

impl DetectorConfig {
    /// `(low, high)` for `signal`.
    pub fn thresholds_for(&self, signal: &[f64]) -> Result<(f64, f64)> {
        if let Some((lo, hi)) = self.thresholds {
            if !(lo <= hi) {
                return Err(Error::InvalidArgument(format!("low threshold {lo} exceeds high threshold {hi}")));
            }
            return Ok((lo, hi));
        }
        let len = self.calibration_len.unwrap_or(signal.len()).min(signal.len());
        let window = &signal[..len];
        if window.is_empty() {
            return Err(Error::InvalidArgument("empty calibration window".into()));
        }
        let mean = window.iter().sum::<f64>() / window.len() as f64;
        let max = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = window.iter().copied().fold(f64::INFINITY, f64::min);
        let half = self.hysteresis * (max - min) / 2.0;
        Ok((mean - half, mean + half))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpikeStatistics {
    pub spike_times: Vec<f64>,
    pub intervals: Vec<f64>,
    /// Mean interval `ν`.
    pub mean: f64,
    /// Population standard deviation `σ` of the intervals.
    pub std_dev: f64,
    /// `σ̄ = σ/ν`: 0 for a periodic train, 1 for a Poisson train.
    pub sigma_bar: f64,
}

impl SpikeStatistics {
    /// Statistics of an increasing list of at least three spike times.
    pub fn from_spike_times(spike_times: Vec<f64>) -> Result<Self> {
        if spike_times.len() < 3 {
            return Err(Error::TooFewSpikes(spike_times.len()));
        }
        let intervals: Vec<f64> = spike_times.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(z) = intervals.iter().find(|z| !(**z > 0.0)) {
            return Err(Error::InvalidArgument(format!("spike times must increase strictly (interval {z})")));
        }
        let n = intervals.len() as f64;
        let mean = intervals.iter().sum::<f64>() / n;
        let var = intervals.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / n;
        let std_dev = var.sqrt();
        Ok(Self {
            spike_times,
            intervals,
            mean,
            std_dev,
            sigma_bar: std_dev / mean,
        })
    }
}

/// Spike times in `signal` sampled at `times`.
pub fn detect_spikes(times: &[f64], signal: &[f64], cfg: &DetectorConfig) -> Result<Vec<f64>> {
    if times.len() != signal.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            got: signal.len(),
        });
    }
    let (low, high) = cfg.thresholds_for(signal)?;
    let mut armed = true;
    let mut last: Option<usize> = None;
    let mut spikes = Vec::new();
    for (i, v) in signal.iter().enumerate() {
        if armed && *v > high && last.map_or(true, |l| i - l > cfg.refractory) {
            spikes.push(times[i]);
            last = Some(i);
            armed = false;
        } else if !armed && *v < low {
            armed = true;
        }
    }
    Ok(spikes)
}

/// Detects spikes in `signal` sampled at `times` and returns their interval statistics.
pub fn spike_train_stats(times: &[f64], signal: &[f64], cfg: &DetectorConfig) -> Result<SpikeStatistics> {
    SpikeStatistics::from_spike_times(detect_spikes(times, signal, cfg)?)
}
