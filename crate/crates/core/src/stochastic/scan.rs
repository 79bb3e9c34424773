//! Wigner-mode tracking and noise-strength scans of spike regularity.

use std::fmt::Write as _;

use faer::complex_native::c64;
use faer::{Mat, Side};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spikes::{detect_spikes, DetectorConfig, SpikeStatistics};
use super::{integrate, NoisyGenerator, RunConfig};
use crate::algebra::{Lindbladian, NormalOrderedPolynomial};
use crate::error::{Error, Result};
use crate::fock::{
    expectation, matrix_of, momentum, position, steady_state, to_c64, wigner, wigner_mode, DensityMatrix,
    GridSpec,
};

/// Wigner-mode positions `(X★, Y★)` over time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeTrajectory {
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ModeTrajectory {
    /// CSV with header `t,x_star,y_star`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,x_star,y_star\n");
        for ((t, x), y) in self.times.iter().zip(&self.x).zip(&self.y) {
            let _ = writeln!(s, "{t},{x},{y}");
        }
        s
    }
}

/// Integrates one realization and records the grid mode of `W` every `cfg.save_every` steps.
pub fn mode_trajectory(
    g: &NoisyGenerator,
    rho0: &DensityMatrix,
    t_final: f64,
    cfg: &RunConfig,
    grid: &GridSpec,
) -> Result<ModeTrajectory> {
    let mut out = ModeTrajectory {
        times: Vec::new(),
        x: Vec::new(),
        y: Vec::new(),
    };
    integrate(g, rho0, t_final, cfg, |_, t, rho| {
        let (x, y) = wigner_mode(&wigner(&DensityMatrix::from_mat(rho.clone()), grid));
        out.times.push(t);
        out.x.push(x);
        out.y.push(y);
        Ok(())
    })?;
    Ok(out)
}

/// Truncated displacement `exp(βâ† − β*â)`, exponentiated through the Hermitian `i(βâ† − β*â)`.
fn displacement(n: usize, beta: Complex64) -> Mat<c64> {
    let gen = NormalOrderedPolynomial::adag() * beta - NormalOrderedPolynomial::a() * beta.conj();
    let k = matrix_of(&gen, n) * faer::scale(c64::new(0.0, 1.0));
    let evd = k.selfadjoint_eigendecomposition(Side::Lower);
    let (u, s) = (evd.u(), evd.s().column_vector());
    let phase = Mat::from_fn(n, n, |i, j| {
        if i == j {
            to_c64(Complex64::from_polar(1.0, -s.read(i).re))
        } else {
            c64::new(0.0, 0.0)
        }
    });
    u * phase * u.adjoint()
}

/// Steady state of `base` at dimension `n`, displaced by `magnitude` (phase-space units) from
/// its mean toward the Wigner peak furthest to the lower right.
pub fn biased_initial_state(base: &Lindbladian, n: usize, magnitude: f64) -> Result<DensityMatrix> {
    let rho = steady_state(base, n)?;
    if magnitude == 0.0 {
        return Ok(rho);
    }
    let w = wigner(&rho, &GridSpec::square(6.0, 121));
    let peak = w
        .local_maxima()
        .into_iter()
        .map(|(x, y, _)| (x, y))
        .max_by(|a, b| (a.0 - a.1).total_cmp(&(b.0 - b.1)))
        .unwrap_or_else(|| wigner_mode(&w));
    let centre = (expectation(&rho, &position()).re, expectation(&rho, &momentum()).re);
    let (dx, dy) = (peak.0 - centre.0, peak.1 - centre.1);
    let len = dx.hypot(dy);
    // A centred single peak gives no direction; fall back to the lower-right diagonal.
    let (ux, uy) = if len > 1e-9 {
        (dx / len, dy / len)
    } else {
        (std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2)
    };
    let beta = Complex64::new(ux, uy) * (magnitude * std::f64::consts::FRAC_1_SQRT_2);
    let d = displacement(n, beta);
    let out = &d * rho.as_mat() * d.adjoint();
    Ok(DensityMatrix::from_mat(out).normalized())
}

/// Which mode coordinate forms the spike signal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignalAxis {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub t_final: f64,
    /// `save_every` is the mode cadence.
    pub run: RunConfig,
    pub grid: GridSpec,
    pub detector: DetectorConfig,
    pub axis: SignalAxis,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            t_final: 200.0,
            run: RunConfig {
                save_every: 50,
                ..RunConfig::default()
            },
            grid: GridSpec::square(4.0, 81),
            detector: DetectorConfig::default(),
            axis: SignalAxis::Y,
        }
    }
}

/// One scan row; `stats` is absent when fewer than three spikes were found.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub kappa: f64,
    pub n_spikes: usize,
    pub stats: Option<SpikeStatistics>,
}

impl ScanRow {
    pub fn sigma_bar(&self) -> Option<f64> {
        self.stats.as_ref().map(|s| s.sigma_bar)
    }
}

/// Runs a mode trajectory per `κ` (in parallel, same seed) and measures spike regularity.
pub fn coherence_scan(base: &Lindbladian, kappas: &[f64], rho0: &DensityMatrix, cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    if kappas.is_empty() {
        return Err(Error::InvalidArgument("empty noise-strength list".into()));
    }
    kappas
        .par_iter()
        .map(|&kappa| {
            let g = NoisyGenerator::new(base.clone(), kappa)?;
            let modes = mode_trajectory(&g, rho0, cfg.t_final, &cfg.run, &cfg.grid)?;
            let signal = match cfg.axis {
                SignalAxis::X => &modes.x,
                SignalAxis::Y => &modes.y,
            };
            let spikes = detect_spikes(&modes.times, signal, &cfg.detector)?;
            let n_spikes = spikes.len();
            let stats = match SpikeStatistics::from_spike_times(spikes) {
                Ok(s) => Some(s),
                Err(Error::TooFewSpikes(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(ScanRow { kappa, n_spikes, stats })
        })
        .collect()
}

/// CSV with header `kappa,sigma_bar,inv_sigma_bar,n_spikes`; rows without statistics carry `NaN`.
pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut s = String::from("kappa,sigma_bar,inv_sigma_bar,n_spikes\n");
    for r in rows {
        let sb = r.sigma_bar().unwrap_or(f64::NAN);
        let _ = writeln!(s, "{},{},{},{}", r.kappa, sb, 1.0 / sb, r.n_spikes);
    }
    s
}

#[cfg(test)]
pub(super) fn displacement_for_tests(n: usize, beta: Complex64) -> Mat<c64> {
    displacement(n, beta)
}
