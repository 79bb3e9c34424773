//! White-noise-driven dynamics `dρ = L₀ρ dt + i(κ/√2)[â+â†, ρ] ∘ dW`.
//!
//! Trajectories are integrated in the Stratonovich sense with stochastic Heun. Wiener
//! increments come from a ChaCha stream keyed by `(seed, trajectory)` and positioned by step
//! index, so a run is reproducible independently of scheduling or of how many steps other
//! trajectories took.

mod moments;
mod scan;
mod spikes;

use faer::complex_native::c64;
use faer::{Mat, MatRef};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Lindbladian, NormalOrderedPolynomial};
use crate::error::{Error, Result};
use crate::fock::{from_c64, matrix_of, DensityMatrix, Generator};

pub use moments::{noise_moment_check, MomentReport};
pub use scan::{
    biased_initial_state, coherence_scan, mode_trajectory, scan_csv, ModeTrajectory, ScanConfig, ScanRow, SignalAxis,
};
pub use spikes::{detect_spikes, spike_train_stats, DetectorConfig, SpikeStatistics};

/// `L₀` plus the commutator noise channel of strength `κ`.
#[derive(Clone, Debug)]
pub struct NoisyGenerator {
    pub base: Lindbladian,
    pub kappa: f64,
}

impl NoisyGenerator {
    pub fn new(base: Lindbladian, kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidArgument(format!("noise strength {kappa} must be finite and >= 0")));
        }
        Ok(Self { base, kappa })
    }
}

/// `â + â†`, the operator the noise couples to.
pub fn noise_operator() -> NormalOrderedPolynomial {
    NormalOrderedPolynomial::a() + NormalOrderedPolynomial::adag()
}

/// Deterministic Itô drift `L₀ + (κ²/2)D[â+â†]`, which also generates the noise-averaged state.
pub fn ito_form(g: &NoisyGenerator) -> Lindbladian {
    if g.kappa == 0.0 {
        return g.base.clone();
    }
    g.base.clone().with_dissipator(0.5 * g.kappa * g.kappa, noise_operator())
}

/// Integration settings for one trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub dt: f64,
    pub seed: u64,
    /// Independent random stream; ensembles use the trajectory index.
    pub stream: u64,
    /// Record every `save_every` steps (the initial state is always recorded).
    pub save_every: usize,
    /// Largest tolerated change of `Tr ρ` or of the Hermiticity error in one step.
    pub step_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            seed: 0,
            stream: 0,
            save_every: 1,
            step_tol: 1e-8,
        }
    }
}

impl RunConfig {
    fn check(&self, t_final: f64) -> Result<usize> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt = {} must be finite and > 0", self.dt)));
        }
        if !(t_final >= 0.0 && t_final.is_finite()) {
            return Err(Error::InvalidArgument(format!("final time {t_final} must be finite and >= 0")));
        }
        if self.save_every == 0 {
            return Err(Error::InvalidArgument("save_every must be >= 1".into()));
        }
        Ok((t_final / self.dt).round() as usize)
    }
}

/// States at `t = k·dt` for every saved step `k`.
#[derive(Clone, Debug)]
pub struct StochasticTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

// Room for rejection sampling inside one step's slice of the stream.
const WORDS_PER_STEP: u128 = 16;

/// `ΔW` for a given step: a pure function of `(seed, stream, step)`.
pub fn wiener_increment(seed: u64, stream: u64, step: u64, dt: f64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(step as u128 * WORDS_PER_STEP);
    let z: f64 = rng.sample(StandardNormal);
    z * dt.sqrt()
}

struct Stepper {
    drift: Generator,
    x: Mat<c64>,
    coupling: c64,
}

impl Stepper {
    fn new(g: &NoisyGenerator, n: usize) -> Self {
        Self {
            drift: Generator::new(&g.base, n),
            x: matrix_of(&noise_operator(), n),
            coupling: c64::new(0.0, g.kappa * std::f64::consts::FRAC_1_SQRT_2),
        }
    }

    /// `i(κ/√2)[X, ρ]`.
    fn noise(&self, rho: MatRef<'_, c64>) -> Mat<c64> {
        (&self.x * rho - rho * &self.x) * faer::scale(self.coupling)
    }

    fn heun(&self, rho: &Mat<c64>, dt: f64, dw: f64) -> Mat<c64> {
        let a0 = self.drift.apply(rho.as_ref());
        let b0 = self.noise(rho.as_ref());
        let pred = rho + &a0 * faer::scale(c64::new(dt, 0.0)) + &b0 * faer::scale(c64::new(dw, 0.0));
        let a1 = self.drift.apply(pred.as_ref());
        let b1 = self.noise(pred.as_ref());
        rho + (a0 + a1) * faer::scale(c64::new(0.5 * dt, 0.0)) + (b0 + b1) * faer::scale(c64::new(0.5 * dw, 0.0))
    }
}

fn trace(m: &Mat<c64>) -> Complex64 {
    (0..m.nrows()).map(|i| from_c64(m.read(i, i))).sum()
}

fn hermiticity_error(m: &Mat<c64>) -> f64 {
    let mut e = 0.0_f64;
    for j in 0..m.ncols() {
        for i in 0..=j {
            e = e.max((m.read(i, j) - m.read(j, i).conj()).abs());
        }
    }
    e
}

/// Drives the Heun loop and hands each saved `(step, t, ρ)` to `visit`.
fn integrate<F>(g: &NoisyGenerator, rho0: &DensityMatrix, t_final: f64, cfg: &RunConfig, mut visit: F) -> Result<()>
where
    F: FnMut(usize, f64, &Mat<c64>) -> Result<()>,
{
    let steps = cfg.check(t_final)?;
    let stepper = Stepper::new(g, rho0.dim());
    let mut rho = rho0.as_mat().clone();
    let mut tr = trace(&rho);
    let mut herm = hermiticity_error(&rho);
    visit(0, 0.0, &rho)?;
    for k in 0..steps {
        let dw = if g.kappa == 0.0 {
            0.0
        } else {
            wiener_increment(cfg.seed, cfg.stream, k as u64, cfg.dt)
        };
        let next = stepper.heun(&rho, cfg.dt, dw);
        let next_tr = trace(&next);
        let next_herm = hermiticity_error(&next);
        let dtr = (next_tr - tr).norm();
        if !(dtr <= cfg.step_tol) || !(next_herm - herm <= cfg.step_tol) {
            return Err(Error::Unstable {
                step: k + 1,
                reason: format!(
                    "trace change {dtr:.3e}, Hermiticity error {next_herm:.3e} (tolerance {:.1e}, dW = {dw:.3e})",
                    cfg.step_tol
                ),
            });
        }
        rho = next;
        tr = next_tr;
        herm = next_herm;
        if (k + 1) % cfg.save_every == 0 {
            visit(k + 1, (k + 1) as f64 * cfg.dt, &rho)?;
        }
    }
    Ok(())
}

/// Integrates one realization for `round(t_final/dt)` steps of size `dt`.
pub fn stratonovich_run(
    g: &NoisyGenerator,
    rho0: &DensityMatrix,
    t_final: f64,
    cfg: &RunConfig,
) -> Result<StochasticTrajectory> {
    let mut out = StochasticTrajectory {
        times: Vec::new(),
        states: Vec::new(),
    };
    integrate(g, rho0, t_final, cfg, |_, t, rho| {
        out.times.push(t);
        out.states.push(DensityMatrix::from_mat(rho.clone()));
        Ok(())
    })?;
    Ok(out)
}

/// Ensemble mean of `⟨O⟩` and its standard error at each saved time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    /// `s/√M` with the unbiased sample standard deviation `s`.
    pub sem: Vec<f64>,
    pub trajectories: usize,
}

/// Runs trajectories `0..m` (stream = index) in parallel and reduces `Re⟨O⟩` in index order.
pub fn ensemble_expectation(
    g: &NoisyGenerator,
    rho0: &DensityMatrix,
    t_final: f64,
    cfg: &RunConfig,
    m: usize,
    observable: &NormalOrderedPolynomial,
) -> Result<EnsembleStats> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("ensemble needs at least 2 trajectories, got {m}")));
    }
    let op = matrix_of(observable, rho0.dim());
    let runs: Vec<Result<(Vec<f64>, Vec<f64>)>> = (0..m as u64)
        .into_par_iter()
        .map(|stream| {
            let cfg = RunConfig { stream, ..cfg.clone() };
            let mut times = Vec::new();
            let mut vals = Vec::new();
            integrate(g, rho0, t_final, &cfg, |_, t, rho| {
                times.push(t);
                vals.push(trace(&(&op * rho)).re);
                Ok(())
            })?;
            Ok((times, vals))
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

    let times = runs[0].0.clone();
    let mf = m as f64;
    let mut mean = vec![0.0; times.len()];
    for (_, vals) in &runs {
        for (acc, v) in mean.iter_mut().zip(vals) {
            *acc += v / mf;
        }
    }
    let mut var = vec![0.0; times.len()];
    for (_, vals) in &runs {
        for ((acc, v), mu) in var.iter_mut().zip(vals).zip(&mean) {
            *acc += (v - mu).powi(2) / (mf - 1.0);
        }
    }
    let sem = var.iter().map(|v| (v / mf).sqrt()).collect();
    Ok(EnsembleStats {
        times,
        mean,
        sem,
        trajectories: m,
    })
}

#[cfg(test)]
mod tests;
