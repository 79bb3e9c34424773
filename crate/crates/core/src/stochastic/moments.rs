use serde::{Deserialize, Serialize};

use crate::algebra::Lindbladian;
use crate::error::Result;
use crate::fock::{evolve, expectation, momentum, position, DensityMatrix, EvolveOptions};

/// Quadrature moments under the noise-averaged channel `κ²D[x̂]` alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub kappa: f64,
    pub times: Vec<f64>,
    pub mean_x: Vec<f64>,
    pub mean_y: Vec<f64>,
    pub var_x: Vec<f64>,
    pub var_y: Vec<f64>,
    /// Least-squares slope of `Var(ŷ)` against `t`; the channel predicts `κ²`.
    pub var_y_slope: f64,
    /// Largest departure of `⟨x̂⟩` or `⟨ŷ⟩` from its initial value.
    pub mean_drift: f64,
    /// Largest departure of `Var(x̂)` from its initial value.
    pub var_x_drift: f64,
}

impl MomentReport {
    /// `|slope − κ²| / κ²`, or the absolute slope when `κ = 0`.
    pub fn slope_error(&self) -> f64 {
        let k2 = self.kappa * self.kappa;
        if k2 == 0.0 {
            self.var_y_slope.abs()
        } else {
            (self.var_y_slope - k2).abs() / k2
        }
    }
}

fn slope(t: &[f64], v: &[f64]) -> f64 {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let vm = v.iter().sum::<f64>() / n;
    let num: f64 = t.iter().zip(v).map(|(a, b)| (a - tm) * (b - vm)).sum();
    let den: f64 = t.iter().map(|a| (a - tm).powi(2)).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Evolves `ρ₀` under `κ²D[x̂]` to `t_final` and tabulates means and variances at 51 times.
pub fn noise_moment_check(kappa: f64, rho0: &DensityMatrix, t_final: f64) -> Result<MomentReport> {
    let l = Lindbladian::new().with_dissipator(kappa * kappa, position());
    let opts = EvolveOptions {
        rtol: 1e-11,
        atol: 1e-13,
        save_times: (0..=50).map(|i| t_final * i as f64 / 50.0).collect(),
        ..EvolveOptions::default()
    };
    let traj = evolve(&l, rho0, t_final, &opts)?;
    let (x, y) = (position(), momentum());
    let (x2, y2) = (x.product(&x), y.product(&y));
    let mut r = MomentReport {
        kappa,
        times: traj.times.clone(),
        mean_x: Vec::new(),
        mean_y: Vec::new(),
        var_x: Vec::new(),
        var_y: Vec::new(),
        var_y_slope: 0.0,
        mean_drift: 0.0,
        var_x_drift: 0.0,
    };
    for rho in &traj.states {
        let (mx, my) = (expectation(rho, &x).re, expectation(rho, &y).re);
        r.mean_x.push(mx);
        r.mean_y.push(my);
        r.var_x.push(expectation(rho, &x2).re - mx * mx);
        r.var_y.push(expectation(rho, &y2).re - my * my);
    }
    r.var_y_slope = slope(&r.times, &r.var_y);
    let drift = |v: &[f64]| v.iter().map(|a| (a - v[0]).abs()).fold(0.0, f64::max);
    r.mean_drift = drift(&r.mean_x).max(drift(&r.mean_y));
    r.var_x_drift = drift(&r.var_x);
    Ok(r)
}
