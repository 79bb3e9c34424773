//! Adaptive Dormand–Prince 5(4) integration of `ρ' = Lρ` in matrix form.

use faer::complex_native::c64;
use faer::{Mat, MatRef};

use super::liouvillian::Generator;
use super::DensityMatrix;
use crate::algebra::Lindbladian;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; adapted afterwards.
    pub h0: f64,
    /// Steps shorter than this abort with [`Error::StepUnderflow`].
    pub h_min: f64,
    /// Output times in `[0, T]`; empty means 101 evenly spaced points.
    pub save_times: Vec<f64>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            h0: 1e-3,
            h_min: 1e-12,
            save_times: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

/// `L ρ` for a Lindbladian truncated at `ρ`'s dimension.
pub fn lindblad_rhs(l: &Lindbladian, rho: &DensityMatrix) -> Mat<c64> {
    Generator::new(l, rho.dim()).apply(rho.as_mat().as_ref())
}

// Dormand–Prince tableau; the generator is autonomous so the nodes are not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn axpy(y: &mut Mat<c64>, a: f64, x: MatRef<'_, c64>) {
    let s = c64::new(a, 0.0);
    for j in 0..y.ncols() {
        for i in 0..y.nrows() {
            let v = y.read(i, j) + s * x.read(i, j);
            y.write(i, j, v);
        }
    }
}

/// One Dormand–Prince step; returns the 5th-order solution and the scaled error norm.
fn dp_step(g: &Generator, y: &Mat<c64>, h: f64, rtol: f64, atol: f64) -> (Mat<c64>, f64) {
    let mut k: Vec<Mat<c64>> = Vec::with_capacity(7);
    for s in 0..7 {
        let mut stage = y.clone();
        for (j, kj) in k.iter().enumerate() {
            if A[s][j] != 0.0 {
                axpy(&mut stage, h * A[s][j], kj.as_ref());
            }
        }
        k.push(g.apply(stage.as_ref()));
    }
    let mut y5 = y.clone();
    let mut e = Mat::<c64>::zeros(y.nrows(), y.ncols());
    for s in 0..7 {
        if B5[s] != 0.0 {
            axpy(&mut y5, h * B5[s], k[s].as_ref());
        }
        axpy(&mut e, h * (B5[s] - B4[s]), k[s].as_ref());
    }
    let mut err = 0.0_f64;
    for j in 0..y.ncols() {
        for i in 0..y.nrows() {
            let sc = atol + rtol * y.read(i, j).abs().max(y5.read(i, j).abs());
            err = err.max(e.read(i, j).abs() / sc);
        }
    }
    (y5, err)
}

/// Integrates from `t = 0` to `t_final`, recording the state at each save time.
pub fn evolve(l: &Lindbladian, rho0: &DensityMatrix, t_final: f64, opts: &EvolveOptions) -> Result<Trajectory> {
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!("final time {t_final} must be finite and >= 0")));
    }
    let g = Generator::new(l, rho0.dim());
    let mut save: Vec<f64> = if opts.save_times.is_empty() {
        (0..=100).map(|i| t_final * i as f64 / 100.0).collect()
    } else {
        opts.save_times.clone()
    };
    save.retain(|t| *t >= 0.0 && *t <= t_final);
    save.sort_by(f64::total_cmp);
    save.dedup();

    let mut traj = Trajectory {
        times: Vec::with_capacity(save.len()),
        states: Vec::with_capacity(save.len()),
    };
    let mut y = rho0.as_mat().clone();
    let mut t = 0.0;
    let mut h = opts.h0.min(t_final.max(opts.h_min));
    for &target in &save {
        while t < target {
            let span = target - t;
            let last = h >= span;
            let step = if last { span } else { h };
            let (y_new, err) = dp_step(&g, &y, step, opts.rtol, opts.atol);
            if !err.is_finite() {
                return Err(Error::Unstable {
                    step: traj.times.len(),
                    reason: format!("non-finite error estimate at t = {t}"),
                });
            }
            if err <= 1.0 {
                y = y_new;
                t = if last { target } else { t + step };
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 && last {
                // Keep the pre-clip step so short save intervals do not throttle the integrator.
                h = h.max(step * factor);
            } else {
                h = step * factor;
            }
            if h < opts.h_min && t < target {
                return Err(Error::StepUnderflow { t });
            }
        }
        traj.times.push(target);
        traj.states.push(DensityMatrix::from_mat(y.clone()));
    }
    Ok(traj)
}
