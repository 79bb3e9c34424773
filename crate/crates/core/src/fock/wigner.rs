//! Wigner function with `x = √2 Re α`, `y = √2 Im α`, so that `[x̂, ŷ] = i`.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DensityMatrix;

/// Uniform rectangular grid, endpoints included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub ny: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::square(6.0, 201)
    }
}

impl GridSpec {
    /// `[−half, half]²` with `points` samples per axis.
    pub fn square(half: f64, points: usize) -> Self {
        Self {
            x_min: -half,
            x_max: half,
            nx: points,
            y_min: -half,
            y_max: half,
            ny: points,
        }
    }

    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![0.5 * (lo + hi)],
            _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        Self::axis(self.x_min, self.x_max, self.nx)
    }

    pub fn ys(&self) -> Vec<f64> {
        Self::axis(self.y_min, self.y_max, self.ny)
    }
}

/// `W` sampled on a grid, stored row-major with `y` as the row index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub w: Vec<f64>,
}

impl WignerGrid {
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.w[iy * self.xs.len() + ix]
    }

    fn step(v: &[f64]) -> f64 {
        if v.len() > 1 {
            v[1] - v[0]
        } else {
            1.0
        }
    }

    /// Riemann sum `Σ W Δx Δy`.
    pub fn integral(&self) -> f64 {
        self.w.iter().sum::<f64>() * Self::step(&self.xs) * Self::step(&self.ys)
    }

    pub fn max(&self) -> f64 {
        self.w.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.w.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Copy scaled so that `max |W| = 1`.
    pub fn scaled_unit(&self) -> Self {
        let m = self.w.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
        let s = if m > 0.0 { 1.0 / m } else { 1.0 };
        Self {
            w: self.w.iter().map(|v| v * s).collect(),
            ..self.clone()
        }
    }

    /// Interior grid points strictly larger than their 8 neighbours, as `(x, y, W)`.
    pub fn local_maxima(&self) -> Vec<(f64, f64, f64)> {
        let (nx, ny) = (self.xs.len(), self.ys.len());
        let mut out = Vec::new();
        for iy in 1..ny.saturating_sub(1) {
            for ix in 1..nx.saturating_sub(1) {
                let v = self.at(ix, iy);
                let is_max = (-1i64..=1).all(|dy| {
                    (-1i64..=1).all(|dx| {
                        (dx == 0 && dy == 0)
                            || v > self.at((ix as i64 + dx) as usize, (iy as i64 + dy) as usize)
                    })
                });
                if is_max {
                    out.push((self.xs[ix], self.ys[iy], v));
                }
            }
        }
        out
    }

    /// CSV with header `x,y,w`, `y` outer and `x` inner.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y,w\n");
        for (iy, y) in self.ys.iter().enumerate() {
            for (ix, x) in self.xs.iter().enumerate() {
                let _ = writeln!(s, "{x},{y},{}", self.at(ix, iy));
            }
        }
        s
    }
}

/// Fock-basis kernel at one phase-space point, via the Laguerre recursion over
/// `W_{mn} ∝ (2A)^{n−m} L_m^{n−m}(4|A|²) e^{−2|A|²}` with `A = (x + iy)/√2`.
fn wigner_point(rho: &DensityMatrix, x: f64, y: f64) -> f64 {
    let n = rho.dim();
    let a = Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2;
    let a2 = 2.0 * a;
    let mut list = vec![Complex64::new(0.0, 0.0); n];
    list[0] = Complex64::new((-2.0 * a.norm_sqr()).exp() / std::f64::consts::PI, 0.0);
    let mut w = rho.get(0, 0).re * list[0].re;
    for k in 1..n {
        list[k] = a2 * list[k - 1] / (k as f64).sqrt();
        w += 2.0 * (rho.get(0, k) * list[k]).re;
    }
    for m in 1..n {
        let sm = (m as f64).sqrt();
        let mut temp = list[m];
        list[m] = (a2.conj() * temp - sm * list[m - 1]) / sm;
        w += (rho.get(m, m) * list[m]).re;
        for k in m + 1..n {
            let next = (a2 * list[k - 1] - sm * temp) / (k as f64).sqrt();
            temp = list[k];
            list[k] = next;
            w += 2.0 * (rho.get(m, k) * list[k]).re;
        }
    }
    w
}

pub fn wigner(rho: &DensityMatrix, grid: &GridSpec) -> WignerGrid {
    let xs = grid.xs();
    let ys = grid.ys();
    let w = ys
        .par_iter()
        .flat_map_iter(|y| xs.iter().map(|x| wigner_point(rho, *x, *y)).collect::<Vec<_>>())
        .collect();
    WignerGrid { xs, ys, w }
}

/// Grid argmax; ties go to the lowest `(row, column)` index.
pub fn wigner_mode(grid: &WignerGrid) -> (f64, f64) {
    let mut best = 0;
    for (i, v) in grid.w.iter().enumerate() {
        if *v > grid.w[best] {
            best = i;
        }
    }
    let nx = grid.xs.len();
    (grid.xs[best % nx], grid.ys[best / nx])
}

/// Harmonic-oscillator eigenfunctions `ψ_0 … ψ_{n−1}` at `x`.
fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    out[0] = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    if n > 1 {
        out[1] = std::f64::consts::SQRT_2 * x * out[0];
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        out[k + 1] = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
    }
    out
}

/// `W(x,y) = (1/2π) ∫ ds ⟨x + s/2|ρ|x − s/2⟩ e^{−isy}` by composite Simpson quadrature.
/// Slow; intended as an independent check of [`wigner`] at small dimension.
pub fn wigner_integral(rho: &DensityMatrix, x: f64, y: f64) -> f64 {
    let n = rho.dim();
    let reach = (2.0 * n as f64 + 1.0).sqrt() + 8.0;
    let half = 2.0 * (reach + x.abs());
    let steps = 8000;
    let h = 2.0 * half / steps as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..=steps {
        let s = -half + h * i as f64;
        let weight = if i == 0 || i == steps {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let left = hermite_functions(n, x + s / 2.0);
        let right = hermite_functions(n, x - s / 2.0);
        let mut kernel = Complex64::new(0.0, 0.0);
        for (m, lm) in left.iter().enumerate() {
            for (k, rk) in right.iter().enumerate() {
                kernel += rho.get(m, k) * (lm * rk);
            }
        }
        acc += weight * kernel * Complex64::from_polar(1.0, -s * y);
    }
    (acc * h / 3.0).re / (2.0 * std::f64::consts::PI)
}
