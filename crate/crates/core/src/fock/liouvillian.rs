use faer::complex_native::c64;
use faer::prelude::*;
use faer::Mat;

use super::{matrix_of, DensityMatrix};
use crate::algebra::Lindbladian;
use crate::error::{Error, Result};

/// Truncated generator in the form `ρ' = −i(H_eff ρ − ρ H_eff†) + Σ η L ρ L†`,
/// with `H_eff = H − (i/2) Σ η L†L`. `L†L` is the product of truncated matrices,
/// which keeps the truncated generator exactly trace preserving.
#[derive(Clone, Debug)]
pub(crate) struct Generator {
    pub h_eff: Mat<c64>,
    pub jumps: Vec<(f64, Mat<c64>)>,
}

impl Generator {
    pub fn new(l: &Lindbladian, n: usize) -> Self {
        let mut h_eff = matrix_of(&l.hamiltonian, n);
        let mut jumps = Vec::with_capacity(l.dissipators.len());
        for d in &l.dissipators {
            let op = matrix_of(&d.operator, n);
            let ldl = op.adjoint() * &op;
            h_eff -= ldl * faer::scale(c64::new(0.0, 0.5 * d.rate));
            jumps.push((d.rate, op));
        }
        Self { h_eff, jumps }
    }

    /// `L ρ` in matrix form.
    pub fn apply(&self, rho: MatRef<'_, c64>) -> Mat<c64> {
        let mi = c64::new(0.0, -1.0);
        let hr = &self.h_eff * rho;
        let rh = rho * self.h_eff.adjoint();
        let mut out = (hr - rh) * faer::scale(mi);
        for (rate, op) in &self.jumps {
            out += (op * rho * op.adjoint()) * faer::scale(c64::new(*rate, 0.0));
        }
        out
    }
}

/// Nonzero entries of a matrix as `(row, col, value)`.
fn nonzeros(m: &Mat<c64>) -> Vec<(usize, usize, c64)> {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m.read(i, j);
            if v.re != 0.0 || v.im != 0.0 {
                out.push((i, j, v));
            }
        }
    }
    out
}

/// `N²×N²` matrix acting on the column-stacked `vec(ρ)`, where `ρ_{mn}` sits at `m + N n`.
pub fn liouvillian(l: &Lindbladian, n: usize) -> Mat<c64> {
    assert!(n >= 2, "Liouvillian needs N >= 2");
    let g = Generator::new(l, n);
    let dim = n * n;
    let mut out = Mat::<c64>::zeros(dim, dim);
    let i = c64::new(0.0, 1.0);
    // −i (I ⊗ H_eff) + i (conj(H_eff) ⊗ I): vec(ρ H_eff†) = (conj(H_eff) ⊗ I) vec(ρ).
    for (r, c, v) in nonzeros(&g.h_eff) {
        for k in 0..n {
            let (row, col) = (r + n * k, c + n * k);
            out.write(row, col, out.read(row, col) - i * v);
            let (row, col) = (k + n * r, k + n * c);
            out.write(row, col, out.read(row, col) + i * v.conj());
        }
    }
    // η (conj(L) ⊗ L): entry (m + N n, p + N q) gets η L_mp conj(L_nq).
    for (rate, op) in &g.jumps {
        let nz = nonzeros(op);
        let eta = c64::new(*rate, 0.0);
        for &(m, p, a) in &nz {
            for &(nn, q, b) in &nz {
                let (row, col) = (m + n * nn, p + n * q);
                out.write(row, col, out.read(row, col) + eta * a * b.conj());
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SteadyStateOptions {
    /// Full singular-value nullspace check when `N ≤ svd_max_n`; above it, an inverse-iteration
    /// estimate of the smallest singular value of the bordered system is used instead.
    pub svd_max_n: usize,
    /// Relative threshold for a singular value to count as zero.
    pub null_tol: f64,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        Self {
            svd_max_n: 24,
            null_tol: 1e-10,
        }
    }
}

pub fn steady_state(l: &Lindbladian, n: usize) -> Result<DensityMatrix> {
    steady_state_with(l, n, &SteadyStateOptions::default())
}

/// Unique solution of `Lρ = 0, Tr ρ = 1` by replacing the `ρ_00` row with the trace row.
pub fn steady_state_with(l: &Lindbladian, n: usize, opts: &SteadyStateOptions) -> Result<DensityMatrix> {
    let mut a = liouvillian(l, n);
    let dim = n * n;
    let scale = a.norm_max().max(f64::MIN_POSITIVE);

    if n <= opts.svd_max_n {
        let sv = a.singular_values();
        let zeros = sv.iter().filter(|s| **s <= opts.null_tol * sv[0]).count();
        if zeros != 1 {
            return Err(Error::DegenerateSteadyState(zeros));
        }
    }

    for c in 0..dim {
        a.write(0, c, c64::new(0.0, 0.0));
    }
    for k in 0..n {
        a.write(0, k + n * k, c64::new(1.0, 0.0));
    }
    let lu = a.partial_piv_lu();
    let mut rhs = Mat::<c64>::zeros(dim, 1);
    rhs.write(0, 0, c64::new(1.0, 0.0));
    let x = lu.solve(&rhs);
    if !x.as_ref().is_all_finite() {
        return Err(Error::DegenerateSteadyState(2));
    }

    if n > opts.svd_max_n {
        let sigma = smallest_singular_estimate(&lu, dim);
        if !(sigma > opts.null_tol * scale) {
            return Err(Error::DegenerateSteadyState(2));
        }
    }

    let rho = Mat::from_fn(n, n, |i, j| x.read(i + n * j, 0));
    Ok(DensityMatrix::from_mat(rho).normalized())
}

/// Upper estimate of `σ_min(A)` from a few inverse iterations on `AᴴA`.
fn smallest_singular_estimate(lu: &faer::solvers::PartialPivLu<c64>, dim: usize) -> f64 {
    // Deterministic, non-symmetric start vector.
    let mut v = Mat::from_fn(dim, 1, |i, _| c64::new(1.0 + (i % 7) as f64 * 0.1, (i % 3) as f64 * 0.05));
    let mut est = f64::INFINITY;
    for _ in 0..4 {
        let norm = v.norm_l2();
        v = v * faer::scale(c64::new(1.0 / norm, 0.0));
        let w = lu.solve_conj_transpose(lu.solve(&v));
        let g = w.norm_l2();
        if !g.is_finite() || g == 0.0 {
            return 0.0;
        }
        est = 1.0 / g.sqrt();
        v = w;
    }
    est
}
