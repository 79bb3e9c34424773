use num_complex::Complex64;

use super::{expectation, steady_state_with, DensityMatrix, SteadyStateOptions};
use crate::algebra::{Lindbladian, NormalOrderedPolynomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TruncationOptions {
    pub start: usize,
    /// Largest dimension tried; not converging by then is reported as divergence.
    pub ceiling: usize,
    /// Convergence threshold on `|Δ⟨O⟩| / max(1, |⟨O⟩|)` across one doubling.
    pub tol: f64,
    pub steady: SteadyStateOptions,
}

impl Default for TruncationOptions {
    fn default() -> Self {
        Self {
            start: 5,
            ceiling: 64,
            tol: 1e-6,
            steady: SteadyStateOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TruncationReport {
    pub n: usize,
    pub steady_state: DensityMatrix,
    /// `(N, observable values)` for each dimension tried.
    pub history: Vec<(usize, Vec<Complex64>)>,
}

fn change(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm() / y.norm().max(1.0))
        .fold(0.0, f64::max)
}

/// Doubles `N` from `opts.start` until every observable's steady-state value is stable, and
/// returns the smaller dimension of the first agreeing pair.
/// An empty observable list means `â†â`.
pub fn auto_truncate(
    l: &Lindbladian,
    observables: &[NormalOrderedPolynomial],
    opts: &TruncationOptions,
) -> Result<TruncationReport> {
    if opts.start < 4 {
        return Err(Error::InvalidArgument(format!("start dimension {} must be >= 4", opts.start)));
    }
    let default_obs = [NormalOrderedPolynomial::monomial(1, 1, Complex64::new(1.0, 0.0))];
    let obs = if observables.is_empty() { &default_obs[..] } else { observables };
    let measure = |rho: &DensityMatrix| obs.iter().map(|o| expectation(rho, o)).collect::<Vec<_>>();

    let mut n = opts.start;
    let mut rho = steady_state_with(l, n, &opts.steady)?;
    let mut history = vec![(n, measure(&rho))];
    let mut last_change = f64::INFINITY;
    while 2 * n <= opts.ceiling {
        let next = steady_state_with(l, 2 * n, &opts.steady)?;
        let vals = measure(&next);
        last_change = change(&vals, &history.last().unwrap().1);
        history.push((2 * n, vals));
        if last_change < opts.tol {
            // The smaller dimension already reproduces the larger one's observables.
            return Ok(TruncationReport {
                n,
                steady_state: rho,
                history,
            });
        }
        n *= 2;
        rho = next;
    }
    Err(Error::TruncationDivergence {
        ceiling: n,
        last_change,
    })
}
