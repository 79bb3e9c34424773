//! Degree-by-degree construction of a Lindbladian whose Ehrenfest drift equals a
//! polynomial vector field `α' = h(α, α*)`.
//!
//! Each homogeneous degree `n` is split into an antiholomorphic term, paired terms
//! `(μ_{n,k}, ν_{n,k})`, and for odd `n` a diagonal term `ε_n`. Every piece has a closed-form
//! fragment whose drift reproduces it up to a lower-degree byproduct; the negated byproducts
//! are fed back until nothing is left.

mod byproduct;
mod steps;
mod table;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

pub use steps::{
    quantize_antiholomorphic, quantize_diagonal_odd, quantize_pair_even, quantize_pair_odd,
    theta, CascadeCoefficients, QuantizationStep,
};
pub use table::table_quantize_deg3;

use crate::algebra::{ehrenfest_drift, normal_order_classical, Lindbladian, Monomial, NormalOrderedPolynomial};
use crate::classical::ComplexSystem;
use crate::error::{Error, Result};

/// Largest `k` index at degree `n`: `n/2 − 1` for even `n`, `(n − 1)/2` for odd `n`.
/// Negative for `n = 0`, where only the constant term exists.
pub fn k_max(n: u32) -> i64 {
    if n % 2 == 0 {
        i64::from(n / 2) - 1
    } else {
        i64::from((n - 1) / 2)
    }
}

/// Coefficients of one homogeneous degree.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DegreeParts {
    pub n: u32,
    /// Coefficient of `α*^n`.
    pub lambda: Complex64,
    /// `(μ_{n,k}, ν_{n,k})` for `k = 0 ..` (up to `K` for even `n`, below `K` for odd `n`).
    pub pairs: Vec<(Complex64, Complex64)>,
    /// Coefficient of `α*^K α^{K+1}`; odd `n` only.
    pub epsilon: Option<Complex64>,
}

impl DegreeParts {
    fn split(h: &ComplexSystem, n: u32) -> Self {
        let coeff = |j: u32| h.coeff(j, n - j);
        let big_k = k_max(n);
        let pair_count = if n % 2 == 0 { big_k + 1 } else { big_k }.max(0) as u32;
        Self {
            n,
            lambda: coeff(n),
            pairs: (0..pair_count).map(|k| (coeff(k), coeff(n - k - 1))).collect(),
            epsilon: (n % 2 == 1).then(|| coeff(big_k as u32)),
        }
    }

    fn reassemble(&self) -> ComplexSystem {
        let n = self.n;
        let mut terms = vec![(Monomial::new(n, 0), self.lambda)];
        for (k, (mu, nu)) in self.pairs.iter().enumerate() {
            let k = k as u32;
            terms.push((Monomial::new(k, n - k), *mu));
            terms.push((Monomial::new(n - k - 1, k + 1), *nu));
        }
        if let Some(eps) = self.epsilon {
            let big_k = (n - 1) / 2;
            terms.push((Monomial::new(big_k, big_k + 1), eps));
        }
        ComplexSystem::from_terms(terms)
    }
}

/// `h` regrouped by degree; reassembly is exact.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct HomogeneousDecomposition {
    pub degrees: BTreeMap<u32, DegreeParts>,
}

impl HomogeneousDecomposition {
    pub fn reassemble(&self) -> ComplexSystem {
        self.degrees
            .values()
            .fold(ComplexSystem::zero(), |acc, p| acc.add(&p.reassemble()))
    }
}

pub fn decompose(h: &ComplexSystem) -> HomogeneousDecomposition {
    let degrees = (0..=h.degree())
        .map(|n| n as u32)
        .filter(|n| h.terms().any(|(m, _)| m.degree() == *n))
        .map(|n| (n, DegreeParts::split(h, n)))
        .collect();
    HomogeneousDecomposition { degrees }
}

/// Every fragment emitted while quantizing one degree.
fn quantize_degree(parts: &DegreeParts) -> (Lindbladian, Vec<QuantizationStep>) {
    let n = parts.n;
    let mut out = Lindbladian::from_hamiltonian(quantize_antiholomorphic(parts.lambda, n));
    let mut steps = Vec::new();
    for (k, (mu, nu)) in parts.pairs.iter().enumerate() {
        let k = k as u32;
        let step = if n % 2 == 0 {
            quantize_pair_even(n, k, *mu, *nu)
        } else {
            quantize_pair_odd(n, k, *mu, *nu)
        };
        steps.push(step);
    }
    if let Some(eps) = parts.epsilon {
        steps.push(quantize_diagonal_odd(n, eps));
    }
    for s in &steps {
        assert!(
            s.byproduct.degree() < n as i32,
            "byproduct of step ({n}, {}) has degree {}",
            s.k,
            s.byproduct.degree()
        );
        out.merge(&s.fragment);
    }
    (out, steps)
}

/// Full record of a cascade run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CascadeTrace {
    pub lindbladian: Lindbladian,
    pub steps: Vec<QuantizationStep>,
    /// Residual workload at the start of each degree, highest first.
    pub workloads: Vec<ComplexSystem>,
}

fn check_finite(h: &ComplexSystem) -> Result<()> {
    match h.terms().find(|(_, c)| !(c.re.is_finite() && c.im.is_finite())) {
        Some((m, _)) => Err(Error::InvalidArgument(format!(
            "non-finite coefficient at conj power {}, power {}",
            m.dag, m.ann
        ))),
        None => Ok(()),
    }
}

/// Runs the cascade and keeps every intermediate step.
pub fn cascade_trace(h: &ComplexSystem) -> Result<CascadeTrace> {
    check_finite(h)?;
    let mut trace = CascadeTrace::default();
    let mut work = h.clone();
    while !work.is_zero() {
        let n = work.degree() as u32;
        let top = ComplexSystem::from_terms(work.terms().filter(|(m, _)| m.degree() == n));
        let rest = ComplexSystem::from_terms(work.terms().filter(|(m, _)| m.degree() < n));
        trace.workloads.push(work.clone());

        let (fragment, steps) = quantize_degree(&DegreeParts::split(&top, n));
        trace.lindbladian.merge(&fragment);
        let spill = steps
            .iter()
            .fold(ComplexSystem::zero(), |acc, s| acc.add(&s.byproduct));
        trace.steps.extend(steps);
        work = rest.add(&spill.scaled(Complex64::new(-1.0, 0.0)));
    }
    trace.lindbladian = trace.lindbladian.canonicalize();
    Ok(trace)
}

/// Lindbladian whose Ehrenfest drift is exactly `h` (to rounding).
pub fn cascade_quantize(h: &ComplexSystem) -> Result<Lindbladian> {
    Ok(cascade_trace(h)?.lindbladian)
}

/// `drift(L) − h`, as a normally ordered polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EhrenfestResidual {
    pub residual: NormalOrderedPolynomial,
    pub max_abs: f64,
}

impl EhrenfestResidual {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_abs <= tol
    }
}

pub fn verify_ehrenfest(l: &Lindbladian, h: &ComplexSystem) -> Result<EhrenfestResidual> {
    let residual = &ehrenfest_drift(l)? - &normal_order_classical(h);
    let max_abs = residual.max_abs_coefficient();
    Ok(EhrenfestResidual { residual, max_abs })
}
