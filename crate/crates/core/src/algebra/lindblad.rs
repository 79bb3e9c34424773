//! Lindbladian generators and their Ehrenfest drift.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::NormalOrderedPolynomial;
use crate::error::{Error, Result};

/// One weighted dissipator `rate · D[operator]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dissipator {
    pub rate: f64,
    pub operator: NormalOrderedPolynomial,
}

/// `−i[Ĥ,·] + Σ_s η_s D[L̂_s]` with `D[L]ρ = LρL† − ½{L†L, ρ}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Lindbladian {
    pub hamiltonian: NormalOrderedPolynomial,
    pub dissipators: Vec<Dissipator>,
}

/// Tolerance used for structural Hermiticity checks, relative to the largest coefficient.
const HERMITIAN_TOL: f64 = 1e-12;

/// Relative tolerance under which two Lindblad operators count as identical.
const SAME_OPERATOR_TOL: f64 = 1e-12;

impl Lindbladian {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_hamiltonian(h: NormalOrderedPolynomial) -> Self {
        Self {
            hamiltonian: h,
            dissipators: Vec::new(),
        }
    }

    /// Adds `rate · D[operator]`, skipping zero rates and zero operators.
    pub fn push_dissipator(&mut self, rate: f64, operator: NormalOrderedPolynomial) {
        if rate != 0.0 && !operator.is_zero() {
            self.dissipators.push(Dissipator { rate, operator });
        }
    }

    pub fn with_dissipator(mut self, rate: f64, operator: NormalOrderedPolynomial) -> Self {
        self.push_dissipator(rate, operator);
        self
    }

    /// Adds a Hamiltonian contribution.
    pub fn add_hamiltonian(&mut self, h: &NormalOrderedPolynomial) {
        self.hamiltonian += h;
    }

    /// Sum of generators (`L_A ⊕ L_B`).
    pub fn merge(&mut self, other: &Lindbladian) {
        self.hamiltonian += &other.hamiltonian;
        self.dissipators.extend(other.dissipators.iter().cloned());
    }

    pub fn is_empty(&self) -> bool {
        self.hamiltonian.is_zero() && self.dissipators.is_empty()
    }

    /// Largest operator degree among dissipators (−1 if there are none).
    pub fn max_operator_degree(&self) -> i32 {
        self.dissipators
            .iter()
            .map(|d| d.operator.degree())
            .max()
            .unwrap_or(-1)
    }

    /// Rejects negative or non-finite rates and non-Hermitian Hamiltonians.
    pub fn validate(&self) -> Result<()> {
        for (i, d) in self.dissipators.iter().enumerate() {
            if !d.rate.is_finite() || d.rate < 0.0 {
                return Err(Error::MalformedLindbladian(format!(
                    "dissipator {i} has rate {}",
                    d.rate
                )));
            }
        }
        let scale = self.hamiltonian.max_abs_coefficient().max(1.0);
        if !self.hamiltonian.is_hermitian(HERMITIAN_TOL * scale) {
            return Err(Error::MalformedLindbladian(
                "Hamiltonian is not Hermitian".into(),
            ));
        }
        Ok(())
    }

    /// Merges identical operators (summing rates), drops zero rates and sorts
    /// dissipators by operator degree and then by serialized coefficients.
    pub fn canonicalize(&self) -> Lindbladian {
        let mut merged: Vec<Dissipator> = Vec::new();
        for d in &self.dissipators {
            if d.rate == 0.0 || d.operator.is_zero() {
                continue;
            }
            let scale = d.operator.max_abs_coefficient().max(1.0);
            match merged
                .iter_mut()
                .find(|m| m.operator.distance(&d.operator) <= SAME_OPERATOR_TOL * scale)
            {
                Some(m) => m.rate += d.rate,
                None => merged.push(d.clone()),
            }
        }
        merged.retain(|d| d.rate != 0.0);
        merged.sort_by(|a, b| operator_order(&a.operator, &b.operator));
        Lindbladian {
            hamiltonian: self.hamiltonian.clone(),
            dissipators: merged,
        }
    }

    /// Term-for-term comparison after canonicalization.
    pub fn approx_eq(&self, other: &Lindbladian, tol: f64) -> bool {
        self.mismatch(other, tol).is_none()
    }

    /// Describes the first difference found after canonicalization, if any.
    pub fn mismatch(&self, other: &Lindbladian, tol: f64) -> Option<String> {
        let a = self.canonicalize();
        let b = other.canonicalize();
        let dh = a.hamiltonian.distance(&b.hamiltonian);
        if dh > tol {
            return Some(format!(
                "Hamiltonians differ by {dh:.3e}: {} vs {}",
                a.hamiltonian, b.hamiltonian
            ));
        }
        if a.dissipators.len() != b.dissipators.len() {
            return Some(format!(
                "dissipator counts differ: {} vs {}",
                a.dissipators.len(),
                b.dissipators.len()
            ));
        }
        for (da, db) in a.dissipators.iter().zip(&b.dissipators) {
            let dop = da.operator.distance(&db.operator);
            if dop > tol {
                return Some(format!(
                    "operators differ by {dop:.3e}: {} vs {}",
                    da.operator, db.operator
                ));
            }
            if (da.rate - db.rate).abs() > tol {
                return Some(format!(
                    "rates of {} differ: {} vs {}",
                    da.operator, da.rate, db.rate
                ));
            }
        }
        None
    }
}

fn operator_order(a: &NormalOrderedPolynomial, b: &NormalOrderedPolynomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        let ra = a.to_rows();
        let rb = b.to_rows();
        for (x, y) in ra.iter().zip(&rb) {
            let o = (x.0, x.1)
                .cmp(&(y.0, y.1))
                .then(x.2.total_cmp(&y.2))
                .then(x.3.total_cmp(&y.3));
            if o != Ordering::Equal {
                return o;
            }
        }
        ra.len().cmp(&rb.len())
    })
}

/// The normally ordered `D` with `d⟨â⟩/dt = ⟨D⟩` under `l`:
///
/// `D = i[Ĥ, â] + Σ_s η_s (½[L̂_s†, â] L̂_s + ½ L̂_s† [â, L̂_s])`.
pub fn ehrenfest_drift(l: &Lindbladian) -> Result<NormalOrderedPolynomial> {
    l.validate()?;
    Ok(drift_unchecked(l))
}

/// Drift without the well-formedness check; used to diagnose malformed printed forms.
pub fn drift_unchecked(l: &Lindbladian) -> NormalOrderedPolynomial {
    let a = NormalOrderedPolynomial::a();
    let i = Complex64::new(0.0, 1.0);
    let mut drift = l.hamiltonian.commutator(&a).scale(i);
    for d in &l.dissipators {
        drift += &dissipator_drift(&d.operator).scale_re(d.rate);
    }
    drift
}

/// Drift of `D[L]` at unit rate.
pub fn dissipator_drift(op: &NormalOrderedPolynomial) -> NormalOrderedPolynomial {
    let a = NormalOrderedPolynomial::a();
    let dag = op.adjoint();
    let left = dag.commutator(&a).product(op);
    let right = dag.product(&a.commutator(op));
    (&left + &right).scale_re(0.5)
}
