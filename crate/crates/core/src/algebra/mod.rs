//! Exact arithmetic on normally ordered polynomials in `â`, `â†`, and the
//! Ehrenfest drift of a Lindbladian.

mod lindblad;
mod poly;

pub use lindblad::{dissipator_drift, drift_unchecked, ehrenfest_drift, Dissipator, Lindbladian};
pub use poly::{binomial, falling, Monomial, NormalOrderedPolynomial, PRUNE_TOL};

use crate::classical::ComplexSystem;

/// Term-wise normal ordering: `α*^j α^k ↦ â†^j â^k` with the coefficient unchanged.
pub fn normal_order_classical(h: &ComplexSystem) -> NormalOrderedPolynomial {
    NormalOrderedPolynomial::from_terms(h.terms())
}
