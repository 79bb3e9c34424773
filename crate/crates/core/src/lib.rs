//! Cascade quantization of planar polynomial flows into Lindblad generators,
//! with a truncated Fock-space backend for steady states, evolution, Wigner
//! functions and white-noise driven trajectories.

// `!(x < tol)` is used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cascade;
pub mod classical;
pub mod error;
pub mod fock;
pub mod stochastic;

pub use algebra::{ehrenfest_drift, normal_order_classical, Dissipator, Lindbladian, Monomial, NormalOrderedPolynomial};
pub use cascade::{
    cascade_quantize, cascade_trace, decompose, table_quantize_deg3, verify_ehrenfest, CascadeTrace,
    EhrenfestResidual, HomogeneousDecomposition, QuantizationStep,
};
pub use classical::{catalog, to_complex, to_real, CatalogEntry, ComplexSystem, RealPoly, RealSystem, System, SystemFile};
pub use error::{Error, Result};
pub use fock::{DensityMatrix, GridSpec, WignerGrid};
pub use num_complex::Complex64;
pub use stochastic::{ito_form, NoisyGenerator, RunConfig, SpikeStatistics};
