//! Truncated Fock-space realization: operator matrices, the Liouvillian superoperator,
//! steady states, time evolution and Wigner functions.
//!
//! Matrices are `faer::Mat<c64>`; the public surface speaks `num_complex::Complex64`.

mod density;
mod evolve;
mod liouvillian;
mod truncate;
mod wigner;

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;

use crate::algebra::{Monomial, NormalOrderedPolynomial};

pub use density::DensityMatrix;
pub use evolve::{evolve, lindblad_rhs, EvolveOptions, Trajectory};
pub(crate) use liouvillian::Generator;
pub use liouvillian::{liouvillian, steady_state, steady_state_with, SteadyStateOptions};
pub use truncate::{auto_truncate, TruncationOptions, TruncationReport};
pub use wigner::{wigner, wigner_integral, wigner_mode, GridSpec, WignerGrid};

/// Dense `N×N` operator in the Fock basis `|0⟩ … |N−1⟩`.
pub type FockMatrix = Mat<c64>;

pub(crate) fn to_c64(z: Complex64) -> c64 {
    c64::new(z.re, z.im)
}

pub(crate) fn from_c64(z: c64) -> Complex64 {
    Complex64::new(z.re, z.im)
}

/// `√(n!/(n−k)!)`, the amplitude of `â^k|n⟩`.
fn ladder(n: usize, k: u32) -> f64 {
    (0..k as usize).map(|i| ((n - i) as f64).sqrt()).product()
}

/// Truncated matrix of `P`: `⟨m|â†^j â^k|n⟩ = √(n!/(n−k)!)·√(m!/(m−j)!)` when `m − j = n − k ≥ 0`.
///
/// Terms are accumulated in an order invariant under `j ↔ k`, so the matrix of `P†` is the
/// conjugate transpose of the matrix of `P` bit for bit.
pub fn matrix_of(p: &NormalOrderedPolynomial, n: usize) -> FockMatrix {
    let mut terms: Vec<(Monomial, Complex64)> = p.terms().collect();
    terms.sort_by_key(|(m, _)| (m.degree(), m.dag.min(m.ann), m.dag.max(m.ann)));
    let mut out = Mat::<c64>::zeros(n, n);
    for (m, c) in terms {
        let (j, k) = (m.dag as usize, m.ann as usize);
        for col in k..n {
            let row = col - k + j;
            if row >= n {
                break;
            }
            let w = ladder(col, m.ann) * ladder(row, m.dag);
            let cur = out.read(row, col);
            out.write(row, col, cur + to_c64(c * w));
        }
    }
    out
}

/// `Tr[P ρ]`.
pub fn expectation(rho: &DensityMatrix, p: &NormalOrderedPolynomial) -> Complex64 {
    let op = matrix_of(p, rho.dim());
    let r = rho.as_mat();
    let mut acc = c64::new(0.0, 0.0);
    for i in 0..rho.dim() {
        for k in 0..rho.dim() {
            acc += op.read(i, k) * r.read(k, i);
        }
    }
    from_c64(acc)
}

/// Quadrature `x̂ = (â + â†)/√2`.
pub fn position() -> NormalOrderedPolynomial {
    (NormalOrderedPolynomial::a() + NormalOrderedPolynomial::adag()) * std::f64::consts::FRAC_1_SQRT_2
}

/// Quadrature `ŷ = (â − â†)/(i√2)`.
pub fn momentum() -> NormalOrderedPolynomial {
    (NormalOrderedPolynomial::a() - NormalOrderedPolynomial::adag())
        * Complex64::new(0.0, -std::f64::consts::FRAC_1_SQRT_2)
}
