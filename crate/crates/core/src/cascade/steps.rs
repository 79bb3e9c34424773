//! Closed-form Lindblad fragments for one homogeneous piece `h_{n,k}`.

use num_complex::Complex64;
use serde::Serialize;

use super::byproduct;
use crate::algebra::{Lindbladian, NormalOrderedPolynomial};
use crate::classical::ComplexSystem;

/// Heaviside step with `θ(0) = 0`.
pub fn theta(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Scalars that parameterize one fragment. Unused fields stay zero.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CascadeCoefficients {
    pub chi: Complex64,
    pub sigma: Complex64,
    /// Only meaningful on the odd `k < K` branch.
    pub zeta: Option<f64>,
    /// Even branch: rate on `â†^{n/2+1}`.
    pub kappa: f64,
    /// Odd `k < K` branch: rates on `â†^{(n+1)/2}` and `â^{(n+1)/2}`.
    pub kappa_minus: f64,
    pub kappa_plus: f64,
    /// Odd `k = K` branch: rates on `â^{(n+1)/2}` and `â†^{(n+1)/2}`.
    pub gamma_minus: f64,
    pub gamma_plus: f64,
}

/// The generator emitted for `h_{n,k}` and the lower-degree drift it also produces.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct QuantizationStep {
    pub n: u32,
    pub k: u32,
    pub fragment: Lindbladian,
    /// `h∉_{n,k}`: extra drift of the fragment beyond `h_{n,k}`; degree < n.
    pub byproduct: ComplexSystem,
    pub coefficients: CascadeCoefficients,
}

impl QuantizationStep {
    fn empty(n: u32, k: u32) -> Self {
        Self {
            n,
            k,
            ..Self::default()
        }
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn mono(j: u32, k: u32, c: Complex64) -> NormalOrderedPolynomial {
    NormalOrderedPolynomial::monomial(j, k, c)
}

/// `χ â†^{k+1} â^{n−k} + χ* â†^{n−k} â^{k+1}`.
fn paired_hamiltonian(n: u32, k: u32, chi: Complex64) -> NormalOrderedPolynomial {
    &mono(k + 1, n - k, chi) + &mono(n - k, k + 1, chi.conj())
}

/// `Ĥ_n = −i/(n+1) (λ* â^{n+1} − λ â†^{n+1})`, which quantizes `λ α*^n` exactly.
pub fn quantize_antiholomorphic(lambda: Complex64, n: u32) -> NormalOrderedPolynomial {
    if lambda == Complex64::new(0.0, 0.0) {
        return NormalOrderedPolynomial::zero();
    }
    let s = Complex64::new(0.0, -1.0 / f64::from(n + 1));
    &mono(0, n + 1, s * lambda.conj()) - &mono(n + 1, 0, s * lambda)
}

/// Even `n ≥ 2`, `0 ≤ k ≤ n/2 − 1`: quantizes `μ α*^k α^{n−k} + ν α*^{n−k−1} α^{k+1}`.
pub fn quantize_pair_even(n: u32, k: u32, mu: Complex64, nu: Complex64) -> QuantizationStep {
    assert!(n >= 2 && n % 2 == 0 && k < n / 2, "even branch needs n even and k <= n/2 - 1");
    if mu == Complex64::new(0.0, 0.0) && nu == Complex64::new(0.0, 0.0) {
        return QuantizationStep::empty(n, k);
    }
    let (nf, kf) = (f64::from(n), f64::from(k));
    let denom = (nf + 2.0) * (kf + 1.0);
    let chi = Complex64::new(0.0, 1.0) * ((kf + 2.0) * mu - (kf + 1.0) * nu.conj()) / denom;
    let sigma = -2.0 * ((nf - kf) * mu + (kf + 1.0) * nu.conj()) / denom;
    let kappa = sigma.norm_sqr();
    let half = n / 2;

    let c_op = &mono(half - k - 1, k + 1, one()) + &mono(0, half + 1, sigma);
    let fragment = Lindbladian::from_hamiltonian(paired_hamiltonian(n, k, chi))
        .with_dissipator(1.0, c_op)
        .with_dissipator(kappa, mono(half + 1, 0, one()));

    QuantizationStep {
        n,
        k,
        fragment,
        byproduct: byproduct::even(n, k, kappa),
        coefficients: CascadeCoefficients {
            chi,
            sigma,
            kappa,
            ..Default::default()
        },
    }
}

/// Odd `n ≥ 3`, `0 ≤ k < K`: quantizes `μ α*^k α^{n−k} + ν α*^{n−k−1} α^{k+1}`.
pub fn quantize_pair_odd(n: u32, k: u32, mu: Complex64, nu: Complex64) -> QuantizationStep {
    assert!(n >= 3 && n % 2 == 1 && k < (n - 1) / 2, "odd branch needs n odd and k < (n-1)/2");
    if mu == Complex64::new(0.0, 0.0) && nu == Complex64::new(0.0, 0.0) {
        return QuantizationStep::empty(n, k);
    }
    let (nf, kf) = (f64::from(n), f64::from(k));
    let chi = Complex64::new(0.0, 1.0) * (mu - nu.conj()) / (nf + 1.0);
    let sigma = -2.0 * ((nf - kf) * mu + (kf + 1.0) * nu.conj()) / ((nf + 1.0) * (kf + 1.0));
    let zeta = ((nf - 3.0) - (nf + 1.0) * sigma.norm_sqr()) / 4.0 - kf;
    let kappa_minus = -4.0 / (nf + 1.0) * theta(-zeta) * zeta;
    let kappa_plus = 4.0 / (nf + 1.0) * theta(zeta) * zeta;
    let q = (n + 1) / 2;

    let c_op = &mono((n - 1) / 2 - k, k + 1, one()) + &mono(0, q, sigma);
    let fragment = Lindbladian::from_hamiltonian(paired_hamiltonian(n, k, chi))
        .with_dissipator(1.0, c_op)
        .with_dissipator(kappa_minus, mono(q, 0, one()))
        .with_dissipator(kappa_plus, mono(0, q, one()));

    QuantizationStep {
        n,
        k,
        fragment,
        byproduct: byproduct::odd(n, k, zeta),
        coefficients: CascadeCoefficients {
            chi,
            sigma,
            zeta: Some(zeta),
            kappa_minus,
            kappa_plus,
            ..Default::default()
        },
    }
}

/// Odd `n ≥ 1`, `k = K`: quantizes `ε α*^K α^{K+1}`.
pub fn quantize_diagonal_odd(n: u32, epsilon: Complex64) -> QuantizationStep {
    assert!(n % 2 == 1, "diagonal branch needs odd n");
    let big_k = (n - 1) / 2;
    if epsilon == Complex64::new(0.0, 0.0) {
        return QuantizationStep::empty(n, big_k);
    }
    let nf = f64::from(n);
    let q = (n + 1) / 2;
    let re = epsilon.re;
    let gamma_minus = -4.0 * re / (nf + 1.0) * theta(-re);
    let gamma_plus = 4.0 * re / (nf + 1.0) * theta(re);
    let h = mono(q, q, Complex64::new(-2.0 * epsilon.im / (nf + 1.0), 0.0));
    let fragment = Lindbladian::from_hamiltonian(h)
        .with_dissipator(gamma_minus, mono(0, q, one()))
        .with_dissipator(gamma_plus, mono(q, 0, one()));

    QuantizationStep {
        n,
        k: big_k,
        fragment,
        byproduct: byproduct::diagonal(n, re),
        coefficients: CascadeCoefficients {
            gamma_minus,
            gamma_plus,
            ..Default::default()
        },
    }
}
