//! Closed forms for the lower-degree drift `h∉_{n,k}` left behind by each fragment.
//!
//! Every sum is a reordering of `â^r â†^s` into normal order, so each term carries the weight
//! `C(r, p) · s!/(s − p)!`. Empty sums and terms with a negative factorial vanish.

use num_complex::Complex64;

use super::steps::theta;
use crate::algebra::{binomial, falling, Monomial};
use crate::classical::ComplexSystem;

/// `scale · Σ_{p=from}^{to} C(r,p) s!/(s−p)! α*^{j0−p} α^{k0−p}`.
fn ladder_sum(scale: f64, r: u32, s: u32, from: u32, to: i64, j0: u32, k0: u32) -> ComplexSystem {
    if scale == 0.0 || to < i64::from(from) {
        return ComplexSystem::zero();
    }
    ComplexSystem::from_terms((from..=to as u32).filter(|p| *p <= j0 && *p <= k0).map(|p| {
        let w = binomial(r, p) * falling(s, p);
        (Monomial::new(j0 - p, k0 - p), Complex64::new(scale * w, 0.0))
    }))
}

/// Even `n`: byproduct of `D[ĉ_{n,k}] + κ D[â†^{n/2+1}]` together with `Ĥ_{n,k}`.
pub fn even(n: u32, k: u32, kappa: f64) -> ComplexSystem {
    let half = n / 2;
    let m = half - k - 1;
    let kf = f64::from(k);
    // ĉ†ĉ cross term reordered: â^m â†^m.
    let r1 = ladder_sum(-(kf + 1.0) / 2.0, m, m, 0, i64::from(m), half - 1, half);
    // κ D[â†^{n/2+1}] below its leading term.
    let r2 = ladder_sum(
        kappa / 2.0 * f64::from(half + 1),
        half + 1,
        half,
        1,
        i64::from(half),
        half,
        half + 1,
    );
    // Commutator [â, â†^m] = m â†^{m−1} moved through â^m: weights C(m,p)(m−1)!/(m−1−p)!.
    let r3 = if m >= 1 {
        ladder_sum(f64::from(m) / 2.0, m, m - 1, 0, i64::from(m) - 1, half - 1, half)
    } else {
        ComplexSystem::zero()
    };
    r1.add(&r2).add(&r3)
}

/// Odd `n`, `k < K`: byproduct of `D[ĉ_{n,k}] + κ± D[b̂±]` together with `Ĥ_{n,k}`.
pub fn odd(n: u32, k: u32, zeta: f64) -> ComplexSystem {
    let h = (n - 1) / 2;
    let q = (n + 1) / 2;
    let m = h - k;
    let kf = f64::from(k);
    let r1 = ladder_sum(-(kf + 1.0) / 2.0, m, m, 1, i64::from(m), h, q);
    let r2 = if n >= 3 + 2 * k + 2 {
        // θ((n−3)/2 − k) guard; (n−3)/2 − k = m − 1.
        ladder_sum(0.5 * f64::from(m), m, m - 1, 1, i64::from(m) - 1, h, q)
    } else {
        ComplexSystem::zero()
    };
    let r3 = ladder_sum(-theta(-zeta) * zeta, q, h, 1, i64::from(h), h, q);
    r1.add(&r2).add(&r3)
}

/// Odd `n`, `k = K`: only the `γ⁺ D[â†^{(n+1)/2}]` branch leaves a byproduct.
pub fn diagonal(n: u32, re_epsilon: f64) -> ComplexSystem {
    let h = (n - 1) / 2;
    let q = (n + 1) / 2;
    ladder_sum(theta(re_epsilon) * re_epsilon, q, h, 1, i64::from(h), h, q)
}
