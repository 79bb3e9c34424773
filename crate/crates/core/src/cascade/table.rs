//! Direct generator for systems of degree ≤ 3.
//!
//! Shorter than the general cascade: the quadratic and cubic pairs use one combined jump
//! operator each (`â†â + c â†` and `â†â + c â†²`), and the lower-order spill of every row
//! is folded into the linear and constant rows before they are emitted.

use num_complex::Complex64;

use super::steps::quantize_antiholomorphic;
use crate::algebra::{Lindbladian, NormalOrderedPolynomial};
use crate::classical::ComplexSystem;
use crate::error::{Error, Result};

fn mono(j: u32, k: u32, c: Complex64) -> NormalOrderedPolynomial {
    NormalOrderedPolynomial::monomial(j, k, c)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Zero when `z` is only rounding residue of a sum of terms totalling `scale` in magnitude.
/// Coefficients that cancel analytically (e.g. after `(x ± iy)/√2`) then select no branch.
fn snap(z: Complex64, scale: f64) -> Complex64 {
    if z.norm() <= 8.0 * f64::EPSILON * scale {
        Complex64::new(0.0, 0.0)
    } else {
        z
    }
}

/// `e^{−i arg z}`.
fn unphase(z: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, -z.arg())
}

pub fn table_quantize_deg3(h: &ComplexSystem) -> Result<Lindbladian> {
    if h.degree() > 3 {
        return Err(Error::DegreeTooHigh(h.degree()));
    }
    let c = |j, k| h.coeff(j, k);
    let i = Complex64::new(0.0, 1.0);
    let mut out = Lindbladian::new();
    let mut lin = c(0, 1);
    let mut constant = c(0, 0);

    // Cubic pair α³, α*²α through D[â†â + ½e^{−iφ}â†²] and â†â³ + h.c.
    let (w1, w2) = (c(0, 3), c(2, 1));
    let s = snap(3.0 * w1 + w2.conj(), 3.0 * w1.norm() + w2.norm());
    let r = s.norm();
    let chi = i * (w1 - w2.conj()) / 4.0;
    out.add_hamiltonian(&(&mono(1, 3, chi) + &mono(3, 1, chi.conj())));
    if r > 0.0 {
        out.push_dissipator(r, &mono(1, 1, real(1.0)) + &mono(2, 0, 0.5 * unphase(s)));
    }

    // Diagonal α*α², after the cubic pair's contribution to it.
    let e = snap(c(1, 2) - r / 4.0, c(1, 2).norm() + r / 4.0);
    out.add_hamiltonian(&mono(2, 2, real(-e.im / 2.0)));
    if e.re < 0.0 {
        out.push_dissipator(-e.re, mono(0, 2, real(1.0)));
    } else if e.re > 0.0 {
        out.push_dissipator(e.re, mono(2, 0, real(1.0)));
        lin -= 2.0 * e.re;
    }

    out.add_hamiltonian(&quantize_antiholomorphic(c(3, 0), 3));

    // Quadratic pair α², α*α through D[â†â + e^{−iφ}â†] and â†â² + h.c.
    let (z1, z2) = (c(0, 2), c(1, 1));
    let s2 = snap(2.0 * z1 + z2.conj(), 2.0 * z1.norm() + z2.norm());
    let r2 = s2.norm();
    let chi2 = -i * z2.conj() / 2.0;
    out.add_hamiltonian(&(&mono(1, 2, chi2) + &mono(2, 1, chi2.conj())));
    if r2 > 0.0 {
        out.push_dissipator(r2, &mono(1, 1, real(1.0)) + &mono(1, 0, unphase(s2)));
        constant += s2.conj() / 2.0;
    }

    out.add_hamiltonian(&quantize_antiholomorphic(c(2, 0), 2));

    let lin = snap(lin, c(0, 1).norm() + 2.0 * e.re.abs());
    out.add_hamiltonian(&mono(1, 1, real(-lin.im)));
    if lin.re < 0.0 {
        out.push_dissipator(-2.0 * lin.re, mono(0, 1, real(1.0)));
    } else if lin.re > 0.0 {
        out.push_dissipator(2.0 * lin.re, mono(1, 0, real(1.0)));
    }

    out.add_hamiltonian(&quantize_antiholomorphic(c(1, 0), 1));
    out.add_hamiltonian(&quantize_antiholomorphic(constant, 0));
    Ok(out.canonicalize())
}
