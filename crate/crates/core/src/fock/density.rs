use faer::complex_native::c64;
use faer::{Mat, Side};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{from_c64, to_c64};
use crate::error::{Error, Result};

/// Density operator in a truncated Fock basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: Mat<c64>,
}

impl DensityMatrix {
    /// Wraps a square matrix without checking physicality.
    pub fn from_mat(mat: Mat<c64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "density matrix must be square");
        Self { mat }
    }

    pub fn as_mat(&self) -> &Mat<c64> {
        &self.mat
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        from_c64(self.mat.read(i, j))
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `ψ`.
    pub fn pure(psi: &[Complex64]) -> Self {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mat = Mat::from_fn(psi.len(), psi.len(), |i, j| to_c64(psi[i] * psi[j].conj() / (norm * norm)));
        Self { mat }
    }

    pub fn fock(dim: usize, n: usize) -> Self {
        assert!(n < dim, "Fock level {n} outside dimension {dim}");
        let mut psi = vec![Complex64::new(0.0, 0.0); dim];
        psi[n] = Complex64::new(1.0, 0.0);
        Self::pure(&psi)
    }

    pub fn vacuum(dim: usize) -> Self {
        Self::fock(dim, 0)
    }

    /// Coherent state `|α⟩`, truncated to `dim` levels and renormalized.
    pub fn coherent(dim: usize, alpha: Complex64) -> Self {
        let mut psi = Vec::with_capacity(dim);
        let mut amp = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..dim {
            if n > 0 {
                amp = amp * alpha / (n as f64).sqrt();
            }
            psi.push(amp);
        }
        Self::pure(&psi)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// `max |ρ − ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_part()
            .mat
            .selfadjoint_eigenvalues(Side::Lower)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn hermitian_part(&self) -> Self {
        let n = self.dim();
        let mat = Mat::from_fn(n, n, |i, j| {
            to_c64((self.get(i, j) + self.get(j, i).conj()) * 0.5)
        });
        Self { mat }
    }

    /// Hermitian part rescaled to unit trace.
    pub fn normalized(&self) -> Self {
        let h = self.hermitian_part();
        let tr = h.trace().re;
        let mat = Mat::from_fn(h.dim(), h.dim(), |i, j| h.mat.read(i, j) * c64::new(1.0 / tr, 0.0));
        Self { mat }
    }

    /// Checks Hermiticity, unit trace and positivity within the given tolerances.
    pub fn validate(&self, tol: f64, positivity_tol: f64) -> Result<()> {
        let invalid = |reason: String| Error::InvalidParams {
            name: "density matrix".into(),
            reason,
        };
        if self.mat.as_ref().has_nan() || !self.mat.as_ref().is_all_finite() {
            return Err(invalid("non-finite entries".into()));
        }
        let herm = self.hermiticity_error();
        if herm > tol {
            return Err(invalid(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > tol {
            return Err(invalid(format!("trace {tr} differs from 1")));
        }
        let lo = self.min_eigenvalue();
        if lo < -positivity_tol {
            return Err(invalid(format!("negative eigenvalue {lo:e}")));
        }
        Ok(())
    }

    /// Distance `max |ρ_ij − σ_ij|`; dimensions must agree.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.get(i, j) - other.get(i, j)).norm());
            }
        }
        worst
    }

    /// Copy embedded in a larger space (zero padded) or truncated to a smaller one.
    pub fn resized(&self, dim: usize) -> Self {
        let n = self.dim();
        let mat = Mat::from_fn(dim, dim, |i, j| {
            if i < n && j < n {
                self.mat.read(i, j)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        Self { mat }
    }
}

/// JSON form: `{"dim": N, "re": [...], "im": [...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct DensityJson {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let entries = (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
        DensityJson {
            dim: n,
            re: entries.clone().map(|(i, j)| self.mat.read(i, j).re).collect(),
            im: entries.map(|(i, j)| self.mat.read(i, j).im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = DensityJson::deserialize(d)?;
        let n = j.dim;
        if j.re.len() != n * n || j.im.len() != n * n {
            return Err(serde::de::Error::custom(format!(
                "expected {} entries for dim {n}",
                n * n
            )));
        }
        Ok(Self {
            mat: Mat::from_fn(n, n, |r, c| c64::new(j.re[r * n + c], j.im[r * n + c])),
        })
    }
}
