//! Named systems with their published Lindbladians.
//!
//! Published generators are transcribed term by term. Four printed forms do
//! not satisfy the Ehrenfest condition as typeset; for those the stored
//! generator carries the minimal correction and `errata` says what changed.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use super::{RealPoly, RealSystem, System};
use crate::algebra::{Lindbladian, NormalOrderedPolynomial};
use crate::error::{Error, Result};

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: [&str; 10] = [
    "saddle_node",
    "transcritical",
    "pitchfork",
    "hopf",
    "infinite_period",
    "stuart_landau",
    "van_der_pol",
    "fitzhugh_nagumo",
    "lienard_cubic",
    "unusual_lienard",
];

/// A named system, its parameters and (when printed) its Lindbladian.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub system: System,
    pub published: Option<Lindbladian>,
    /// Corrections applied to the printed generator, if any.
    pub errata: Vec<&'static str>,
}

/// Parameter names and defaults for every catalog entry.
pub fn catalog_names() -> Vec<(&'static str, Vec<(&'static str, f64)>)> {
    CATALOG_NAMES.iter().map(|n| (*n, defaults(n))).collect()
}

fn defaults(name: &str) -> Vec<(&'static str, f64)> {
    match name {
        "saddle_node" => vec![("mu", 2.0)],
        "transcritical" => vec![("mu", 0.5)],
        "pitchfork" => vec![("mu", 3.0)],
        "hopf" => vec![("mu", 3.0)],
        "infinite_period" => vec![("mu", 1.5)],
        "stuart_landau" => vec![("kappa", 1.0), ("gamma", 1.0)],
        "van_der_pol" => vec![("mu", 0.5)],
        "fitzhugh_nagumo" => vec![("epsilon", 0.1), ("x0", 1.2), ("mu", 0.2)],
        "lienard_cubic" => vec![("gamma0", 1.0), ("gamma1", 1.0), ("gamma2", 1.0), ("gamma3", 1.0)],
        "unusual_lienard" => vec![("k", 1.0)],
        _ => Vec::new(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Shorthand: polynomial from `(j, k, coefficient)` triples.
fn op(terms: &[(u32, u32, Complex64)]) -> NormalOrderedPolynomial {
    NormalOrderedPolynomial::from_terms(
        terms
            .iter()
            .map(|(j, k, z)| (crate::algebra::Monomial::new(*j, *k), *z)),
    )
}

fn real(f: &[(i64, i64, f64)], g: &[(i64, i64, f64)]) -> System {
    System::Real(RealSystem {
        f: RealPoly::from_entries(f.iter().copied()).expect("static powers are nonnegative"),
        g: RealPoly::from_entries(g.iter().copied()).expect("static powers are nonnegative"),
    })
}

fn theta(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// `â`, `â†`, `â²` … as unit monomials.
fn ann(k: u32) -> NormalOrderedPolynomial {
    NormalOrderedPolynomial::monomial(0, k, c(1.0, 0.0))
}

fn dag(j: u32) -> NormalOrderedPolynomial {
    NormalOrderedPolynomial::monomial(j, 0, c(1.0, 0.0))
}

/// `â†â + z â†^j`.
fn number_plus(z: Complex64, j: u32) -> NormalOrderedPolynomial {
    op(&[(1, 1, c(1.0, 0.0)), (j, 0, z)])
}

/// Linear-gain/loss pair `(1−μ)θ(1−μ)D[â] + (μ−1)θ(μ−1)D[â†]`.
fn push_linear_pair(l: &mut Lindbladian, mu: f64) {
    l.push_dissipator((1.0 - mu) * theta(1.0 - mu), ann(1));
    l.push_dissipator((mu - 1.0) * theta(mu - 1.0), dag(1));
}

/// Looks up a catalog entry; missing parameters take their defaults.
pub fn catalog(name: &str, params: &BTreeMap<String, f64>) -> Result<CatalogEntry> {
    let defs = defaults(name);
    if defs.is_empty() {
        return Err(Error::UnknownSystem(name.to_string()));
    }
    for key in params.keys() {
        if !defs.iter().any(|(k, _)| k == key) {
            return Err(Error::InvalidParams {
                name: name.into(),
                reason: format!("unknown parameter `{key}`"),
            });
        }
    }
    let mut p = BTreeMap::new();
    for (k, v) in defs {
        let val = params.get(k).copied().unwrap_or(v);
        if !val.is_finite() {
            return Err(Error::InvalidParams {
                name: name.into(),
                reason: format!("parameter `{k}` is not finite"),
            });
        }
        p.insert(k.to_string(), val);
    }
    let get = |k: &str| p[k];
    let i = c(0.0, 1.0);
    let r2 = SQRT_2;
    let mut errata = Vec::new();

    let (system, published) = match name {
        "saddle_node" => {
            let mu = get("mu");
            let system = real(&[(0, 0, mu), (2, 0, -1.0)], &[(0, 1, -1.0)]);
            let h = op(&[
                (0, 1, -i * ((mu - 1.0) / r2)),
                (1, 0, i * ((mu - 1.0) / r2)),
                (0, 2, -i / 4.0),
                (2, 0, i / 4.0),
                (0, 3, i / (6.0 * r2)),
                (3, 0, -i / (6.0 * r2)),
                (1, 2, i / (2.0 * r2)),
                (2, 1, -i / (2.0 * r2)),
            ]);
            let l = Lindbladian::from_hamiltonian(h)
                .with_dissipator(1.0, ann(1))
                .with_dissipator(r2, number_plus(c(-1.0, 0.0), 1));
            (system, Some(l))
        }
        "transcritical" => {
            let mu = get("mu");
            let system = real(&[(1, 0, mu), (2, 0, -1.0)], &[(0, 1, -1.0)]);
            errata.push("coefficient of (â†â² − â†²â) is i/(2√2), printed as i/2");
            let h = op(&[
                (0, 1, i / r2),
                (1, 0, -i / r2),
                (0, 2, -i * ((mu + 1.0) / 4.0)),
                (2, 0, i * ((mu + 1.0) / 4.0)),
                (0, 3, i / (6.0 * r2)),
                (3, 0, -i / (6.0 * r2)),
                (1, 2, i / (2.0 * r2)),
                (2, 1, -i / (2.0 * r2)),
            ]);
            let mut l = Lindbladian::from_hamiltonian(h).with_dissipator(r2, number_plus(c(-1.0, 0.0), 1));
            push_linear_pair(&mut l, mu);
            (system, Some(l))
        }
        "pitchfork" => {
            let mu = get("mu");
            let system = real(&[(1, 0, mu), (3, 0, -1.0)], &[(0, 1, -1.0)]);
            let h = op(&[
                (0, 2, -i * ((mu + 1.0) / 4.0)),
                (2, 0, i * ((mu + 1.0) / 4.0)),
                (1, 3, i / 8.0),
                (3, 1, -i / 8.0),
                (0, 4, i / 16.0),
                (4, 0, -i / 16.0),
            ]);
            let mut l = Lindbladian::from_hamiltonian(h)
                .with_dissipator(9.0 / 8.0, ann(2))
                .with_dissipator(1.5, number_plus(c(-0.5, 0.0), 2));
            push_linear_pair(&mut l, mu);
            (system, Some(l))
        }
        "hopf" => {
            let mu = get("mu");
            let system = real(
                &[(0, 1, -1.0), (1, 0, mu), (3, 0, -1.0), (1, 2, -1.0)],
                &[(1, 0, 1.0), (0, 1, mu), (2, 1, -1.0), (0, 3, -1.0)],
            );
            let l = Lindbladian::from_hamiltonian(op(&[(1, 1, c(-1.0, 0.0))]))
                .with_dissipator(2.0, ann(2))
                .with_dissipator(2.0 * mu * theta(mu), dag(1))
                .with_dissipator(-2.0 * mu * theta(-mu), ann(1));
            (system, Some(l))
        }
        "infinite_period" => {
            let mu = get("mu");
            let system = real(
                &[(0, 1, -mu), (1, 0, 1.0), (1, 1, 1.0), (3, 0, -1.0), (1, 2, -1.0)],
                &[(1, 0, mu), (0, 1, 1.0), (2, 0, -1.0), (2, 1, -1.0), (0, 3, -1.0)],
            );
            errata.push("coefficient of (â + â†) is −1/(2√2), printed as −1/√2");
            let h = op(&[
                (1, 1, c(-mu, 0.0)),
                (0, 1, c(-1.0 / (2.0 * r2), 0.0)),
                (1, 0, c(-1.0 / (2.0 * r2), 0.0)),
                (1, 2, c(1.0 / (2.0 * r2), 0.0)),
                (2, 1, c(1.0 / (2.0 * r2), 0.0)),
            ]);
            let l = Lindbladian::from_hamiltonian(h)
                .with_dissipator(2.0, dag(1))
                .with_dissipator(2.0, ann(2))
                .with_dissipator(1.0 / r2, number_plus(i, 1));
            (system, Some(l))
        }
        "stuart_landau" => {
            let (kappa, gamma) = (get("kappa"), get("gamma"));
            let half = gamma / 2.0;
            let system = real(
                &[(0, 1, 1.0), (1, 0, kappa), (3, 0, -half), (1, 2, -half)],
                &[(1, 0, -1.0), (0, 1, kappa), (2, 1, -half), (0, 3, -half)],
            );
            let published = (kappa >= 0.0 && gamma >= 0.0).then(|| {
                Lindbladian::from_hamiltonian(op(&[(1, 1, c(1.0, 0.0))]))
                    .with_dissipator(2.0 * kappa, dag(1))
                    .with_dissipator(gamma, ann(2))
            });
            (system, published)
        }
        "van_der_pol" => {
            let mu = get("mu");
            let system = real(&[(0, 1, 1.0)], &[(1, 0, -1.0), (0, 1, mu), (2, 1, -mu)]);
            let h = op(&[
                (1, 1, c(1.0, 0.0)),
                (0, 2, i * (mu / 4.0)),
                (2, 0, -i * (mu / 4.0)),
                (3, 1, i * (mu / 8.0)),
                (1, 3, -i * (mu / 8.0)),
                (0, 4, -i * (mu / 16.0)),
                (4, 0, i * (mu / 16.0)),
            ]);
            let published = (mu >= 0.0).then(|| {
                Lindbladian::from_hamiltonian(h)
                    .with_dissipator(mu, dag(1))
                    .with_dissipator(3.0 * mu / 8.0, ann(2))
                    .with_dissipator(mu / 2.0, number_plus(c(-0.5, 0.0), 2))
            });
            (system, published)
        }
        "fitzhugh_nagumo" => {
            let (eps, x0, mu) = (get("epsilon"), get("x0"), get("mu"));
            let system = real(
                &[(3, 0, -eps / 3.0), (1, 0, eps * x0 * x0), (0, 1, 1.0)],
                &[(1, 0, -1.0), (0, 0, mu)],
            );
            let e2 = eps * x0 * x0;
            let h = op(&[
                (1, 1, c(1.0, 0.0)),
                (0, 1, c(-mu / r2, 0.0)),
                (1, 0, c(-mu / r2, 0.0)),
                (0, 2, -i * (e2 / 4.0)),
                (2, 0, i * (e2 / 4.0)),
                (3, 1, -i * (eps / 24.0)),
                (1, 3, i * (eps / 24.0)),
                (0, 4, i * (eps / 48.0)),
                (4, 0, -i * (eps / 48.0)),
            ]);
            let published = (eps >= 0.0).then(|| {
                Lindbladian::from_hamiltonian(h)
                    .with_dissipator(e2, dag(1))
                    .with_dissipator(3.0 * eps / 8.0, ann(2))
                    .with_dissipator(eps / 2.0, number_plus(c(-0.5, 0.0), 2))
            });
            (system, published)
        }
        "lienard_cubic" => {
            let (g0, g1, g2, g3) = (get("gamma0"), get("gamma1"), get("gamma2"), get("gamma3"));
            // x' = y, y' = −(γ₃x³ + γ₁x) − (γ₂x² − γ₀)y
            let system = real(&[(0, 1, 1.0)], &[(3, 0, -g3), (1, 0, -g1), (2, 1, -g2), (0, 1, g0)]);
            errata.push("coefficient of â†â is (γ₁+1)/2, printed as 1 (equal only at γ₁ = 1)");
            let h = op(&[
                (1, 1, c((g1 + 1.0) / 2.0, 0.0)),
                (2, 2, c(3.0 * g3 / 8.0, 0.0)),
                (0, 2, i / 4.0 * c(g0, -(g1 - 1.0))),
                (2, 0, -i / 4.0 * c(g0, g1 - 1.0)),
                (1, 3, -i / 8.0 * c(g2, 2.0 * g3)),
                (3, 1, i / 8.0 * c(g2, -2.0 * g3)),
                (0, 4, -i / 16.0 * c(g2, g3)),
                (4, 0, i / 16.0 * c(g2, -g3)),
            ]);
            let published = (g0 >= 0.0 && g2 >= 0.0).then(|| {
                Lindbladian::from_hamiltonian(h)
                    .with_dissipator(g0, dag(1))
                    .with_dissipator(3.0 * g2 / 8.0, ann(2))
                    .with_dissipator(g2 / 2.0, number_plus(c(-0.5, 0.0), 2))
            });
            (system, published)
        }
        "unusual_lienard" => {
            let k = get("k");
            let system = real(&[(0, 1, 1.0)], &[(1, 0, -1.0), (1, 1, -k), (3, 0, -k * k / 9.0)]);
            errata.push("printed h(α,α*) has a stray λ term and cubic coefficient k²/(9√2) instead of k²/36");
            errata.push("coefficient of â†â is 1; printed (1+√2)/√2 together with a spurious (â² + â†²) term");
            errata.push("cubic Hamiltonian pair is k²/36 (â†â³ + â†³â); printed with a minus sign, which is not Hermitian");
            let k2 = k * k;
            let h = op(&[
                (1, 1, c(1.0, 0.0)),
                (0, 1, i * (k / (2.0 * r2))),
                (1, 0, -i * (k / (2.0 * r2))),
                (0, 3, -i * (k / (6.0 * r2))),
                (3, 0, i * (k / (6.0 * r2))),
                (1, 3, c(k2 / 36.0, 0.0)),
                (3, 1, c(k2 / 36.0, 0.0)),
                (2, 2, c(k2 / 24.0, 0.0)),
                (0, 4, c(k2 / 144.0, 0.0)),
                (4, 0, c(k2 / 144.0, 0.0)),
            ]);
            let published = (k >= 0.0).then(|| {
                Lindbladian::from_hamiltonian(h).with_dissipator(k / r2, number_plus(c(-1.0, 0.0), 1))
            });
            (system, published)
        }
        _ => unreachable!("names are validated against the defaults table"),
    };

    Ok(CatalogEntry {
        name: name.to_string(),
        params: p,
        system,
        published,
        errata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ehrenfest_drift, normal_order_classical};

    #[test]
    fn every_published_generator_reproduces_its_drift() {
        for name in CATALOG_NAMES {
            let e = catalog(name, &BTreeMap::new()).unwrap();
            let l = e.published.as_ref().expect("defaults admit a published form");
            let drift = ehrenfest_drift(l).unwrap();
            let target = normal_order_classical(&e.system.to_complex());
            let res = drift.distance(&target);
            assert!(res < 1e-12, "{name}: residual {res:e}\n{drift}\nvs\n{target}");
        }
    }

    #[test]
    fn unknown_names_and_params_rejected() {
        assert!(catalog("lorenz", &BTreeMap::new()).is_err());
        let bad = BTreeMap::from([("nu".to_string(), 1.0)]);
        assert!(catalog("hopf", &bad).is_err());
    }
}
