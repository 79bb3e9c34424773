//! Classical planar polynomial flows `(x', y') = (f, g)` and their complex form
//! `α' = h(α, α*)` with `α = (x + iy)/√2`.

mod catalog;
mod lienard;

pub use catalog::{catalog, catalog_names, CatalogEntry, CATALOG_NAMES};
pub use lienard::{lienard_conditions, LienardReport, UnivariatePoly};

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{Monomial, PRUNE_TOL};
use crate::error::{Error, Result};

/// Real bivariate polynomial stored as `(x_power, y_power) → coefficient`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RealPoly {
    terms: BTreeMap<(u32, u32), f64>,
}

impl RealPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Build from `(i, j, c)` triples meaning `c · x^i y^j`.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64, f64)>,
    {
        let mut p = Self::zero();
        for (i, j, c) in entries {
            if i < 0 || j < 0 {
                return Err(Error::NegativePower { dag: i, ann: j });
            }
            *p.terms.entry((i as u32, j as u32)).or_insert(0.0) += c;
        }
        p.prune();
        Ok(p)
    }

    fn from_map(terms: BTreeMap<(u32, u32), f64>) -> Self {
        let mut p = Self { terms };
        p.prune();
        p
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !(c.abs() < PRUNE_TOL));
    }

    pub fn coeff(&self, i: u32, j: u32) -> f64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i32 {
        self.terms.keys().map(|(i, j)| (i + j) as i32).max().unwrap_or(-1)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.terms()
            .map(|((i, j), c)| c * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    }

    pub fn d_dx(&self) -> Self {
        Self::from_map(
            self.terms()
                .filter(|((i, _), _)| *i > 0)
                .map(|((i, j), c)| ((i - 1, j), c * f64::from(i)))
                .collect(),
        )
    }

    pub fn d_dy(&self) -> Self {
        Self::from_map(
            self.terms()
                .filter(|((_, j), _)| *j > 0)
                .map(|((i, j), c)| ((i, j - 1), c * f64::from(j)))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut map = self.terms.clone();
        for (k, c) in other.terms() {
            *map.entry(k).or_insert(0.0) += c;
        }
        Self::from_map(map)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.add(&other.scaled(-1.0)).max_abs_coefficient()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_map(self.terms().map(|(k, c)| (k, c * s)).collect())
    }
}

impl Serialize for RealPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms()
            .map(|((i, j), c)| (i, j, c))
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RealPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<(i64, i64, f64)> = Vec::deserialize(d)?;
        Self::from_entries(rows).map_err(serde::de::Error::custom)
    }
}

/// `(x', y') = (f(x, y), g(x, y))`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RealSystem {
    pub f: RealPoly,
    pub g: RealPoly,
}

/// `α' = h(α, α*)`, stored as `(conj_power, power) → coefficient`.
///
/// Keys reuse [`Monomial`]: `dag` is the power of `α*`, `ann` the power of `α`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexSystem {
    terms: BTreeMap<Monomial, Complex64>,
}

impl ComplexSystem {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Build from `(j, k, c)` triples meaning `c · α*^j α^k`.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64, Complex64)>,
    {
        let mut terms = BTreeMap::new();
        for (j, k, c) in entries {
            if j < 0 || k < 0 {
                return Err(Error::NegativePower { dag: j, ann: k });
            }
            *terms
                .entry(Monomial::new(j as u32, k as u32))
                .or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Ok(Self::from_map(terms))
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Self::from_map(map)
    }

    fn from_map(mut terms: BTreeMap<Monomial, Complex64>) -> Self {
        terms.retain(|_, c| !(c.norm() < PRUNE_TOL));
        Self { terms }
    }

    /// `c · α*^conj α^pow`.
    pub fn monomial(conj: u32, pow: u32, c: Complex64) -> Self {
        Self::from_terms([(Monomial::new(conj, pow), c)])
    }

    pub fn coeff(&self, conj: u32, pow: u32) -> Complex64 {
        self.terms
            .get(&Monomial::new(conj, pow))
            .copied()
            .unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Complex64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> i32 {
        self.terms.keys().map(|m| m.degree() as i32).max().unwrap_or(-1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut map = self.terms.clone();
        for (m, c) in other.terms() {
            *map.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Self::from_map(map)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self::from_map(self.terms().map(|(m, c)| (m, c * s)).collect())
    }

    /// Commutative product of classical polynomials.
    pub fn product(&self, other: &Self) -> Self {
        let mut map = BTreeMap::new();
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                *map.entry(Monomial::new(m1.dag + m2.dag, m1.ann + m2.ann))
                    .or_insert(Complex64::new(0.0, 0.0)) += c1 * c2;
            }
        }
        Self::from_map(map)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluates `h` at a complex point `α`.
    pub fn eval(&self, alpha: Complex64) -> Complex64 {
        self.terms()
            .map(|(m, c)| c * alpha.conj().powu(m.dag) * alpha.powu(m.ann))
            .sum()
    }
}

impl Serialize for ComplexSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms()
            .map(|(m, c)| (m.dag, m.ann, c.re, c.im))
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<(i64, i64, f64, f64)> = Vec::deserialize(d)?;
        Self::from_entries(rows.into_iter().map(|(j, k, re, im)| (j, k, Complex64::new(re, im))))
            .map_err(serde::de::Error::custom)
    }
}

/// Either representation of a system, as read from input files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum System {
    Real(RealSystem),
    Complex {
        h: ComplexSystem,
    },
}

impl System {
    pub fn to_complex(&self) -> ComplexSystem {
        match self {
            System::Real(s) => to_complex(s),
            System::Complex { h } => h.clone(),
        }
    }
}

/// System file contents: the system plus optional catalog provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    #[serde(flatten)]
    pub system: System,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
}

/// `x = (α + α*)/√2` as a classical polynomial.
fn x_of_alpha() -> ComplexSystem {
    let s = Complex64::new(1.0 / SQRT_2, 0.0);
    ComplexSystem::from_terms([(Monomial::new(0, 1), s), (Monomial::new(1, 0), s)])
}

/// `y = −i(α − α*)/√2` as a classical polynomial.
fn y_of_alpha() -> ComplexSystem {
    let s = Complex64::new(0.0, 1.0 / SQRT_2);
    ComplexSystem::from_terms([(Monomial::new(0, 1), -s), (Monomial::new(1, 0), s)])
}

fn powers(base: &ComplexSystem, n: u32) -> Vec<ComplexSystem> {
    let mut out = vec![ComplexSystem::monomial(0, 0, Complex64::new(1.0, 0.0))];
    for i in 0..n as usize {
        out.push(out[i].product(base));
    }
    out
}

/// `h = (f + i g)/√2` with `x, y` written in terms of `α, α*`.
pub fn to_complex(s: &RealSystem) -> ComplexSystem {
    let deg = s.f.degree().max(s.g.degree()).max(0) as u32;
    let xp = powers(&x_of_alpha(), deg);
    let yp = powers(&y_of_alpha(), deg);
    let mut h = ComplexSystem::zero();
    let scale = 1.0 / SQRT_2;
    for ((i, j), c) in s.f.terms() {
        let term = xp[i as usize].product(&yp[j as usize]);
        h = h.add(&term.scaled(Complex64::new(c * scale, 0.0)));
    }
    for ((i, j), c) in s.g.terms() {
        let term = xp[i as usize].product(&yp[j as usize]);
        h = h.add(&term.scaled(Complex64::new(0.0, c * scale)));
    }
    h
}

/// Inverse of [`to_complex`]: `f = √2 Re h`, `g = √2 Im h` as polynomials in `x, y`.
pub fn to_real(h: &ComplexSystem) -> RealSystem {
    // α = (x + iy)/√2 and α* = (x − iy)/√2, expanded as complex polynomials in (x, y).
    type XY = BTreeMap<(u32, u32), Complex64>;
    fn mul(a: &XY, b: &XY) -> XY {
        let mut out = XY::new();
        for (&(i1, j1), &c1) in a {
            for (&(i2, j2), &c2) in b {
                *out.entry((i1 + i2, j1 + j2)).or_default() += c1 * c2;
            }
        }
        out
    }
    let s = 1.0 / SQRT_2;
    let alpha: XY = [((1, 0), Complex64::new(s, 0.0)), ((0, 1), Complex64::new(0.0, s))].into();
    let alpha_c: XY = [((1, 0), Complex64::new(s, 0.0)), ((0, 1), Complex64::new(0.0, -s))].into();
    let deg = h.degree().max(0) as usize;
    let one: XY = [((0, 0), Complex64::new(1.0, 0.0))].into();
    let mut ap = vec![one.clone()];
    let mut cp = vec![one];
    for i in 0..deg {
        ap.push(mul(&ap[i], &alpha));
        cp.push(mul(&cp[i], &alpha_c));
    }
    let mut acc = XY::new();
    for (m, c) in h.terms() {
        for (k, v) in mul(&cp[m.dag as usize], &ap[m.ann as usize]) {
            *acc.entry(k).or_default() += c * v;
        }
    }
    let f = RealPoly::from_map(acc.iter().map(|(k, c)| (*k, SQRT_2 * c.re)).collect());
    let g = RealPoly::from_map(acc.iter().map(|(k, c)| (*k, SQRT_2 * c.im)).collect());
    RealSystem { f, g }
}

/// Divergence `∂f/∂x + ∂g/∂y` and whether it vanishes identically.
pub fn is_hamiltonian(s: &RealSystem) -> (bool, RealPoly) {
    let div = s.f.d_dx().add(&s.g.d_dy());
    (div.is_zero(), div)
}

/// True iff every monomial `α*^j α^k` of `h` has `k − j = 1`.
pub fn is_rotationally_symmetric(h: &ComplexSystem) -> bool {
    h.terms().all(|(m, _)| m.ann as i64 - m.dag as i64 == 1)
}
