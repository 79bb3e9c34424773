//! Normally ordered polynomials in the bosonic ladder operators.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficients with magnitude below this are dropped after every operation.
pub const PRUNE_TOL: f64 = 1e-15;

/// The monomial `â†^dag â^ann` (equivalently `α*^dag α^ann` on the classical side).
///
/// Ordered by total degree, then by the creation power, which is the
/// canonical serialization order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub dag: u32,
    pub ann: u32,
}

impl Monomial {
    pub const fn new(dag: u32, ann: u32) -> Self {
        Self { dag, ann }
    }

    pub fn degree(self) -> u32 {
        self.dag + self.ann
    }

    pub fn swapped(self) -> Self {
        Self::new(self.ann, self.dag)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.dag).cmp(&(other.degree(), other.dag))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse complex combination of normally ordered monomials `â†^j â^k`.
///
/// The map never stores a coefficient whose magnitude is below [`PRUNE_TOL`];
/// non-finite coefficients are kept so they surface in validation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormalOrderedPolynomial {
    terms: BTreeMap<Monomial, Complex64>,
}

/// `C(r, p) · s! / (s − p)!`, the weight in `â^r â†^s = Σ_p w_p â†^{s−p} â^{r−p}`.
pub(crate) fn reorder_weight(r: u32, s: u32, p: u32) -> f64 {
    binomial(r, p) * falling(s, p)
}

/// Binomial coefficient as a float; zero when `p > n`.
pub fn binomial(n: u32, p: u32) -> f64 {
    if p > n {
        return 0.0;
    }
    let p = p.min(n - p);
    let mut acc = 1.0;
    for i in 0..p {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc.round()
}

/// Falling factorial `n!/(n−p)!`; zero when `p > n`.
pub fn falling(n: u32, p: u32) -> f64 {
    if p > n {
        return 0.0;
    }
    (0..p).map(|i| f64::from(n - i)).product()
}

impl NormalOrderedPolynomial {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// A scalar multiple of the identity.
    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, 0, c)
    }

    /// `c · â†^dag â^ann`.
    pub fn monomial(dag: u32, ann: u32, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(dag, ann), c);
        p
    }

    /// The annihilation operator `â`.
    pub fn a() -> Self {
        Self::monomial(0, 1, Complex64::new(1.0, 0.0))
    }

    /// The creation operator `â†`.
    pub fn adag() -> Self {
        Self::monomial(1, 0, Complex64::new(1.0, 0.0))
    }

    /// Build from `(j, k, c)` triples; duplicate keys are summed and zero sums pruned.
    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64, Complex64)>,
    {
        let mut p = Self::zero();
        for (j, k, c) in entries {
            if j < 0 || k < 0 {
                return Err(Error::NegativePower { dag: j, ann: k });
            }
            p.accumulate(Monomial::new(j as u32, k as u32), c);
        }
        p.prune();
        Ok(p)
    }

    /// Build from terms that are already keyed by monomial.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Complex64)>,
    {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.accumulate(m, c);
        }
        p.prune();
        p
    }

    fn accumulate(&mut self, m: Monomial, c: Complex64) {
        *self.terms.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !(c.norm() < PRUNE_TOL));
    }

    /// Add `c` to the coefficient of `m`, pruning if the result vanishes.
    pub fn add_term(&mut self, m: Monomial, c: Complex64) {
        let entry = self.terms.entry(m).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() < PRUNE_TOL {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum of `j + k` over stored terms; `-1` for the zero polynomial.
    pub fn degree(&self) -> i32 {
        self.terms.keys().map(|m| m.degree() as i32).max().unwrap_or(-1)
    }

    pub fn coeff(&self, dag: u32, ann: u32) -> Complex64 {
        self.terms
            .get(&Monomial::new(dag, ann))
            .copied()
            .unwrap_or_default()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Complex64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(m, c)| (m, c * s)))
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Hermitian conjugate: `coeff'(k, j) = conj(coeff(j, k))`.
    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms().map(|(m, c)| (m.swapped(), c.conj())))
    }

    /// True when `coeff(j,k) = conj(coeff(k,j))` to within `tol` for every key.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        (self - &self.adjoint()).max_abs_coefficient() <= tol
    }

    /// Operator product `self · rhs`, returned in normal order.
    ///
    /// Each pair of monomials is reordered with
    /// `â^r â†^s = Σ_p C(r,p) s!/(s−p)! â†^{s−p} â^{r−p}`.
    pub fn product(&self, rhs: &Self) -> Self {
        let mut out: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (m1, c1) in self.terms() {
            for (m2, c2) in rhs.terms() {
                let c = c1 * c2;
                let (r, s) = (m1.ann, m2.dag);
                for p in 0..=r.min(s) {
                    let w = reorder_weight(r, s, p);
                    let key = Monomial::new(m1.dag + s - p, r - p + m2.ann);
                    *out.entry(key).or_default() += c * w;
                }
            }
        }
        Self::from_terms(out)
    }

    /// `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &self.product(rhs) - &rhs.product(self)
    }

    /// `self^n` under the operator product.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(Complex64::new(1.0, 0.0));
        for _ in 0..n {
            acc = acc.product(self);
        }
        acc
    }

    /// Entrywise difference magnitude; handy for tolerance comparisons.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).max_abs_coefficient()
    }

    /// `[[j, k, re, im], ...]` in canonical order.
    pub fn to_rows(&self) -> Vec<(u32, u32, f64, f64)> {
        self.terms()
            .map(|(m, c)| (m.dag, m.ann, c.re, c.im))
            .collect()
    }
}

impl Add for &NormalOrderedPolynomial {
    type Output = NormalOrderedPolynomial;
    fn add(self, rhs: Self) -> NormalOrderedPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for NormalOrderedPolynomial {
    type Output = NormalOrderedPolynomial;
    fn add(mut self, rhs: Self) -> NormalOrderedPolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&NormalOrderedPolynomial> for NormalOrderedPolynomial {
    fn add_assign(&mut self, rhs: &NormalOrderedPolynomial) {
        for (m, c) in rhs.terms() {
            self.accumulate(m, c);
        }
        self.prune();
    }
}

impl Sub for &NormalOrderedPolynomial {
    type Output = NormalOrderedPolynomial;
    fn sub(self, rhs: Self) -> NormalOrderedPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for NormalOrderedPolynomial {
    type Output = NormalOrderedPolynomial;
    fn sub(mut self, rhs: Self) -> NormalOrderedPolynomial {
        self -= &rhs;
        self
    }
}

impl SubAssign<&NormalOrderedPolynomial> for NormalOrderedPolynomial {
    fn sub_assign(&mut self, rhs: &NormalOrderedPolynomial) {
        for (m, c) in rhs.terms() {
            self.accumulate(m, -c);
        }
        self.prune();
    }
}

impl Neg for &NormalOrderedPolynomial {
    type Output = NormalOrderedPolynomial;
    fn neg(self) -> NormalOrderedPolynomial {
        self.scale_re(-1.0)
    }
}

impl Neg for NormalOrderedPolynomial {
    type Output = NormalOrderedPolynomial;
    fn neg(self) -> NormalOrderedPolynomial {
        self.scale_re(-1.0)
    }
}

impl Mul for &NormalOrderedPolynomial {
    type Output = NormalOrderedPolynomial;
    fn mul(self, rhs: Self) -> NormalOrderedPolynomial {
        self.product(rhs)
    }
}

impl Mul for NormalOrderedPolynomial {
    type Output = NormalOrderedPolynomial;
    fn mul(self, rhs: Self) -> NormalOrderedPolynomial {
        self.product(&rhs)
    }
}

impl Mul<Complex64> for &NormalOrderedPolynomial {
    type Output = NormalOrderedPolynomial;
    fn mul(self, rhs: Complex64) -> NormalOrderedPolynomial {
        self.scale(rhs)
    }
}

impl Mul<Complex64> for NormalOrderedPolynomial {
    type Output = NormalOrderedPolynomial;
    fn mul(self, rhs: Complex64) -> NormalOrderedPolynomial {
        self.scale(rhs)
    }
}

impl Mul<f64> for &NormalOrderedPolynomial {
    type Output = NormalOrderedPolynomial;
    fn mul(self, rhs: f64) -> NormalOrderedPolynomial {
        self.scale_re(rhs)
    }
}

impl Mul<f64> for NormalOrderedPolynomial {
    type Output = NormalOrderedPolynomial;
    fn mul(self, rhs: f64) -> NormalOrderedPolynomial {
        self.scale_re(rhs)
    }
}

impl fmt::Display for NormalOrderedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            match m.dag {
                0 => {}
                1 => write!(f, " a†")?,
                d => write!(f, " a†^{d}")?,
            }
            match m.ann {
                0 => {}
                1 => write!(f, " a")?,
                d => write!(f, " a^{d}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for NormalOrderedPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NormalOrderedPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<(i64, i64, f64, f64)> = Vec::deserialize(deserializer)?;
        Self::from_entries(
            rows.into_iter()
                .map(|(j, k, re, im)| (j, k, Complex64::new(re, im))),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn entries_sum_and_prune() {
        assert!(NormalOrderedPolynomial::from_entries([]).unwrap().is_zero());
        let p = NormalOrderedPolynomial::from_entries([(1, 0, c(1.0, 0.0)), (1, 0, c(-1.0, 0.0))])
            .unwrap();
        assert!(p.is_zero());
        assert_eq!(p.degree(), -1);
        let q = NormalOrderedPolynomial::from_entries([(0, 1, c(-0.7, 0.0))]).unwrap();
        assert_eq!(q.degree(), 1);
        assert_eq!(q.coeff(0, 1), c(-0.7, 0.0));
        assert!(NormalOrderedPolynomial::from_entries([(-1, 0, c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn canonical_commutator() {
        let p = NormalOrderedPolynomial::a() * NormalOrderedPolynomial::adag();
        assert_eq!(p.coeff(0, 0), c(1.0, 0.0));
        assert_eq!(p.coeff(1, 1), c(1.0, 0.0));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn squared_ladders() {
        let a2 = NormalOrderedPolynomial::monomial(0, 2, c(1.0, 0.0));
        let ad2 = NormalOrderedPolynomial::monomial(2, 0, c(1.0, 0.0));
        let p = a2 * ad2;
        assert_eq!(p.coeff(0, 0), c(2.0, 0.0));
        assert_eq!(p.coeff(1, 1), c(4.0, 0.0));
        assert_eq!(p.coeff(2, 2), c(1.0, 0.0));
        assert_eq!(p.len(), 3);

        let n = NormalOrderedPolynomial::monomial(1, 1, c(1.0, 0.0));
        let nn = &n * &n;
        assert_eq!(nn.coeff(1, 1), c(1.0, 0.0));
        assert_eq!(nn.coeff(2, 2), c(1.0, 0.0));
        assert_eq!(nn.len(), 2);
    }

    #[test]
    fn adjoint_swaps_and_conjugates() {
        assert_eq!(NormalOrderedPolynomial::a().adjoint(), NormalOrderedPolynomial::adag());
        let p = NormalOrderedPolynomial::monomial(2, 3, c(0.5, -1.5));
        assert_eq!(p.adjoint(), NormalOrderedPolynomial::monomial(3, 2, c(0.5, 1.5)));
    }

    #[test]
    fn canonical_order_and_json() {
        let p = NormalOrderedPolynomial::from_entries([
            (0, 2, c(1.0, 0.0)),
            (1, 0, c(2.0, 0.0)),
            (2, 0, c(3.0, 1.0)),
            (0, 0, c(4.0, 0.0)),
        ])
        .unwrap();
        let keys: Vec<_> = p.terms().map(|(m, _)| (m.dag, m.ann)).collect();
        assert_eq!(keys, vec![(0, 0), (1, 0), (0, 2), (2, 0)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[0,0,4.0,0.0],[1,0,2.0,0.0],[0,2,1.0,0.0],[2,0,3.0,1.0]]");
        let back: NormalOrderedPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn weights() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(2, 3), 0.0);
        assert_eq!(falling(4, 2), 12.0);
        assert_eq!(falling(2, 3), 0.0);
    }
}
