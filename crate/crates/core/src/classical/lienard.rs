//! Liénard theorem conditions for `x' = y`, `y' = −u(x) − v(x) y`.
//!
//! Global sign claims are decided by isolating real roots with Sturm
//! sequences and evaluating signs between them, not by sampling alone.

use serde::{Deserialize, Serialize};

/// Dense real polynomial, `coeffs[i]` multiplies `x^i`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UnivariatePoly {
    pub coeffs: Vec<f64>,
}

/// Relative size below which a Sturm remainder coefficient counts as zero.
const STURM_EPS: f64 = 1e-12;

/// Roots closer to zero than this are reported as borderline.
const BORDERLINE: f64 = 1e-9;

impl UnivariatePoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if *c == 0.0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or −1 for the zero polynomial.
    pub fn degree(&self) -> i32 {
        self.coeffs.len() as i32 - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * i as f64)
                .collect(),
        )
    }

    /// Antiderivative vanishing at zero.
    pub fn integral(&self) -> Self {
        let mut c = vec![0.0];
        c.extend(self.coeffs.iter().enumerate().map(|(i, a)| a / (i + 1) as f64));
        Self::new(c)
    }

    /// Odd polynomial: every even-power coefficient is zero.
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|c| *c == 0.0)
    }

    /// Even polynomial: every odd-power coefficient is zero.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| *c == 0.0)
    }

    /// Removes factors of `x` so the result does not vanish at the origin.
    fn deflate_origin(&self) -> Self {
        let lead_zeros = self.coeffs.iter().take_while(|c| **c == 0.0).count();
        Self::new(self.coeffs[lead_zeros..].to_vec())
    }

    fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap_or(&0.0)
    }

    /// Remainder of polynomial division `self mod d`.
    fn rem(&self, d: &Self) -> Self {
        let mut r = self.coeffs.clone();
        let dl = d.leading();
        let dd = d.coeffs.len();
        while r.len() >= dd && !r.is_empty() {
            let q = r[r.len() - 1] / dl;
            let shift = r.len() - dd;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[shift + i] -= q * c;
            }
            r.pop();
        }
        let scale = self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs())).max(1e-300);
        for c in r.iter_mut() {
            if c.abs() < STURM_EPS * scale {
                *c = 0.0;
            }
        }
        Self::new(r)
    }

    fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().unwrap().is_zero() && chain.last().unwrap().degree() > 0 {
            let n = chain.len();
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(Self::new(r.coeffs.iter().map(|c| -c).collect()));
        }
        chain.retain(|p| !p.is_zero());
        chain
    }

    fn sign_changes(chain: &[Self], x: f64) -> usize {
        let signs: Vec<f64> = chain
            .iter()
            .map(|p| p.eval(x))
            .filter(|v| *v != 0.0)
            .collect();
        signs.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
    }

    fn sign_changes_at_infinity(chain: &[Self]) -> usize {
        let signs: Vec<f64> = chain.iter().map(|p| p.leading()).collect();
        signs.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
    }

    /// Cauchy bound: every real root lies in `(−B, B)`.
    fn root_bound(&self) -> f64 {
        let lead = self.leading().abs();
        1.0 + self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / lead)
            .fold(0.0, f64::max)
    }

    /// Distinct real roots in the open interval `(0, ∞)`, sorted ascending.
    pub fn positive_roots(&self) -> Vec<f64> {
        let p = self.deflate_origin();
        if p.degree() < 1 {
            return Vec::new();
        }
        let chain = p.sturm_chain();
        let total = Self::sign_changes(&chain, 0.0)
            .saturating_sub(Self::sign_changes_at_infinity(&chain));
        let mut roots = Vec::with_capacity(total);
        isolate(&p, &chain, 0.0, p.root_bound(), total, &mut roots);
        roots.sort_by(f64::total_cmp);
        roots
    }
}

/// Recursive bisection on Sturm counts; refines each isolated root to machine precision.
fn isolate(p: &UnivariatePoly, chain: &[UnivariatePoly], a: f64, b: f64, count: usize, out: &mut Vec<f64>) {
    if count == 0 {
        return;
    }
    if count == 1 || b - a < 1e-14 * b.abs().max(1.0) {
        out.push(refine(p, chain, a, b));
        return;
    }
    let m = 0.5 * (a + b);
    let left = UnivariatePoly::sign_changes(chain, a).saturating_sub(UnivariatePoly::sign_changes(chain, m));
    isolate(p, chain, a, m, left, out);
    isolate(p, chain, m, b, count.saturating_sub(left), out);
}

/// Bisection on the Sturm count inside an interval holding exactly one distinct root.
fn refine(_p: &UnivariatePoly, chain: &[UnivariatePoly], mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let in_left = UnivariatePoly::sign_changes(chain, a) > UnivariatePoly::sign_changes(chain, m);
        if in_left {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

/// Outcome of the six Liénard conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LienardReport {
    /// (i) `u` odd.
    pub u_odd: bool,
    /// (ii) `u(x) > 0` for every `x > 0`.
    pub u_positive: bool,
    /// (iii) `v` even.
    pub v_even: bool,
    /// (iv) `V(x) = ∫₀ˣ v` has exactly one positive root `x₀`.
    pub unique_root: bool,
    /// (v) `V < 0` on `(0, x₀)`.
    pub negative_before: bool,
    /// (vi) `V > 0` and nondecreasing on `(x₀, ∞)`.
    pub increasing_after: bool,
    /// The positive root of `V`, when exactly one exists.
    pub x0: Option<f64>,
    /// Notes on roots so close to zero that the verdict is not reliable.
    pub borderline: Vec<String>,
}

impl LienardReport {
    pub fn all_pass(&self) -> bool {
        self.u_odd
            && self.u_positive
            && self.v_even
            && self.unique_root
            && self.negative_before
            && self.increasing_after
    }
}

/// Checks Liénard's conditions (i)–(vi) for polynomial `u`, `v`.
pub fn lienard_conditions(u: &UnivariatePoly, v: &UnivariatePoly) -> LienardReport {
    let mut borderline = Vec::new();

    let u_odd = u.is_odd();
    let u_roots = u.positive_roots();
    let u_positive = !u.is_zero() && u_roots.is_empty() && u.eval(1.0) > 0.0;
    if let Some(r) = u_roots.first().filter(|r| **r < BORDERLINE) {
        borderline.push(format!("u has a positive root at {r:e}"));
    }

    let v_even = v.is_even();
    let big_v = v.integral();
    let v_roots = big_v.positive_roots();
    let unique_root = v_roots.len() == 1;
    let x0 = unique_root.then(|| v_roots[0]);
    if let Some(r) = v_roots.first().filter(|r| **r < BORDERLINE) {
        borderline.push(format!("V has a positive root at {r:e}"));
    }

    let (negative_before, increasing_after) = match x0 {
        Some(x0) => {
            let negative_before = big_v.eval(0.5 * x0) < 0.0;
            // V > 0 beyond x0 follows from uniqueness plus one positive sample; monotonicity
            // needs v ≥ 0 on (x0, ∞), checked between consecutive roots of v.
            let probe = x0 + 1.0;
            let positive_after = big_v.eval(probe) > 0.0;
            let mut cuts: Vec<f64> = v.positive_roots().into_iter().filter(|r| *r > x0).collect();
            cuts.insert(0, x0);
            let mut samples: Vec<f64> = cuts.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
            samples.push(cuts.last().unwrap() + 1.0);
            let nondecreasing = samples.iter().all(|x| v.eval(*x) >= 0.0);
            (negative_before, positive_after && nondecreasing)
        }
        None => (false, false),
    };

    LienardReport {
        u_odd,
        u_positive,
        v_even,
        unique_root,
        negative_before,
        increasing_after,
        x0,
        borderline,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_family_passes() {
        let (g0, g1, g2, g3) = (0.7, 1.3, 2.0, 0.4);
        let u = UnivariatePoly::new(vec![0.0, g1, 0.0, g3]);
        let v = UnivariatePoly::new(vec![-g0, 0.0, g2]);
        let r = lienard_conditions(&u, &v);
        assert!(r.all_pass(), "{r:?}");
        let x0 = (3.0 * g0 / g2).sqrt();
        assert!((r.x0.unwrap() - x0).abs() < 1e-12);
    }

    #[test]
    fn constant_damping_fails_root_condition() {
        let r = lienard_conditions(&UnivariatePoly::new(vec![0.0, 1.0]), &UnivariatePoly::new(vec![1.0]));
        assert!(r.u_odd && r.u_positive && r.v_even);
        assert!(!r.unique_root);
        assert!(!r.all_pass());
    }

    #[test]
    fn negative_restoring_force_fails() {
        let r = lienard_conditions(
            &UnivariatePoly::new(vec![0.0, -1.0]),
            &UnivariatePoly::new(vec![-1.0, 0.0, 1.0]),
        );
        assert!(!r.u_positive);
    }

    #[test]
    fn positive_roots_found() {
        // (x − 1)(x − 2)(x + 3) = x³ − 7x + 6
        let p = UnivariatePoly::new(vec![6.0, -7.0, 0.0, 1.0]);
        let r = p.positive_roots();
        assert_eq!(r.len(), 2);
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }
}
