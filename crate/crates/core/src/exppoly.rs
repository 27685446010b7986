//! Exponential polynomials `t ↦ Σ_γ P_γ(t) e^{iγαt}` with integer `γ`.
//!
//! Every coefficient function of the flow jet of a polynomial field with
//! linear part `iαz` lives in this class, and the class is closed under the
//! operations the flow recursion needs: products, conjugation and the
//! variation-of-constants solve of `φ' = iαφ + g(t)`, `φ(0) = 0`.

use std::collections::BTreeMap;

use num_traits::{Float, One, Zero};

use crate::scalar::{cis, Coeff, Cx, Real, Ring};

/// Polynomial coefficients whose magnitude falls below this are dropped.
pub const PRUNE: f64 = 1e-15;

/// `Σ_γ P_γ(t) e^{iγαt}`; `P_γ` is stored densely by power of `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPoly<C: Coeff> {
    alpha: C::Scalar,
    terms: BTreeMap<i32, Vec<C>>,
}

impl<C: Coeff> ExpPoly<C> {
    pub fn zero(alpha: C::Scalar) -> Self {
        ExpPoly {
            alpha,
            terms: BTreeMap::new(),
        }
    }

    /// `c · t^power · e^{iγαt}`.
    pub fn monomial(alpha: C::Scalar, gamma: i32, power: usize, c: C) -> Self {
        let mut poly = vec![C::zero(); power + 1];
        poly[power] = c;
        let mut terms = BTreeMap::new();
        terms.insert(gamma, poly);
        ExpPoly { alpha, terms }.normalized()
    }

    /// `c · e^{iγαt}`.
    pub fn exp(alpha: C::Scalar, gamma: i32, c: C) -> Self {
        Self::monomial(alpha, gamma, 0, c)
    }

    pub fn alpha(&self) -> C::Scalar {
        self.alpha
    }

    /// Frequencies `γ` present (the set `S` of the forcing decomposition).
    pub fn frequencies(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.keys().copied()
    }

    /// `(γ, [c_0, c_1, …])` with `P_γ(t) = Σ c_m t^m`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &[C])> {
        self.terms.iter().map(|(g, p)| (*g, p.as_slice()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of `t` in any `P_γ`.
    pub fn t_degree(&self) -> usize {
        self.terms.values().map(|p| p.len().saturating_sub(1)).max().unwrap_or(0)
    }

    fn normalized(mut self) -> Self {
        let tol = C::Scalar::of(PRUNE);
        for poly in self.terms.values_mut() {
            for c in poly.iter_mut() {
                if c.max_abs() < tol {
                    *c = C::zero();
                }
            }
            while poly.last().is_some_and(|c| c.max_abs() < tol) {
                poly.pop();
            }
        }
        self.terms.retain(|_, p| !p.is_empty());
        self
    }

    fn add_poly(&mut self, gamma: i32, poly: &[C]) {
        let slot = self.terms.entry(gamma).or_default();
        if slot.len() < poly.len() {
            slot.resize(poly.len(), C::zero());
        }
        for (s, c) in slot.iter_mut().zip(poly) {
            *s = s.plus(c);
        }
    }

    /// Multiplies every coefficient by `c` (from the coefficient ring).
    pub fn times_scalar(&self, c: &C) -> Self {
        ExpPoly {
            alpha: self.alpha,
            terms: self
                .terms
                .iter()
                .map(|(g, p)| (*g, p.iter().map(|x| x.times(c)).collect()))
                .collect(),
        }
        .normalized()
    }

    pub fn scale(&self, c: Cx<C::Scalar>) -> Self {
        ExpPoly {
            alpha: self.alpha,
            terms: self
                .terms
                .iter()
                .map(|(g, p)| (*g, p.iter().map(|x| x.scale(c)).collect()))
                .collect(),
        }
        .normalized()
    }

    /// Value at time `t`.
    pub fn eval(&self, t: C::Scalar) -> C {
        let mut acc = C::zero();
        for (&gamma, poly) in &self.terms {
            let mut p = C::zero();
            for c in poly.iter().rev() {
                p = p.scale(Cx::new(t, C::Scalar::zero())).plus(c);
            }
            let phase = cis(C::Scalar::of(gamma as f64) * self.alpha * t);
            acc = acc.plus(&p.scale(phase));
        }
        acc
    }

    /// Exact time derivative: `(P_γ' + iγα P_γ) e^{iγαt}`.
    pub fn derivative(&self) -> Self {
        let mut out = ExpPoly::zero(self.alpha);
        for (&gamma, poly) in &self.terms {
            let rate = Cx::new(C::Scalar::zero(), C::Scalar::of(gamma as f64) * self.alpha);
            let mut d: Vec<C> = poly.iter().map(|c| c.scale(rate)).collect();
            for (m, c) in poly.iter().enumerate().skip(1) {
                d[m - 1] = d[m - 1].plus(&c.scale(Cx::new(C::Scalar::of(m as f64), C::Scalar::zero())));
            }
            out.add_poly(gamma, &d);
        }
        out.normalized()
    }

    /// Unique solution of `φ' = iαφ + g(t)`, `φ(0) = 0`, where `g = self`.
    ///
    /// Variation of constants: `φ(t) = e^{iαt} ∫₀ᵗ e^{-iαs} g(s) ds`. After
    /// the twist, a term `s^m e^{iβαs}` with `β = γ - 1 ≠ 0` integrates in
    /// closed form,
    /// `∫ s^m e^{cs} ds = e^{cs} Σ_{r=0}^{m} (-1)^r m!/(m-r)! s^{m-r} / c^{r+1}`
    /// with `c = iβα`; the resonant `β = 0` branch raises the power of `s`.
    /// The integration constant lands on the `γ = 1` term.
    pub fn solve_rotating(&self) -> Self {
        let zero = C::Scalar::zero();
        let one = C::Scalar::one();
        let mut out = ExpPoly::zero(self.alpha);
        let mut at_zero = C::zero();
        for (&gamma, poly) in &self.terms {
            let beta = gamma - 1;
            if beta == 0 {
                let mut raised = vec![C::zero(); poly.len() + 1];
                for (m, c) in poly.iter().enumerate() {
                    raised[m + 1] = c.scale(Cx::new(one / C::Scalar::of((m + 1) as f64), zero));
                }
                out.add_poly(1, &raised);
                continue;
            }
            let rate = Cx::new(zero, C::Scalar::of(beta as f64) * self.alpha);
            let inv_rate = rate.inv();
            let mut anti = vec![C::zero(); poly.len()];
            for (m, c) in poly.iter().enumerate() {
                // falling factorial m!/(m-r)! and (1/c)^{r+1}, built up in r
                let mut factor = inv_rate;
                let mut falling = one;
                for r in 0..=m {
                    if r > 0 {
                        falling *= C::Scalar::of((m - r + 1) as f64);
                        factor *= -inv_rate;
                    }
                    let term = c.scale(factor * Cx::new(falling, zero));
                    anti[m - r] = anti[m - r].plus(&term);
                    if r == m {
                        at_zero = at_zero.plus(&term);
                    }
                }
            }
            out.add_poly(gamma, &anti);
        }
        out.add_poly(1, &[at_zero.negated()]);
        out.normalized()
    }

    /// Largest coefficientwise difference, terms missing on one side read as
    /// zero.
    pub fn max_abs_diff(&self, other: &Self) -> C::Scalar {
        self.minus(other).max_abs()
    }
}

/// Solves `φ' = iαφ + a·e^{i(j-k)αt} + b(t)`, `φ(0) = 0`.
pub fn integrate_twisted<C: Coeff>(b: &ExpPoly<C>, a: &C, j: u32, k: u32) -> ExpPoly<C> {
    let gamma = j as i32 - k as i32;
    let forcing = b.plus(&ExpPoly::exp(b.alpha, gamma, a.clone()));
    forcing.solve_rotating()
}

impl<C: Coeff> Ring for ExpPoly<C> {
    type Scalar = C::Scalar;

    fn plus(&self, other: &Self) -> Self {
        debug_assert!((self.alpha - other.alpha).abs() <= C::Scalar::epsilon() * C::Scalar::of(16.0));
        let mut out = self.clone();
        for (&g, p) in &other.terms {
            out.add_poly(g, p);
        }
        out.normalized()
    }

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    fn times(&self, other: &Self) -> Self {
        let mut out = ExpPoly::zero(self.alpha);
        for (&g1, p1) in &self.terms {
            for (&g2, p2) in &other.terms {
                let mut prod = vec![C::zero(); p1.len() + p2.len() - 1];
                for (m1, c1) in p1.iter().enumerate() {
                    for (m2, c2) in p2.iter().enumerate() {
                        prod[m1 + m2] = prod[m1 + m2].plus(&c1.times(c2));
                    }
                }
                out.add_poly(g1 + g2, &prod);
            }
        }
        out.normalized()
    }

    fn negated(&self) -> Self {
        ExpPoly {
            alpha: self.alpha,
            terms: self
                .terms
                .iter()
                .map(|(g, p)| (*g, p.iter().map(|c| c.negated()).collect()))
                .collect(),
        }
    }

    /// `conj(P_γ(t) e^{iγαt}) = conj(P_γ)(t) e^{-iγαt}` for real `t`.
    fn conjugate(&self) -> Self {
        ExpPoly {
            alpha: self.alpha,
            terms: self
                .terms
                .iter()
                .map(|(g, p)| (-*g, p.iter().map(|c| c.conjugate()).collect()))
                .collect(),
        }
    }

    fn max_abs(&self) -> C::Scalar {
        self.terms
            .values()
            .flat_map(|p| p.iter())
            .fold(C::Scalar::zero(), |acc, c| acc.max(c.max_abs()))
    }
}
