//! Polynomials in free parameters and their complex conjugates.
//!
//! When a resonant coefficient of the inverse problem is left free, every
//! later coefficient becomes a function of that parameter `p` and, through
//! conjugated flow terms, of `p̄`. Those functions are polynomials, so the
//! solver carries them exactly: free slot number `s` owns the two
//! indeterminates `2s` (for `p_s`) and `2s + 1` (for `p̄_s`).

use std::collections::BTreeMap;

use crate::scalar::{Coeff, Cx, Real, Ring};

/// Drop threshold for coefficients produced by arithmetic.
const PRUNE: f64 = 1e-15;

/// Exponent vector over the indeterminates, with trailing zeros trimmed so
/// that equal monomials compare equal regardless of how many parameters
/// exist.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ParamMonomial(Vec<u8>);

impl ParamMonomial {
    pub fn constant() -> Self {
        ParamMonomial(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        let mut v = vec![0u8; index + 1];
        v[index] = 1;
        ParamMonomial(v)
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![0u8; n];
        for (i, slot) in v.iter_mut().enumerate() {
            *slot = self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0);
        }
        ParamMonomial(v)
    }

    /// Swaps each `p_s` with `p̄_s`.
    fn conj(&self) -> Self {
        let n = self.0.len() + (self.0.len() & 1);
        let mut v = vec![0u8; n];
        for (i, &e) in self.0.iter().enumerate() {
            v[i ^ 1] = e;
        }
        while v.last() == Some(&0) {
            v.pop();
        }
        ParamMonomial(v)
    }
}

/// Sparse polynomial with complex coefficients in parameters `p_s, p̄_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamPoly<T: Real> {
    terms: BTreeMap<ParamMonomial, Cx<T>>,
}

impl<T: Real> ParamPoly<T> {
    pub fn constant(c: Cx<T>) -> Self {
        let mut terms = BTreeMap::new();
        if c.norm() > T::zero() {
            terms.insert(ParamMonomial::constant(), c);
        }
        ParamPoly { terms }
    }

    /// The free parameter of slot `s`.
    pub fn parameter(slot: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ParamMonomial::var(2 * slot), Cx::new(T::one(), T::zero()));
        ParamPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &Cx<T>)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> Cx<T> {
        self.terms.get(&ParamMonomial::constant()).copied().unwrap_or_default()
    }

    /// True when no monomial other than the constant one is present.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_constant())
    }

    /// Substitutes values for the free parameters (`values[s]` for `p_s`).
    /// Parameters beyond `values` are read as zero.
    pub fn eval(&self, values: &[Cx<T>]) -> Cx<T> {
        let mut acc = Cx::new(T::zero(), T::zero());
        for (m, c) in &self.terms {
            let mut term = *c;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = values.get(i / 2).copied().unwrap_or_default();
                let v = if i % 2 == 0 { v } else { v.conj() };
                term *= v.powu(e as u32);
            }
            acc += term;
        }
        acc
    }

    /// First monomial (constant first) whose coefficient reaches `tol`.
    pub fn first_significant(&self, tol: T) -> Option<(&ParamMonomial, Cx<T>)> {
        self.terms.iter().find(|(_, c)| c.norm() >= tol).map(|(m, c)| (m, *c))
    }

    fn pruned(mut self) -> Self {
        let tol = T::of(PRUNE);
        self.terms.retain(|_, c| c.norm() >= tol);
        self
    }
}

impl<T: Real> Ring for ParamPoly<T> {
    type Scalar = T;

    fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_default() += *c;
        }
        ParamPoly { terms }.pruned()
    }

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    fn times(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<ParamMonomial, Cx<T>> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *terms.entry(m1.mul(m2)).or_default() += *c1 * *c2;
            }
        }
        ParamPoly { terms }.pruned()
    }

    fn negated(&self) -> Self {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -*c)).collect(),
        }
    }

    fn conjugate(&self) -> Self {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect(),
        }
    }

    fn max_abs(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, c| acc.max(c.norm()))
    }
}

impl<T: Real> Coeff for ParamPoly<T> {
    fn from_complex(c: Cx<T>) -> Self {
        ParamPoly::constant(c)
    }

    fn scale(&self, c: Cx<T>) -> Self {
        ParamPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), *v * c)).collect(),
        }
        .pruned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn modulus_squared_of_parameter() {
        let p = ParamPoly::<f64>::parameter(0);
        let m = p.times(&p.conjugate());
        let v = cx(1.5, -2.0);
        assert!((m.eval(&[v]) - cx(v.norm_sqr(), 0.0)).norm() < 1e-14);
        // |p|^2 is real, so it is its own conjugate.
        assert_eq!(m.conjugate(), m);
    }

    #[test]
    fn conj_matches_pointwise() {
        let p0 = ParamPoly::<f64>::parameter(0);
        let p1 = ParamPoly::<f64>::parameter(1);
        let poly = p0
            .times(&p1.conjugate())
            .scale(cx(0.3, 0.7))
            .plus(&ParamPoly::constant(cx(2.0, -1.0)))
            .plus(&p1.times(&p1).scale(cx(-1.0, 0.25)));
        let vals = [cx(0.4, -0.9), cx(-1.1, 0.2)];
        let lhs = poly.conjugate().eval(&vals);
        let rhs = poly.eval(&vals).conj();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn cancellation_prunes() {
        let p = ParamPoly::<f64>::parameter(2);
        let z = p.minus(&p);
        assert_eq!(z.max_abs(), 0.0);
        assert!(z.first_significant(1e-9).is_none());
        assert!(z.is_constant());
    }
}
