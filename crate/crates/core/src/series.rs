//! Truncated power series in the two conjugate variables `z` and `z̄`.
//!
//! A [`Series`] stores coefficients sparsely by exponent pair `(j, k)` of the
//! monomial `z^j z̄^k` and carries a truncation degree: every operation drops
//! terms of total degree `j + k` above it. The coefficient type is any
//! [`Ring`], so the same code multiplies plain complex jets and jets whose
//! coefficients are exponential polynomials in time.

use std::collections::BTreeMap;

use num_traits::{Float, One, Zero};

use crate::scalar::{Coeff, Cx, Real, Ring};

/// Exponent pair `(j, k)` of the monomial `z^j z̄^k`.
pub type Monomial = (u32, u32);

/// Monomials of total degree `lo..=hi` in graded order: by total degree,
/// then by `j` descending.
pub fn graded_monomials(lo: u32, hi: u32) -> impl Iterator<Item = Monomial> {
    (lo..=hi).flat_map(|level| (0..=level).rev().map(move |j| (j, level - j)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series<R> {
    degree: u32,
    terms: BTreeMap<Monomial, R>,
}

impl<R: Ring> Series<R> {
    pub fn new(degree: u32) -> Self {
        Series {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a series from `(monomial, coefficient)` pairs, silently
    /// dropping anything above `degree`. Repeated monomials are summed.
    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = (Monomial, R)>) -> Self {
        let mut s = Series::new(degree);
        for (m, c) in terms {
            s.accumulate(m, &c);
        }
        s
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn get(&self, m: Monomial) -> Option<&R> {
        self.terms.get(&m)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sets a coefficient; ignored when `j + k` exceeds the truncation degree.
    pub fn insert(&mut self, m: Monomial, c: R) {
        if m.0 + m.1 <= self.degree {
            self.terms.insert(m, c);
        }
    }

    /// Adds `c` to the coefficient of `m`.
    pub fn accumulate(&mut self, m: Monomial, c: &R) {
        if m.0 + m.1 > self.degree {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => *slot = slot.plus(c),
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// Same series, truncated at a (possibly lower) degree.
    pub fn truncated(&self, degree: u32) -> Self {
        Series {
            degree: degree.min(self.degree),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0 + m.1 <= degree)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Coefficients of total degree exactly `level`.
    pub fn level(&self, level: u32) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter().filter(move |(m, _)| m.0 + m.1 == level)
    }

    pub fn add(&self, other: &Self) -> Self {
        let degree = self.degree.min(other.degree);
        let mut out = self.truncated(degree);
        for (m, c) in &other.terms {
            out.accumulate(*m, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Series {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, c.negated())).collect(),
        }
    }

    /// Truncated Cauchy product; terms of total degree above `degree` are
    /// never formed.
    pub fn mul(&self, other: &Self, degree: u32) -> Self {
        let mut out = Series::new(degree);
        for (&(j1, k1), a) in &self.terms {
            let d1 = j1 + k1;
            if d1 > degree {
                continue;
            }
            for (&(j2, k2), b) in &other.terms {
                if d1 + j2 + k2 > degree {
                    continue;
                }
                out.accumulate((j1 + j2, k1 + k2), &a.times(b));
            }
        }
        out
    }

    /// The part of `self * other` of total degree exactly `level`.
    pub fn mul_level(&self, other: &Self, level: u32) -> BTreeMap<Monomial, R> {
        let mut out: BTreeMap<Monomial, R> = BTreeMap::new();
        for (&(j1, k1), a) in &self.terms {
            let d1 = j1 + k1;
            if d1 > level {
                continue;
            }
            for (&(j2, k2), b) in &other.terms {
                if d1 + j2 + k2 != level {
                    continue;
                }
                let key = (j1 + j2, k1 + k2);
                let p = a.times(b);
                match out.get_mut(&key) {
                    Some(slot) => *slot = slot.plus(&p),
                    None => {
                        out.insert(key, p);
                    }
                }
            }
        }
        out
    }

    /// Conjugate series: `(j, k) ↦ conj` at `(k, j)`.
    pub fn conj(&self) -> Self {
        Series {
            degree: self.degree,
            terms: self.terms.iter().map(|(&(j, k), c)| ((k, j), c.conjugate())).collect(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn times_coeff(&self, c: &R) -> Self {
        Series {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (*m, c.times(v))).collect(),
        }
    }

    /// Largest coefficientwise distance to `other`, missing keys read as zero.
    pub fn max_abs_diff(&self, other: &Self) -> R::Scalar {
        let mut worst = R::Scalar::zero();
        for (m, c) in &self.terms {
            let d = match other.terms.get(m) {
                Some(o) => c.minus(o).max_abs(),
                None => c.max_abs(),
            };
            worst = worst.max(d);
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.max_abs());
            }
        }
        worst
    }
}

impl<R: Coeff> Series<R> {
    /// The constant series `1`.
    pub fn one(degree: u32) -> Self {
        let one = R::from_complex(Cx::new(R::Scalar::one(), R::Scalar::zero()));
        Series::from_terms(degree, [((0, 0), one)])
    }

    /// `self^e`, truncated at `degree`.
    pub fn pow(&self, e: u32, degree: u32) -> Self {
        let mut acc = Series::one(degree);
        for _ in 0..e {
            acc = acc.mul(self, degree);
        }
        acc
    }

    /// Successive powers `self^0, …, self^max`, truncated at `degree`.
    pub fn powers(&self, max: u32, degree: u32) -> Vec<Self> {
        let mut out = Vec::with_capacity(max as usize + 1);
        out.push(Series::one(degree));
        for e in 1..=max {
            let next = out[e as usize - 1].mul(self, degree);
            out.push(next);
        }
        out
    }

    /// `self(inner, conj(inner))` truncated at `degree`.
    ///
    /// `inner` should have no constant term; otherwise low-degree terms of
    /// the result also collect contributions from every power.
    pub fn compose(&self, inner: &Self, degree: u32) -> Self {
        let inner_bar = inner.conj();
        let max_j = self.terms.keys().map(|m| m.0).max().unwrap_or(0);
        let max_k = self.terms.keys().map(|m| m.1).max().unwrap_or(0);
        let p = inner.powers(max_j, degree);
        let q = inner_bar.powers(max_k, degree);
        let mut out = Series::new(degree);
        for (&(j, k), c) in &self.terms {
            let term = p[j as usize].mul(&q[k as usize], degree);
            for (m, v) in term.terms() {
                out.accumulate(*m, &c.times(v));
            }
        }
        out
    }
}

impl<T: Real> Series<Cx<T>> {
    /// Evaluates `Σ c_{j,k} z^j z̄^k`.
    pub fn eval(&self, z: Cx<T>) -> Cx<T> {
        let zb = z.conj();
        let mut acc = Cx::new(T::zero(), T::zero());
        for (&(j, k), c) in &self.terms {
            acc += *c * z.powu(j) * zb.powu(k);
        }
        acc
    }
}
