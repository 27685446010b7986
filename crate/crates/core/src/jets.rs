//! Jets of planar maps and vector fields in complex coordinates.
//!
//! A map jet is `F(z, z̄) = e^{iα} z + Σ_{2 ≤ j+k ≤ n} f_{j,k} z^j z̄^k`; a
//! field jet is `X(z, z̄) = iα z + Σ a_{j,k} z^j z̄^k`. The linear part is
//! implied by `alpha` and never stored as a coefficient.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{cis, reduce_angle, Cx, Real};
use crate::series::{graded_monomials, Monomial, Series};

/// Two coefficient sets are equal when every coefficient (missing keys read
/// as zero) agrees to this absolute tolerance.
pub const EQ_TOL: f64 = 1e-12;

/// Rotations closer than this to `0 (mod 2π)` are treated as zero.
pub const ROTATION_TOL: f64 = 1e-12;

/// Operations shared by [`MapJet`] and [`VectorFieldJet`].
pub trait Jet<T: Real>: Sized + Clone {
    fn alpha(&self) -> T;
    fn degree(&self) -> u32;
    fn coeffs(&self) -> &BTreeMap<Monomial, Cx<T>>;
    /// Coefficient of `z` in the linear part.
    fn linear_coefficient(&self) -> Cx<T>;
    fn from_parts(alpha: T, degree: u32, coeffs: BTreeMap<Monomial, Cx<T>>) -> Result<Self>;

    /// `f_{j,k}` (or `a_{j,k}`), zero when absent.
    fn coeff(&self, m: Monomial) -> Cx<T> {
        self.coeffs().get(&m).copied().unwrap_or_default()
    }

    /// Full series including the linear term.
    fn to_series(&self) -> Series<Cx<T>> {
        let mut s = Series::from_terms(self.degree(), self.coeffs().iter().map(|(m, c)| (*m, *c)));
        s.insert((1, 0), self.linear_coefficient());
        s
    }

    fn eval(&self, z: Cx<T>) -> Cx<T> {
        let zb = z.conj();
        let mut acc = self.linear_coefficient() * z;
        for (&(j, k), c) in self.coeffs() {
            acc += *c * z.powu(j) * zb.powu(k);
        }
        acc
    }

    /// Same jet truncated (or zero-extended) to `degree`.
    fn with_degree(&self, degree: u32) -> Result<Self> {
        let coeffs = self
            .coeffs()
            .iter()
            .filter(|(m, _)| m.0 + m.1 <= degree)
            .map(|(m, c)| (*m, *c))
            .collect();
        Self::from_parts(self.alpha(), degree, coeffs)
    }

    /// Largest coefficient difference; missing keys read as zero.
    fn max_coeff_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for m in self.coeffs().keys().chain(other.coeffs().keys()) {
            worst = worst.max((self.coeff(*m) - other.coeff(*m)).norm());
        }
        worst
    }

    /// Equal rotation and coefficients up to [`EQ_TOL`].
    fn approx_eq(&self, other: &Self) -> bool {
        let tol = T::of(EQ_TOL);
        (self.alpha() - other.alpha()).abs() <= tol && self.max_coeff_diff(other) <= tol
    }
}

fn validate_coeffs<T: Real>(degree: u32, coeffs: &BTreeMap<Monomial, Cx<T>>) -> Result<()> {
    if degree < 1 {
        return Err(Error::InvalidJet("degree must be at least 1".into()));
    }
    for (&(j, k), c) in coeffs {
        if j + k < 2 || j + k > degree {
            return Err(Error::InvalidJet(format!(
                "coefficient ({j},{k}) outside 2 <= j+k <= {degree}"
            )));
        }
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::InvalidJet(format!("coefficient ({j},{k}) is not finite")));
        }
    }
    Ok(())
}

/// Jet of a planar map with an elliptic fixed point at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct MapJet<T: Real> {
    alpha: T,
    degree: u32,
    coeffs: BTreeMap<Monomial, Cx<T>>,
}

impl<T: Real> MapJet<T> {
    /// `alpha` must lie strictly inside `(0, 2π)`.
    pub fn new(alpha: T, degree: u32, coeffs: impl IntoIterator<Item = (Monomial, Cx<T>)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (m, c) in coeffs {
            if map.insert(m, c).is_some() {
                return Err(Error::InvalidJet(format!("duplicate coefficient ({},{})", m.0, m.1)));
            }
        }
        Self::from_parts(alpha, degree, map)
    }

    /// `e^{iα} z`.
    pub fn rotation(alpha: T, degree: u32) -> Result<Self> {
        Self::new(alpha, degree, [])
    }

    /// `ω = e^{iα}`.
    pub fn multiplier(&self) -> Cx<T> {
        cis(self.alpha)
    }

    /// Reads the jet off a full series whose linear term is `e^{iα} z`;
    /// constant and linear entries of the series are not stored.
    pub(crate) fn from_series(alpha: T, degree: u32, s: &Series<Cx<T>>) -> Result<Self> {
        let coeffs = s
            .terms()
            .filter(|(m, _)| m.0 + m.1 >= 2 && m.0 + m.1 <= degree)
            .map(|(m, c)| (*m, *c))
            .collect();
        Self::from_parts(alpha, degree, coeffs)
    }
}

impl<T: Real> Jet<T> for MapJet<T> {
    fn alpha(&self) -> T {
        self.alpha
    }
    fn degree(&self) -> u32 {
        self.degree
    }
    fn coeffs(&self) -> &BTreeMap<Monomial, Cx<T>> {
        &self.coeffs
    }
    fn linear_coefficient(&self) -> Cx<T> {
        cis(self.alpha)
    }
    fn from_parts(alpha: T, degree: u32, coeffs: BTreeMap<Monomial, Cx<T>>) -> Result<Self> {
        if !(alpha.is_finite() && alpha > T::zero() && alpha < T::two_pi()) {
            return Err(Error::InvalidJet(format!("map rotation {alpha} not in (0, 2π)")));
        }
        validate_coeffs(degree, &coeffs)?;
        Ok(MapJet { alpha, degree, coeffs })
    }
}

/// Jet of a planar vector field with linear part `iα z`.
///
/// `alpha` may be negative (time-reversed fields); it must be nonzero and
/// satisfy `|α| < 2π`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFieldJet<T: Real> {
    alpha: T,
    degree: u32,
    coeffs: BTreeMap<Monomial, Cx<T>>,
}

impl<T: Real> VectorFieldJet<T> {
    pub fn new(alpha: T, degree: u32, coeffs: impl IntoIterator<Item = (Monomial, Cx<T>)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (m, c) in coeffs {
            if map.insert(m, c).is_some() {
                return Err(Error::InvalidJet(format!("duplicate coefficient ({},{})", m.0, m.1)));
            }
        }
        Self::from_parts(alpha, degree, map)
    }

    /// `iα z`.
    pub fn rotation(alpha: T, degree: u32) -> Result<Self> {
        Self::new(alpha, degree, [])
    }

    /// `-X`: same orbits traversed backwards.
    pub fn negated(&self) -> Self {
        VectorFieldJet {
            alpha: -self.alpha,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, -*c)).collect(),
        }
    }

    /// Evaluates the field as a planar real vector `(ẋ, ẏ)`.
    #[inline]
    pub fn velocity(&self, x: T, y: T) -> [T; 2] {
        let v = self.eval(Cx::new(x, y));
        [v.re, v.im]
    }
}

impl<T: Real> Jet<T> for VectorFieldJet<T> {
    fn alpha(&self) -> T {
        self.alpha
    }
    fn degree(&self) -> u32 {
        self.degree
    }
    fn coeffs(&self) -> &BTreeMap<Monomial, Cx<T>> {
        &self.coeffs
    }
    fn linear_coefficient(&self) -> Cx<T> {
        Cx::new(T::zero(), self.alpha)
    }
    fn from_parts(alpha: T, degree: u32, coeffs: BTreeMap<Monomial, Cx<T>>) -> Result<Self> {
        if !(alpha.is_finite() && alpha != T::zero() && alpha.abs() < T::two_pi()) {
            return Err(Error::InvalidJet(format!("field rotation {alpha} not in (-2π, 2π) \\ {{0}}")));
        }
        validate_coeffs(degree, &coeffs)?;
        Ok(VectorFieldJet { alpha, degree, coeffs })
    }
}

/// Coefficientwise sum truncated at `n`.
pub fn jet_add<T: Real, J: Jet<T>>(a: &J, b: &J, n: u32) -> Result<J> {
    if (a.alpha() - b.alpha()).abs() > T::of(EQ_TOL) {
        return Err(Error::IncompatibleRotation(a.alpha().as_f64(), b.alpha().as_f64()));
    }
    let mut coeffs: BTreeMap<Monomial, Cx<T>> = BTreeMap::new();
    for (m, c) in a.coeffs().iter().chain(b.coeffs()) {
        if m.0 + m.1 <= n {
            *coeffs.entry(*m).or_default() += *c;
        }
    }
    J::from_parts(a.alpha(), n, coeffs)
}

/// Truncated product of two series (see [`Series::mul`]).
pub fn jet_mul<T: Real>(a: &Series<Cx<T>>, b: &Series<Cx<T>>, n: u32) -> Series<Cx<T>> {
    a.mul(b, n)
}

/// `conj(F)` as a series in `(z, z̄)`: its linear part is `e^{-iα} z̄`.
pub fn jet_conjugate<T: Real>(a: &MapJet<T>, n: u32) -> Series<Cx<T>> {
    a.to_series().truncated(n).conj()
}

/// Jet of `outer ∘ inner`, i.e. `outer(inner, conj(inner))`, truncated at `n`.
pub fn jet_compose<T: Real>(outer: &MapJet<T>, inner: &MapJet<T>, n: u32) -> Result<MapJet<T>> {
    let alpha = reduce_angle(outer.alpha() + inner.alpha());
    let tol = T::of(ROTATION_TOL);
    if alpha < tol || alpha > T::two_pi() - tol {
        return Err(Error::CompositionNotElliptic);
    }
    let s = outer.to_series().compose(&inner.to_series(), n);
    MapJet::from_series(alpha, n, &s)
}

/// `F(z)` (resp. `X(z)`).
pub fn jet_eval<T: Real, J: Jet<T>>(a: &J, z: Cx<T>) -> Cx<T> {
    a.eval(z)
}

/// Coefficients in graded order (level, then `j` descending); used for
/// deterministic output.
pub fn graded_coeffs<T: Real, J: Jet<T>>(a: &J) -> Vec<(Monomial, Cx<T>)> {
    graded_monomials(2, a.degree())
        .filter_map(|m| a.coeffs().get(&m).map(|c| (m, *c)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::cx;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Cx<f64> {
        cx(re, im)
    }

    #[test]
    fn add_linear_and_identity() {
        let a = MapJet::new(1.0, 2, [((2, 0), c(1.0, 0.0))]).unwrap();
        let b = MapJet::new(1.0, 2, [((2, 0), c(2.0, 0.0))]).unwrap();
        let s = jet_add(&a, &b, 2).unwrap();
        assert_eq!(s.coeff((2, 0)), c(3.0, 0.0));
        let zero = MapJet::rotation(1.0, 2).unwrap();
        assert!(jet_add(&a, &zero, 2).unwrap().approx_eq(&a));
    }

    #[test]
    fn add_rejects_mismatched_rotation() {
        let a = MapJet::<f64>::rotation(1.0, 2).unwrap();
        let b = MapJet::<f64>::rotation(1.5, 2).unwrap();
        assert!(matches!(jet_add(&a, &b, 2), Err(Error::IncompatibleRotation(..))));
    }

    #[test]
    fn invalid_shapes_rejected() {
        assert!(MapJet::new(1.0, 2, [((1, 0), c(1.0, 0.0))]).is_err());
        assert!(MapJet::new(1.0, 2, [((2, 1), c(1.0, 0.0))]).is_err());
        assert!(MapJet::<f64>::rotation(0.0, 2).is_err());
        assert!(MapJet::<f64>::rotation(2.0 * PI, 2).is_err());
        assert!(MapJet::new(1.0, 3, [((2, 0), c(f64::NAN, 0.0))]).is_err());
        assert!(VectorFieldJet::<f64>::rotation(-1.0, 3).is_ok());
        assert!(VectorFieldJet::<f64>::rotation(0.0, 3).is_err());
    }

    #[test]
    fn conjugate_of_simple_jet() {
        // conj(iz + z²) = -i z̄ + z̄²
        let a = MapJet::new(FRAC_PI_2, 2, [((2, 0), c(1.0, 0.0))]).unwrap();
        let s = jet_conjugate(&a, 2);
        assert!((s.get((0, 1)).copied().unwrap() - c(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(s.get((0, 2)).copied(), Some(c(1.0, 0.0)));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn compose_rotations() {
        let a = MapJet::<f64>::rotation(0.4, 3).unwrap();
        let b = MapJet::<f64>::rotation(1.1, 3).unwrap();
        let ab = jet_compose(&a, &b, 3).unwrap();
        assert!((ab.alpha() - 1.5).abs() < 1e-15);
        assert!(ab.coeffs().is_empty());
    }

    #[test]
    fn compose_rejects_full_turn() {
        let a = MapJet::<f64>::rotation(PI, 3).unwrap();
        assert!(matches!(jet_compose(&a, &a, 3), Err(Error::CompositionNotElliptic)));
    }

    #[test]
    fn eval_at_origin_and_f1() {
        let f1 = catalog::f1::<f64>();
        assert_eq!(f1.eval(c(0.0, 0.0)), c(0.0, 0.0));
        // i(0.1) + (1-3i)(0.01) + 0.01 = 0.02 + 0.07i
        let v = f1.eval(c(0.1, 0.0));
        assert!((v - c(0.02, 0.07)).norm() < 1e-15);
        let rot = MapJet::<f64>::rotation(0.9, 3).unwrap();
        let z = c(0.03, -0.02);
        assert!((rot.eval(z) - cis(0.9) * z).norm() < 1e-16);
    }

    #[test]
    fn compose_vs_pointwise_fit_order_four() {
        let f1 = catalog::f1::<f64>();
        let f2 = catalog::f2::<f64>();
        let g = jet_compose(&f2, &f1, 3).unwrap();
        let mut pts = Vec::new();
        for e in 0..=4 {
            let r = 1e-3 * 10f64.powf(e as f64 / 4.0);
            let mut worst: f64 = 0.0;
            for p in 0..8 {
                let z = cis(0.3 + p as f64 * PI / 4.0) * r;
                worst = worst.max((g.eval(z) - f2.eval(f1.eval(z))).norm());
            }
            pts.push((r.ln(), worst.ln()));
        }
        let slope = crate::fit::slope(&pts);
        assert!(slope > 3.7, "slope {slope}");
    }

    fn arb_quadratic() -> impl Strategy<Value = MapJet<f64>> {
        (0.1f64..3.0, prop::array::uniform6(-1.0f64..1.0)).prop_map(|(alpha, v)| {
            MapJet::new(
                alpha,
                2,
                [((2, 0), c(v[0], v[1])), ((1, 1), c(v[2], v[3])), ((0, 2), c(v[4], v[5]))],
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn add_commutes(a in arb_quadratic(), b in arb_quadratic()) {
            let b = MapJet::from_parts(a.alpha(), 2, b.coeffs().clone()).unwrap();
            let ab = jet_add(&a, &b, 2).unwrap();
            let ba = jet_add(&b, &a, 2).unwrap();
            for m in graded_monomials(2, 2) {
                prop_assert_eq!(ab.coeff(m), ba.coeff(m));
            }
        }

        #[test]
        fn compose_quadratics_residual_quartic(f in arb_quadratic(), g in arb_quadratic()) {
            prop_assume!(reduce_angle(f.alpha() + g.alpha()) > 1e-3);
            let h = jet_compose(&g, &f, 3).unwrap();
            prop_assert!(h.coeffs().keys().all(|m| m.0 + m.1 <= 3));
            let r = 1e-3;
            for p in 0..6 {
                let z = cis(p as f64) * r;
                let direct = g.eval(f.eval(z));
                // coefficients are O(1), so the dropped quartic terms are
                // bounded by a modest multiple of r^4
                prop_assert!((h.eval(z) - direct).norm() < 100.0 * r.powi(4));
            }
        }
    }
}
