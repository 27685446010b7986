//! Forward problem: the exact jet of the time-`t` flow of a polynomial field.
//!
//! Writing the flow as `φ(t; z, z̄) = e^{iαt} z + Σ φ_{j,k}(t) z^j z̄^k` and
//! substituting into `ż = X(z, z̄)`, each coefficient obeys
//!
//! ```text
//! φ'_{j,k} = iα φ_{j,k} + a_{j,k} e^{i(j-k)αt} + b_{j,k}(t),   φ_{j,k}(0) = 0,
//! ```
//!
//! where `b_{j,k}` is the `(j,k)` coefficient of `Σ a_{ℓ,m} φ^ℓ φ̄^m` built
//! from coefficients of strictly lower total degree. The recursion is solved
//! level by level in closed form with [`ExpPoly`] arithmetic.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exppoly::{integrate_twisted, ExpPoly};
use crate::jets::{Jet, MapJet, VectorFieldJet, ROTATION_TOL};
use crate::ode::{Rkf78, Tolerance};
use crate::scalar::{reduce_angle, Coeff, Cx, Real, Ring};
use crate::series::{graded_monomials, Monomial, Series};

/// Absolute and relative tolerance of the numeric flow oracle.
pub const ORACLE_TOL: f64 = 1e-12;

/// Largest admissible `|z0|` for the numeric oracle.
pub const ORACLE_MAX_RADIUS: f64 = 0.1;

/// Flow jet with coefficients `φ_{j,k}(t)` as exponential polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowJet<T: Real> {
    alpha: T,
    degree: u32,
    coeffs: BTreeMap<Monomial, ExpPoly<Cx<T>>>,
}

impl<T: Real> FlowJet<T> {
    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Monomial, ExpPoly<Cx<T>>> {
        &self.coeffs
    }

    /// `φ_{j,k}`, or `None` when it vanishes identically.
    pub fn coeff(&self, m: Monomial) -> Option<&ExpPoly<Cx<T>>> {
        self.coeffs.get(&m)
    }
}

/// Splits `max` into the powers `base^1, …, base^max` (index 0 stands for
/// the constant `1`, which has no `ExpPoly` representative without `α`).
fn powers<C: Coeff>(base: &Series<ExpPoly<C>>, max: u32, degree: u32) -> Vec<Option<Series<ExpPoly<C>>>> {
    let mut out: Vec<Option<Series<ExpPoly<C>>>> = vec![None];
    for e in 1..=max {
        let next = match &out[e as usize - 1] {
            None => base.truncated(degree),
            Some(prev) => prev.mul(base, degree),
        };
        out.push(Some(next));
    }
    out
}

/// The forcings `b_{j,k}` for every `(j,k)` of total degree `level`.
///
/// `field` holds the nonlinear coefficients `a_{ℓ,m}`; only those of total
/// degree below `level` are used. `phis` must hold every nonzero `φ_{ℓ,m}`
/// with `ℓ + m < level`.
pub fn level_forcing<C: Coeff>(
    alpha: C::Scalar,
    field: &BTreeMap<Monomial, C>,
    phis: &BTreeMap<Monomial, ExpPoly<C>>,
    level: u32,
) -> BTreeMap<Monomial, ExpPoly<C>> {
    let one = C::from_complex(Cx::new(C::Scalar::one(), C::Scalar::zero()));
    let mut phi = Series::new(level);
    phi.insert((1, 0), ExpPoly::exp(alpha, 1, one));
    for (m, p) in phis {
        if m.0 + m.1 < level {
            phi.insert(*m, p.clone());
        }
    }
    let phi_bar = phi.conj();

    let active: Vec<(&Monomial, &C)> = field.iter().filter(|(m, _)| m.0 + m.1 >= 2 && m.0 + m.1 < level).collect();
    let max_l = active.iter().map(|(m, _)| m.0).max().unwrap_or(0);
    let max_m = active.iter().map(|(m, _)| m.1).max().unwrap_or(0);
    let p = powers(&phi, max_l, level);
    let q = powers(&phi_bar, max_m, level);

    let mut out: BTreeMap<Monomial, ExpPoly<C>> = BTreeMap::new();
    for (&(l, m), a) in active {
        let slice: BTreeMap<Monomial, ExpPoly<C>> = match (&p[l as usize], &q[m as usize]) {
            (Some(pl), Some(qm)) => pl.mul_level(qm, level),
            (Some(pl), None) => pl.level(level).map(|(k, v)| (*k, v.clone())).collect(),
            (None, Some(qm)) => qm.level(level).map(|(k, v)| (*k, v.clone())).collect(),
            (None, None) => BTreeMap::new(),
        };
        for (key, e) in slice {
            let term = e.times_scalar(a);
            match out.get_mut(&key) {
                Some(acc) => *acc = acc.plus(&term),
                None => {
                    out.insert(key, term);
                }
            }
        }
    }
    out.retain(|_, e| !e.is_zero());
    out
}

/// Closed-form flow jet of `field` through total degree `n`.
pub fn flow_expand<T: Real>(field: &VectorFieldJet<T>, n: u32) -> FlowJet<T> {
    let alpha = field.alpha();
    let coeffs: BTreeMap<Monomial, Cx<T>> = field.coeffs().clone();
    let mut phis: BTreeMap<Monomial, ExpPoly<Cx<T>>> = BTreeMap::new();
    for level in 2..=n {
        let forcing = level_forcing(alpha, &coeffs, &phis, level);
        for m in graded_monomials(level, level) {
            let a = coeffs.get(&m).copied().unwrap_or_default();
            let b = forcing.get(&m).cloned().unwrap_or_else(|| ExpPoly::zero(alpha));
            let phi = integrate_twisted(&b, &a, m.0, m.1);
            if !phi.is_zero() {
                phis.insert(m, phi);
            }
        }
    }
    FlowJet {
        alpha,
        degree: n,
        coeffs: phis,
    }
}

/// The time-`t` map jet: rotation `αt mod 2π`, coefficients `φ_{j,k}(t)`.
pub fn flow_at<T: Real>(fj: &FlowJet<T>, t: T) -> Result<MapJet<T>> {
    let rotation = reduce_angle(fj.alpha * t);
    let tol = T::of(ROTATION_TOL);
    if rotation < tol || rotation > T::two_pi() - tol {
        return Err(Error::NonEllipticTimeSlice {
            alpha: fj.alpha.as_f64(),
            t: t.as_f64(),
        });
    }
    MapJet::new(rotation, fj.degree, fj.coeffs.iter().map(|(m, e)| (*m, e.eval(t))))
}

/// `flow_at(flow_expand(field, n), 1)`.
pub fn time_one_map<T: Real>(field: &VectorFieldJet<T>, n: u32) -> Result<MapJet<T>> {
    flow_at(&flow_expand(field, n), T::one())
}

/// Integrates `ż = X(z, z̄)` numerically (as a planar real system) from each
/// sample to time `t`.
pub fn flow_numeric_oracle<T: Real>(field: &VectorFieldJet<T>, t: T, samples: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
    if t < T::zero() {
        return Err(Error::Usage("oracle time must be non-negative".into()));
    }
    let tol = T::of(ORACLE_TOL);
    let solver = Rkf78::new(Tolerance { abs: tol, rel: tol });
    let rhs = |_t: T, y: &[T; 2]| field.velocity(y[0], y[1]);
    samples
        .iter()
        .map(|z0| {
            if z0.norm() > T::of(ORACLE_MAX_RADIUS) {
                return Err(Error::Usage(format!(
                    "oracle sample |z0| = {} exceeds {ORACLE_MAX_RADIUS}",
                    z0.norm()
                )));
            }
            let failure = |reason: &str| Error::IntegrationFailure {
                re: z0.re.as_f64(),
                im: z0.im.as_f64(),
                reason: reason.to_string(),
            };
            let out = solver
                .integrate(&rhs, T::zero(), [z0.re, z0.im], t, T::of(0.05), |_| true)
                .map_err(|e| failure(e.reason))?;
            let (y, _) = out.finished().ok_or_else(|| failure("stopped"))?;
            Ok(Cx::new(y[0], y[1]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::jets::jet_compose;
    use crate::scalar::{cis, cx};
    use rand::{Rng, SeedableRng};

    fn random_field(rng: &mut impl Rng, degree: u32) -> VectorFieldJet<f64> {
        let alpha = rng.gen_range(0.2..6.0);
        let coeffs: Vec<_> = graded_monomials(2, degree)
            .map(|m| (m, cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        VectorFieldJet::new(alpha, degree, coeffs).unwrap()
    }

    #[test]
    fn rotation_field_has_trivial_flow() {
        let x = VectorFieldJet::<f64>::rotation(0.7, 4).unwrap();
        let fj = flow_expand(&x, 4);
        assert!(fj.coeffs().is_empty());
        let m = flow_at(&fj, 2.0).unwrap();
        assert!((m.alpha() - 1.4).abs() < 1e-15);
    }

    #[test]
    fn time_zero_is_rejected() {
        let fj = flow_expand(&catalog::x2::<f64>(), 3);
        assert!(matches!(flow_at(&fj, 0.0), Err(Error::NonEllipticTimeSlice { .. })));
    }

    #[test]
    fn x1_and_x2_realize_f1_and_f2() {
        for mu in [cx(0.0, 0.0), cx(1.0, 2.0)] {
            let g = time_one_map(&catalog::x1::<f64>(mu), 3).unwrap();
            assert!(g.max_coeff_diff(&catalog::f1()) < 1e-10, "mu = {mu}");
            assert!((g.alpha() - catalog::f1::<f64>().alpha()).abs() < 1e-15);
        }
        let g = time_one_map(&catalog::x2::<f64>(), 3).unwrap();
        assert!(g.max_coeff_diff(&catalog::f2()) < 1e-10);
    }

    #[test]
    fn initial_condition_and_ode_residual() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let x = random_field(&mut rng, 4);
            let fj = flow_expand(&x, 4);
            let mut phis = BTreeMap::new();
            for level in 2..=4 {
                let forcing = level_forcing(x.alpha(), x.coeffs(), &phis, level);
                for m in graded_monomials(level, level) {
                    let Some(phi) = fj.coeff(m) else { continue };
                    assert!(phi.eval(0.0).norm() < 1e-14);
                    let b = forcing.get(&m).cloned().unwrap_or_else(|| ExpPoly::zero(x.alpha()));
                    let rhs = phi
                        .scale(Cx::new(0.0, x.alpha()))
                        .plus(&b)
                        .plus(&ExpPoly::exp(x.alpha(), m.0 as i32 - m.1 as i32, x.coeff(m)));
                    assert!(phi.derivative().minus(&rhs).max_abs() < 1e-12, "{m:?}");
                }
                for m in graded_monomials(level, level) {
                    if let Some(p) = fj.coeff(m) {
                        phis.insert(m, p.clone());
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_trivial_cases() {
        let x = VectorFieldJet::<f64>::rotation(1.3, 3).unwrap();
        let out = flow_numeric_oracle(&x, 0.8, &[cx(0.05, 0.0), cx(0.0, 0.0)]).unwrap();
        assert!((out[0] - cis(1.3 * 0.8) * 0.05).norm() < 1e-11);
        assert_eq!(out[1], cx(0.0, 0.0));
        assert!(flow_numeric_oracle(&x, 1.0, &[cx(0.2, 0.0)]).is_err());
    }

    #[test]
    fn semigroup_through_jet_composition() {
        let x = catalog::x1::<f64>(cx(0.3, -0.1));
        let fj = flow_expand(&x, 3);
        let half = flow_at(&fj, 0.35).unwrap();
        let whole = flow_at(&fj, 0.7).unwrap();
        let composed = jet_compose(&half, &half, 3).unwrap();
        assert!(whole.max_coeff_diff(&composed) < 1e-10);
        // additivity with unequal times
        let a = flow_at(&fj, 0.25).unwrap();
        let b = flow_at(&fj, 0.45).unwrap();
        assert!(whole.max_coeff_diff(&jet_compose(&b, &a, 3).unwrap()) < 1e-10);
    }

    #[test]
    fn oracle_agreement_order() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let x = random_field(&mut rng, 3);
        let map = time_one_map(&x, 3).unwrap();
        let mut pts = Vec::new();
        for e in 0..=8 {
            let r = 0.08 * 10f64.powf(-(e as f64) / 4.0);
            let samples: Vec<_> = (0..6).map(|p| cis(0.4 + p as f64) * r).collect();
            let numeric = flow_numeric_oracle(&x, 1.0, &samples).unwrap();
            let worst = samples
                .iter()
                .zip(&numeric)
                .map(|(z, w)| (map.eval(*z) - *w).norm())
                .fold(0.0, f64::max);
            pts.push((r.ln(), worst.ln()));
        }
        let slope = crate::fit::slope(&pts);
        assert!(slope >= 3.7, "fitted exponent {slope}");
    }
}
