//! Scalar abstractions shared by every module.
//!
//! All of the algebra is written against [`Real`] so that it runs in `f64`
//! (the default, see the aliases at the crate root) or `f32`. Coefficient
//! arithmetic that has to work both on plain complex numbers and on
//! parameter-dependent polynomials goes through [`Ring`] and [`Coeff`].

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive, Zero};

/// Real scalar type: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal or tolerance into this type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite real")
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number with components `re`, `im` of type `T`.
pub type Cx<T> = Complex<T>;

#[inline]
pub fn cx<T: Real>(re: f64, im: f64) -> Cx<T> {
    Complex::new(T::of(re), T::of(im))
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Cx<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// `e^{iθ} - 1` for `θ = d·α`, accurate near multiples of `2π`.
///
/// The product and the reduction modulo `2π` are carried with an error term
/// so the small result keeps full relative precision.
pub fn cis_minus_one<T: Real>(alpha: T, d: i32) -> Cx<T> {
    let tau = T::two_pi();
    let tau_lo = T::of(std::f64::consts::TAU - tau.as_f64()) + T::of(2.4492935982947064e-16);
    let dd = T::of(d as f64);
    let p = alpha * dd;
    let e = alpha.mul_add(dd, -p);
    let k = (p / tau).round();
    let q = k * tau;
    let qe = k.mul_add(tau, -q);
    let r = (((p - q) - qe) + e) - k * tau_lo;
    let h = (r * T::of(0.5)).sin();
    Complex::new(-T::of(2.0) * h * h, r.sin())
}

/// `i`.
#[inline]
pub fn imag_unit<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::one())
}

/// Reduces an angle into `[0, 2π)`.
#[inline]
pub fn reduce_angle<T: Real>(theta: T) -> T {
    let r = theta % T::two_pi();
    if r < T::zero() {
        r + T::two_pi()
    } else {
        r
    }
}

/// Commutative ring operations on coefficients of truncated series.
///
/// The method names avoid the `std::ops` ones so that generic code never
/// meets an ambiguity with `Complex`'s own operator impls.
pub trait Ring: Clone + Debug {
    type Scalar: Real;

    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Complex conjugation, with `t` and all parameters treated as real
    /// (resp. paired with their conjugate variable).
    fn conjugate(&self) -> Self;
    /// Largest absolute value of any stored scalar.
    fn max_abs(&self) -> Self::Scalar;
}

/// A ring that also embeds the complex numbers.
pub trait Coeff: Ring {
    fn from_complex(c: Cx<Self::Scalar>) -> Self;
    fn scale(&self, c: Cx<Self::Scalar>) -> Self;

    fn zero() -> Self {
        Self::from_complex(Cx::new(Self::Scalar::zero(), Self::Scalar::zero()))
    }
}

impl<T: Real> Ring for Cx<T> {
    type Scalar = T;

    #[inline]
    fn plus(&self, other: &Self) -> Self {
        *self + *other
    }
    #[inline]
    fn minus(&self, other: &Self) -> Self {
        *self - *other
    }
    #[inline]
    fn times(&self, other: &Self) -> Self {
        *self * *other
    }
    #[inline]
    fn negated(&self) -> Self {
        -*self
    }
    #[inline]
    fn conjugate(&self) -> Self {
        self.conj()
    }
    #[inline]
    fn max_abs(&self) -> T {
        self.norm()
    }
}

impl<T: Real> Coeff for Cx<T> {
    #[inline]
    fn from_complex(c: Cx<T>) -> Self {
        c
    }
    #[inline]
    fn scale(&self, c: Cx<T>) -> Self {
        *self * c
    }
}

/// Integer power of a complex number by repeated squaring (negative
/// exponents allowed).
pub fn powi<T: Real>(base: Cx<T>, exp: i32) -> Cx<T> {
    let mut acc = Cx::new(T::one(), T::zero());
    let mut b = if exp < 0 { base.inv() } else { base };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b = b * b;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_angle_wraps_both_signs() {
        let tau = std::f64::consts::TAU;
        assert!((reduce_angle(-std::f64::consts::FRAC_PI_2) - 1.5 * std::f64::consts::PI).abs() < 1e-15);
        assert!((reduce_angle(tau + 1.0) - 1.0).abs() < 1e-15);
        assert_eq!(reduce_angle(0.0f64), 0.0);
    }

    #[test]
    fn cis_minus_one_near_resonance() {
        let tau = std::f64::consts::TAU;
        // 3α - 2π ≈ 3e-6; reference from 50-digit arithmetic
        let alpha = tau / 3.0 + 1e-6;
        let got = cis_minus_one(alpha, 3);
        assert!((got.im - 2.9999999997258155e-06).abs() < 1e-20, "{got}");
        assert!((got.re + 4.499999999187571e-12).abs() < 1e-25, "{got}");
        for d in [-3, -1, 1, 2, 5] {
            assert!((cis_minus_one(0.7f64, d) - (cis(0.7 * d as f64) - 1.0)).norm() < 1e-15);
        }
        assert_eq!(cis_minus_one(1.0f64, 0), Cx::new(0.0, 0.0));
    }

    #[test]
    fn powi_matches_exp() {
        let w = cis(0.7f64);
        for e in -5..=5 {
            let d = powi(w, e) - cis(0.7 * e as f64);
            assert!(d.norm() < 1e-14, "exp {e}");
        }
    }
}
