//! The concrete maps and fields of the seasonal stability-reversal example.
//!
//! `F1`, `F2` are planar maps whose origin is LAS for each of them while it
//! repels for `F2 ∘ F1`; `X1(μ)`, `X2` are polynomial vector fields whose
//! time-1 flows agree with `F1`, `F2` through cubic order.

use crate::jets::{MapJet, VectorFieldJet};
use crate::scalar::{cx, Cx, Real};

/// `F1(z) = i z + (1 - 3i) z² + z z̄`.
pub fn f1<T: Real>() -> MapJet<T> {
    MapJet::new(T::FRAC_PI_2(), 3, [((2, 0), cx(1.0, -3.0)), ((1, 1), cx(1.0, 0.0))]).expect("valid jet")
}

/// `F2(z) = ½(1 + i√3) z - z² z̄`.
pub fn f2<T: Real>() -> MapJet<T> {
    MapJet::new(T::FRAC_PI_3(), 3, [((2, 1), cx(-1.0, 0.0))]).expect("valid jet")
}

/// `X1(z, μ)`, the one-parameter family realizing `F1`; `μ` multiplies `z̄³`.
pub fn x1<T: Real>(mu: Cx<T>) -> VectorFieldJet<T> {
    let pi = T::PI();
    let half = T::of(0.5);
    let quarter = T::of(0.25);
    let coeffs = [
        ((2, 0), Cx::new(-pi, pi * half)),
        ((1, 1), Cx::new(quarter * pi, -quarter * pi)),
        ((3, 0), Cx::new(-T::of(3.0) * pi, T::of(4.0) * pi)),
        ((2, 1), Cx::new(T::of(0.75) * pi - half, pi * half - T::of(5.5))),
        ((1, 2), Cx::new(T::of(0.75) * pi, T::zero())),
        ((0, 3), mu),
    ];
    VectorFieldJet::new(T::FRAC_PI_2(), 3, coeffs).expect("valid jet")
}

/// `X2(z) = iπ/3 z + (-½ + i√3/2) z² z̄`.
pub fn x2<T: Real>() -> VectorFieldJet<T> {
    let s3 = T::of(3.0).sqrt();
    VectorFieldJet::new(T::FRAC_PI_3(), 3, [((2, 1), Cx::new(-T::of(0.5), s3 * T::of(0.5)))]).expect("valid jet")
}

/// Birkhoff constant `B1(F1) = -1/2 - 11i/2`.
pub fn b1_f1<T: Real>() -> Cx<T> {
    cx(-0.5, -5.5)
}

/// Birkhoff constant `B1(F2) = -1/2 + i√3/2`.
pub fn b1_f2<T: Real>() -> Cx<T> {
    Cx::new(-T::of(0.5), T::of(3.0).sqrt() * T::of(0.5))
}

/// `V1(F2 ∘ F1) = (3√3 - 5)/2`.
pub fn v1_f2_after_f1<T: Real>() -> T {
    (T::of(3.0) * T::of(3.0).sqrt() - T::of(5.0)) * T::of(0.5)
}
