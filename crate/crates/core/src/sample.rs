//! Seeded random jets for property checks and the `repro` targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jets::{MapJet, VectorFieldJet};
use crate::scalar::{Cx, Real};
use crate::series::graded_monomials;

/// Deterministic generator used by every randomized check.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex number with both parts uniform in `[-scale, scale)`.
pub fn random_complex<T: Real>(rng: &mut impl Rng, scale: f64) -> Cx<T> {
    Cx::new(T::of(rng.gen_range(-scale..scale)), T::of(rng.gen_range(-scale..scale)))
}

/// Rotation angle in `(0, 2π)` with `|e^{imα} - 1| ≥ margin` for every
/// `1 ≤ m ≤ max_order`.
pub fn generic_alpha(rng: &mut impl Rng, max_order: u32, margin: f64) -> f64 {
    loop {
        let alpha = rng.gen_range(0.0..std::f64::consts::TAU);
        let ok = (1..=max_order).all(|m| {
            let w = Cx::new(0.0, m as f64 * alpha).exp();
            (w - 1.0).norm() >= margin
        });
        if alpha > 0.0 && ok {
            return alpha;
        }
    }
}

/// Map jet with every nonlinear coefficient through `degree` drawn at random.
pub fn random_map<T: Real>(rng: &mut impl Rng, alpha: T, degree: u32) -> MapJet<T> {
    let coeffs: Vec<_> = graded_monomials(2, degree).map(|m| (m, random_complex(rng, 1.0))).collect();
    MapJet::new(alpha, degree, coeffs).expect("random map is well formed")
}

/// Field jet with every nonlinear coefficient through `degree` drawn at random.
pub fn random_field<T: Real>(rng: &mut impl Rng, alpha: T, degree: u32) -> VectorFieldJet<T> {
    let coeffs: Vec<_> = graded_monomials(2, degree).map(|m| (m, random_complex(rng, 1.0))).collect();
    VectorFieldJet::new(alpha, degree, coeffs).expect("random field is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draws() {
        let a: MapJet<f64> = random_map(&mut seeded(3), 1.0, 3);
        let b: MapJet<f64> = random_map(&mut seeded(3), 1.0, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn generic_alpha_respects_margin() {
        let mut rng = seeded(1);
        for _ in 0..200 {
            let a = generic_alpha(&mut rng, 4, 1e-3);
            for m in 1..=4 {
                assert!((Cx::new(0.0, m as f64 * a).exp() - 1.0).norm() >= 1e-3);
            }
        }
    }
}
