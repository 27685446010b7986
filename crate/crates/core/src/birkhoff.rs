//! First Birkhoff constant of an elliptic map jet.
//!
//! Two near-identity changes `z = H(u) = u + h(u, ū)` bring the cubic jet
//! `F(z) = λz + …` to `G = H⁻¹∘F∘H = λu + λB₁ u²ū + (resonant cubic terms)`.
//! For a term `u^j ū^k` the homological equation reads
//! `h_{j,k}(λ^{j-k} - λ) = g_{j,k}`, where `g` is the current coefficient.

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jets::{Jet, MapJet};
use crate::scalar::{cis, powi, Cx, Real};
use crate::series::{graded_monomials, Series};

/// `|V₁|` at or below this is inconclusive.
pub const VERDICT_TOL: f64 = 1e-10;

/// `|λ^ℓ - 1|` below this is treated as a root of unity.
pub const ROOT_TOL: f64 = 1e-9;

/// Largest starting radius for [`radial_drift_oracle`].
pub const MAX_DRIFT_RADIUS: f64 = 0.05;

/// Orbits beyond this radius have left the region where the cubic jet
/// governs the dynamics.
pub const ESCAPE_RADIUS: f64 = 0.5;

/// Number of equally spaced starting phases used by the drift oracle.
pub const DRIFT_PHASES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "LAS")]
    Las,
    Repeller,
    Inconclusive,
}

impl Verdict {
    pub fn from_v1(v1: f64) -> Self {
        if v1 < -VERDICT_TOL {
            Verdict::Las
        } else if v1 > VERDICT_TOL {
            Verdict::Repeller
        } else {
            Verdict::Inconclusive
        }
    }

    /// The verdict for the time-reversed dynamics.
    pub fn reversed(self) -> Self {
        match self {
            Verdict::Las => Verdict::Repeller,
            Verdict::Repeller => Verdict::Las,
            Verdict::Inconclusive => Verdict::Inconclusive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Las => "LAS",
            Verdict::Repeller => "Repeller",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityReport<T: Real> {
    pub b1: Cx<T>,
    pub v1: T,
    pub verdict: Verdict,
}

/// Output of [`birkhoff_reduce`].
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm<T: Real> {
    /// `H(u) = u + h₂ + h₃`, the total change of variables.
    pub change: Series<Cx<T>>,
    /// `H⁻¹∘F∘H` through degree 3.
    pub reduced: Series<Cx<T>>,
    pub b1: Cx<T>,
}

fn check_multiplier<T: Real>(lambda: Cx<T>) -> Result<()> {
    for l in 1..=3 {
        if (lambda.powu(l) - T::one()).norm() < T::of(ROOT_TOL) {
            return Err(Error::LowOrderRoot);
        }
    }
    Ok(())
}

fn identity<T: Real>(degree: u32) -> Series<Cx<T>> {
    Series::from_terms(degree, [((1, 0), Cx::one())])
}

/// `H⁻¹` for `H = u + h` with `h` of order ≥ 2, by the fixed point
/// `K = u - h(K, K̄)`.
fn inverse_change<T: Real>(h: &Series<Cx<T>>, degree: u32) -> Series<Cx<T>> {
    let id = identity(degree);
    let mut k = id.clone();
    for _ in 0..degree {
        k = id.sub(&h.compose(&k, degree));
    }
    k
}

/// Conjugates `s` by `u + h`.
fn conjugate_by<T: Real>(s: &Series<Cx<T>>, h: &Series<Cx<T>>, degree: u32) -> Series<Cx<T>> {
    let change = identity(degree).add(h);
    inverse_change(h, degree).compose(&s.compose(&change, degree), degree)
}

/// Removes every non-resonant term of total degree `level`.
fn homological_step<T: Real>(s: &Series<Cx<T>>, lambda: Cx<T>, level: u32) -> Series<Cx<T>> {
    let mut h = Series::new(3);
    for m in graded_monomials(level, level) {
        let g = s.get(m).copied().unwrap_or_default();
        let denom = powi(lambda, m.0 as i32 - m.1 as i32) - lambda;
        if denom.norm() >= T::of(ROOT_TOL) && g.norm() > T::zero() {
            h.insert(m, g / denom);
        }
    }
    h
}

/// Reduces the cubic jet of `f` (truncated or zero-extended to degree 3).
pub fn birkhoff_reduce<T: Real>(f: &MapJet<T>) -> Result<NormalForm<T>> {
    let lambda = f.multiplier();
    check_multiplier(lambda)?;
    let f = f.with_degree(3)?;
    let s = f.to_series();
    let h2 = homological_step(&s, lambda, 2);
    let s2 = conjugate_by(&s, &h2, 3);
    let h3 = homological_step(&s2, lambda, 3);
    let s3 = conjugate_by(&s2, &h3, 3);
    // (u + h3)∘(u + h2) = u + h2 + h3 through degree 3
    let change = identity(3).add(&h2).add(&h3);
    let b1 = s3.get((2, 1)).copied().unwrap_or_default() / lambda;
    Ok(NormalForm {
        change,
        reduced: s3,
        b1,
    })
}

pub fn birkhoff_b1<T: Real>(f: &MapJet<T>) -> Result<StabilityReport<T>> {
    let b1 = birkhoff_reduce(f)?.b1;
    Ok(StabilityReport {
        b1,
        v1: b1.re,
        verdict: Verdict::from_v1(b1.re.as_f64()),
    })
}

/// Empirical `V₁` from iterating `f` on the circle `|z| = radius`.
///
/// Under `Δ|z|² ≈ 2V₁|z|⁴` the phase average of `1/|z_n|²` decreases by
/// `2V₁` per iteration; `V₁` is read off the least-squares slope.
pub fn radial_drift_oracle<T: Real>(f: &MapJet<T>, radius: T, iterations: usize) -> Result<T> {
    if !(radius > T::zero() && radius <= T::of(MAX_DRIFT_RADIUS)) {
        return Err(Error::Usage(format!("radius must lie in (0, {MAX_DRIFT_RADIUS}]")));
    }
    if iterations < 2 {
        return Err(Error::Usage("at least two iterations are needed".into()));
    }
    check_multiplier(f.multiplier())?;
    let escape = T::of(ESCAPE_RADIUS);
    let mut zs: Vec<Cx<T>> = (0..DRIFT_PHASES)
        .map(|p| cis(T::two_pi() * T::of(p as f64 / DRIFT_PHASES as f64)) * radius)
        .collect();
    let inv_mean = |zs: &[Cx<T>]| zs.iter().map(|z| z.norm_sqr().recip().as_f64()).sum::<f64>() / zs.len() as f64;
    let mut pts = Vec::with_capacity(iterations + 1);
    pts.push((0.0, inv_mean(&zs)));
    for n in 1..=iterations {
        for z in zs.iter_mut() {
            *z = f.eval(*z);
            if !(z.norm() <= escape) {
                return Err(Error::LeftPerturbativeRegime {
                    threshold: ESCAPE_RADIUS,
                });
            }
        }
        pts.push((n as f64, inv_mean(&zs)));
    }
    Ok(T::of(-crate::fit::slope(&pts) / 2.0))
}
