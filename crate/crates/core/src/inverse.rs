//! Inverse problem: a polynomial field whose time-1 map has a given jet.
//!
//! At level `L = j + k` the coefficient `φ_{j,k}(1)` is affine in the unknown
//! `a_{j,k}`:
//!
//! ```text
//! φ_{j,k}(1) = ψ_{j,k}·a_{j,k} + φ^b_{j,k}(1),
//! ψ_{j,k} = e^{iα} ∫₀¹ e^{i(j-k-1)ατ} dτ,
//! ```
//!
//! where `φ^b` is the response to the lower-level forcing alone. When
//! `ψ_{j,k} ≠ 0` the coefficient is isolated. When `e^{i(j-k-1)α} = 1` it
//! vanishes, `a_{j,k}` is free, and `φ^b_{j,k}(1) = f_{j,k}` must hold.
//!
//! Free coefficients are carried as indeterminates ([`ParamPoly`]) so that
//! later compatibility equations can be checked identically in them.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exppoly::{integrate_twisted, ExpPoly};
use crate::flow::level_forcing;
use crate::jets::{Jet, MapJet, VectorFieldJet};
use crate::param::ParamPoly;
use crate::scalar::{cis, cis_minus_one, Coeff, Cx, Real, Ring};
use crate::series::{graded_monomials, Monomial};

/// `|e^{i(j-k-1)α} - 1|` below this marks a resonant slot.
pub const RESONANCE_TOL: f64 = 1e-9;

/// Compatibility residuals at or above this are obstructions.
pub const DEFECT_TOL: f64 = 1e-9;

/// Whether `(j, k)` is resonant for rotation `alpha`.
pub fn is_resonant<T: Real>(alpha: T, j: u32, k: u32) -> bool {
    let d = j as i32 - k as i32 - 1;
    d != 0 && cis_minus_one(alpha, d).norm() < T::of(RESONANCE_TOL)
}

/// `ψ_{j,k}`: value at `t = 1` of the solution of `ψ' = iαψ + e^{i(j-k)αt}`,
/// `ψ(0) = 0`.
pub fn unit_response<T: Real>(alpha: T, j: u32, k: u32) -> Cx<T> {
    let d = j as i32 - k as i32 - 1;
    let omega = cis(alpha);
    if d == 0 {
        return omega;
    }
    let da = alpha * T::of(d as f64);
    omega * cis_minus_one(alpha, d) / Cx::new(T::zero(), da)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ResonanceEntry {
    pub j: u32,
    pub k: u32,
    pub resonant: bool,
}

/// Which `(j, k)` slots through `degree` are resonant for `alpha`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResonanceTable {
    pub alpha: f64,
    pub degree: u32,
    pub entries: Vec<ResonanceEntry>,
    /// Per order `m`, the values `|j - k - 1|` with `j + k = m`.
    pub orders: BTreeMap<u32, BTreeSet<u32>>,
}

impl ResonanceTable {
    pub fn resonant(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.entries.iter().filter(|e| e.resonant).map(|e| (e.j, e.k))
    }

    pub fn is_resonant(&self, m: Monomial) -> bool {
        self.entries.iter().any(|e| (e.j, e.k) == m && e.resonant)
    }
}

pub fn resonance_table<T: Real>(alpha: T, n: u32) -> ResonanceTable {
    let entries = graded_monomials(2, n)
        .map(|(j, k)| ResonanceEntry {
            j,
            k,
            resonant: is_resonant(alpha, j, k),
        })
        .collect();
    let orders = (2..=n)
        .map(|m| {
            let set = (0..=m).map(|j| (j as i32 - (m - j) as i32 - 1).unsigned_abs()).collect();
            (m, set)
        })
        .collect();
    ResonanceTable {
        alpha: alpha.as_f64(),
        degree: n,
        entries,
        orders,
    }
}

/// A failed compatibility equation.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction<T: Real> {
    pub at: Monomial,
    /// `φ^b_{j,k}(1) - f_{j,k}` as a polynomial in the free parameters.
    pub residual: ParamPoly<T>,
    /// First coefficient of `residual` that reaches the tolerance.
    pub defect: Cx<T>,
}

/// How a slot was settled by [`solve_level`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Isolated,
    Free,
}

/// Coefficients and flow terms determined so far.
#[derive(Clone, Debug)]
pub struct PartialSolution<T: Real> {
    alpha: T,
    level: u32,
    coeffs: BTreeMap<Monomial, ParamPoly<T>>,
    phis: BTreeMap<Monomial, ExpPoly<ParamPoly<T>>>,
    free: Vec<Monomial>,
}

impl<T: Real> PartialSolution<T> {
    /// Nothing solved yet: the linear part `iαz` only.
    pub fn new(alpha: T) -> Self {
        PartialSolution {
            alpha,
            level: 1,
            coeffs: BTreeMap::new(),
            phis: BTreeMap::new(),
            free: Vec::new(),
        }
    }

    /// Highest completed level.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &BTreeMap<Monomial, ParamPoly<T>> {
        &self.coeffs
    }

    /// Free slots in the order their parameters were introduced.
    pub fn free(&self) -> &[Monomial] {
        &self.free
    }
}

/// Solves the next level of `partial` against the target `f`.
pub fn solve_level<T: Real>(
    f: &MapJet<T>,
    partial: &mut PartialSolution<T>,
) -> std::result::Result<Vec<(Monomial, Slot)>, Obstruction<T>> {
    let alpha = partial.alpha;
    let level = partial.level + 1;
    let forcing = level_forcing(alpha, &partial.coeffs, &partial.phis, level);
    let zero = ParamPoly::<T>::zero();
    let mut report = Vec::new();
    let mut solved = Vec::new();
    for m in graded_monomials(level, level) {
        let b = forcing.get(&m).cloned().unwrap_or_else(|| ExpPoly::zero(alpha));
        let homogeneous = integrate_twisted(&b, &zero, m.0, m.1).eval(T::one());
        let target = ParamPoly::constant(f.coeff(m));
        let a = if is_resonant(alpha, m.0, m.1) {
            let residual = homogeneous.minus(&target);
            if let Some((_, defect)) = residual.first_significant(T::of(DEFECT_TOL)) {
                return Err(Obstruction { at: m, residual, defect });
            }
            let slot = partial.free.len();
            partial.free.push(m);
            report.push((m, Slot::Free));
            ParamPoly::parameter(slot)
        } else {
            report.push((m, Slot::Isolated));
            let psi = unit_response(alpha, m.0, m.1);
            target.minus(&homogeneous).scale(Cx::new(T::one(), T::zero()) / psi)
        };
        let phi = integrate_twisted(&b, &a, m.0, m.1);
        solved.push((m, a, phi));
    }
    for (m, a, phi) in solved {
        if a.max_abs() > T::zero() {
            partial.coeffs.insert(m, a);
        }
        if !phi.is_zero() {
            partial.phis.insert(m, phi);
        }
    }
    partial.level = level;
    Ok(report)
}

/// A one-or-more parameter family of solutions.
#[derive(Clone, Debug, PartialEq)]
pub struct Family<T: Real> {
    /// The member selected by the supplied free values (zero by default).
    pub base: VectorFieldJet<T>,
    /// Free slots; parameter `s` of [`ParamPoly`] belongs to `free[s]`.
    pub free: Vec<Monomial>,
    /// Human-readable summary of how the coefficients depend on the free
    /// values.
    pub dependence: String,
    /// Every coefficient as a polynomial in the free values.
    pub parametric: BTreeMap<Monomial, ParamPoly<T>>,
}

impl<T: Real> Family<T> {
    /// The member with the given free values; missing slots read as zero.
    pub fn instantiate(&self, values: &BTreeMap<Monomial, Cx<T>>) -> Result<VectorFieldJet<T>> {
        for m in values.keys() {
            if !self.free.contains(m) {
                return Err(Error::Usage(format!("({},{}) is not a free slot", m.0, m.1)));
            }
        }
        let v: Vec<Cx<T>> = self.free.iter().map(|m| values.get(m).copied().unwrap_or_default()).collect();
        VectorFieldJet::new(
            self.base.alpha(),
            self.base.degree(),
            self.parametric.iter().map(|(m, p)| (*m, p.eval(&v))),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome<T: Real> {
    Unique(VectorFieldJet<T>),
    Family(Family<T>),
    Obstructed { at: Monomial, defect: Cx<T> },
}

impl<T: Real> SolveOutcome<T> {
    /// The unique field or the family's base member.
    pub fn field(&self) -> Option<&VectorFieldJet<T>> {
        match self {
            SolveOutcome::Unique(x) => Some(x),
            SolveOutcome::Family(fam) => Some(&fam.base),
            SolveOutcome::Obstructed { .. } => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            SolveOutcome::Unique(_) => "unique",
            SolveOutcome::Family(_) => "family",
            SolveOutcome::Obstructed { .. } => "obstructed",
        }
    }
}

fn assemble<T: Real>(
    alpha: T,
    degree: u32,
    coeffs: BTreeMap<Monomial, ParamPoly<T>>,
    free: Vec<Monomial>,
    free_values: &BTreeMap<Monomial, Cx<T>>,
) -> Result<SolveOutcome<T>> {
    if free.is_empty() {
        let field = VectorFieldJet::new(alpha, degree, coeffs.iter().map(|(m, p)| (*m, p.constant_term())))?;
        return Ok(SolveOutcome::Unique(field));
    }
    let max_deg = coeffs
        .values()
        .flat_map(|p| p.terms().map(|(pm, _)| pm.total_degree()))
        .max()
        .unwrap_or(0);
    let names: Vec<String> = free.iter().map(|m| format!("a{},{}", m.0, m.1)).collect();
    let dependence = format!(
        "coefficients are polynomials of total degree <= {max_deg} in the free values ({}) and their conjugates",
        names.join(", ")
    );
    let placeholder = VectorFieldJet::rotation(alpha, degree)?;
    let mut family = Family {
        base: placeholder,
        free,
        dependence,
        parametric: coeffs,
    };
    family.base = family.instantiate(free_values)?;
    Ok(SolveOutcome::Family(family))
}

/// Field(s) whose time-1 map matches `f` through its degree.
///
/// `free_values` selects the family member; its keys must be resonant.
pub fn invert_map<T: Real>(f: &MapJet<T>, free_values: &BTreeMap<Monomial, Cx<T>>) -> Result<SolveOutcome<T>> {
    let table = resonance_table(f.alpha(), f.degree());
    for m in free_values.keys() {
        if !table.is_resonant(*m) {
            return Err(Error::Usage(format!(
                "free value given for ({},{}), which is not a resonant slot",
                m.0, m.1
            )));
        }
    }
    let mut partial = PartialSolution::new(f.alpha());
    while partial.level < f.degree() {
        if let Err(ob) = solve_level(f, &mut partial) {
            return Ok(SolveOutcome::Obstructed {
                at: ob.at,
                defect: ob.defect,
            });
        }
    }
    assemble(f.alpha(), f.degree(), partial.coeffs, partial.free, free_values)
}

/// Direct evaluation of the quadratic closed forms.
pub fn closed_form_quadratic<T: Real>(f: &MapJet<T>) -> Result<SolveOutcome<T>> {
    if f.degree() != 2 {
        return Err(Error::Usage(format!("closed form needs a degree-2 map, got {}", f.degree())));
    }
    let alpha = f.alpha();
    let w = f.multiplier();
    let one = Cx::<T>::one();
    let ia = Cx::new(T::zero(), alpha);
    let mut coeffs = BTreeMap::new();
    coeffs.insert((2, 0), ParamPoly::constant(ia * f.coeff((2, 0)) / (w * (w - one))));
    coeffs.insert((1, 1), ParamPoly::constant(ia * f.coeff((1, 1)) / (w - one)));
    let w3 = w * w * w;
    let mut free = Vec::new();
    if (w3 - one).norm() < T::of(RESONANCE_TOL) {
        let f02 = f.coeff((0, 2));
        if f02.norm() >= T::of(DEFECT_TOL) {
            return Ok(SolveOutcome::Obstructed { at: (0, 2), defect: -f02 });
        }
        coeffs.insert((0, 2), ParamPoly::parameter(0));
        free.push((0, 2));
    } else {
        let a02 = ia * T::of(3.0) * w * w * f.coeff((0, 2)) / (w3 - one);
        coeffs.insert((0, 2), ParamPoly::constant(a02));
    }
    coeffs.retain(|_, p| p.max_abs() > T::zero());
    assemble(alpha, 2, coeffs, free, &BTreeMap::new())
}

/// For `α = 2π/(n+1)`, checks that the pure rotation of degree `m` is the
/// time-1 map of `iαz` only.
pub fn check_pure_rotation_claim<T: Real>(alpha: T, n: u32, m: u32) -> Result<bool> {
    if n < 3 || m < 2 || m > n - 1 {
        return Err(Error::Usage(format!("need 2 <= m <= n-1, got n = {n}, m = {m}")));
    }
    let expected = T::two_pi() / T::of((n + 1) as f64);
    if (alpha - expected).abs() > T::of(1e-12) {
        return Err(Error::Usage(format!("alpha must be 2π/{}", n + 1)));
    }
    let target = MapJet::rotation(alpha, m)?;
    Ok(match invert_map(&target, &BTreeMap::new())? {
        SolveOutcome::Unique(x) => x.coeffs().values().all(|c| c.norm() < T::of(1e-12)),
        _ => false,
    })
}

/// `F = e^{2πi/(n+1)} z + z̄ⁿ`, which no field of degree `n` realizes.
pub fn obstruction_family_map<T: Real>(n: u32) -> Result<MapJet<T>> {
    if n < 2 {
        return Err(Error::Usage(format!("n must be at least 2, got {n}")));
    }
    MapJet::new(T::two_pi() / T::of((n + 1) as f64), n, [((0, n), Cx::one())])
}

pub fn obstruction_family_demo<T: Real>(n: u32) -> Result<SolveOutcome<T>> {
    invert_map(&obstruction_family_map::<T>(n)?, &BTreeMap::new())
}
