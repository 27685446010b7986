//! Seasonal systems: `ż = X_j(z, z̄)` on consecutive intervals of length
//! `T_j`, repeated with period `T = Σ T_j`.

use serde::Serialize;

use crate::birkhoff::{birkhoff_b1, Verdict, ESCAPE_RADIUS};
use crate::catalog;
use crate::error::{Error, Result};
use crate::flow::{flow_at, flow_expand, ORACLE_TOL};
use crate::jets::{jet_compose, MapJet, VectorFieldJet};
use crate::ode::{Integration, Rkf78, Tolerance};
use crate::scalar::{cis, Cx, Real};

/// Largest admissible `|z0|` for [`integrate_seasonal`].
pub const MAX_START_RADIUS: f64 = 0.1;

/// Largest admissible classification radius.
pub const MAX_CLASSIFY_RADIUS: f64 = 0.05;

/// Starting phases per radius in [`classify_origin`].
pub const CLASSIFY_PHASES: usize = 16;

/// Default classification radii.
pub const DEFAULT_RADII: [f64; 4] = [0.01, 0.02, 0.03, 0.04];

/// Default number of periods per classification run.
pub const DEFAULT_PERIODS: usize = 2000;

/// Relative tolerance on fitted drift rates against the `V₁` prediction.
pub const RATE_TOL: f64 = 0.2;

#[derive(Clone, Debug, PartialEq)]
pub struct Season<T: Real> {
    pub field: VectorFieldJet<T>,
    pub duration: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeasonSchedule<T: Real> {
    seasons: Vec<Season<T>>,
}

impl<T: Real> SeasonSchedule<T> {
    pub fn new(seasons: Vec<Season<T>>) -> Result<Self> {
        if seasons.is_empty() {
            return Err(Error::Usage("a schedule needs at least one season".into()));
        }
        if let Some(s) = seasons.iter().find(|s| !(s.duration > T::zero() && s.duration.is_finite())) {
            return Err(Error::Usage(format!("season duration {} is not positive", s.duration)));
        }
        Ok(SeasonSchedule { seasons })
    }

    /// Every field active for `duration`, in order.
    pub fn alternating(fields: &[VectorFieldJet<T>], duration: T) -> Result<Self> {
        Self::new(
            fields
                .iter()
                .map(|f| Season {
                    field: f.clone(),
                    duration,
                })
                .collect(),
        )
    }

    pub fn seasons(&self) -> &[Season<T>] {
        &self.seasons
    }

    pub fn period(&self) -> T {
        self.seasons.iter().fold(T::zero(), |acc, s| acc + s.duration)
    }

    /// The schedule with every field negated.
    pub fn negated(&self) -> Self {
        SeasonSchedule {
            seasons: self
                .seasons
                .iter()
                .map(|s| Season {
                    field: s.field.negated(),
                    duration: s.duration,
                })
                .collect(),
        }
    }

    /// Jet of the period map, `F_n ∘ … ∘ F_1` with `F_j` the time-`T_j` map
    /// of `X_j`.
    pub fn period_map_jet(&self, degree: u32) -> Result<MapJet<T>> {
        let mut acc: Option<MapJet<T>> = None;
        for s in &self.seasons {
            let step = flow_at(&flow_expand(&s.field, degree), s.duration)?;
            acc = Some(match acc {
                None => step,
                Some(prev) => jet_compose(&step, &prev, degree)?,
            });
        }
        Ok(acc.expect("schedule is non-empty"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectorySample<T: Real> {
    pub t: T,
    pub z: Cx<T>,
    pub r2: T,
    /// Season active from `t` onwards.
    pub season_index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T: Real> {
    pub samples: Vec<TrajectorySample<T>>,
    /// True when the orbit left `|z| <= 0.5` and was cut short.
    pub escaped: bool,
}

impl<T: Real> Trajectory<T> {
    pub fn last(&self) -> &TrajectorySample<T> {
        self.samples.last().expect("trajectories hold the start point")
    }
}

enum Leg<T: Real> {
    Done { z: Cx<T>, h: T },
    Escaped { t: T, z: Cx<T> },
}

struct Stepper<T: Real> {
    solver: Rkf78<T>,
    escape: T,
}

impl<T: Real> Stepper<T> {
    fn new(escape: T) -> Self {
        let tol = T::of(ORACLE_TOL);
        Stepper {
            solver: Rkf78::new(Tolerance { abs: tol, rel: tol }),
            escape,
        }
    }

    fn leg(&self, field: &VectorFieldJet<T>, t0: T, z: Cx<T>, t1: T, h: T) -> Result<Leg<T>> {
        let rhs = |_t: T, y: &[T; 2]| field.velocity(y[0], y[1]);
        let escape2 = self.escape * self.escape;
        let out = self
            .solver
            .integrate(&rhs, t0, [z.re, z.im], t1, h, |y| y[0] * y[0] + y[1] * y[1] <= escape2)
            .map_err(|e| Error::IntegrationFailure {
                re: z.re.as_f64(),
                im: z.im.as_f64(),
                reason: format!("{} at t = {}", e.reason, e.t),
            })?;
        Ok(match out {
            Integration::Finished { y, h_next } => Leg::Done {
                z: Cx::new(y[0], y[1]),
                h: h_next,
            },
            Integration::Stopped { t, y } => Leg::Escaped { t, z: Cx::new(y[0], y[1]) },
        })
    }
}

/// Season start offsets within one period, plus the period itself.
fn boundaries<T: Real>(s: &SeasonSchedule<T>) -> Vec<T> {
    let mut out = vec![T::zero()];
    let mut acc = T::zero();
    for season in &s.seasons {
        acc += season.duration;
        out.push(acc);
    }
    out
}

/// Integrates the seasonal system from `z0`, switching fields exactly at
/// season boundaries.
///
/// Samples are taken at `samples_per_period` uniform phase points and at
/// every boundary.
pub fn integrate_seasonal<T: Real>(
    s: &SeasonSchedule<T>,
    z0: Cx<T>,
    periods: usize,
    samples_per_period: usize,
) -> Result<Trajectory<T>> {
    if !(z0.norm() <= T::of(MAX_START_RADIUS)) {
        return Err(Error::Usage(format!("|z0| must not exceed {MAX_START_RADIUS}")));
    }
    if periods == 0 || samples_per_period == 0 {
        return Err(Error::Usage("periods and samples per period must be positive".into()));
    }
    let period = s.period();
    let bounds = boundaries(s);
    let tiny = period * T::of(1e-12);
    // (offset within the period, season active from there)
    let mut grid: Vec<(T, usize)> = bounds[..s.seasons.len()].iter().copied().zip(0..).collect();
    for k in 1..samples_per_period {
        let off = period * T::of(k as f64) / T::of(samples_per_period as f64);
        if bounds.iter().any(|b| (*b - off).abs() <= tiny) {
            continue;
        }
        let season = bounds[1..].iter().position(|b| off < *b).unwrap_or(s.seasons.len() - 1);
        grid.push((off, season));
    }
    grid.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite offsets"));

    let stepper = Stepper::new(T::of(ESCAPE_RADIUS));
    let sample = |t: T, z: Cx<T>, season_index: usize| TrajectorySample {
        t,
        z,
        r2: z.re * z.re + z.im * z.im,
        season_index,
    };
    let mut samples = vec![sample(T::zero(), z0, 0)];
    let mut z = z0;
    let mut h = T::of(0.05);
    for p in 0..periods {
        let base = period * T::of(p as f64);
        for (g, &(off, season)) in grid.iter().enumerate() {
            let end = grid.get(g + 1).map(|e| e.0).unwrap_or(period);
            let (t0, t1) = (base + off, base + end);
            let next_season = grid.get(g + 1).map(|e| e.1).unwrap_or(0);
            match stepper.leg(&s.seasons[season].field, t0, z, t1, h)? {
                Leg::Done { z: zn, h: hn } => {
                    z = zn;
                    h = hn;
                    samples.push(sample(t1, z, next_season));
                }
                Leg::Escaped { t, z: zn } => {
                    samples.push(sample(t, zn, season));
                    return Ok(Trajectory { samples, escaped: true });
                }
            }
        }
    }
    Ok(Trajectory {
        samples,
        escaped: false,
    })
}

/// `z` after one full period.
pub fn period_map<T: Real>(s: &SeasonSchedule<T>, z0: Cx<T>) -> Result<Cx<T>> {
    let tr = integrate_seasonal(s, z0, 1, 1)?;
    if tr.escaped {
        return Err(Error::LeftPerturbativeRegime {
            threshold: ESCAPE_RADIUS,
        });
    }
    Ok(tr.last().z)
}

/// Drift fit at one starting radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadiusFit {
    pub radius: f64,
    /// `V₁` estimate: minus half the per-period slope of the phase-averaged
    /// `1/|z|²`.
    pub v_fit: f64,
    /// Per-period relative growth of `|z|²` at the starting radius,
    /// `2·v_fit·r²`.
    pub rate: f64,
    /// Periods actually used (runs stop once an orbit doubles its radius).
    pub periods_used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub fits: Vec<RadiusFit>,
}

fn fit_radius<T: Real>(s: &SeasonSchedule<T>, radius: T, periods: usize) -> Result<RadiusFit> {
    let stop = T::of(ESCAPE_RADIUS).min(radius + radius);
    let stepper = Stepper::new(stop);
    let bounds = boundaries(s);
    let mut zs: Vec<Cx<T>> = (0..CLASSIFY_PHASES)
        .map(|p| cis(T::two_pi() * T::of(p as f64 / CLASSIFY_PHASES as f64)) * radius)
        .collect();
    let mut hs = [T::of(0.05); CLASSIFY_PHASES];
    let inv_mean = |zs: &[Cx<T>]| zs.iter().map(|z| z.norm_sqr().recip().as_f64()).sum::<f64>() / zs.len() as f64;
    let mut pts = vec![(0.0, inv_mean(&zs))];
    'periods: for p in 1..=periods {
        for (z, h) in zs.iter_mut().zip(hs.iter_mut()) {
            for (i, season) in s.seasons.iter().enumerate() {
                match stepper.leg(&season.field, bounds[i], *z, bounds[i + 1], *h)? {
                    Leg::Done { z: zn, h: hn } => {
                        *z = zn;
                        *h = hn;
                    }
                    Leg::Escaped { .. } => break 'periods,
                }
            }
        }
        pts.push((p as f64, inv_mean(&zs)));
    }
    let used = pts.len() - 1;
    if used < 2 {
        return Err(Error::LeftPerturbativeRegime {
            threshold: stop.as_f64(),
        });
    }
    let v_fit = -crate::fit::slope(&pts) / 2.0;
    let r = radius.as_f64();
    Ok(RadiusFit {
        radius: r,
        v_fit,
        rate: 2.0 * v_fit * r * r,
        periods_used: used,
    })
}

/// Empirical stability of the origin from orbits started at each radius.
pub fn classify_origin<T: Real>(s: &SeasonSchedule<T>, radii: &[T], periods: usize) -> Result<Classification> {
    if radii.is_empty() || periods < 2 {
        return Err(Error::Usage("need at least one radius and two periods".into()));
    }
    if let Some(r) = radii.iter().find(|r| !(**r > T::zero() && **r <= T::of(MAX_CLASSIFY_RADIUS))) {
        return Err(Error::Usage(format!("radius {r} outside (0, {MAX_CLASSIFY_RADIUS}]")));
    }
    let mut radii: Vec<T> = radii.to_vec();
    radii.sort_by(|a, b| a.partial_cmp(b).expect("finite radii"));
    let fits = radii
        .iter()
        .map(|r| fit_radius(s, *r, periods))
        .collect::<Result<Vec<_>>>()?;
    let increasing = fits.windows(2).all(|w| w[1].rate.abs() > w[0].rate.abs());
    let verdict = if increasing && fits.iter().all(|f| f.v_fit < 0.0) {
        Verdict::Las
    } else if increasing && fits.iter().all(|f| f.v_fit > 0.0) {
        Verdict::Repeller
    } else {
        Verdict::Inconclusive
    };
    Ok(Classification { verdict, fits })
}

/// Classification settings used by [`paradox_demo`].
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyConfig {
    pub radii: Vec<f64>,
    pub periods: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            radii: DEFAULT_RADII.to_vec(),
            periods: DEFAULT_PERIODS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub predicted_v1: f64,
    pub predicted_verdict: Verdict,
    pub verdict: Verdict,
    pub fits: Vec<RadiusFit>,
    /// Largest `|v_fit - V₁| / |V₁|` over the radii.
    pub worst_relative_error: f64,
    pub rates_within_tolerance: bool,
    pub agreement: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParadoxReport {
    pub mu: [f64; 2],
    pub radii: Vec<f64>,
    pub periods: usize,
    pub cases: Vec<CaseReport>,
    pub negated: Vec<CaseReport>,
    pub verdicts: Vec<Verdict>,
    pub negated_verdicts: Vec<Verdict>,
    /// Every empirical verdict matches the sign of its predicted `V₁`.
    pub agreement: bool,
}

/// Classifies `s` and compares with `V₁` of its period-map jet.
pub fn analyze_case(name: &str, s: &SeasonSchedule<f64>, config: &ClassifyConfig) -> Result<CaseReport> {
    let predicted = birkhoff_b1(&s.period_map_jet(3)?)?;
    let class = classify_origin(s, &config.radii, config.periods)?;
    let v1 = predicted.v1;
    let worst = class
        .fits
        .iter()
        .map(|f| (f.v_fit - v1).abs() / v1.abs())
        .fold(0.0, f64::max);
    Ok(CaseReport {
        name: name.to_string(),
        predicted_v1: v1,
        predicted_verdict: predicted.verdict,
        verdict: class.verdict,
        fits: class.fits,
        worst_relative_error: worst,
        rates_within_tolerance: worst <= RATE_TOL,
        agreement: class.verdict == predicted.verdict,
    })
}

/// The three schedules of the demonstration: `X₁` alone, `X₂` alone and
/// `X₁` then `X₂`, each season of unit length.
pub fn paradox_schedules(mu: Cx<f64>) -> Result<Vec<(&'static str, SeasonSchedule<f64>)>> {
    let x1 = catalog::x1(mu);
    let x2 = catalog::x2();
    Ok(vec![
        ("X1", SeasonSchedule::alternating(std::slice::from_ref(&x1), 1.0)?),
        ("X2", SeasonSchedule::alternating(std::slice::from_ref(&x2), 1.0)?),
        ("X1,X2", SeasonSchedule::alternating(&[x1, x2], 1.0)?),
    ])
}

pub fn paradox_demo(mu: Cx<f64>, config: &ClassifyConfig) -> Result<ParadoxReport> {
    let schedules = paradox_schedules(mu)?;
    let mut cases = Vec::new();
    let mut negated = Vec::new();
    for (name, s) in &schedules {
        cases.push(analyze_case(name, s, config)?);
        negated.push(analyze_case(&format!("-({name})"), &s.negated(), config)?);
    }
    let agreement = cases.iter().chain(&negated).all(|c| c.agreement);
    Ok(ParadoxReport {
        mu: [mu.re, mu.im],
        radii: config.radii.clone(),
        periods: config.periods,
        verdicts: cases.iter().map(|c| c.verdict).collect(),
        negated_verdicts: negated.iter().map(|c| c.verdict).collect(),
        cases,
        negated,
        agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Jet;
    use crate::scalar::cx;

    fn rotation(alpha: f64) -> SeasonSchedule<f64> {
        SeasonSchedule::alternating(&[VectorFieldJet::rotation(alpha, 3).unwrap()], 1.0).unwrap()
    }

    #[test]
    fn schedule_validation() {
        assert!(SeasonSchedule::<f64>::new(vec![]).is_err());
        let x = VectorFieldJet::rotation(1.0, 3).unwrap();
        assert!(SeasonSchedule::new(vec![Season { field: x, duration: 0.0 }]).is_err());
    }

    #[test]
    fn rotation_preserves_radius() {
        let tr = integrate_seasonal(&rotation(1.3), cx(0.05, 0.0), 1, 4).unwrap();
        assert!((tr.last().z.norm() - 0.05).abs() < 1e-12);
        assert!((tr.last().t - 1.0).abs() < 1e-15);
        assert_eq!(tr.samples.len(), 5);
    }

    #[test]
    fn origin_stays_put() {
        let s = paradox_schedules(cx(0.0, 0.0)).unwrap().pop().unwrap().1;
        let tr = integrate_seasonal(&s, cx(0.0, 0.0), 3, 5).unwrap();
        assert!(tr.samples.iter().all(|p| p.z == cx(0.0, 0.0)));
    }

    #[test]
    fn samples_mark_boundaries_and_seasons() {
        let s = paradox_schedules(cx(0.0, 0.0)).unwrap().pop().unwrap().1;
        let tr = integrate_seasonal(&s, cx(0.02, 0.01), 2, 3).unwrap();
        let ts: Vec<f64> = tr.samples.iter().map(|p| p.t).collect();
        // phase points 2/3, 4/3 plus the boundary at 1, per period of length 2
        let expect = [0.0, 2.0 / 3.0, 1.0, 4.0 / 3.0, 2.0, 2.0 + 2.0 / 3.0, 3.0, 2.0 + 4.0 / 3.0, 4.0];
        let mut sorted = expect.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in ts.iter().zip(&sorted) {
            assert!((a - b).abs() < 1e-12, "{ts:?}");
        }
        let seasons: Vec<usize> = tr.samples.iter().map(|p| p.season_index).collect();
        assert_eq!(seasons, vec![0, 0, 1, 1, 0, 0, 1, 1, 0]);
        for p in &tr.samples {
            assert!((p.r2 - p.z.norm_sqr()).abs() <= 1e-18);
        }
    }

    #[test]
    fn refining_samples_does_not_move_endpoint() {
        let s = paradox_schedules(cx(0.0, 0.0)).unwrap().pop().unwrap().1;
        let a = integrate_seasonal(&s, cx(0.03, -0.02), 3, 1).unwrap().last().z;
        let b = integrate_seasonal(&s, cx(0.03, -0.02), 3, 17).unwrap().last().z;
        assert!((a - b).norm() < 1e-11, "{}", (a - b).norm());
    }

    #[test]
    fn period_map_matches_jet() {
        let s = paradox_schedules(cx(0.0, 0.0)).unwrap().pop().unwrap().1;
        let jet = s.period_map_jet(3).unwrap();
        let pts: Vec<(f64, f64)> = (0..=4)
            .map(|e| {
                let r = 1e-2 * 10f64.powf(-(e as f64) / 4.0);
                let worst = (0..6)
                    .map(|p| {
                        let z = cis(0.3 + p as f64) * r;
                        (period_map(&s, z).unwrap() - jet.eval(z)).norm()
                    })
                    .fold(0.0, f64::max);
                (r.ln(), worst.ln())
            })
            .collect();
        assert!(crate::fit::slope(&pts) >= 3.7);
    }

    #[test]
    fn escape_is_flagged() {
        let x = VectorFieldJet::new(1.0, 3, [((2, 1), cx(50.0, 0.0))]).unwrap();
        let s = SeasonSchedule::alternating(&[x], 1.0).unwrap();
        let tr = integrate_seasonal(&s, cx(0.1, 0.0), 10, 2).unwrap();
        assert!(tr.escaped);
        assert!(tr.last().z.norm() > 0.5);
    }

    #[test]
    fn classify_rejects_bad_radius() {
        assert!(classify_origin(&rotation(1.0), &[0.06], 10).unwrap_err().is_usage());
    }

    #[test]
    fn pure_rotation_is_inconclusive() {
        let c = classify_origin(&rotation(1.0), &[0.01, 0.02], 20).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert!(c.fits.iter().all(|f| f.v_fit.abs() < 1e-6));
    }
}
