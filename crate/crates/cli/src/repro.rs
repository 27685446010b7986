//! Reproduction targets, one per published claim.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write;

use clap::ValueEnum;
use flowjet::inverse::{check_pure_rotation_claim, obstruction_family_demo};
use flowjet::sample::{generic_alpha, random_map, seeded};
use flowjet::seasonal::ClassifyConfig;
use flowjet::{
    birkhoff_b1, catalog, closed_form_quadratic, invert_map, jet_compose, paradox_demo, Cx, Jet, MapJet, Monomial,
    Result, SolveOutcome, Verdict,
};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Target {
    #[value(name = "prop2.2")]
    Prop22,
    #[value(name = "prop2.3-a30")]
    Prop23A30,
    #[value(name = "prop2.6a")]
    Prop26a,
    #[value(name = "prop3.1")]
    Prop31,
    #[value(name = "prop3.2")]
    Prop32,
    #[value(name = "thm1")]
    Thm1,
    #[value(name = "thm3")]
    Thm3,
}

pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

const SAMPLES: usize = 5;

fn c(re: f64, im: f64) -> Cx<f64> {
    Cx::new(re, im)
}

fn none() -> BTreeMap<Monomial, Cx<f64>> {
    BTreeMap::new()
}

fn max_delta<J: Jet<f64>>(a: &J, b: &J) -> f64 {
    a.coeffs()
        .keys()
        .chain(b.coeffs().keys())
        .map(|m| (a.coeff(*m) - b.coeff(*m)).norm())
        .fold(0.0, f64::max)
}

fn verdict_line(text: &mut String, passed: bool) {
    writeln!(text, "{}", if passed { "PASS" } else { "FAIL" }).unwrap();
}

pub fn run(target: Target, seed: u64) -> Result<Outcome> {
    let mut text = String::new();
    let passed = match target {
        Target::Prop22 => prop22(&mut text, seed)?,
        Target::Prop23A30 => prop23_a30(&mut text, seed)?,
        Target::Prop26a => prop26a(&mut text, seed)?,
        Target::Prop31 => prop31(&mut text)?,
        Target::Prop32 => prop32(&mut text)?,
        Target::Thm1 => thm1(&mut text)?,
        Target::Thm3 => thm3(&mut text)?,
    };
    verdict_line(&mut text, passed);
    Ok(Outcome { text, passed })
}

/// Quadratic closed forms against the level-by-level solver.
fn prop22(text: &mut String, seed: u64) -> Result<bool> {
    let mut rng = seeded(seed);
    let mut ok = true;
    writeln!(text, "map  alpha                 max_delta").unwrap();
    for i in 0..SAMPLES {
        let alpha = generic_alpha(&mut rng, 3, 1e-3);
        let f = random_map::<f64>(&mut rng, alpha, 2);
        let closed = closed_form_quadratic(&f)?;
        let solved = invert_map(&f, &none())?;
        let delta = match (closed.field(), solved.field()) {
            (Some(a), Some(b)) => max_delta(a, b),
            _ => f64::INFINITY,
        };
        ok &= delta < 1e-12;
        writeln!(text, "{i:<4} {alpha:<21} {delta:.3e}").unwrap();
    }
    let f = MapJet::new(2.0 * PI / 3.0, 2, [((0, 2), c(1.0, 0.0))])?;
    let outcome = invert_map(&f, &none())?;
    writeln!(text, "e^(2πi/3) z + conj(z)^2: {}", outcome.status()).unwrap();
    if let SolveOutcome::Obstructed { at, defect } = outcome {
        writeln!(text, "  at ({},{}), defect {defect}", at.0, at.1).unwrap();
        ok &= at == (0, 2);
    } else {
        ok = false;
    }
    Ok(ok)
}

/// `a30` of the non-resonant cubic against its printed closed form.
fn prop23_a30(text: &mut String, seed: u64) -> Result<bool> {
    let mut rng = seeded(seed);
    let mut ok = true;
    writeln!(text, "map  alpha                 |a30 - printed|").unwrap();
    for i in 0..SAMPLES {
        let alpha = generic_alpha(&mut rng, 4, 1e-2);
        let f = random_map::<f64>(&mut rng, alpha, 3);
        let w = Cx::from_polar(1.0, alpha);
        let (f02b, f11, f20, f30) = (f.coeff((0, 2)).conj(), f.coeff((1, 1)), f.coeff((2, 0)), f.coeff((3, 0)));
        let p30 = (f02b * f11 - 2.0 * f30) * w.powu(3)
            + 2.0 * (f02b * f11 + f20 * f20 - f30) * w * w
            + 2.0 * (f20 * f20 - f30) * w
            + 2.0 * f20 * f20;
        let printed = c(0.0, -alpha) * p30 / (w * w * (w.powu(3) - 1.0) * (w + 1.0));
        let got = match invert_map(&f, &none())?.field() {
            Some(x) => x.coeff((3, 0)),
            None => Cx::new(f64::NAN, f64::NAN),
        };
        let delta = (got - printed).norm();
        ok &= delta < 1e-10;
        writeln!(text, "{i:<4} {alpha:<21} {delta:.3e}").unwrap();
    }
    Ok(ok)
}

/// One-parameter family at `ω = i` against the printed coefficients.
fn prop26a(text: &mut String, seed: u64) -> Result<bool> {
    let mut rng = seeded(seed);
    let mut ok = true;
    writeln!(text, "map  free    max_delta").unwrap();
    for i in 0..SAMPLES {
        let mut coeffs = random_map::<f64>(&mut rng, PI / 2.0, 3).coeffs().clone();
        let f03 = 0.5 * coeffs[&(0, 2)] * (c(2.0, 2.0) * coeffs[&(2, 0)].conj() + c(1.0, -1.0) * coeffs[&(1, 1)]);
        coeffs.insert((0, 3), f03);
        let f = MapJet::new(PI / 2.0, 3, coeffs)?;
        let g = |j, k| f.coeff((j, k));
        let ii = c(0.0, 1.0);
        let expected = [
            ((2, 0), -PI / 4.0 * c(1.0, 1.0) * g(2, 0)),
            ((1, 1), PI / 4.0 * c(1.0, -1.0) * g(1, 1)),
            ((0, 2), 3.0 * PI / 4.0 * c(1.0, 1.0) * g(0, 2)),
            ((3, 0), -PI / 2.0 * (-c(1.0, 0.5) * g(1, 1) * g(0, 2).conj() + ii * g(2, 0) * g(2, 0) + g(3, 0))),
            (
                (2, 1),
                0.25 * c(-2.0, PI - 2.0) * g(1, 1).norm_sqr()
                    + 0.5 * c(-2.0, 3.0 * PI + 2.0) * g(0, 2).norm_sqr()
                    + 0.25 * c(6.0, PI - 2.0) * g(1, 1) * g(2, 0)
                    - ii * g(2, 1),
            ),
            (
                (1, 2),
                PI / 2.0
                    * (-c(2.0, 1.0) * g(0, 2) * g(1, 1).conj() - 0.5 * ii * g(1, 1) * g(2, 0).conj()
                        - c(2.0, -1.0) * g(2, 0) * g(0, 2)
                        + 0.5 * ii * g(1, 1) * g(1, 1)
                        + g(1, 2)),
            ),
        ];
        match invert_map(&f, &none())? {
            SolveOutcome::Family(fam) => {
                let delta = expected
                    .iter()
                    .map(|(m, e)| (fam.base.coeff(*m) - e).norm())
                    .fold(0.0, f64::max);
                let free_ok = fam.free == [(0, 3)];
                ok &= delta < 1e-10 && free_ok;
                writeln!(text, "{i:<4} {:<7} {delta:.3e}", format!("{:?}", fam.free)).unwrap();
            }
            other => {
                ok = false;
                writeln!(text, "{i:<4} {}", other.status()).unwrap();
            }
        }
    }
    Ok(ok)
}

/// Birkhoff constants of `F1`, `F2` and `F2 ∘ F1`.
fn prop31(text: &mut String) -> Result<bool> {
    let (f1, f2) = (catalog::f1::<f64>(), catalog::f2::<f64>());
    let b1 = birkhoff_b1(&f1)?;
    let b2 = birkhoff_b1(&f2)?;
    let b21 = birkhoff_b1(&jet_compose(&f2, &f1, 3)?)?;
    let d1 = (b1.b1 - catalog::b1_f1::<f64>()).norm();
    let d2 = (b2.b1 - catalog::b1_f2::<f64>()).norm();
    let d21 = (b21.v1 - catalog::v1_f2_after_f1::<f64>()).abs();
    writeln!(text, "B1(F1)    = {}  |delta| = {d1:.3e}  {}", b1.b1, b1.verdict.as_str()).unwrap();
    writeln!(text, "B1(F2)    = {}  |delta| = {d2:.3e}  {}", b2.b1, b2.verdict.as_str()).unwrap();
    writeln!(text, "V1(F2∘F1) = {}  |delta| = {d21:.3e}  {}", b21.v1, b21.verdict.as_str()).unwrap();
    Ok(d1 < 1e-10
        && d2 < 1e-10
        && d21 < 1e-10
        && b1.verdict == Verdict::Las
        && b2.verdict == Verdict::Las
        && b21.verdict == Verdict::Repeller)
}

/// `F1 → X1(μ)` and `F2 → X2`.
fn prop32(text: &mut String) -> Result<bool> {
    let mut ok = true;
    for mu in [c(0.0, 0.0), c(1.0, 2.0)] {
        let free = BTreeMap::from([((0, 3), mu)]);
        let outcome = invert_map(&catalog::f1::<f64>(), &free)?;
        let delta = outcome.field().map_or(f64::INFINITY, |x| max_delta(x, &catalog::x1(mu)));
        ok &= delta < 1e-10 && outcome.status() == "family";
        writeln!(text, "F1 -> X1(mu = {mu}): {}  max_delta = {delta:.3e}", outcome.status()).unwrap();
    }
    let outcome = invert_map(&catalog::f2::<f64>(), &none())?;
    let delta = outcome.field().map_or(f64::INFINITY, |x| max_delta(x, &catalog::x2()));
    ok &= delta < 1e-12 && outcome.status() == "unique";
    writeln!(text, "F2 -> X2: {}  max_delta = {delta:.3e}", outcome.status()).unwrap();
    Ok(ok)
}

/// LAS + LAS = repeller for the seasonal system, and the converse.
fn thm1(text: &mut String) -> Result<bool> {
    let report = paradox_demo(c(0.0, 0.0), &ClassifyConfig::default())?;
    for case in report.cases.iter().chain(&report.negated) {
        writeln!(
            text,
            "{:<9} predicted V1 = {:<22} {:<12} observed {:<12} worst rel err {:.3}",
            case.name,
            case.predicted_v1,
            case.predicted_verdict.as_str(),
            case.verdict.as_str(),
            case.worst_relative_error
        )
        .unwrap();
    }
    use Verdict::{Las, Repeller};
    Ok(report.verdicts == [Las, Las, Repeller] && report.negated_verdicts == [Repeller, Repeller, Las])
}

/// `e^{2πi/(n+1)} z + z̄ⁿ` is obstructed at `(0, n)`.
fn thm3(text: &mut String) -> Result<bool> {
    let mut ok = true;
    for n in 2..=6u32 {
        let outcome = obstruction_family_demo::<f64>(n)?;
        let at_ok = matches!(outcome, SolveOutcome::Obstructed { at, .. } if at == (0, n));
        let mut claims = Vec::new();
        if n >= 3 {
            for m in 2..n {
                claims.push(check_pure_rotation_claim(2.0 * PI / (n + 1) as f64, n, m)?);
            }
        }
        let claims_ok = claims.iter().all(|&b| b);
        ok &= at_ok && claims_ok;
        let status = match outcome {
            SolveOutcome::Obstructed { at, defect } => format!("obstructed at ({},{}) defect {defect}", at.0, at.1),
            other => other.status().to_owned(),
        };
        writeln!(text, "n = {n}: {status}; pure rotation claims {}/{}", claims.iter().filter(|&&b| b).count(), claims.len())
            .unwrap();
    }
    Ok(ok)
}
