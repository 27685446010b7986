//! Rotation angles given as rational multiples of π.

use crate::error::{Error, Result};

const PI_HI: f64 = std::f64::consts::PI;
const PI_LO: f64 = 1.2246467991473532e-16;

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// `p·π/q`, evaluated in double-double arithmetic and rounded once.
pub fn pi_fraction(p: i64, q: i64) -> Result<f64> {
    if q == 0 {
        return Err(Error::Usage("zero denominator in π fraction".into()));
    }
    let (p, q) = (p as f64, q as f64);
    let (hi, lo) = two_prod(PI_HI, p);
    let (hi, lo) = two_sum(hi, lo + PI_LO * p);
    let quot = hi / q;
    // exact remainder hi - quot·q
    let (prod, prod_err) = two_prod(quot, q);
    let rem = ((hi - prod) - prod_err) + lo;
    Ok(quot + rem / q)
}

/// Parses `p/q` (or an integer `p`) and returns `p·π/q`.
pub fn parse_pi_fraction(text: &str) -> Result<f64> {
    let bad = || Error::Usage(format!("expected p/q with integers p, q; got {text:?}"));
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
        None => (text.trim().parse().map_err(|_| bad())?, 1),
    };
    pi_fraction(p, q)
}
