//! Adaptive Runge–Kutta–Fehlberg 7(8) integrator for small ODE systems.
//!
//! Used as the independent numeric route everywhere the closed-form flow
//! jets are checked, and as the time stepper of the seasonal simulations.
//! The eighth-order solution is propagated; the embedded seventh-order one
//! only drives step-size control.

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
}

/// Why an integration could not be completed.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFailure<T> {
    pub t: T,
    pub reason: &'static str,
}

/// Result of [`Rkf78::integrate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Integration<T, const N: usize> {
    /// Reached the end time. `h_next` is the step size to continue with.
    Finished { y: [T; N], h_next: T },
    /// The guard rejected the state `y` reached at time `t`.
    Stopped { t: T, y: [T; N] },
}

impl<T, const N: usize> Integration<T, N> {
    pub fn finished(self) -> Option<([T; N], T)> {
        match self {
            Integration::Finished { y, h_next } => Some((y, h_next)),
            Integration::Stopped { .. } => None,
        }
    }
}

const STAGES: usize = 13;

const C: [f64; STAGES] = [
    0.0,
    2.0 / 27.0,
    1.0 / 9.0,
    1.0 / 6.0,
    5.0 / 12.0,
    0.5,
    5.0 / 6.0,
    1.0 / 6.0,
    2.0 / 3.0,
    1.0 / 3.0,
    1.0,
    0.0,
    1.0,
];

#[rustfmt::skip]
const A: [[f64; STAGES - 1]; STAGES] = [
    [0.0; 12],
    [2.0 / 27.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 36.0, 1.0 / 12.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 24.0, 0.0, 1.0 / 8.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 20.0, 0.0, 0.0, 1.0 / 4.0, 1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-25.0 / 108.0, 0.0, 0.0, 125.0 / 108.0, -65.0 / 27.0, 125.0 / 54.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [31.0 / 300.0, 0.0, 0.0, 0.0, 61.0 / 225.0, -2.0 / 9.0, 13.0 / 900.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.0, 0.0, 0.0, -53.0 / 6.0, 704.0 / 45.0, -107.0 / 9.0, 67.0 / 90.0, 3.0, 0.0, 0.0, 0.0, 0.0],
    [-91.0 / 108.0, 0.0, 0.0, 23.0 / 108.0, -976.0 / 135.0, 311.0 / 54.0, -19.0 / 60.0, 17.0 / 6.0, -1.0 / 12.0, 0.0, 0.0, 0.0],
    [2383.0 / 4100.0, 0.0, 0.0, -341.0 / 164.0, 4496.0 / 1025.0, -301.0 / 82.0, 2133.0 / 4100.0, 45.0 / 82.0, 45.0 / 164.0, 18.0 / 41.0, 0.0, 0.0],
    [3.0 / 205.0, 0.0, 0.0, 0.0, 0.0, -6.0 / 41.0, -3.0 / 205.0, -3.0 / 41.0, 3.0 / 41.0, 6.0 / 41.0, 0.0, 0.0],
    [-1777.0 / 4100.0, 0.0, 0.0, -341.0 / 164.0, 4496.0 / 1025.0, -289.0 / 82.0, 2193.0 / 4100.0, 51.0 / 82.0, 33.0 / 164.0, 12.0 / 41.0, 0.0, 1.0],
];

/// Eighth-order weights.
const B8: [f64; STAGES] = [
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    0.0,
    41.0 / 840.0,
    41.0 / 840.0,
];

/// Difference between the seventh- and eighth-order solutions is
/// `41/840 · (k0 + k10 - k11 - k12) · h`.
const ERR: f64 = 41.0 / 840.0;

#[derive(Clone, Debug)]
pub struct Rkf78<T> {
    tol: Tolerance<T>,
    max_steps: usize,
    c: [T; STAGES],
    a: [[T; STAGES - 1]; STAGES],
    b8: [T; STAGES],
    err: T,
}

impl<T: Real> Rkf78<T> {
    pub fn new(tol: Tolerance<T>) -> Self {
        Rkf78 {
            tol,
            max_steps: 50_000_000,
            c: C.map(T::of),
            a: A.map(|row| row.map(T::of)),
            b8: B8.map(T::of),
            err: T::of(ERR),
        }
    }

    pub fn tolerance(&self) -> Tolerance<T> {
        self.tol
    }

    /// Integrates `y' = f(t, y)` from `t0` to `t1 ≥ t0`, landing exactly on
    /// `t1`. `guard` sees every accepted state; returning `false` stops the
    /// integration there.
    pub fn integrate<F, G, const N: usize>(
        &self,
        f: &F,
        t0: T,
        y0: [T; N],
        t1: T,
        h0: T,
        mut guard: G,
    ) -> Result<Integration<T, N>, StepFailure<T>>
    where
        F: Fn(T, &[T; N]) -> [T; N],
        G: FnMut(&[T; N]) -> bool,
    {
        let zero = T::zero();
        if t1 < t0 {
            return Err(StepFailure { t: t0, reason: "backward integration" });
        }
        let span = t1 - t0;
        let mut t = t0;
        let mut y = y0;
        let mut h = if h0 > zero { h0 } else { T::of(0.01) };
        let mut h_next = h;
        if span == zero {
            return Ok(Integration::Finished { y, h_next: h });
        }
        let mut k = [[zero; N]; STAGES];
        let mut steps = 0usize;
        let tiny = T::of(1e-13) * T::one().max(t.abs()).max(t1.abs());
        loop {
            let remaining = t1 - t;
            let clipped = h >= remaining;
            let h_try = if clipped { remaining } else { h };
            if h_try < tiny && !clipped {
                return Err(StepFailure { t, reason: "step-size underflow" });
            }

            k[0] = f(t, &y);
            for s in 1..STAGES {
                let mut ys = y;
                for (r, kr) in k.iter().enumerate().take(s) {
                    let a = self.a[s][r];
                    if a != zero {
                        for i in 0..N {
                            ys[i] += h_try * a * kr[i];
                        }
                    }
                }
                k[s] = f(t + self.c[s] * h_try, &ys);
            }
            let mut y_new = y;
            let mut err_norm = zero;
            for i in 0..N {
                let mut incr = zero;
                for s in 0..STAGES {
                    incr += self.b8[s] * k[s][i];
                }
                y_new[i] += h_try * incr;
                let e = (h_try * self.err * (k[0][i] + k[10][i] - k[11][i] - k[12][i])).abs();
                let scale = self.tol.abs + self.tol.rel * y[i].abs().max(y_new[i].abs());
                let ratio = e / scale;
                err_norm = if ratio.is_nan() || !y_new[i].is_finite() {
                    T::infinity()
                } else {
                    err_norm.max(ratio)
                };
            }

            let factor = if err_norm == zero {
                T::of(5.0)
            } else {
                (T::of(0.9) * err_norm.powf(T::of(-1.0 / 8.0))).min(T::of(5.0)).max(T::of(0.2))
            };

            if err_norm <= T::one() {
                t = if clipped { t1 } else { t + h_try };
                y = y_new;
                if !clipped {
                    h_next = h_try * factor;
                    h = h_next;
                } else if factor < T::one() {
                    h_next = h_next.min(h_try * factor);
                }
                if !guard(&y) {
                    return Ok(Integration::Stopped { t, y });
                }
                if t >= t1 {
                    return Ok(Integration::Finished { y, h_next });
                }
            } else {
                h = h_try * factor;
                if h < tiny {
                    return Err(StepFailure { t, reason: "step-size underflow" });
                }
            }
            steps += 1;
            if steps > self.max_steps {
                return Err(StepFailure { t, reason: "too many steps" });
            }
        }
    }
}
