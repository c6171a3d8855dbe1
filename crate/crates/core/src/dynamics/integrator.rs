//! Dormand-Prince 5(4) with PI step-size control and continuous output.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// First-order system `y' = f(t, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);

    /// Ordered particle positions inside `y`, monitored for collisions.
    fn positions<'a>(&self, _y: &'a [f64]) -> &'a [f64] {
        &[]
    }

    /// Named residuals recorded at each output time, relative to `y0` where
    /// that makes sense (drifts of conserved quantities, constraint norms).
    fn diagnostics(&self, _y0: &[f64], _y: &[f64]) -> Vec<(String, f64)> {
        Vec::new()
    }
}

/// Wraps a closure as an [`OdeSystem`].
pub struct CustomRhs<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64])> CustomRhs<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(f64, &[f64], &mut [f64])> OdeSystem for CustomRhs<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        (self.f)(t, y, dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub collision_gap: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            collision_gap: crate::symfun::DEFAULT_COLLISION_GAP,
        }
    }
}

impl IntegratorConfig {
    pub fn tight() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-13,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_step > 0.0) {
            return Err(Error::InvalidConfiguration(format!(
                "integrator tolerances must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Output of an integration: states on the requested grid plus diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// One series per diagnostic name, aligned with `times`.
    pub diagnostics: BTreeMap<String, Vec<f64>>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<&[f64]> {
        self.states.last().map(Vec::as_slice)
    }

    /// Largest absolute value of a diagnostic series, `None` if absent.
    pub fn max_abs(&self, name: &str) -> Option<f64> {
        self.diagnostics
            .get(name)
            .map(|s| s.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
    }

    fn record(&mut self, system: &dyn OdeSystem, y0: &[f64], t: f64, y: Vec<f64>) {
        for (name, value) in system.diagnostics(y0, &y) {
            self.diagnostics.entry(name).or_default().push(value);
        }
        self.times.push(t);
        self.states.push(y);
    }
}

/// Evenly spaced grid of `points` times on `[t0, t1]`.
pub fn uniform_grid(t0: f64, t1: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2, "a grid needs at least two points");
    let dt = (t1 - t0) / (points - 1) as f64;
    (0..points)
        .map(|k| if k + 1 == points { t1 } else { t0 + k as f64 * dt })
        .collect()
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const MAX_STEPS: usize = 2_000_000;

fn adjacent_gap(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

/// Integrates and returns the trajectory, or the first error.
pub fn integrate(
    system: &dyn OdeSystem,
    y0: &[f64],
    grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    match integrate_partial(system, y0, grid, cfg) {
        (traj, None) => Ok(traj),
        (_, Some(err)) => Err(err),
    }
}

/// Like [`integrate`] but keeps whatever was computed before a failure.
pub fn integrate_partial(
    system: &dyn OdeSystem,
    y0: &[f64],
    grid: &[f64],
    cfg: &IntegratorConfig,
) -> (Trajectory, Option<Error>) {
    let mut traj = Trajectory::default();
    if let Err(e) = cfg.validate() {
        return (traj, Some(e));
    }
    let n = system.dim();
    if y0.len() != n {
        return (
            traj,
            Some(Error::DimensionMismatch {
                expected: n,
                got: y0.len(),
            }),
        );
    }
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) || !grid.iter().all(|t| t.is_finite()) {
        return (
            traj,
            Some(Error::InvalidConfiguration(
                "output grid must be finite and strictly increasing".into(),
            )),
        );
    }

    let t_end = *grid.last().unwrap();
    let mut t = grid[0];
    let mut y = y0.to_vec();
    traj.record(system, y0, t, y.clone());
    let mut next_out = 1;
    if next_out == grid.len() {
        return (traj, None);
    }

    let err_norm = |err: &[f64], ya: &[f64], yb: &[f64]| -> f64 {
        let s: f64 = (0..n)
            .map(|i| {
                let sk = cfg.abs_tol + cfg.rel_tol * ya[i].abs().max(yb[i].abs());
                (err[i] / sk).powi(2)
            })
            .sum();
        (s / n as f64).sqrt()
    };

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut yerr = vec![0.0; n];
    system.rhs(t, &y, &mut k1);

    // initial step guess
    let mut h = {
        let d0 = err_norm(&y, &y, &y);
        let d1 = err_norm(&k1, &y, &y);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        for i in 0..n {
            ytmp[i] = y[i] + h0 * k1[i];
        }
        system.rhs(t + h0, &ytmp, &mut k2);
        let diff: Vec<f64> = (0..n).map(|i| (k2[i] - k1[i]) / h0).collect();
        let d2 = err_norm(&diff, &y, &y);
        let dm = d1.max(d2);
        let h1 = if dm <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / dm).powf(0.2)
        };
        (100.0 * h0).min(h1).min(cfg.max_step).min(t_end - t)
    };

    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;
    let mut steps = 0usize;

    while t < t_end {
        steps += 1;
        if steps > MAX_STEPS {
            return (traj, Some(Error::StepSizeUnderflow { t, h }));
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return (traj, Some(Error::StepSizeUnderflow { t, h }));
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        system.rhs(t + C2 * h, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        system.rhs(t + C3 * h, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        system.rhs(t + C4 * h, &ytmp, &mut k4);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        system.rhs(t + C5 * h, &ytmp, &mut k5);
        for i in 0..n {
            ytmp[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let t_new = if last { t_end } else { t + h };
        system.rhs(t_new, &ytmp, &mut k6);
        for i in 0..n {
            ynew[i] = y[i]
                + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        system.rhs(t_new, &ynew, &mut k7);
        for i in 0..n {
            yerr[i] = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let err = err_norm(&yerr, &y, &ynew);

        let fac11 = err.powf(0.2 - BETA * 0.75);
        if err <= 1.0 && err.is_finite() {
            traj.accepted_steps += 1;

            // continuous extension, evaluated at every grid point in (t, t_new]
            while next_out < grid.len() && grid[next_out] <= t_new {
                let tout = grid[next_out];
                let yout = if tout == t_new {
                    ynew.clone()
                } else {
                    let theta = (tout - t) / h;
                    let theta1 = 1.0 - theta;
                    (0..n)
                        .map(|i| {
                            let r2 = ynew[i] - y[i];
                            let r3 = h * k1[i] - r2;
                            let r4 = r2 - h * k7[i] - r3;
                            let r5 = h
                                * (D1 * k1[i]
                                    + D3 * k3[i]
                                    + D4 * k4[i]
                                    + D5 * k5[i]
                                    + D6 * k6[i]
                                    + D7 * k7[i]);
                            y[i] + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)))
                        })
                        .collect()
                };
                traj.record(system, y0, tout, yout);
                next_out += 1;
            }

            std::mem::swap(&mut k1, &mut k7);
            std::mem::swap(&mut y, &mut ynew);
            t = t_new;

            let pos = system.positions(&y);
            if pos.len() > 1 {
                let gap = adjacent_gap(pos);
                if !(gap >= cfg.collision_gap) {
                    return (traj, Some(Error::CollisionDetected { t, gap }));
                }
            }

            let mut fac = fac11 / fac_old.powf(BETA);
            fac_old = err.max(1e-4);
            fac = (fac / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = h / fac;
            if h_new.abs() > cfg.max_step {
                h_new = cfg.max_step;
            }
            if last_rejected {
                h_new = h_new.min(h);
            }
            last_rejected = false;
            h = h_new;
        } else {
            traj.rejected_steps += 1;
            last_rejected = true;
            let shrink = if err.is_finite() {
                (fac11 / SAFETY).min(1.0 / FAC_MIN)
            } else {
                10.0
            };
            h /= shrink;
        }
    }
    (traj, None)
}
