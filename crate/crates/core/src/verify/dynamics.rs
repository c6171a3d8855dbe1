use super::{max_abs_diff, sampler, worst, Check, Outcome, Suite};
use crate::dynamics::{
    goldfish_exact, goldfish_rhs, integrate_ecm, integrate_goldfish, uniform_grid, EcmState,
    GoldfishState, IntegratorConfig, Trajectory,
};
use crate::error::Result;

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "dynamics_exact_vs_rk",
            suite: Suite::Dynamics,
            run: exact_vs_rk,
        },
        Check {
            name: "dynamics_bn_conservation",
            suite: Suite::Dynamics,
            run: bn_conservation,
        },
        Check {
            name: "dynamics_ecm_energy_drift",
            suite: Suite::Dynamics,
            run: ecm_energy,
        },
        Check {
            name: "dynamics_ecm_constraint_norm",
            suite: Suite::Dynamics,
            run: ecm_constraint,
        },
        Check {
            name: "dynamics_ecm_tracks_goldfish",
            suite: Suite::Dynamics,
            run: ecm_tracks_goldfish,
        },
        Check {
            name: "dynamics_total_force_vanishes",
            suite: Suite::Dynamics,
            run: total_force,
        },
    ]
}

pub(crate) const HORIZON: f64 = 0.3;
pub(crate) const GRID_POINTS: usize = 31;

/// The 20 seeded goldfish initial conditions shared by the dynamics checks,
/// cycling through `N = 2..=6`.
pub(crate) fn initial_conditions(seed: u64) -> Vec<GoldfishState> {
    let mut s = sampler(seed, "dynamics_runs");
    (0..20)
        .map(|k| {
            let n = 2 + k % 5;
            let q = s.configuration(n);
            let v = s.velocities(n);
            GoldfishState::new(q, v).expect("lengths match")
        })
        .collect()
}

fn goldfish_runs(seed: u64) -> Result<Vec<(GoldfishState, Trajectory)>> {
    let grid = uniform_grid(0.0, HORIZON, GRID_POINTS);
    let cfg = IntegratorConfig::tight();
    initial_conditions(seed)
        .into_iter()
        .map(|s0| integrate_goldfish(&s0, &grid, &cfg).map(|t| (s0, t)))
        .collect()
}

fn ecm_runs(seed: u64) -> Result<Vec<(GoldfishState, Trajectory)>> {
    let grid = uniform_grid(0.0, HORIZON, GRID_POINTS);
    let cfg = IntegratorConfig::tight();
    initial_conditions(seed)
        .into_iter()
        .map(|s0| {
            let e0 = EcmState::on_constraint_surface(&s0)?;
            integrate_ecm(&e0, &grid, &cfg).map(|t| (s0, t))
        })
        .collect()
}

fn exact_vs_rk(seed: u64) -> Outcome {
    let Ok(runs) = goldfish_runs(seed) else {
        return Outcome::failed(1e-8);
    };
    let mut res: f64 = 0.0;
    for (s0, traj) in &runs {
        let n = s0.q.len();
        for (t, y) in traj.times.iter().zip(&traj.states) {
            match goldfish_exact(s0, *t) {
                Ok(q) => res = worst(res, max_abs_diff(&y[..n], q.as_slice())),
                Err(_) => return Outcome::failed(1e-8),
            }
        }
    }
    Outcome::below(res, 1e-8)
}

fn bn_conservation(seed: u64) -> Outcome {
    let Ok(runs) = goldfish_runs(seed) else {
        return Outcome::failed(1e-9);
    };
    let res = runs
        .iter()
        .map(|(_, t)| t.max_abs("b_drift").unwrap_or(f64::INFINITY))
        .fold(0.0, worst);
    Outcome::below(res, 1e-9)
}

fn ecm_energy(seed: u64) -> Outcome {
    let Ok(runs) = ecm_runs(seed) else {
        return Outcome::failed(1e-9);
    };
    let res = runs
        .iter()
        .map(|(_, t)| t.max_abs("H_drift").unwrap_or(f64::INFINITY))
        .fold(0.0, worst);
    Outcome::below(res, 1e-9)
}

fn ecm_constraint(seed: u64) -> Outcome {
    let Ok(runs) = ecm_runs(seed) else {
        return Outcome::failed(1e-8);
    };
    let res = runs
        .iter()
        .map(|(_, t)| t.max_abs("G_norm").unwrap_or(f64::INFINITY))
        .fold(0.0, worst);
    Outcome::below(res, 1e-8)
}

fn ecm_tracks_goldfish(seed: u64) -> Outcome {
    let Ok(runs) = ecm_runs(seed) else {
        return Outcome::failed(1e-8);
    };
    let mut res: f64 = 0.0;
    for (s0, traj) in &runs {
        let n = s0.q.len();
        for (t, y) in traj.times.iter().zip(&traj.states) {
            match goldfish_exact(s0, *t) {
                Ok(q) => res = worst(res, max_abs_diff(&y[..n], q.as_slice())),
                Err(_) => return Outcome::failed(1e-8),
            }
        }
    }
    Outcome::below(res, 1e-8)
}

fn total_force(seed: u64) -> Outcome {
    let mut res: f64 = 0.0;
    for s0 in initial_conditions(seed) {
        let acc = goldfish_rhs(&s0);
        let scale = acc.iter().fold(1.0f64, |m, a| m.max(a.abs()));
        res = worst(res, acc.iter().sum::<f64>().abs() / scale);
    }
    Outcome::below(res, 1e-12)
}
