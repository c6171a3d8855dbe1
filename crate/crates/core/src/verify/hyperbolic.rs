use super::{max_abs_diff, sampler, worst, Check, Outcome, Suite};
use crate::dynamics::{uniform_grid, IntegratorConfig};
use crate::hyperbolic::{
    coth_rhs, conserved_k, geodesic_eigen_data, hyperbolic_rhs, integrate_coth, integrate_sinh,
    root_function_f, s_exact, z_eigen_solution, HyperbolicData, HyperbolicState,
    SymmetricSolution,
};
use crate::dynamics::{goldfish_rhs, GoldfishState};
use crate::sampling::Sampler;
use crate::symfun::Configuration;

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "hyperbolic_z_eigen_vs_s_exact",
            suite: Suite::Hyperbolic,
            run: z_vs_s,
        },
        Check {
            name: "hyperbolic_coth_fd_residual",
            suite: Suite::Hyperbolic,
            run: coth_fd,
        },
        Check {
            name: "hyperbolic_s_ode_residual",
            suite: Suite::Hyperbolic,
            run: s_ode,
        },
        Check {
            name: "hyperbolic_lax_spectrum_drift",
            suite: Suite::Hyperbolic,
            run: lax_drift,
        },
        Check {
            name: "hyperbolic_k_conservation",
            suite: Suite::Hyperbolic,
            run: k_conservation,
        },
        Check {
            name: "hyperbolic_small_a_ratio_deviation",
            suite: Suite::Hyperbolic,
            run: small_a,
        },
        Check {
            name: "hyperbolic_geodesic_vs_sinh_flow",
            suite: Suite::Hyperbolic,
            run: geodesic_vs_sinh,
        },
        Check {
            name: "hyperbolic_root_function_residual",
            suite: Suite::Hyperbolic,
            run: root_function,
        },
        Check {
            name: "hyperbolic_exact_vs_coth_rk",
            suite: Suite::Hyperbolic,
            run: exact_vs_rk,
        },
    ]
}

const TIMES: [f64; 6] = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3];

fn random_data(s: &mut Sampler, n: usize, a: f64) -> HyperbolicData {
    let av = s.configuration(n).into_vec();
    let c = s.velocities(n);
    HyperbolicData::new(a, av, c).expect("sampled data")
}

fn z_vs_s(seed: u64) -> Outcome {
    let mut s = sampler(seed, "hyperbolic_z_vs_s");
    let mut res: f64 = 0.0;
    for k in 0..20 {
        let d = random_data(&mut s, 2 + k % 3, 1.0);
        for t in TIMES {
            match (z_eigen_solution(&d, t), s_exact(&d, t)) {
                (Ok(a), Ok((_, b))) => res = worst(res, max_abs_diff(a.as_slice(), b.as_slice())),
                _ => return Outcome::failed(1e-9),
            }
        }
    }
    Outcome::below(res, 1e-9)
}

/// Fourth-order central differences (`h = 1e-3`) of the Z-eigenvalue
/// solution against the coth right-hand side, relative to `max(1, |qddot|)`.
fn coth_fd(seed: u64) -> Outcome {
    let mut s = sampler(seed, "hyperbolic_coth_fd");
    let h = 1e-3;
    let mut res: f64 = 0.0;
    for k in 0..20 {
        let n = 2 + k % 3;
        let d = random_data(&mut s, n, 1.0);
        for t in TIMES {
            let Ok(q) = [-2.0, -1.0, 0.0, 1.0, 2.0]
                .iter()
                .map(|m| z_eigen_solution(&d, t + m * h).map(|c| c.into_vec()))
                .collect::<crate::error::Result<Vec<_>>>()
            else {
                return Outcome::failed(1e-5);
            };
            let qd: Vec<f64> = (0..n)
                .map(|i| (q[0][i] - 8.0 * q[1][i] + 8.0 * q[3][i] - q[4][i]) / (12.0 * h))
                .collect();
            let qdd: Vec<f64> = (0..n)
                .map(|i| {
                    (-q[0][i] + 16.0 * q[1][i] - 30.0 * q[2][i] + 16.0 * q[3][i] - q[4][i])
                        / (12.0 * h * h)
                })
                .collect();
            let state = HyperbolicState::new(
                Configuration::new(q[2].clone()).expect("solver output"),
                qd,
            )
            .expect("lengths match");
            let acc = coth_rhs(&state);
            for i in 0..n {
                res = worst(res, (qdd[i] - acc[i]).abs() / acc[i].abs().max(1.0));
            }
        }
    }
    Outcome::below(res, 1e-5)
}

fn s_ode(seed: u64) -> Outcome {
    let mut s = sampler(seed, "hyperbolic_s_ode");
    let mut res: f64 = 0.0;
    for k in 0..20 {
        let d = random_data(&mut s, 2 + k % 3, 1.0);
        let Ok(sol) = SymmetricSolution::new(&d) else {
            return Outcome::failed(1e-8);
        };
        for t in TIMES {
            res = worst(res, sol.ode_residual(t));
        }
    }
    Outcome::below(res, 1e-8)
}

fn lax_drift(seed: u64) -> Outcome {
    let mut s = sampler(seed, "hyperbolic_lax_drift");
    let grid = uniform_grid(0.0, 0.3, 31);
    let cfg = IntegratorConfig::tight();
    let mut res: f64 = 0.0;
    for k in 0..10 {
        let d = random_data(&mut s, 2 + k % 3, 0.5);
        let Ok(traj) = d
            .initial_state()
            .and_then(|s0| integrate_sinh(&s0, d.a, &grid, &cfg))
        else {
            return Outcome::failed(1e-8);
        };
        res = worst(res, traj.max_abs("lax_spectrum_drift").unwrap_or(f64::INFINITY));
    }
    Outcome::below(res, 1e-8)
}

fn k_conservation(seed: u64) -> Outcome {
    let mut s = sampler(seed, "hyperbolic_k_conservation");
    let mut res: f64 = 0.0;
    for k in 0..20 {
        let d = random_data(&mut s, 2 + k % 3, 0.5);
        let Ok(k0) = conserved_k(&d, 0.0) else {
            return Outcome::failed(1e-9);
        };
        for t in TIMES {
            match conserved_k(&d, t) {
                Ok(kt) => res = worst(res, (kt - &k0).norm()),
                Err(_) => return Outcome::failed(1e-9),
            }
        }
    }
    Outcome::below(res, 1e-9)
}

/// `|sinh rhs - goldfish rhs|` shrinks by ~100 from `a = 1e-2` to `a = 1e-3`;
/// reports the largest deviation of that ratio from 100.
fn small_a(seed: u64) -> Outcome {
    let mut s = sampler(seed, "hyperbolic_small_a");
    let mut res: f64 = 0.0;
    for k in 0..20 {
        let n = 2 + k % 4;
        let q = s.configuration(n);
        let v = s.velocities(n);
        let g = goldfish_rhs(&GoldfishState::new(q.clone(), v.clone()).expect("lengths match"));
        let st = HyperbolicState::new(q, v).expect("lengths match");
        let r1 = max_abs_diff(&hyperbolic_rhs(&st, 1e-2), &g);
        let r2 = max_abs_diff(&hyperbolic_rhs(&st, 1e-3), &g);
        res = worst(res, (r1 / r2 - 100.0).abs());
    }
    Outcome::below(res, 20.0)
}

fn geodesic_vs_sinh(seed: u64) -> Outcome {
    let mut s = sampler(seed, "hyperbolic_geodesic_vs_sinh");
    let grid = uniform_grid(0.0, 0.3, 7);
    let cfg = IntegratorConfig::tight();
    let mut res: f64 = 0.0;
    for k in 0..10 {
        let n = 2 + k % 3;
        let d = random_data(&mut s, n, 0.5);
        let Ok(traj) = d
            .initial_state()
            .and_then(|s0| integrate_sinh(&s0, d.a, &grid, &cfg))
        else {
            return Outcome::failed(1e-7);
        };
        for (t, y) in grid.iter().zip(&traj.states) {
            match geodesic_eigen_data(&d, *t) {
                Ok((lambda, _)) => res = worst(res, max_abs_diff(&lambda, &y[..n])),
                Err(_) => return Outcome::failed(1e-7),
            }
        }
    }
    Outcome::below(res, 1e-7)
}

fn root_function(seed: u64) -> Outcome {
    let mut s = sampler(seed, "hyperbolic_root_function");
    let mut res: f64 = 0.0;
    for k in 0..20 {
        let d = random_data(&mut s, 2 + k % 3, 1.0);
        for t in TIMES {
            let Ok(q) = z_eigen_solution(&d, t) else {
                return Outcome::failed(1e-8);
            };
            for &qi in q.as_slice() {
                match root_function_f(&d, t, qi) {
                    Ok(v) => res = worst(res, v.abs()),
                    Err(_) => return Outcome::failed(1e-8),
                }
            }
        }
    }
    Outcome::below(res, 1e-8)
}

fn exact_vs_rk(seed: u64) -> Outcome {
    let mut s = sampler(seed, "hyperbolic_exact_vs_rk");
    let grid = uniform_grid(0.0, 0.3, 7);
    let cfg = IntegratorConfig::tight();
    let mut res: f64 = 0.0;
    for k in 0..10 {
        let n = 2 + k % 3;
        let d = random_data(&mut s, n, 1.0);
        let Ok(traj) = d.initial_state().and_then(|s0| integrate_coth(&s0, &grid, &cfg)) else {
            return Outcome::failed(1e-8);
        };
        for (t, y) in grid.iter().zip(&traj.states) {
            match z_eigen_solution(&d, *t) {
                Ok(q) => res = worst(res, max_abs_diff(q.as_slice(), &y[..n])),
                Err(_) => return Outcome::failed(1e-8),
            }
        }
    }
    Outcome::below(res, 1e-8)
}
