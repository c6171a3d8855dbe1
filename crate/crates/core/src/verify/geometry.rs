use nalgebra::{DMatrix, DVector};

use super::{max_abs_diff, sampler, worst, Check, Outcome, Suite};
use crate::dynamics::{
    goldfish_exact, goldfish_rhs, integrate_geodesic, uniform_grid, GoldfishState, IntegratorConfig,
    Trajectory,
};
use crate::geometry::{self, GeodesicState, WFunction};
use crate::symfun::Configuration;

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "curvature_flat_w2x",
            suite: Suite::Geometry,
            run: flat,
        },
        Check {
            name: "curvature_nonflat_w1x",
            suite: Suite::Geometry,
            run: nonflat,
        },
        Check {
            name: "geometry_curvature_fd_crosscheck",
            suite: Suite::Geometry,
            run: curvature_fd,
        },
        Check {
            name: "geometry_metric_inverse",
            suite: Suite::Geometry,
            run: metric_inverse,
        },
        Check {
            name: "geometry_inverse_metric_derivative",
            suite: Suite::Geometry,
            run: inverse_metric_derivative,
        },
        Check {
            name: "geometry_geodesic_is_goldfish",
            suite: Suite::Geometry,
            run: geodesic_is_goldfish,
        },
        Check {
            name: "geometry_geodesic_energy_conservation",
            suite: Suite::Geometry,
            run: geodesic_energy,
        },
        Check {
            name: "geometry_geodesic_flow_vs_exact",
            suite: Suite::Geometry,
            run: geodesic_flow_vs_exact,
        },
    ]
}

fn flat(seed: u64) -> Outcome {
    let mut s = sampler(seed, "curvature_flat_w2x");
    let w = WFunction::goldfish();
    let mut res: f64 = 0.0;
    for k in 0..100 {
        let q = s.configuration(2 + k % 5);
        res = worst(res, geometry::curvature(&q, &w).max_abs());
    }
    Outcome::below(res, 1e-9)
}

fn nonflat(_seed: u64) -> Outcome {
    let q = Configuration::new(vec![0.0, 1.0, 3.0]).expect("fixed configuration");
    Outcome::above(geometry::curvature(&q, &WFunction::Rational { c: 1.0 }).max_abs(), 0.1)
}

fn curvature_fd(seed: u64) -> Outcome {
    let mut s = sampler(seed, "geometry_curvature_fd_crosscheck");
    let ws = [WFunction::goldfish(), WFunction::Rational { c: 1.0 }];
    let mut res: f64 = 0.0;
    for k in 0..20 {
        let q = s.configuration(2 + k % 4);
        let w = &ws[k % 2];
        let a = geometry::curvature(&q, w);
        let b = geometry::curvature_fd(&q, w);
        res = worst(res, max_abs_diff(a.values(), b.values()));
    }
    Outcome::below(res, 1e-6)
}

fn metric_inverse(seed: u64) -> Outcome {
    let mut s = sampler(seed, "geometry_metric_inverse");
    let mut res: f64 = 0.0;
    for k in 0..100 {
        let n = 2 + k % 5;
        let q = s.configuration_in(n, 3.0);
        let prod = geometry::metric(&q) * geometry::inverse_metric(&q);
        res = worst(res, (prod - DMatrix::<f64>::identity(n, n)).amax());
    }
    Outcome::below(res, 1e-10)
}

fn inverse_metric_derivative(seed: u64) -> Outcome {
    let mut s = sampler(seed, "geometry_inverse_metric_derivative");
    let mut res: f64 = 0.0;
    for k in 0..20 {
        let q = s.configuration(2 + k % 4);
        let a = geometry::inverse_metric_derivatives(&q);
        let b = geometry::inverse_metric_derivatives_fd(&q);
        for (x, y) in a.iter().zip(&b) {
            let scale = x.amax().max(1.0);
            res = worst(res, (x - y).amax() / scale);
        }
    }
    Outcome::below(res, 1e-6)
}

/// `-Gamma^i_jk v^j v^k` against the goldfish right-hand side.
fn geodesic_is_goldfish(seed: u64) -> Outcome {
    let mut s = sampler(seed, "geometry_geodesic_is_goldfish");
    let mut res: f64 = 0.0;
    for k in 0..100 {
        let n = 2 + k % 5;
        let q = s.configuration(n);
        let v = s.velocities(n);
        let a = geometry::geodesic_acceleration(&q, &v);
        let b = goldfish_rhs(&GoldfishState::new(q, v).expect("lengths match"));
        let scale = b.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        res = worst(res, max_abs_diff(&a, &b) / scale);
    }
    Outcome::below(res, 1e-12)
}

fn geodesic_runs(seed: u64) -> Option<Vec<(GoldfishState, Trajectory)>> {
    let mut s = sampler(seed, "geometry_geodesic_runs");
    let grid = uniform_grid(0.0, 0.3, 31);
    let cfg = IntegratorConfig {
        rel_tol: 1e-13,
        abs_tol: 1e-14,
        ..IntegratorConfig::tight()
    };
    (0..10)
        .map(|k| {
            let n = 2 + k % 4;
            let q = s.configuration(n);
            let v = s.velocities(n);
            let pi = geometry::metric(&q) * DVector::from_column_slice(&v);
            let g0 = GeodesicState::new(q.clone(), pi.as_slice().to_vec()).ok()?;
            let traj = integrate_geodesic(&g0, &grid, &cfg).ok()?;
            Some((GoldfishState::new(q, v).ok()?, traj))
        })
        .collect()
}

/// Drift relative to `max(1, H(0))`: momenta `g qdot` reach the thousands
/// near clustered configurations and `H` is evaluated at that scale.
fn geodesic_energy(seed: u64) -> Outcome {
    let Some(runs) = geodesic_runs(seed) else {
        return Outcome::failed(1e-9);
    };
    let res = runs
        .iter()
        .map(|(s0, t)| {
            let pi = geometry::metric(&s0.q) * DVector::from_column_slice(&s0.qdot);
            let h0 = geometry::geodesic_hamiltonian(
                &GeodesicState::new(s0.q.clone(), pi.as_slice().to_vec()).expect("lengths match"),
            );
            t.max_abs("H_drift").unwrap_or(f64::INFINITY) / h0.abs().max(1.0)
        })
        .fold(0.0, worst);
    Outcome::below(res, 1e-9)
}

/// Geodesic Hamiltonian flow from `pi = g qdot` against the exact goldfish
/// solution. Positions are recovered through `g^-1 pi`, so the tolerance
/// carries the conditioning of the metric.
fn geodesic_flow_vs_exact(seed: u64) -> Outcome {
    let Some(runs) = geodesic_runs(seed) else {
        return Outcome::failed(1e-6);
    };
    let mut res: f64 = 0.0;
    for (s0, traj) in &runs {
        let n = s0.q.len();
        for (t, y) in traj.times.iter().zip(&traj.states) {
            match goldfish_exact(s0, *t) {
                Ok(exact) => res = worst(res, max_abs_diff(&y[..n], exact.as_slice())),
                Err(_) => return Outcome::failed(1e-6),
            }
        }
    }
    Outcome::below(res, 1e-6)
}
