use nalgebra::DMatrix;

use super::dynamics::{initial_conditions, GRID_POINTS, HORIZON};
use super::{max_abs_diff, sampler, worst, Check, Outcome, Suite};
use crate::dynamics::{goldfish_exact, uniform_grid, IntegratorConfig};
use crate::linalg;
use crate::reduction::{
    self, eigen_track, frame_distance_up_to_signs, frame_flow, free_vector_position,
    invariant_vectors, m_matrix_form_spread, m_matrix_forms, qp_rhs, rank1_velocity,
};

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "reduction_eigenvalues_vs_goldfish",
            suite: Suite::Reduction,
            run: eigen_vs_goldfish,
        },
        Check {
            name: "reduction_rank_one_velocity",
            suite: Suite::Reduction,
            run: rank_one,
        },
        Check {
            name: "reduction_frame_consistency",
            suite: Suite::Reduction,
            run: frame_consistency,
        },
        Check {
            name: "reduction_m_matrix_forms",
            suite: Suite::Reduction,
            run: m_forms,
        },
        Check {
            name: "reduction_qp_identity",
            suite: Suite::Reduction,
            run: qp_identity,
        },
        Check {
            name: "reduction_frame_vs_eigen_track",
            suite: Suite::Reduction,
            run: frame_vs_eigen,
        },
        Check {
            name: "reduction_frame_orthogonality",
            suite: Suite::Reduction,
            run: frame_orthogonality,
        },
        Check {
            name: "reduction_invariant_v_constant",
            suite: Suite::Reduction,
            run: v_constant,
        },
        Check {
            name: "reduction_invariant_u_linear",
            suite: Suite::Reduction,
            run: u_linear,
        },
    ]
}

fn eigen_vs_goldfish(seed: u64) -> Outcome {
    let grid = uniform_grid(0.0, HORIZON, GRID_POINTS);
    let mut res: f64 = 0.0;
    for s0 in initial_conditions(seed) {
        let Ok(m) = rank1_velocity(&s0.q, &s0.qdot) else {
            return Outcome::failed(1e-9);
        };
        let Ok(track) = eigen_track(&m, &grid) else {
            return Outcome::failed(1e-9);
        };
        for (t, values) in grid.iter().zip(&track.eigenvalues) {
            match goldfish_exact(&s0, *t) {
                Ok(q) => res = worst(res, max_abs_diff(values, q.as_slice())),
                Err(_) => return Outcome::failed(1e-9),
            }
        }
    }
    Outcome::below(res, 1e-9)
}

/// One eigenvalue equal to `sum qdot`, the rest zero.
fn rank_one(seed: u64) -> Outcome {
    let mut res: f64 = 0.0;
    for s0 in initial_conditions(seed) {
        let Ok(m) = rank1_velocity(&s0.q, &s0.qdot) else {
            return Outcome::failed(1e-12);
        };
        let (values, _) = linalg::sorted_symmetric_eigen(m.v0());
        let n = values.len();
        let total: f64 = s0.qdot.iter().sum();
        res = worst(res, (values[n - 1] - total).abs() / total);
        for v in &values[..n - 1] {
            res = worst(res, v.abs() / total);
        }
    }
    Outcome::below(res, 1e-12)
}

/// `X_dot(0) = R (D_dot + [M, D]) R^T` with `R = I` reproduces `V0`.
fn frame_consistency(seed: u64) -> Outcome {
    let mut res: f64 = 0.0;
    for s0 in initial_conditions(seed) {
        let n = s0.q.len();
        let (Ok(m), Ok(mm)) = (
            rank1_velocity(&s0.q, &s0.qdot),
            reduction::m_matrix(s0.q.as_slice(), &s0.qdot),
        ) else {
            return Outcome::failed(1e-10);
        };
        let xdot = reduction::velocity_from_frame(
            &DMatrix::identity(n, n),
            s0.q.as_slice(),
            &s0.qdot,
            &mm,
        );
        res = worst(res, (xdot - m.v0()).amax());
    }
    Outcome::below(res, 1e-10)
}

fn m_forms(seed: u64) -> Outcome {
    let mut s = sampler(seed, "reduction_m_matrix_forms");
    let mut res: f64 = 0.0;
    for k in 0..100 {
        let n = 2 + k % 5;
        let q = s.configuration(n);
        let p = s.velocities(n);
        match m_matrix_forms(q.as_slice(), &p) {
            Ok(forms) => res = worst(res, m_matrix_form_spread(&forms)),
            Err(_) => return Outcome::failed(1e-12),
        }
    }
    Outcome::below(res, 1e-12)
}

/// `Q_dot_i P_i - Q_i P_dot_i = 2 P_i^4` at 1000 random charts.
fn qp_identity(seed: u64) -> Outcome {
    let mut s = sampler(seed, "reduction_qp_identity");
    let mut res: f64 = 0.0;
    for k in 0..1000 {
        let n = 2 + k % 5;
        let q = s.configuration(n);
        let p = s.velocities(n);
        let Ok(chart) = reduction::canonical_transform(q.as_slice(), &p) else {
            return Outcome::failed(1e-10);
        };
        let Ok((qd, pd)) = qp_rhs(&chart) else {
            return Outcome::failed(1e-10);
        };
        let (big_q, big_p) = (chart.big_q(), chart.big_p());
        for i in 0..n {
            let lhs = qd[i] * big_p[i] - big_q[i] * pd[i];
            let rhs = 2.0 * big_p[i].powi(4);
            res = worst(res, (lhs - rhs).abs() / rhs.max(1.0));
        }
    }
    Outcome::below(res, 1e-10)
}

fn frame_runs(seed: u64) -> Option<Vec<reduction::FrameTrajectory>> {
    let grid = uniform_grid(0.0, HORIZON, GRID_POINTS);
    let cfg = IntegratorConfig::tight();
    initial_conditions(seed)
        .iter()
        .take(10)
        .map(|s0| frame_flow(&s0.q, &s0.qdot, &grid, &cfg).ok())
        .collect()
}

fn frame_vs_eigen(seed: u64) -> Outcome {
    let grid = uniform_grid(0.0, HORIZON, GRID_POINTS);
    let Some(runs) = frame_runs(seed) else {
        return Outcome::failed(1e-6);
    };
    let mut res: f64 = 0.0;
    for (s0, ft) in initial_conditions(seed).iter().zip(&runs) {
        let Ok(track) = rank1_velocity(&s0.q, &s0.qdot).and_then(|m| eigen_track(&m, &grid)) else {
            return Outcome::failed(1e-6);
        };
        for (a, b) in ft.frames.iter().zip(&track.frames) {
            res = worst(res, frame_distance_up_to_signs(a, b));
        }
    }
    Outcome::below(res, 1e-6)
}

fn frame_orthogonality(seed: u64) -> Outcome {
    let Some(runs) = frame_runs(seed) else {
        return Outcome::failed(1e-8);
    };
    let res = runs
        .iter()
        .map(|ft| ft.max_orthogonality_defect())
        .fold(0.0, worst);
    Outcome::below(res, 1e-8)
}

fn norm_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn v_constant(seed: u64) -> Outcome {
    let Some(runs) = frame_runs(seed) else {
        return Outcome::failed(1e-7);
    };
    let mut res: f64 = 0.0;
    for ft in &runs {
        let (_, v) = invariant_vectors(ft);
        for vk in &v {
            res = worst(res, norm_diff(vk, &v[0]));
        }
    }
    Outcome::below(res, 1e-7)
}

fn u_linear(seed: u64) -> Outcome {
    let Some(runs) = frame_runs(seed) else {
        return Outcome::failed(1e-7);
    };
    let mut res: f64 = 0.0;
    for ft in &runs {
        let (u, v) = invariant_vectors(ft);
        for (k, t) in ft.times.iter().enumerate() {
            let pred = free_vector_position(&u[0], &v[0], *t);
            res = worst(res, norm_diff(&u[k], &pred));
        }
    }
    Outcome::below(res, 1e-7)
}
