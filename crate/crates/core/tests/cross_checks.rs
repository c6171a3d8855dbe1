use goldfish_core::dynamics::{goldfish_exact, integrate_goldfish, uniform_grid};
use goldfish_core::geometry::{geodesic_acceleration, geodesic_hamiltonian, metric};
use goldfish_core::hyperbolic::{coth_rhs, hyperbolic_rhs, HyperbolicState};
use goldfish_core::reduction::{eigen_track, rank1_velocity};
use goldfish_core::{Configuration, GeodesicState, GoldfishState, IntegratorConfig};
use nalgebra::DVector;

fn cfg(q: &[f64]) -> Configuration {
    Configuration::new(q.to_vec()).unwrap()
}

/// Two particles: flat coordinates at t=1 are (3, 1), so q solves l^2 - 3l + 1 = 0.
#[test]
fn two_particle_exact_solution_against_quadratic_formula() {
    let s0 = GoldfishState::new(cfg(&[0.0, 1.0]), vec![1.0, 1.0]).unwrap();
    let q = goldfish_exact(&s0, 1.0).unwrap();
    let r = 5f64.sqrt();
    assert!((q.as_slice()[0] - (3.0 - r) / 2.0).abs() < 1e-12);
    assert!((q.as_slice()[1] - (3.0 + r) / 2.0).abs() < 1e-12);
}

#[test]
fn rank_one_matrix_flow_matches_integrated_goldfish() {
    let s0 = GoldfishState::new(cfg(&[-1.0, 0.3, 1.1, 2.0]), vec![0.7, 1.2, 0.9, 1.4]).unwrap();
    let grid = uniform_grid(0.0, 0.3, 7);
    let traj = integrate_goldfish(&s0, &grid, &IntegratorConfig::tight()).unwrap();
    let track = eigen_track(&rank1_velocity(&s0.q, &s0.qdot).unwrap(), &grid).unwrap();
    for (y, e) in traj.states.iter().zip(&track.eigenvalues) {
        for i in 0..4 {
            assert!((y[i] - e[i]).abs() < 1e-9);
        }
    }
}

#[test]
fn geodesic_hamiltonian_is_half_velocity_norm_in_metric() {
    let q = cfg(&[-0.5, 0.4, 1.3]);
    let v = DVector::from_vec(vec![1.0, 0.6, 1.2]);
    let g = metric(&q);
    let pi = &g * &v;
    let h = geodesic_hamiltonian(&GeodesicState::new(q, pi.as_slice().to_vec()).unwrap());
    assert!((h - 0.5 * v.dot(&(&g * &v))).abs() < 1e-12);
}

#[test]
fn geodesic_acceleration_ties_to_hyperbolic_limit() {
    let q = cfg(&[0.0, 0.7, 1.9]);
    let v = vec![1.1, 0.8, 1.3];
    let geo = geodesic_acceleration(&q, &v);
    let st = HyperbolicState::new(q, v).unwrap();
    let sinh = hyperbolic_rhs(&st, 1e-4);
    for (a, b) in geo.iter().zip(&sinh) {
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn coth_and_sinh_differ_away_from_the_limit() {
    let st = HyperbolicState::new(cfg(&[0.0, 1.0]), vec![1.0, 1.0]).unwrap();
    let coth = coth_rhs(&st);
    let sinh = hyperbolic_rhs(&st, 0.5);
    assert!((coth[1] - 2.0 / 1f64.tanh()).abs() < 1e-12);
    assert!((sinh[1] - 2.0 / 1f64.sinh()).abs() < 1e-12);
}
