use goldfish_core::dynamics::{
    conserved_bn, ecm_hamiltonian, ecm_hamiltonian_g, goldfish_exact, goldfish_rhs,
};
use goldfish_core::hyperbolic::{s_exact, z_eigen_solution, HyperbolicData, SymmetricSolution};
use goldfish_core::poisson::{DiracCoefficient, PoissonStructure};
use goldfish_core::reduction::{canonical_inverse, canonical_transform, m_matrix, qp_rhs};
use goldfish_core::symfun::{self, DEFAULT_IMAG_TOL};
use goldfish_core::{Antisymmetric, Configuration, EcmState, GoldfishState};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// Sorted points in roughly `[-2, 2]` with every gap at least 0.1.
fn configuration(max_n: usize) -> impl Strategy<Value = Configuration> {
    (2..=max_n)
        .prop_flat_map(|n| (-2.0..-1.0f64, prop::collection::vec(0.1..0.9f64, n - 1)))
        .prop_map(|(start, steps)| {
            let mut q = vec![start];
            for s in steps {
                q.push(q.last().unwrap() + s);
            }
            Configuration::new(q).unwrap()
        })
}

fn with_velocities(max_n: usize) -> impl Strategy<Value = (Configuration, Vec<f64>)> {
    configuration(max_n).prop_flat_map(|q| {
        let n = q.len();
        (Just(q), prop::collection::vec(0.5..1.5f64, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_recover_configuration(q in configuration(6)) {
        let back = symfun::roots_from_coords(&symfun::elem_sym_coords(&q), DEFAULT_IMAG_TOL).unwrap();
        for (a, b) in back.as_slice().iter().zip(q.as_slice()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn jacobian_inverse_is_inverse(q in configuration(6)) {
        let n = q.len();
        let prod = symfun::jacobian(&q) * symfun::jacobian_inverse(&q);
        prop_assert!((prod - DMatrix::<f64>::identity(n, n)).amax() < 1e-10);
    }

    #[test]
    fn vandermonde_determinant(q in configuration(6)) {
        let closed = symfun::jacobian_det(&q);
        let lu = symfun::jacobian(&q).determinant();
        prop_assert!((closed - lu).abs() <= 1e-9 * closed.abs());
    }

    #[test]
    fn goldfish_forces_sum_to_zero((q, v) in with_velocities(6)) {
        let acc = goldfish_rhs(&GoldfishState::new(q, v).unwrap());
        let scale = acc.iter().fold(1.0f64, |m, a| m.max(a.abs()));
        prop_assert!(acc.iter().sum::<f64>().abs() < 1e-12 * scale);
    }

    #[test]
    fn exact_solution_is_linear_in_flat_coordinates((q, v) in with_velocities(5), t in 0.0..0.3f64) {
        let s0 = GoldfishState::new(q.clone(), v).unwrap();
        let b = conserved_bn(&s0);
        let x0 = symfun::elementary_symmetric(q.as_slice());
        let qt = goldfish_exact(&s0, t).unwrap();
        let xt = symfun::elementary_symmetric(qt.as_slice());
        for m in 0..q.len() {
            let expected = x0[m + 1] + t * b[m];
            prop_assert!((xt[m + 1] - expected).abs() < 1e-8 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn hamiltonian_forms_agree_off_surface(
        (q, p) in with_velocities(4),
        seed in prop::collection::vec(-1.0..1.0f64, 6),
    ) {
        let n = q.len();
        let mut it = seed.into_iter().cycle();
        let f = Antisymmetric::from_fn(n, |_, _| it.next().unwrap());
        let s = EcmState::new(q, p, f).unwrap();
        let a = ecm_hamiltonian(&s);
        let b = ecm_hamiltonian_g(&s).unwrap();
        prop_assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn bracket_matrices_antisymmetric((q, p) in with_velocities(4)) {
        let n = q.len();
        let mut z = q.into_vec();
        z.extend(p);
        let m = PoissonStructure::goldfish(n, DiracCoefficient::Corrected).bracket_matrix(&z);
        prop_assert_eq!((&m + m.transpose()).amax(), 0.0);
    }

    #[test]
    fn canonical_chart_roundtrip_and_identity((q, p) in with_velocities(5)) {
        let chart = canonical_transform(q.as_slice(), &p).unwrap();
        let (q2, p2) = canonical_inverse(&chart);
        for i in 0..q.len() {
            prop_assert!((q2[i] - q.as_slice()[i]).abs() < 1e-12);
            prop_assert!((p2[i] - p[i]).abs() < 1e-12);
        }
        let (qd, pd) = qp_rhs(&chart).unwrap();
        let (bq, bp) = (chart.big_q(), chart.big_p());
        for i in 0..q.len() {
            let rhs = 2.0 * bp[i].powi(4);
            prop_assert!((qd[i] * bp[i] - bq[i] * pd[i] - rhs).abs() < 1e-10 * rhs.max(1.0));
        }
    }

    #[test]
    fn m_matrix_is_antisymmetric((q, p) in with_velocities(5)) {
        let m = m_matrix(q.as_slice(), &p).unwrap().to_matrix();
        prop_assert_eq!((&m + m.transpose()).amax(), 0.0);
    }

    #[test]
    fn determinant_route_grows_exponentially((q, c) in with_velocities(3), t in 0.0..0.3f64) {
        let d = HyperbolicData::new(1.0, q.into_vec(), c).unwrap();
        let sol = SymmetricSolution::new(&d).unwrap();
        let n = d.a_vec().len();
        let sum_a: f64 = d.a_vec().iter().sum();
        let expected = (2.0 * sum_a + 2.0 * d.total_velocity() * t).exp();
        prop_assert!((sol.s(t)[n - 1] - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn z_route_center_of_mass((q, c) in with_velocities(3), t in 0.0..0.3f64) {
        let d = HyperbolicData::new(1.0, q.into_vec(), c).unwrap();
        let z = z_eigen_solution(&d, t).unwrap();
        let (_, s) = s_exact(&d, t).unwrap();
        let expected: f64 = d.a_vec().iter().sum::<f64>() + d.total_velocity() * t;
        prop_assert!((z.as_slice().iter().sum::<f64>() - expected).abs() < 1e-9);
        for (a, b) in z.as_slice().iter().zip(s.as_slice()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
