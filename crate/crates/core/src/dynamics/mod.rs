//! Goldfish and Euler-Calogero-Moser dynamics.
//!
//! The goldfish flow `qddot_i = 2 sum_{j != i} qdot_i qdot_j / (q_i - q_j)` is
//! solved two ways: numerically (see [`integrator`]) and exactly, by moving
//! on a straight line in elementary symmetric coordinates and recovering the
//! positions as polynomial roots.

pub mod integrator;
mod systems;

pub use integrator::{
    integrate, integrate_partial, uniform_grid, CustomRhs, IntegratorConfig, OdeSystem,
    Trajectory,
};
pub use systems::{EcmSystem, GeodesicSystem, GoldfishSystem};

use crate::antisym::Antisymmetric;
use crate::error::{Error, Result};
use crate::symfun::{self, Configuration, FlatPoint, DEFAULT_IMAG_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct GoldfishState {
    pub q: Configuration,
    pub qdot: Vec<f64>,
}

impl GoldfishState {
    pub fn new(q: Configuration, qdot: Vec<f64>) -> Result<Self> {
        check_len(q.len(), qdot.len())?;
        Ok(Self { q, qdot })
    }
}

/// Positions, momenta and the antisymmetric spin matrix `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct EcmState {
    pub q: Configuration,
    pub p: Vec<f64>,
    pub f: Antisymmetric,
}

impl EcmState {
    pub fn new(q: Configuration, p: Vec<f64>, f: Antisymmetric) -> Result<Self> {
        check_len(q.len(), p.len())?;
        check_len(q.len(), f.dim())?;
        Ok(Self { q, p, f })
    }

    /// Goldfish-compatible ECM state: `p = qdot`, `f` from [`f_from_velocities`].
    pub fn on_constraint_surface(s: &GoldfishState) -> Result<Self> {
        let f = f_from_velocities(&s.q, &s.qdot)?;
        Self::new(s.q.clone(), s.qdot.clone(), f)
    }
}

/// Time derivatives of an [`EcmState`].
#[derive(Debug, Clone, PartialEq)]
pub struct EcmRates {
    pub qdot: Vec<f64>,
    pub pdot: Vec<f64>,
    pub fdot: Antisymmetric,
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

pub(crate) fn goldfish_accel(q: &[f64], qdot: &[f64], out: &mut [f64]) {
    let n = q.len();
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            if j != i {
                acc += qdot[j] / (q[i] - q[j]);
            }
        }
        out[i] = 2.0 * qdot[i] * acc;
    }
}

/// Goldfish accelerations.
pub fn goldfish_rhs(s: &GoldfishState) -> Vec<f64> {
    let mut out = vec![0.0; s.q.len()];
    goldfish_accel(s.q.as_slice(), &s.qdot, &mut out);
    out
}

pub(crate) fn ecm_rates_raw(q: &[f64], p: &[f64], f: &Antisymmetric) -> EcmRates {
    let n = q.len();
    let pdot = (0..n)
        .map(|i| {
            2.0 * (0..n)
                .filter(|&k| k != i)
                .map(|k| {
                    let fik = f.get(i, k);
                    fik * fik / (q[i] - q[k]).powi(3)
                })
                .sum::<f64>()
        })
        .collect();
    let fdot = Antisymmetric::from_fn(n, |i, j| {
        -(0..n)
            .filter(|&k| k != i && k != j)
            .map(|k| {
                f.get(i, k)
                    * f.get(k, j)
                    * (1.0 / (q[i] - q[k]).powi(2) - 1.0 / (q[k] - q[j]).powi(2))
            })
            .sum::<f64>()
    });
    EcmRates {
        qdot: p.to_vec(),
        pdot,
        fdot,
    }
}

/// Euler-Calogero-Moser equations of motion.
pub fn ecm_rhs(s: &EcmState) -> EcmRates {
    ecm_rates_raw(s.q.as_slice(), &s.p, &s.f)
}

pub(crate) fn ecm_energy_raw(q: &[f64], p: &[f64], f: &Antisymmetric) -> f64 {
    let n = q.len();
    let kinetic: f64 = 0.5 * p.iter().map(|v| v * v).sum::<f64>();
    let mut potential = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            potential += (f.get(i, j) / (q[i] - q[j])).powi(2);
        }
    }
    kinetic + potential
}

/// `H = 1/2 sum p^2 + 1/2 sum_{i != j} f_ij^2 / (q_i - q_j)^2`.
pub fn ecm_hamiltonian(s: &EcmState) -> f64 {
    ecm_energy_raw(s.q.as_slice(), &s.p, &s.f)
}

/// The same Hamiltonian written through the constraints `G_ij`:
/// `1/2 (sum p)^2 + 1/8 sum G^2/q_ij^2 - 1/2 sum G sqrt(p_i p_j)/q_ij`, sums over `i != j`.
pub fn ecm_hamiltonian_g(s: &EcmState) -> Result<f64> {
    let g = crate::poisson::g_constraints(s)?;
    let q = s.q.as_slice();
    let n = q.len();
    let total: f64 = s.p.iter().sum();
    let mut h = 0.5 * total * total;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let qij = q[i] - q[j];
                let gij = g.get(i, j);
                h += gij * gij / (8.0 * qij * qij) - 0.5 * gij * (s.p[i] * s.p[j]).sqrt() / qij;
            }
        }
    }
    Ok(h)
}

fn require_positive(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !(*x > 0.0)) {
        Some(index) => Err(Error::NonPositiveVelocity {
            index,
            value: v[index],
        }),
        None => Ok(()),
    }
}

/// Spin matrix on the goldfish sector: `f_ij = -(q_i - q_j) sqrt(qdot_i qdot_j)`.
pub fn f_from_velocities(q: &Configuration, qdot: &[f64]) -> Result<Antisymmetric> {
    check_len(q.len(), qdot.len())?;
    require_positive(qdot)?;
    let q = q.as_slice();
    Ok(Antisymmetric::from_fn(q.len(), |i, j| {
        -(q[i] - q[j]) * (qdot[i] * qdot[j]).sqrt()
    }))
}

/// Conserved `b_n = d x_n / dt = (J qdot)_n`.
pub fn conserved_bn(s: &GoldfishState) -> Vec<f64> {
    let jac = symfun::jacobian(&s.q);
    let v = nalgebra::DVector::from_column_slice(&s.qdot);
    (jac * v).as_slice().to_vec()
}

/// Exact goldfish positions at time `t`: roots of the straight line
/// `x(t) = x(0) + t b`.
pub fn goldfish_exact(s0: &GoldfishState, t: f64) -> Result<Configuration> {
    goldfish_exact_with_gap(s0, t, symfun::DEFAULT_COLLISION_GAP)
}

pub fn goldfish_exact_with_gap(s0: &GoldfishState, t: f64, collision_gap: f64) -> Result<Configuration> {
    if t == 0.0 {
        return Ok(s0.q.clone());
    }
    let x0 = symfun::elem_sym_coords(&s0.q);
    let b = conserved_bn(s0);
    let x = FlatPoint::new(x0.x.iter().zip(&b).map(|(x, b)| x + t * b).collect());
    symfun::roots_from_coords_with_gap(&x, DEFAULT_IMAG_TOL, collision_gap)
}

pub trait TotalMomentum {
    fn total_momentum(&self) -> f64;
}

impl TotalMomentum for GoldfishState {
    fn total_momentum(&self) -> f64 {
        self.qdot.iter().sum()
    }
}

impl TotalMomentum for EcmState {
    fn total_momentum(&self) -> f64 {
        self.p.iter().sum()
    }
}

pub fn total_momentum<S: TotalMomentum>(s: &S) -> f64 {
    s.total_momentum()
}

/// Integrates the goldfish flow on `grid`.
pub fn integrate_goldfish(s0: &GoldfishState, grid: &[f64], cfg: &IntegratorConfig) -> Result<Trajectory> {
    let sys = GoldfishSystem::new(s0.q.len());
    integrate(&sys, &sys.pack(s0), grid, cfg)
}

pub fn integrate_ecm(s0: &EcmState, grid: &[f64], cfg: &IntegratorConfig) -> Result<Trajectory> {
    let sys = EcmSystem::new(s0.q.len());
    integrate(&sys, &sys.pack(s0), grid, cfg)
}

pub fn integrate_geodesic(
    s0: &crate::geometry::GeodesicState,
    grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let sys = GeodesicSystem::new(s0.q.len());
    integrate(&sys, &sys.pack(s0), grid, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(q: &[f64]) -> Configuration {
        Configuration::new(q.to_vec()).unwrap()
    }

    fn gf(q: &[f64], v: &[f64]) -> GoldfishState {
        GoldfishState::new(cfg(q), v.to_vec()).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn goldfish_rhs_examples() {
        assert_eq!(goldfish_rhs(&gf(&[0.0, 1.0], &[1.0, 1.0])), vec![-2.0, 2.0]);
        assert_eq!(goldfish_rhs(&gf(&[0.0, 1.0], &[0.0, 0.0])), vec![0.0, 0.0]);
        let a = goldfish_rhs(&gf(&[0.0, 1.0, 3.0], &[1.0, 0.0, 1.0]));
        assert!(close(&a, &[-2.0 / 3.0, 0.0, 2.0 / 3.0], 1e-15));
    }

    #[test]
    fn accelerations_sum_to_zero() {
        let a = goldfish_rhs(&gf(&[-1.0, 0.3, 0.8, 2.0], &[0.7, 1.2, 0.9, 1.4]));
        assert!(a.iter().sum::<f64>().abs() < 1e-13);
    }

    #[test]
    fn ecm_rhs_examples() {
        let f = Antisymmetric::from_upper(2, vec![2.0]).unwrap();
        let s = EcmState::new(cfg(&[0.0, 1.0]), vec![0.3, 0.4], f).unwrap();
        let r = ecm_rhs(&s);
        assert_eq!(r.qdot, vec![0.3, 0.4]);
        assert_eq!(r.pdot, vec![-8.0, 8.0]);
        assert_eq!(r.fdot.upper(), &[0.0]);

        let s = EcmState::new(cfg(&[0.0, 1.0, 2.5]), vec![1.0, 2.0, 3.0], Antisymmetric::zeros(3))
            .unwrap();
        let r = ecm_rhs(&s);
        assert!(r.pdot.iter().all(|v| *v == 0.0));
        assert!(r.fdot.upper().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn ecm_hamiltonian_examples() {
        let f = Antisymmetric::from_upper(2, vec![1.0]).unwrap();
        let s = EcmState::new(cfg(&[0.0, 1.0]), vec![1.0, 1.0], f).unwrap();
        assert_eq!(ecm_hamiltonian(&s), 2.0);
        assert!((ecm_hamiltonian_g(&s).unwrap() - 2.0).abs() < 1e-15);

        let s = EcmState::new(cfg(&[0.0, 1.0]), vec![0.0, 0.0], Antisymmetric::zeros(2)).unwrap();
        assert_eq!(ecm_hamiltonian(&s), 0.0);

        let s = EcmState::new(cfg(&[0.0, 1.0]), vec![-1.0, 0.0], Antisymmetric::zeros(2)).unwrap();
        assert!(matches!(ecm_hamiltonian_g(&s), Err(Error::NegativeMomentum { .. })));
    }

    #[test]
    fn g_form_agrees_off_surface() {
        let f = Antisymmetric::from_upper(3, vec![0.3, -0.8, 0.5]).unwrap();
        let s = EcmState::new(cfg(&[-0.5, 0.4, 1.7]), vec![0.6, 1.3, 0.9], f).unwrap();
        assert!((ecm_hamiltonian(&s) - ecm_hamiltonian_g(&s).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn f_from_velocities_examples() {
        let f = f_from_velocities(&cfg(&[0.0, 1.0]), &[1.0, 4.0]).unwrap();
        assert_eq!(f.get(0, 1), 2.0);
        let f = f_from_velocities(&cfg(&[0.0, 1.0]), &[1.0, 1.0]).unwrap();
        assert_eq!(f.get(0, 1), 1.0);
        let f = f_from_velocities(&cfg(&[0.0, 1.0, 3.0]), &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!((f.get(0, 1), f.get(0, 2), f.get(1, 2)), (1.0, 3.0, 2.0));
        assert!(matches!(
            f_from_velocities(&cfg(&[0.0, 1.0]), &[1.0, -1.0]),
            Err(Error::NonPositiveVelocity { index: 1, .. })
        ));
        assert!(f_from_velocities(&cfg(&[0.0, 1.0]), &[1.0, 0.0]).is_err());
    }

    #[test]
    fn bn_examples() {
        assert_eq!(conserved_bn(&gf(&[0.0, 1.0], &[1.0, 1.0])), vec![2.0, 1.0]);
        assert_eq!(conserved_bn(&gf(&[0.0, 1.0], &[0.0, 0.0])), vec![0.0, 0.0]);
        assert_eq!(
            conserved_bn(&gf(&[1.0, 2.0, 3.0], &[1.0, 0.0, 0.0])),
            vec![1.0, 5.0, 6.0]
        );
        let s = gf(&[-0.4, 0.3, 1.2], &[0.8, 1.1, 0.6]);
        assert!((conserved_bn(&s)[0] - total_momentum(&s)).abs() < 1e-15);
    }

    #[test]
    fn exact_examples() {
        let s = gf(&[0.0, 1.0], &[1.0, 1.0]);
        let q = goldfish_exact(&s, 1.0).unwrap();
        let s5 = 5f64.sqrt();
        assert!(close(q.as_slice(), &[(3.0 - s5) / 2.0, (3.0 + s5) / 2.0], 1e-14));
        assert!(close(q.as_slice(), &[0.3819660113, 2.6180339887], 1e-10));
        assert_eq!(goldfish_exact(&s, 0.0).unwrap(), s.q);

        let s = gf(&[-1.0, 0.5, 2.0], &[0.0, 0.0, 0.0]);
        assert!(close(goldfish_exact(&s, 3.7).unwrap().as_slice(), s.q.as_slice(), 1e-12));
    }

    #[test]
    fn integrate_matches_exact() {
        let s = gf(&[0.0, 1.0], &[1.0, 1.0]);
        let traj = integrate_goldfish(&s, &uniform_grid(0.0, 1.0, 11), &IntegratorConfig::tight())
            .unwrap();
        let last = traj.last_state().unwrap();
        let exact = goldfish_exact(&s, 1.0).unwrap();
        assert!(close(&last[..2], exact.as_slice(), 1e-9));
        assert!(traj.max_abs("b_drift").unwrap() < 1e-10);
    }

    #[test]
    fn single_particle_moves_freely() {
        let s = gf(&[0.5], &[2.0]);
        let grid = uniform_grid(0.0, 1.0, 5);
        let traj = integrate_goldfish(&s, &grid, &IntegratorConfig::default()).unwrap();
        for (t, y) in traj.times.iter().zip(&traj.states) {
            assert!((y[0] - (0.5 + 2.0 * t)).abs() < 1e-13);
        }
        assert!((goldfish_exact(&s, 0.7).unwrap().as_slice()[0] - 1.9).abs() < 1e-14);
    }

    #[test]
    fn ecm_on_surface_tracks_goldfish() {
        let s = gf(&[-0.8, 0.2, 1.3], &[1.1, 0.7, 1.4]);
        let e = EcmState::on_constraint_surface(&s).unwrap();
        let grid = uniform_grid(0.0, 0.3, 7);
        let cfg = IntegratorConfig::tight();
        let te = integrate_ecm(&e, &grid, &cfg).unwrap();
        for (t, y) in te.times.iter().zip(&te.states) {
            let exact = goldfish_exact(&s, *t).unwrap();
            assert!(close(&y[..3], exact.as_slice(), 1e-8));
        }
        assert!(te.max_abs("H_drift").unwrap() < 1e-9);
        assert!(te.max_abs("G_norm").unwrap() < 1e-8);
        assert!(te.max_abs("total_momentum_drift").unwrap() < 1e-10);
    }

    #[test]
    fn collision_is_reported() {
        // two particles approaching: qdot_1 > 0 pushes the pair together
        let s = gf(&[0.0, 1.0], &[3.0, -3.0]);
        let cfg = IntegratorConfig {
            collision_gap: 1e-3,
            ..IntegratorConfig::default()
        };
        let err = integrate_goldfish(&s, &uniform_grid(0.0, 10.0, 3), &cfg).unwrap_err();
        assert!(
            matches!(err, Error::CollisionDetected { .. } | Error::StepSizeUnderflow { .. }),
            "{err:?}"
        );
    }
}
