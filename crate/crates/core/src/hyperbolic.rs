//! Hyperbolic variant: `lambda_ddot_i = 2 sum_j 2a lambda_dot_i lambda_dot_j / sinh(2a lambda_ij)`
//! from geodesics on positive matrices, and the `coth` goldfish equation with
//! two exact solvers (eigenvalues of `Z(t)`, and the linear `s_n` dynamics).

use nalgebra::{DMatrix, DVector};

use crate::dynamics::{integrate, IntegratorConfig, OdeSystem, Trajectory};
use crate::error::{Error, Result};
use crate::linalg;
use crate::symfun::{self, Configuration, FlatPoint};

/// Tolerance on imaginary parts of the `Z(t)` spectrum, relative to `max(1, |re|)`.
pub const SPECTRUM_IMAG_TOL: f64 = 1e-9;

/// Initial positions `a_i`, velocities `c_i` and deformation `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicData {
    pub a: f64,
    a_vec: Vec<f64>,
    c_vec: Vec<f64>,
}

impl HyperbolicData {
    pub fn new(a: f64, a_vec: Vec<f64>, c_vec: Vec<f64>) -> Result<Self> {
        if a_vec.len() != c_vec.len() {
            return Err(Error::DimensionMismatch {
                expected: a_vec.len(),
                got: c_vec.len(),
            });
        }
        if a_vec.iter().chain(&c_vec).any(|v| !v.is_finite()) || !a.is_finite() {
            return Err(Error::InvalidConfiguration("non-finite data".into()));
        }
        if a_vec.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidConfiguration(
                "a_vec must be strictly increasing".into(),
            ));
        }
        Ok(Self { a, a_vec, c_vec })
    }

    pub fn a_vec(&self) -> &[f64] {
        &self.a_vec
    }

    pub fn c_vec(&self) -> &[f64] {
        &self.c_vec
    }

    pub fn len(&self) -> usize {
        self.a_vec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_vec.is_empty()
    }

    /// `P = sum c_i`.
    pub fn total_velocity(&self) -> f64 {
        self.c_vec.iter().sum()
    }

    pub fn initial_state(&self) -> Result<HyperbolicState> {
        HyperbolicState::new(Configuration::new(self.a_vec.clone())?, self.c_vec.clone())
    }

    fn require_positive_velocities(&self) -> Result<()> {
        require_positive(&self.c_vec)
    }
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

#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicState {
    pub lambda: Configuration,
    pub lambdadot: Vec<f64>,
}

impl HyperbolicState {
    pub fn new(lambda: Configuration, lambdadot: Vec<f64>) -> Result<Self> {
        if lambda.len() != lambdadot.len() {
            return Err(Error::DimensionMismatch {
                expected: lambda.len(),
                got: lambdadot.len(),
            });
        }
        Ok(Self { lambda, lambdadot })
    }
}

/// `2a / sinh(2a x)`, continued to `1/x` at `a = 0`.
fn sinh_kernel(a: f64, x: f64) -> f64 {
    if a == 0.0 {
        1.0 / x
    } else {
        2.0 * a / (2.0 * a * x).sinh()
    }
}

pub(crate) fn sinh_accel(a: f64, l: &[f64], ld: &[f64], out: &mut [f64]) {
    for i in 0..l.len() {
        out[i] = 2.0
            * (0..l.len())
                .filter(|&j| j != i)
                .map(|j| ld[i] * ld[j] * sinh_kernel(a, l[i] - l[j]))
                .sum::<f64>();
    }
}

pub(crate) fn coth_accel(q: &[f64], qd: &[f64], out: &mut [f64]) {
    for i in 0..q.len() {
        out[i] = 2.0
            * (0..q.len())
                .filter(|&j| j != i)
                .map(|j| qd[i] * qd[j] / (q[i] - q[j]).tanh())
                .sum::<f64>();
    }
}

/// Accelerations of the `sinh` equation; `a = 0` gives the goldfish limit.
pub fn hyperbolic_rhs(s: &HyperbolicState, a: f64) -> Vec<f64> {
    let mut out = vec![0.0; s.lambdadot.len()];
    sinh_accel(a, s.lambda.as_slice(), &s.lambdadot, &mut out);
    out
}

/// `qddot_i = 2 sum_{j != i} qdot_i qdot_j coth(q_i - q_j)`.
pub fn coth_rhs(s: &HyperbolicState) -> Vec<f64> {
    let mut out = vec![0.0; s.lambdadot.len()];
    coth_accel(s.lambda.as_slice(), &s.lambdadot, &mut out);
    out
}

/// Lax matrices `L_ij = delta_ij ld_i + (1 - delta_ij) sqrt(ld_i ld_j)` and
/// `M_ij = -2a sqrt(ld_i ld_j) / sinh(2a (l_i - l_j))`.
pub fn lax_pair(s: &HyperbolicState, a: f64) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let ld = &s.lambdadot;
    require_positive(ld)?;
    let l = s.lambda.as_slice();
    let n = l.len();
    let lax = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            ld[i]
        } else {
            (ld[i] * ld[j]).sqrt()
        }
    });
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            -(ld[i] * ld[j]).sqrt() * sinh_kernel(a, l[i] - l[j])
        }
    });
    Ok((lax, m))
}

/// `L_dot` implied by the equations of motion, for checking `L_dot = [L, M]`.
pub fn lax_derivative(s: &HyperbolicState, a: f64) -> Result<DMatrix<f64>> {
    let ld = &s.lambdadot;
    require_positive(ld)?;
    let ldd = hyperbolic_rhs(s, a);
    let n = ld.len();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            ldd[i]
        } else {
            (ldd[i] * ld[j] + ld[i] * ldd[j]) / (2.0 * (ld[i] * ld[j]).sqrt())
        }
    }))
}

/// `(V0)_ij = a sqrt(c_i c_j) / cosh(a (a_i - a_j))`.
pub fn initial_matrix_velocity(d: &HyperbolicData) -> Result<DMatrix<f64>> {
    d.require_positive_velocities()?;
    let (av, c, a) = (&d.a_vec, &d.c_vec, d.a);
    let n = d.len();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        a * (c[i] * c[j]).sqrt() / (a * (av[i] - av[j])).cosh()
    }))
}

fn half_exponential(d: &HyperbolicData) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_iterator(
        d.len(),
        d.a_vec.iter().map(|x| (d.a * x).exp()),
    ))
}

/// `X(t) = e^{a Lambda0} e^{2t V0} e^{a Lambda0}`.
pub fn matrix_geodesic(d: &HyperbolicData, t: f64) -> Result<DMatrix<f64>> {
    let v0 = initial_matrix_velocity(d)?;
    let e = half_exponential(d);
    Ok(&e * linalg::expm_symmetric(&(v0 * (2.0 * t))) * &e)
}

/// `X(t)` and `X_dot(t)`.
pub fn matrix_geodesic_with_velocity(
    d: &HyperbolicData,
    t: f64,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let v0 = initial_matrix_velocity(d)?;
    let e = half_exponential(d);
    let inner = linalg::expm_symmetric(&(&v0 * (2.0 * t)));
    let x = &e * &inner * &e;
    let xdot = &e * (&v0 * 2.0 * &inner) * &e;
    Ok((x, xdot))
}

/// `K = X_dot X^-1 + X^-1 X_dot`, constant along the geodesic.
pub fn conserved_k(d: &HyperbolicData, t: f64) -> Result<DMatrix<f64>> {
    let (x, xdot) = matrix_geodesic_with_velocity(d, t)?;
    let xi = x
        .clone()
        .cholesky()
        .ok_or(Error::NonPositiveEigenvalue { value: f64::NAN })?
        .inverse();
    Ok(&xdot * &xi + &xi * &xdot)
}

/// Eigenvalue positions `lambda_i = ln(mu_i) / 2a` of `X(t)` and the Lax
/// matrix `R^T K R / 4a` expressed in the eigenframe.
pub fn geodesic_eigen_data(d: &HyperbolicData, t: f64) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let x = matrix_geodesic(d, t)?;
    let (mu, r) = linalg::sorted_symmetric_eigen(&x);
    if let Some(&value) = mu.iter().find(|m| !(**m > 0.0)) {
        return Err(Error::NonPositiveEigenvalue { value });
    }
    let lambda = mu.iter().map(|m| m.ln() / (2.0 * d.a)).collect();
    let k = conserved_k(d, t)?;
    let lax = r.transpose() * k * r / (4.0 * d.a);
    Ok((lambda, lax))
}

/// `Z(t) = e^{2 Lambda0} e^{2t L0}` with `(L0)_ij = c_j`.
pub fn z_matrix(d: &HyperbolicData, t: f64) -> DMatrix<f64> {
    let n = d.len();
    let l0 = DMatrix::from_fn(n, n, |_, j| d.c_vec[j]);
    let diag = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        d.a_vec.iter().map(|x| (2.0 * x).exp()),
    ));
    diag * linalg::expm(&(l0 * (2.0 * t)))
}

/// `q_i(t) = 1/2 ln mu_i` with `mu` the ascending spectrum of `Z(t)`.
pub fn z_eigen_solution(d: &HyperbolicData, t: f64) -> Result<Configuration> {
    let z = z_matrix(d, t);
    let eig = z.complex_eigenvalues();
    let mut mu = Vec::with_capacity(d.len());
    for e in eig.iter() {
        if e.im.abs() > SPECTRUM_IMAG_TOL * e.re.abs().max(1.0) {
            return Err(Error::NonRealSpectrum { imag: e.im.abs() });
        }
        if !(e.re > 0.0) {
            return Err(Error::NonPositiveEigenvalue { value: e.re });
        }
        mu.push(e.re);
    }
    let q = mu.iter().map(|m| 0.5 * m.ln()).collect();
    Configuration::from_unsorted(q)
}

/// `s_n(t) = alpha_n + beta_n e^{2Pt}` together with first and second
/// derivatives, from `(a_vec, c_vec)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSolution {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub total_velocity: f64,
}

impl SymmetricSolution {
    pub fn new(d: &HyperbolicData) -> Result<Self> {
        let p = d.total_velocity();
        if p == 0.0 {
            return Err(Error::ZeroTotalVelocity);
        }
        let y: Vec<f64> = d.a_vec.iter().map(|a| (2.0 * a).exp()).collect();
        let s0 = &symfun::elementary_symmetric(&y)[1..];
        let ydot = DVector::from_iterator(y.len(), y.iter().zip(&d.c_vec).map(|(y, c)| 2.0 * c * y));
        let sdot0 = symfun::jacobian_of(&y) * ydot;
        let beta: Vec<f64> = sdot0.iter().map(|v| v / (2.0 * p)).collect();
        let alpha = s0.iter().zip(&beta).map(|(s, b)| s - b).collect();
        Ok(Self {
            alpha,
            beta,
            total_velocity: p,
        })
    }

    pub fn s(&self, t: f64) -> Vec<f64> {
        let g = (2.0 * self.total_velocity * t).exp();
        self.alpha.iter().zip(&self.beta).map(|(a, b)| a + b * g).collect()
    }

    pub fn s_dot(&self, t: f64) -> Vec<f64> {
        let p2 = 2.0 * self.total_velocity;
        let g = (p2 * t).exp();
        self.beta.iter().map(|b| p2 * b * g).collect()
    }

    pub fn s_ddot(&self, t: f64) -> Vec<f64> {
        let p2 = 2.0 * self.total_velocity;
        self.s_dot(t).iter().map(|v| p2 * v).collect()
    }

    /// `max_n |s_ddot_n - 2P s_dot_n|`.
    pub fn ode_residual(&self, t: f64) -> f64 {
        let p2 = 2.0 * self.total_velocity;
        self.s_ddot(t)
            .iter()
            .zip(self.s_dot(t))
            .map(|(a, b)| (a - p2 * b).abs())
            .fold(0.0, f64::max)
    }
}

/// `s_n(t)` and the positions recovered from them.
pub fn s_exact(d: &HyperbolicData, t: f64) -> Result<(Vec<f64>, Configuration)> {
    let sol = SymmetricSolution::new(d)?;
    let s = sol.s(t);
    let roots = symfun::roots_from_coords(&FlatPoint::new(s.clone()), symfun::DEFAULT_IMAG_TOL)?;
    if let Some(&value) = roots.as_slice().iter().find(|r| !(**r > 0.0)) {
        return Err(Error::NonPositiveRoot { value });
    }
    let q = roots.as_slice().iter().map(|m| 0.5 * m.ln()).collect();
    Ok((s, Configuration::from_unsorted(q)?))
}

/// `f(q) = sum_i (c_i / P) tanh(Pt) / tanh(q - a_i) - 1`.
pub fn root_function_f(d: &HyperbolicData, t: f64, q: f64) -> Result<f64> {
    let p = d.total_velocity();
    let growth = if p == 0.0 { t } else { (p * t).tanh() / p };
    let mut acc = -1.0;
    for (i, (a, c)) in d.a_vec.iter().zip(&d.c_vec).enumerate() {
        let x = q - a;
        if x.abs() <= 1e-12 * a.abs().max(1.0) {
            return Err(Error::PoleProximity { index: i });
        }
        acc += c * growth / x.tanh();
    }
    Ok(acc)
}

/// First-order form of the `sinh` equation, state `[lambda, lambda_dot]`.
#[derive(Debug, Clone, Copy)]
pub struct SinhSystem {
    n: usize,
    a: f64,
}

impl SinhSystem {
    pub fn new(n: usize, a: f64) -> Self {
        Self { n, a }
    }

    pub fn pack(&self, s: &HyperbolicState) -> Vec<f64> {
        pack(s)
    }
}

fn lax_eigenvalues(l: &[f64], ld: &[f64]) -> Option<Vec<f64>> {
    if ld.iter().any(|v| !(*v > 0.0)) {
        return None;
    }
    let n = l.len();
    let lax = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            ld[i]
        } else {
            (ld[i] * ld[j]).sqrt()
        }
    });
    Some(linalg::sorted_symmetric_eigen(&lax).0)
}

impl OdeSystem for SinhSystem {
    fn dim(&self) -> usize {
        2 * self.n
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let (l, ld) = y.split_at(self.n);
        dy[..self.n].copy_from_slice(ld);
        sinh_accel(self.a, l, ld, &mut dy[self.n..]);
    }

    fn positions<'a>(&self, y: &'a [f64]) -> &'a [f64] {
        &y[..self.n]
    }

    fn diagnostics(&self, y0: &[f64], y: &[f64]) -> Vec<(String, f64)> {
        let n = self.n;
        let drift = match (
            lax_eigenvalues(&y0[..n], &y0[n..]),
            lax_eigenvalues(&y[..n], &y[n..]),
        ) {
            (Some(a), Some(b)) => a
                .iter()
                .zip(&b)
                .map(|(x, z)| (x - z).abs())
                .fold(0.0, f64::max),
            _ => f64::NAN,
        };
        vec![
            ("lax_spectrum_drift".into(), drift),
            (
                "total_momentum_drift".into(),
                y[n..].iter().sum::<f64>() - y0[n..].iter().sum::<f64>(),
            ),
        ]
    }
}

/// First-order form of the `coth` equation, state `[q, q_dot]`.
#[derive(Debug, Clone, Copy)]
pub struct CothSystem {
    n: usize,
}

impl CothSystem {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn pack(&self, s: &HyperbolicState) -> Vec<f64> {
        pack(s)
    }
}

impl OdeSystem for CothSystem {
    fn dim(&self) -> usize {
        2 * self.n
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let (q, qd) = y.split_at(self.n);
        dy[..self.n].copy_from_slice(qd);
        coth_accel(q, qd, &mut dy[self.n..]);
    }

    fn positions<'a>(&self, y: &'a [f64]) -> &'a [f64] {
        &y[..self.n]
    }

    fn diagnostics(&self, y0: &[f64], y: &[f64]) -> Vec<(String, f64)> {
        let n = self.n;
        vec![(
            "total_momentum_drift".into(),
            y[n..].iter().sum::<f64>() - y0[n..].iter().sum::<f64>(),
        )]
    }
}

fn pack(s: &HyperbolicState) -> Vec<f64> {
    let mut y = s.lambda.as_slice().to_vec();
    y.extend_from_slice(&s.lambdadot);
    y
}

pub fn integrate_sinh(
    s0: &HyperbolicState,
    a: f64,
    grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    integrate(&SinhSystem::new(s0.lambda.len(), a), &pack(s0), grid, cfg)
}

pub fn integrate_coth(s0: &HyperbolicState, grid: &[f64], cfg: &IntegratorConfig) -> Result<Trajectory> {
    integrate(&CothSystem::new(s0.lambda.len()), &pack(s0), grid, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{goldfish_rhs, uniform_grid, GoldfishState};

    fn state(l: &[f64], ld: &[f64]) -> HyperbolicState {
        HyperbolicState::new(Configuration::new(l.to_vec()).unwrap(), ld.to_vec()).unwrap()
    }

    fn data(a: f64, av: &[f64], c: &[f64]) -> HyperbolicData {
        HyperbolicData::new(a, av.to_vec(), c.to_vec()).unwrap()
    }

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn sinh_examples() {
        let acc = hyperbolic_rhs(&state(&[0.0, 1.0], &[1.0, 1.0]), 0.5);
        let oracle = 2.0 / 1f64.sinh();
        assert!((acc[0] + oracle).abs() < 1e-15 && (acc[1] - oracle).abs() < 1e-15);
        assert!((oracle - 1.7018363).abs() < 1e-7);
        assert_eq!(hyperbolic_rhs(&state(&[0.0, 1.0], &[0.0, 0.0]), 0.5), vec![0.0, 0.0]);
    }

    #[test]
    fn small_a_limit_is_quadratic() {
        let s = state(&[-0.7, 0.4, 1.3], &[0.9, 1.2, 0.6]);
        let g = goldfish_rhs(&GoldfishState::new(s.lambda.clone(), s.lambdadot.clone()).unwrap());
        let r1 = max_diff(&hyperbolic_rhs(&s, 1e-2), &g);
        let r2 = max_diff(&hyperbolic_rhs(&s, 1e-3), &g);
        let ratio = r1 / r2;
        assert!((80.0..120.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn coth_examples() {
        let acc = coth_rhs(&state(&[0.0, 1.0], &[1.0, 1.0]));
        assert!((acc[0] + 2.6260705).abs() < 1e-7 && (acc[1] - 2.6260705).abs() < 1e-7);
        assert_eq!(coth_rhs(&state(&[0.0, 1.0], &[0.0, 0.0])), vec![0.0, 0.0]);
        assert_eq!(coth_rhs(&state(&[0.3], &[2.0])), vec![0.0]);
    }

    #[test]
    fn lax_examples() {
        let (l, m) = lax_pair(&state(&[0.4], &[1.5]), 0.5).unwrap();
        assert_eq!((l[(0, 0)], m[(0, 0)]), (1.5, 0.0));
        let (l, m) = lax_pair(&state(&[0.0, 1.0], &[1.0, 1.0]), 0.5).unwrap();
        assert!((m[(0, 1)] - 0.8509181).abs() < 1e-7);
        assert_eq!(l[(0, 1)], 1.0);
        assert!(lax_pair(&state(&[0.0, 1.0], &[1.0, -1.0]), 0.5).is_err());
    }

    #[test]
    fn lax_equation_holds_pointwise() {
        let s = state(&[-0.6, 0.2, 0.9, 1.8], &[0.7, 1.4, 1.1, 0.8]);
        for a in [0.3, 0.5, 1.2] {
            let (l, m) = lax_pair(&s, a).unwrap();
            let ld = lax_derivative(&s, a).unwrap();
            assert!((&ld - (&l * &m - &m * &l)).amax() < 1e-12);
        }
    }

    #[test]
    fn isospectral_along_flow() {
        let s = state(&[-0.6, 0.2, 0.9], &[0.7, 1.4, 1.1]);
        let tr = integrate_sinh(&s, 0.5, &uniform_grid(0.0, 0.3, 16), &IntegratorConfig::tight()).unwrap();
        assert!(tr.max_abs("lax_spectrum_drift").unwrap() < 1e-8);
    }

    #[test]
    fn v0_and_geodesic_examples() {
        let d = data(1.0, &[0.0, 1.0], &[1.0, 1.0]);
        let v0 = initial_matrix_velocity(&d).unwrap();
        assert!((v0[(0, 1)] - 0.6480543).abs() < 1e-7);
        let x0 = matrix_geodesic(&d, 0.0).unwrap();
        assert!((x0[(0, 0)] - 1.0).abs() < 1e-15 && (x0[(1, 1)] - 2f64.exp()).abs() < 1e-13);
        assert!(x0[(0, 1)].abs() < 1e-15);
        let k0 = conserved_k(&d, 0.0).unwrap();
        for t in [0.1, 0.2, 0.3] {
            assert!((conserved_k(&d, t).unwrap() - &k0).norm() < 1e-9);
        }
    }

    #[test]
    fn geodesic_eigenvalues_follow_sinh_flow() {
        let d = data(0.5, &[-0.4, 0.3, 1.1], &[0.8, 1.3, 0.6]);
        let grid = uniform_grid(0.0, 0.3, 7);
        let tr = integrate_sinh(&d.initial_state().unwrap(), d.a, &grid, &IntegratorConfig::tight()).unwrap();
        for (k, &t) in grid.iter().enumerate() {
            let (lambda, lax) = geodesic_eigen_data(&d, t).unwrap();
            assert!(max_diff(&lambda, &tr.states[k][..3]) < 1e-7);
            let ld = &tr.states[k][3..];
            for i in 0..3 {
                assert!((lax[(i, i)] - ld[i]).abs() < 1e-7);
                for j in 0..3 {
                    if i != j {
                        assert!((lax[(i, j)].abs() - (ld[i] * ld[j]).sqrt()).abs() < 1e-7);
                    }
                }
            }
        }
    }

    #[test]
    fn z_eigen_examples() {
        let q = z_eigen_solution(&data(1.0, &[0.0], &[1.0]), 0.7).unwrap();
        assert!((q.as_slice()[0] - 0.7).abs() < 1e-14);
        let d = data(1.0, &[0.0, 1.0], &[1.0, 1.0]);
        let q = z_eigen_solution(&d, 0.0).unwrap();
        assert!(max_diff(q.as_slice(), &[0.0, 1.0]) < 1e-14);
        let q = z_eigen_solution(&d, 0.5).unwrap();
        assert!(max_diff(q.as_slice(), &[0.243313, 1.756687]) < 1e-6);
        assert!((q.as_slice().iter().sum::<f64>() - 2.0).abs() < 1e-12);
    }

    /// 2x2 oracle: Z = diag(1, e^2)(I + b L0), b = (e^{4t} - 1)/2.
    #[test]
    fn z_eigen_matches_closed_two_by_two() {
        let t: f64 = 0.5;
        let b = ((4.0 * t).exp() - 1.0) / 2.0;
        let e2 = 2f64.exp();
        let z = [[1.0 + b, b], [e2 * b, e2 * (1.0 + b)]];
        let tr = z[0][0] + z[1][1];
        let det = z[0][0] * z[1][1] - z[0][1] * z[1][0];
        let disc = (tr * tr - 4.0 * det).sqrt();
        let oracle = [0.5 * ((tr - disc) / 2.0).ln(), 0.5 * ((tr + disc) / 2.0).ln()];
        let q = z_eigen_solution(&data(1.0, &[0.0, 1.0], &[1.0, 1.0]), t).unwrap();
        assert!(max_diff(q.as_slice(), &oracle) < 1e-12);
    }

    #[test]
    fn s_exact_examples() {
        let d = data(1.0, &[0.0, 1.0], &[1.0, 1.0]);
        let (s, q) = s_exact(&d, 0.5).unwrap();
        assert!((s[1] - 4f64.exp()).abs() < 1e-10);
        let qz = z_eigen_solution(&d, 0.5).unwrap();
        assert!(max_diff(q.as_slice(), qz.as_slice()) < 1e-9);
        let sol = SymmetricSolution::new(&d).unwrap();
        assert_eq!(sol.alpha[1], 0.0);
        assert!(sol.ode_residual(0.3) < 1e-12);
        assert!(matches!(
            s_exact(&data(1.0, &[0.0, 1.0], &[1.0, -1.0]), 0.2),
            Err(Error::ZeroTotalVelocity)
        ));
    }

    #[test]
    fn exact_solvers_satisfy_coth_equation() {
        let d = data(1.0, &[0.0, 1.0], &[1.0, 1.0]);
        let h = 1e-3;
        for t in [0.1, 0.2, 0.3] {
            let q = |t| z_eigen_solution(&d, t).unwrap().into_vec();
            let (qm, q0, qp) = (q(t - h), q(t), q(t + h));
            let qd: Vec<f64> = (0..2).map(|i| (qp[i] - qm[i]) / (2.0 * h)).collect();
            let qdd: Vec<f64> = (0..2).map(|i| (qp[i] - 2.0 * q0[i] + qm[i]) / (h * h)).collect();
            let acc = coth_rhs(&state(&q0, &qd));
            assert!(max_diff(&qdd, &acc) < 1e-5, "{t}: {}", max_diff(&qdd, &acc));
            let (_, qs) = s_exact(&d, t).unwrap();
            assert!(max_diff(qs.as_slice(), &q0) < 1e-9);
        }
    }

    #[test]
    fn exact_matches_coth_integration() {
        let d = data(1.0, &[-0.5, 0.4, 1.2], &[0.9, 1.3, 0.7]);
        let grid = uniform_grid(0.0, 0.3, 7);
        let tr = integrate_coth(&d.initial_state().unwrap(), &grid, &IntegratorConfig::tight()).unwrap();
        for (k, &t) in grid.iter().enumerate() {
            let q = z_eigen_solution(&d, t).unwrap();
            assert!(max_diff(q.as_slice(), &tr.states[k][..3]) < 1e-8);
        }
    }

    #[test]
    fn root_function_examples() {
        let d = data(1.0, &[0.0, 1.0], &[1.0, 1.0]);
        assert_eq!(root_function_f(&d, 0.0, 0.37).unwrap(), -1.0);
        let one = data(1.0, &[0.2], &[0.8]);
        let r = root_function_f(&one, 0.6, 0.2 + 0.8 * 0.6).unwrap();
        assert!(r.abs() < 1e-14);
        let q = z_eigen_solution(&d, 0.5).unwrap();
        for &qi in q.as_slice() {
            assert!(root_function_f(&d, 0.5, qi).unwrap().abs() < 1e-8);
        }
        assert!(matches!(root_function_f(&d, 0.5, 1.0), Err(Error::PoleProximity { index: 1 })));
    }
}
