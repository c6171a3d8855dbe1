//! Geodesic structure of the goldfish equations.
//!
//! The Christoffel symbols have the sparse form
//! `Gamma^i_jk = delta^i_j w_ik + delta^i_k w_ij` with
//! `w_ik = -1/2 w(q_i - q_k)` off the diagonal. For `w(x) = 2/x` the
//! connection is flat and is induced by the elementary symmetric chart.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::symfun::{self, node_denominator, Configuration};

/// Pair function `w` entering the Christoffel symbols. Must be odd.
#[derive(Clone)]
pub enum WFunction {
    /// `w(x) = c / x`; `c = 2` is the goldfish connection.
    Rational { c: f64 },
    /// Arbitrary odd function; its derivative is taken by central differences.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for WFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational { c } => write!(f, "Rational {{ c: {c} }}"),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl WFunction {
    pub fn goldfish() -> Self {
        Self::Rational { c: 2.0 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Rational { c } => c / x,
            Self::Custom(w) => w(x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Self::Rational { c } => -c / (x * x),
            Self::Custom(w) => {
                let h = 1e-5 * x.abs().max(1.0);
                (w(x + h) - w(x - h)) / (2.0 * h)
            }
        }
    }

    /// Largest `|w(x) + w(-x)|` over the sample points.
    pub fn oddness_defect(&self, samples: &[f64]) -> f64 {
        samples
            .iter()
            .filter(|x| **x != 0.0)
            .map(|&x| (self.eval(x) + self.eval(-x)).abs())
            .fold(0.0, f64::max)
    }
}

/// Dense `N x N x N` array indexed `[i][j][k]` for `Gamma^i_jk`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank3 {
    n: usize,
    data: Vec<f64>,
}

impl Rank3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.n + j) * self.n + k] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }
}

/// Dense `N^4` array indexed `[c][a][d][b]` for `R^c_adb`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank4 {
    n: usize,
    data: Vec<f64>,
}

impl Rank4 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn index(&self, c: usize, a: usize, d: usize, b: usize) -> usize {
        ((c * self.n + a) * self.n + d) * self.n + b
    }

    pub fn get(&self, c: usize, a: usize, d: usize, b: usize) -> f64 {
        self.data[self.index(c, a, d, b)]
    }

    pub fn set(&mut self, c: usize, a: usize, d: usize, b: usize, v: f64) {
        let idx = self.index(c, a, d, b);
        self.data[idx] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }
}

/// Position and conjugate momentum of the geodesic flow.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicState {
    pub q: Configuration,
    pub pi: Vec<f64>,
}

impl GeodesicState {
    pub fn new(q: Configuration, pi: Vec<f64>) -> crate::Result<Self> {
        if pi.len() != q.len() {
            return Err(crate::Error::DimensionMismatch {
                expected: q.len(),
                got: pi.len(),
            });
        }
        Ok(Self { q, pi })
    }
}

/// Goldfish Christoffel symbols.
pub fn christoffel(q: &Configuration) -> Rank3 {
    let q = q.as_slice();
    let n = q.len();
    let mut gamma = Rank3::zeros(n);
    for i in 0..n {
        for k in 0..n {
            if k == i {
                continue;
            }
            let v = -1.0 / (q[i] - q[k]);
            gamma.set(i, i, k, v);
            gamma.set(i, k, i, v);
        }
    }
    gamma
}

/// `w_ik = -1/2 w(q_i - q_k)` off the diagonal, and its gap derivative.
fn pair_tables(q: &[f64], w: &WFunction) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = q.len();
    let mut wt = DMatrix::zeros(n, n);
    let mut dw = DMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            if i != k {
                let x = q[i] - q[k];
                wt[(i, k)] = -0.5 * w.eval(x);
                dw[(i, k)] = -0.5 * w.derivative(x);
            }
        }
    }
    (wt, dw)
}

/// Riemann tensor `R^c_adb` from its closed form in terms of `w` and `w'`.
pub fn curvature(q: &Configuration, w: &WFunction) -> Rank4 {
    let q = q.as_slice();
    let n = q.len();
    let (wt, dw) = pair_tables(q, w);
    let delta = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
    let mut r = Rank4::zeros(n);
    for c in 0..n {
        for a in 0..n {
            for d in 0..n {
                for b in 0..n {
                    let mut v = delta(a, c) * delta(d, c) * dw[(a, b)]
                        - delta(a, c) * delta(b, c) * dw[(a, d)]
                        + dw[(c, a)] * (delta(a, b) * delta(d, c) - delta(b, c) * delta(d, a));
                    v += delta(d, c)
                        * (wt[(a, b)] * wt[(c, a)] + wt[(b, a)] * wt[(c, b)]
                            - wt[(c, a)] * wt[(c, b)]);
                    v -= delta(b, c)
                        * (wt[(a, d)] * wt[(c, a)] + wt[(d, a)] * wt[(c, d)]
                            - wt[(c, a)] * wt[(c, d)]);
                    r.set(c, a, d, b, v);
                }
            }
        }
    }
    r
}

/// Connection with the goldfish index structure and a general pair function:
/// `Gamma^i_jk = delta_ij w_ik + delta_ik w_ij` with `w_ik = -1/2 w(q_i - q_k)`.
pub fn christoffel_w(q: &[f64], w: &WFunction) -> Rank3 {
    let n = q.len();
    let mut gamma = Rank3::zeros(n);
    for i in 0..n {
        for k in 0..n {
            if k != i {
                let v = -0.5 * w.eval(q[i] - q[k]);
                gamma.set(i, i, k, v);
                gamma.set(i, k, i, v);
            }
        }
    }
    gamma
}

/// `R^c_adb = d_d Gamma^c_ab - d_b Gamma^c_ad + Gamma^e_ab Gamma^c_de - Gamma^e_ad Gamma^c_be`
/// with the derivatives taken by central differences; independent of [`curvature`].
pub fn curvature_fd(q: &Configuration, w: &WFunction) -> Rank4 {
    let q = q.as_slice();
    let n = q.len();
    let gamma = christoffel_w(q, w);
    let dgamma: Vec<Rank3> = (0..n)
        .map(|d| {
            let h = 1e-6 * q[d].abs().max(1.0);
            let mut qp = q.to_vec();
            qp[d] += h;
            let gp = christoffel_w(&qp, w);
            qp[d] = q[d] - h;
            let gm = christoffel_w(&qp, w);
            let mut out = Rank3::zeros(n);
            for (k, v) in out.data.iter_mut().enumerate() {
                *v = (gp.data[k] - gm.data[k]) / (2.0 * h);
            }
            out
        })
        .collect();
    let mut r = Rank4::zeros(n);
    for c in 0..n {
        for a in 0..n {
            for d in 0..n {
                for b in 0..n {
                    let mut v = dgamma[d].get(c, a, b) - dgamma[b].get(c, a, d);
                    for e in 0..n {
                        v += gamma.get(e, a, b) * gamma.get(c, d, e)
                            - gamma.get(e, a, d) * gamma.get(c, b, e);
                    }
                    r.set(c, a, d, b, v);
                }
            }
        }
    }
    r
}

/// Induced metric `g = J^T J`.
pub fn metric(q: &Configuration) -> DMatrix<f64> {
    let j = symfun::jacobian(q);
    j.transpose() * j
}

/// `sum_{m<N} (q_i q_j)^m`.
fn power_sum(z: f64, n: usize) -> f64 {
    let mut acc = 0.0;
    let mut p = 1.0;
    for _ in 0..n {
        acc += p;
        p *= z;
    }
    acc
}

/// Closed-form inverse metric
/// `g^ij = (1 + q_i q_j + ... + (q_i q_j)^(N-1)) / (D_i D_j)` with
/// `D_i = prod_{k != i}(q_i - q_k)`.
pub fn inverse_metric(q: &Configuration) -> DMatrix<f64> {
    inverse_metric_of(q.as_slice())
}

pub(crate) fn inverse_metric_of(q: &[f64]) -> DMatrix<f64> {
    let n = q.len();
    let den: Vec<f64> = (0..n).map(|i| node_denominator(q, i)).collect();
    DMatrix::from_fn(n, n, |i, j| power_sum(q[i] * q[j], n) / (den[i] * den[j]))
}

/// `d g^ij / d q_k` for every `k`, by the quotient rule on the closed form.
pub fn inverse_metric_derivatives(q: &Configuration) -> Vec<DMatrix<f64>> {
    inverse_metric_derivatives_of(q.as_slice())
}

pub(crate) fn inverse_metric_derivatives_of(q: &[f64]) -> Vec<DMatrix<f64>> {
    let n = q.len();
    let den: Vec<f64> = (0..n).map(|i| node_denominator(q, i)).collect();
    // dlog[i][k] = d ln D_i / d q_k
    let dlog = DMatrix::from_fn(n, n, |i, k| {
        if i == k {
            (0..n).filter(|&l| l != i).map(|l| 1.0 / (q[i] - q[l])).sum()
        } else {
            -1.0 / (q[i] - q[k])
        }
    });
    (0..n)
        .map(|k| {
            DMatrix::from_fn(n, n, |i, j| {
                let z = q[i] * q[j];
                let s = power_sum(z, n);
                // d/dz of sum z^m
                let mut ds = 0.0;
                let mut p = 1.0;
                for m in 1..n {
                    ds += m as f64 * p;
                    p *= z;
                }
                let dz = if i == k { q[j] } else { 0.0 } + if j == k { q[i] } else { 0.0 };
                let inv = 1.0 / (den[i] * den[j]);
                ds * dz * inv - s * inv * (dlog[(i, k)] + dlog[(j, k)])
            })
        })
        .collect()
}

/// Central-difference fallback for [`inverse_metric_derivatives`].
pub fn inverse_metric_derivatives_fd(q: &Configuration) -> Vec<DMatrix<f64>> {
    let q = q.as_slice();
    (0..q.len())
        .map(|k| {
            let h = 1e-6 * q[k].abs().max(1.0);
            let mut qp = q.to_vec();
            let mut qm = q.to_vec();
            qp[k] += h;
            qm[k] -= h;
            (inverse_metric_of(&qp) - inverse_metric_of(&qm)) / (2.0 * h)
        })
        .collect()
}

/// `H = 1/2 pi^T g^-1 pi`.
pub fn geodesic_hamiltonian(s: &GeodesicState) -> f64 {
    geodesic_energy_raw(s.q.as_slice(), &s.pi)
}

pub(crate) fn geodesic_energy_raw(q: &[f64], pi: &[f64]) -> f64 {
    0.5 * flat_momenta(q, pi).iter().map(|b| b * b).sum::<f64>()
}

/// `c_p = sum_i q_i^p pi_i / D_i`, the factors of the closed form
/// `g^ij = sum_p (q_i^p / D_i)(q_j^p / D_j)`, so that `pi^T g^-1 pi = |c|^2`.
fn flat_momenta(q: &[f64], pi: &[f64]) -> Vec<f64> {
    let n = q.len();
    let w: Vec<f64> = (0..n).map(|i| pi[i] / node_denominator(q, i)).collect();
    let mut c = vec![0.0; n];
    for i in 0..n {
        let mut p = 1.0;
        for cp in c.iter_mut() {
            *cp += p * w[i];
            p *= q[i];
        }
    }
    c
}

/// Hamilton's equations `qdot = g^-1 pi`, `pidot_k = -1/2 pi^T (d_k g^-1) pi`.
pub fn geodesic_rhs(s: &GeodesicState) -> (Vec<f64>, Vec<f64>) {
    geodesic_rhs_raw(s.q.as_slice(), &s.pi)
}

/// Evaluated through the factored closed form: `qdot_i = sum_p q_i^p c_p / D_i`
/// and `pidot_k = -sum_p c_p d_k c_p`.
pub(crate) fn geodesic_rhs_raw(q: &[f64], pi: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = q.len();
    let den: Vec<f64> = (0..n).map(|i| node_denominator(q, i)).collect();
    let c = flat_momenta(q, pi);
    let powers: Vec<Vec<f64>> = q
        .iter()
        .map(|&x| {
            let mut v = Vec::with_capacity(n);
            let mut p = 1.0;
            for _ in 0..n {
                v.push(p);
                p *= x;
            }
            v
        })
        .collect();
    let qdot = (0..n)
        .map(|i| (0..n).map(|p| powers[i][p] * c[p]).sum::<f64>() / den[i])
        .collect();
    let pidot = (0..n)
        .map(|k| {
            let mut acc = 0.0;
            for i in 0..n {
                // d_k (q_i^p / D_i) = (q_i^p / D_i) * r + [i == k] p q_k^(p-1) / D_k
                let r = if i == k {
                    -(0..n).filter(|&l| l != k).map(|l| 1.0 / (q[k] - q[l])).sum::<f64>()
                } else {
                    1.0 / (q[i] - q[k])
                };
                let wi = pi[i] / den[i];
                for p in 0..n {
                    let mut d = powers[i][p] * r;
                    if i == k && p > 0 {
                        d += p as f64 * powers[k][p - 1];
                    }
                    acc += c[p] * wi * d;
                }
            }
            -acc
        })
        .collect();
    (qdot, pidot)
}

/// `-Gamma^i_jk v^j v^k`.
pub fn geodesic_acceleration(q: &Configuration, v: &[f64]) -> Vec<f64> {
    let gamma = christoffel(q);
    let n = q.len();
    (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for j in 0..n {
                for k in 0..n {
                    acc -= gamma.get(i, j, k) * v[j] * v[k];
                }
            }
            acc
        })
        .collect()
}
