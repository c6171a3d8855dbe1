//! Finite-dimensional Poisson structures given by closed-form brackets of
//! chart coordinates, with observables, Hamiltonian flows and Jacobi checks.
//!
//! Charts (flat coordinate vectors):
//! - ECM: `[q_1..q_N, p_1..p_N, f_12, f_13, .., f_(N-1)N]`
//! - ECM with frame: the ECM chart followed by `r_ij` row-major (`N^2` entries)
//! - goldfish: `[q_1..q_N, pi_1..pi_N]` with `{q_i, pi_j} = delta_ij pi_i`
//! - canonical: `[q_1..q_N, pi_1..pi_N]` with `{q_i, pi_j} = delta_ij`

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::antisym::{pair_index, pairs, Antisymmetric};
use crate::dynamics::EcmState;
use crate::error::{Error, Result};
use crate::symfun::{self, Configuration};

/// Coefficient of `{pi_i, pi_j} = k pi_i pi_j / (q_i - q_j)` in the goldfish chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiracCoefficient {
    /// `k = 2`: what the exponential momentum substitution actually produces.
    Corrected,
    /// `k = 1`: the coefficient as printed; kept as a negative control.
    Printed,
}

impl DiracCoefficient {
    pub fn value(self) -> f64 {
        match self {
            Self::Corrected => 2.0,
            Self::Printed => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Ecm,
    EcmFrame,
    Goldfish(f64),
    Canonical,
}

/// A chart with closed-form coordinate brackets.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonStructure {
    n: usize,
    kind: Kind,
    chart: Vec<String>,
}

/// Which block of a chart a coordinate index falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Coord {
    Q(usize),
    P(usize),
    F(usize, usize),
    R(usize, usize),
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Spin-matrix algebra `{f_ij, f_kl}` with `f` extended antisymmetrically.
pub fn ff_bracket(f: &Antisymmetric, i: usize, j: usize, k: usize, l: usize) -> f64 {
    0.5 * (-delta(j, k) * f.get(i, l) + delta(i, k) * f.get(j, l) + delta(j, l) * f.get(i, k)
        - delta(i, l) * f.get(j, k))
}

/// `{r_ij, f_kl} = -1/2 (delta_jk r_il - delta_jl r_ik)`.
pub fn rf_bracket(r: &DMatrix<f64>, i: usize, j: usize, k: usize, l: usize) -> f64 {
    -0.5 * (delta(j, k) * r[(i, l)] - delta(j, l) * r[(i, k)])
}

/// `{f_(i<j), a_(k<l)} = -1/2 delta_ik delta_jl`; the `a` coordinates carry
/// no dynamics here, so this bracket is exposed as data only.
pub fn fa_bracket(i: usize, j: usize, k: usize, l: usize) -> f64 {
    -0.5 * delta(i, k) * delta(j, l)
}

impl PoissonStructure {
    /// Euler-Calogero-Moser chart `(q, p, f)`.
    pub fn ecm(n: usize) -> Self {
        let mut chart = Self::qp_names(n, "p");
        chart.extend(pairs(n).into_iter().map(|(i, j)| format!("f{}_{}", i + 1, j + 1)));
        Self {
            n,
            kind: Kind::Ecm,
            chart,
        }
    }

    /// ECM chart extended by the frame entries `r_ij`.
    pub fn ecm_with_frame(n: usize) -> Self {
        let mut s = Self::ecm(n);
        for i in 0..n {
            for j in 0..n {
                s.chart.push(format!("r{}_{}", i + 1, j + 1));
            }
        }
        s.kind = Kind::EcmFrame;
        s
    }

    /// Exponential-momentum chart `(q, pi)` of the goldfish model.
    pub fn goldfish(n: usize, coefficient: DiracCoefficient) -> Self {
        Self {
            n,
            kind: Kind::Goldfish(coefficient.value()),
            chart: Self::qp_names(n, "pi"),
        }
    }

    /// Canonical `{q_i, pi_j} = delta_ij`.
    pub fn canonical(n: usize) -> Self {
        Self {
            n,
            kind: Kind::Canonical,
            chart: Self::qp_names(n, "pi"),
        }
    }

    fn qp_names(n: usize, momentum: &str) -> Vec<String> {
        (1..=n)
            .map(|i| format!("q{i}"))
            .chain((1..=n).map(|i| format!("{momentum}{i}")))
            .collect()
    }

    pub fn particles(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.chart.len()
    }

    pub fn chart(&self) -> &[String] {
        &self.chart
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.chart.iter().position(|c| c == name)
    }

    fn f_offset(&self) -> usize {
        2 * self.n
    }

    fn r_offset(&self) -> usize {
        2 * self.n + self.n * (self.n - 1) / 2
    }

    fn coord(&self, a: usize) -> Coord {
        let n = self.n;
        if a < n {
            Coord::Q(a)
        } else if a < 2 * n {
            Coord::P(a - n)
        } else if a < self.r_offset() {
            let k = a - self.f_offset();
            let (i, j) = pairs(n)[k];
            Coord::F(i, j)
        } else {
            let k = a - self.r_offset();
            Coord::R(k / n, k % n)
        }
    }

    fn f_of(&self, z: &[f64]) -> Antisymmetric {
        Antisymmetric::from_upper(self.n, z[self.f_offset()..self.r_offset()].to_vec())
            .expect("chart layout")
    }

    fn r_of(&self, z: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &z[self.r_offset()..])
    }

    fn f_index(&self, i: usize, j: usize) -> (usize, f64) {
        if i < j {
            (self.f_offset() + pair_index(self.n, i, j), 1.0)
        } else {
            (self.f_offset() + pair_index(self.n, j, i), -1.0)
        }
    }

    fn r_index(&self, i: usize, j: usize) -> usize {
        self.r_offset() + i * self.n + j
    }

    /// `{z_a, z_b}` at `z`.
    pub fn bracket(&self, a: usize, b: usize, z: &[f64]) -> f64 {
        if a == b {
            return 0.0;
        }
        // evaluate with a < b and flip, so antisymmetry is exact
        if a > b {
            return -self.bracket(b, a, z);
        }
        match self.kind {
            Kind::Canonical => match (self.coord(a), self.coord(b)) {
                (Coord::Q(i), Coord::P(j)) => delta(i, j),
                _ => 0.0,
            },
            Kind::Goldfish(k) => match (self.coord(a), self.coord(b)) {
                (Coord::Q(i), Coord::P(j)) => delta(i, j) * z[self.n + i],
                (Coord::P(i), Coord::P(j)) => {
                    k * z[self.n + i] * z[self.n + j] / (z[i] - z[j])
                }
                _ => 0.0,
            },
            Kind::Ecm | Kind::EcmFrame => match (self.coord(a), self.coord(b)) {
                (Coord::Q(i), Coord::P(j)) => delta(i, j),
                (Coord::F(i, j), Coord::F(k, l)) => ff_bracket(&self.f_of(z), i, j, k, l),
                (Coord::F(k, l), Coord::R(i, j)) => -rf_bracket(&self.r_of(z), i, j, k, l),
                _ => 0.0,
            },
        }
    }

    /// Gradient of `{z_a, z_b}` with respect to the chart, in closed form.
    pub fn bracket_gradient(&self, a: usize, b: usize, z: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim()];
        if a == b {
            return g;
        }
        if a > b {
            let mut g = self.bracket_gradient(b, a, z);
            g.iter_mut().for_each(|v| *v = -*v);
            return g;
        }
        match self.kind {
            Kind::Canonical => {}
            Kind::Goldfish(k) => match (self.coord(a), self.coord(b)) {
                (Coord::Q(i), Coord::P(j)) if i == j => g[self.n + i] = 1.0,
                (Coord::P(i), Coord::P(j)) => {
                    let (pi, pj) = (z[self.n + i], z[self.n + j]);
                    let d = z[i] - z[j];
                    let v = k * pi * pj / d;
                    g[self.n + i] = k * pj / d;
                    g[self.n + j] = k * pi / d;
                    g[i] = -v / d;
                    g[j] = v / d;
                }
                _ => {}
            },
            Kind::Ecm | Kind::EcmFrame => match (self.coord(a), self.coord(b)) {
                (Coord::F(i, j), Coord::F(k, l)) => {
                    let mut add = |x: usize, y: usize, c: f64| {
                        if x != y && c != 0.0 {
                            let (idx, s) = self.f_index(x, y);
                            g[idx] += s * c;
                        }
                    };
                    add(i, l, -0.5 * delta(j, k));
                    add(j, l, 0.5 * delta(i, k));
                    add(i, k, 0.5 * delta(j, l));
                    add(j, k, -0.5 * delta(i, l));
                }
                (Coord::F(k, l), Coord::R(i, j)) => {
                    // -{r_ij, f_kl} = 1/2 (delta_jk r_il - delta_jl r_ik)
                    g[self.r_index(i, l)] += 0.5 * delta(j, k);
                    g[self.r_index(i, k)] -= 0.5 * delta(j, l);
                }
                _ => {}
            },
        }
        g
    }

    /// Dense bracket matrix `{z_a, z_b}` at `z`.
    pub fn bracket_matrix(&self, z: &[f64]) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |a, b| self.bracket(a, b, z))
    }
}

type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Function on a chart, with an optional analytic gradient.
#[derive(Clone)]
pub struct PhaseObservable {
    eval: EvalFn,
    grad: Option<GradFn>,
}

impl fmt::Debug for PhaseObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhaseObservable")
            .field("analytic_gradient", &self.grad.is_some())
            .finish()
    }
}

impl PhaseObservable {
    pub fn new(eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            grad: None,
        }
    }

    pub fn with_gradient(mut self, grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.grad = Some(Arc::new(grad));
        self
    }

    pub fn coordinate(a: usize, dim: usize) -> Self {
        Self::new(move |z| z[a]).with_gradient(move |_| {
            let mut g = vec![0.0; dim];
            g[a] = 1.0;
            g
        })
    }

    pub fn constant(value: f64, dim: usize) -> Self {
        Self::new(move |_| value).with_gradient(move |_| vec![0.0; dim])
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.grad.is_some()
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        (self.eval)(z)
    }

    /// Analytic gradient if available, central differences otherwise.
    pub fn gradient(&self, z: &[f64]) -> Result<Vec<f64>> {
        let g = match &self.grad {
            Some(grad) => grad(z),
            None => self.fd_gradient(z),
        };
        if g.len() != z.len() {
            return Err(Error::GradientUnavailable(format!(
                "gradient has length {} for a chart of dimension {}",
                g.len(),
                z.len()
            )));
        }
        if let Some(a) = g.iter().position(|v| !v.is_finite()) {
            return Err(Error::GradientUnavailable(format!(
                "non-finite derivative along coordinate {a}"
            )));
        }
        Ok(g)
    }

    /// Central differences with step `1e-6 * max(1, |z_a|)`.
    pub fn fd_gradient(&self, z: &[f64]) -> Vec<f64> {
        let mut zp = z.to_vec();
        (0..z.len())
            .map(|a| {
                let h = 1e-6 * z[a].abs().max(1.0);
                zp[a] = z[a] + h;
                let fp = self.eval(&zp);
                zp[a] = z[a] - h;
                let fm = self.eval(&zp);
                zp[a] = z[a];
                (fp - fm) / (2.0 * h)
            })
            .collect()
    }
}

/// `{F, G} = grad F . Pi . grad G`.
pub fn bracket_eval(
    s: &PoissonStructure,
    f: &PhaseObservable,
    g: &PhaseObservable,
    z: &[f64],
) -> Result<f64> {
    let df = f.gradient(z)?;
    let dg = g.gradient(z)?;
    Ok(contract(s, &df, &dg, z))
}

fn contract(s: &PoissonStructure, df: &[f64], dg: &[f64], z: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (a, &da) in df.iter().enumerate() {
        if da == 0.0 {
            continue;
        }
        for (b, &db) in dg.iter().enumerate() {
            if db != 0.0 {
                acc += da * s.bracket(a, b, z) * db;
            }
        }
    }
    acc
}

/// Jacobiator `{z_a, {z_b, z_c}} + cyclic`, with inner brackets
/// differentiated in closed form.
pub fn jacobi_residual(s: &PoissonStructure, z: &[f64], (a, b, c): (usize, usize, usize)) -> f64 {
    let term = |x: usize, y: usize, w: usize| {
        let inner = s.bracket_gradient(y, w, z);
        (0..s.dim())
            .filter(|&d| inner[d] != 0.0)
            .map(|d| s.bracket(x, d, z) * inner[d])
            .sum::<f64>()
    };
    term(a, b, c) + term(b, c, a) + term(c, a, b)
}

/// `zdot_a = {z_a, H}` for every chart coordinate.
pub fn hamiltonian_flow(s: &PoissonStructure, h: &PhaseObservable, z: &[f64]) -> Result<Vec<f64>> {
    let dh = h.gradient(z)?;
    Ok((0..s.dim())
        .map(|a| {
            (0..s.dim())
                .filter(|&b| dh[b] != 0.0)
                .map(|b| s.bracket(a, b, z) * dh[b])
                .sum()
        })
        .collect())
}

/// ECM chart vector of a state.
pub fn ecm_point(s: &EcmState) -> Vec<f64> {
    let mut z = s.q.as_slice().to_vec();
    z.extend_from_slice(&s.p);
    z.extend_from_slice(s.f.upper());
    z
}

/// ECM chart vector extended by the row-major frame `r`.
pub fn ecm_frame_point(s: &EcmState, r: &DMatrix<f64>) -> Vec<f64> {
    let mut z = ecm_point(s);
    for i in 0..r.nrows() {
        for j in 0..r.ncols() {
            z.push(r[(i, j)]);
        }
    }
    z
}

/// `H_ECM` on the ECM chart (or its frame extension).
pub fn ecm_hamiltonian_observable(s: &PoissonStructure) -> PhaseObservable {
    let n = s.particles();
    let dim = s.dim();
    let energy = move |z: &[f64]| {
        let f = Antisymmetric::from_upper(n, z[2 * n..2 * n + n * (n - 1) / 2].to_vec()).unwrap();
        crate::dynamics::ecm_energy_raw(&z[..n], &z[n..2 * n], &f)
    };
    PhaseObservable::new(energy).with_gradient(move |z| {
        let mut g = vec![0.0; dim];
        let q = &z[..n];
        for i in 0..n {
            g[n + i] = z[n + i];
        }
        for (k, (i, j)) in pairs(n).into_iter().enumerate() {
            let fij = z[2 * n + k];
            let d = q[i] - q[j];
            g[2 * n + k] = 2.0 * fij / (d * d);
            let dq = -2.0 * fij * fij / (d * d * d);
            g[i] += dq;
            g[j] -= dq;
        }
        g
    })
}

/// Total momentum `sum p_i` on a chart whose second block holds momenta.
pub fn total_momentum_observable(s: &PoissonStructure) -> PhaseObservable {
    let n = s.particles();
    let dim = s.dim();
    PhaseObservable::new(move |z| z[n..2 * n].iter().sum()).with_gradient(move |_| {
        let mut g = vec![0.0; dim];
        g[n..2 * n].iter_mut().for_each(|v| *v = 1.0);
        g
    })
}

/// `H = 1/2 (sum pi)^2`.
pub fn reduced_hamiltonian_observable(s: &PoissonStructure) -> PhaseObservable {
    let n = s.particles();
    let dim = s.dim();
    PhaseObservable::new(move |z| 0.5 * z[n..2 * n].iter().sum::<f64>().powi(2)).with_gradient(
        move |z| {
            let total: f64 = z[n..2 * n].iter().sum();
            let mut g = vec![0.0; dim];
            g[n..2 * n].iter_mut().for_each(|v| *v = total);
            g
        },
    )
}

/// Constraint `G_ij = 2 (f_ij + (q_i - q_j) sqrt(p_i p_j))` on the ECM chart.
pub fn g_observable(s: &PoissonStructure, i: usize, j: usize) -> PhaseObservable {
    let n = s.particles();
    let dim = s.dim();
    let (fidx, sign) = if i < j {
        (2 * n + pair_index(n, i, j), 1.0)
    } else if i > j {
        (2 * n + pair_index(n, j, i), -1.0)
    } else {
        return PhaseObservable::constant(0.0, dim);
    };
    PhaseObservable::new(move |z| {
        2.0 * (sign * z[fidx] + (z[i] - z[j]) * (z[n + i] * z[n + j]).sqrt())
    })
    .with_gradient(move |z| {
        let (pi, pj) = (z[n + i], z[n + j]);
        let root = (pi * pj).sqrt();
        let d = z[i] - z[j];
        let mut g = vec![0.0; dim];
        g[fidx] = 2.0 * sign;
        g[i] = 2.0 * root;
        g[j] = -2.0 * root;
        g[n + i] = d * (pj / pi).sqrt();
        g[n + j] = d * (pi / pj).sqrt();
        g
    })
}

/// Canonical-transform coordinate `Q_k = 2 q_k sqrt(p_k)` on the ECM chart.
pub fn big_q_observable(s: &PoissonStructure, k: usize) -> PhaseObservable {
    let n = s.particles();
    let dim = s.dim();
    PhaseObservable::new(move |z| 2.0 * z[k] * z[n + k].sqrt()).with_gradient(move |z| {
        let mut g = vec![0.0; dim];
        g[k] = 2.0 * z[n + k].sqrt();
        g[n + k] = z[k] / z[n + k].sqrt();
        g
    })
}

/// Canonical-transform momentum `P_k = sqrt(p_k)` on the ECM chart.
pub fn big_p_observable(s: &PoissonStructure, k: usize) -> PhaseObservable {
    let n = s.particles();
    let dim = s.dim();
    PhaseObservable::new(move |z| z[n + k].sqrt()).with_gradient(move |z| {
        let mut g = vec![0.0; dim];
        g[n + k] = 0.5 / z[n + k].sqrt();
        g
    })
}

/// Invariant `u_k = (R Q)_k` (`velocity = false`) or `v_k = (R P)_k`
/// (`velocity = true`) on the frame-extended ECM chart.
pub fn invariant_observable(s: &PoissonStructure, k: usize, velocity: bool) -> PhaseObservable {
    assert!(
        s.kind == Kind::EcmFrame,
        "invariant observables need the frame-extended chart"
    );
    let n = s.particles();
    let dim = s.dim();
    let r0 = s.r_offset();
    let component = move |z: &[f64], m: usize| {
        if velocity {
            z[n + m].sqrt()
        } else {
            2.0 * z[m] * z[n + m].sqrt()
        }
    };
    PhaseObservable::new(move |z| (0..n).map(|m| z[r0 + k * n + m] * component(z, m)).sum())
        .with_gradient(move |z| {
            let mut g = vec![0.0; dim];
            for m in 0..n {
                let r = z[r0 + k * n + m];
                g[r0 + k * n + m] = component(z, m);
                let sp = z[n + m].sqrt();
                if velocity {
                    g[n + m] += r * 0.5 / sp;
                } else {
                    g[m] += r * 2.0 * sp;
                    g[n + m] += r * z[m] / sp;
                }
            }
            g
        })
}

/// All constraints `G_ij` of an ECM state.
pub fn g_constraints(s: &EcmState) -> Result<Antisymmetric> {
    if let Some(index) = s.p.iter().position(|v| *v < 0.0) {
        return Err(Error::NegativeMomentum {
            index,
            value: s.p[index],
        });
    }
    let q = s.q.as_slice();
    let p = &s.p;
    Ok(Antisymmetric::from_fn(q.len(), |i, j| {
        2.0 * (s.f.get(i, j) + (q[i] - q[j]) * (p[i] * p[j]).sqrt())
    }))
}

/// Commuting integrals `B = J g^-1 pi`, linear in the momenta.
pub fn b_integrals(q: &Configuration, pi: &[f64]) -> Vec<f64> {
    b_integrals_raw(q.as_slice(), pi)
}

/// `J g^-1 pi` evaluated as `J^-T pi`, which avoids the cancellation in
/// forming `J` and `g^-1` separately.
fn b_integrals_raw(q: &[f64], pi: &[f64]) -> Vec<f64> {
    let n = q.len();
    let den: Vec<f64> = (0..n).map(|i| symfun::node_denominator(q, i)).collect();
    (0..n)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let p = (n - 1 - m) as i32;
            sign * (0..n).map(|i| q[i].powi(p) * pi[i] / den[i]).sum::<f64>()
        })
        .collect()
}

/// `{B_m, B_n}` (zero-based `m`, `n`) under the canonical bracket, by
/// central differences with step `h`.
pub fn commutation_check(q: &Configuration, pi: &[f64], m: usize, n: usize, h: f64) -> f64 {
    if m == n {
        return 0.0;
    }
    let dim = q.len();
    let mut z: Vec<f64> = q.as_slice().to_vec();
    z.extend_from_slice(pi);
    let grad = |idx: usize| -> Vec<f64> {
        let mut zp = z.clone();
        (0..2 * dim)
            .map(|a| {
                zp[a] = z[a] + h;
                let fp = b_integrals_raw(&zp[..dim], &zp[dim..])[idx];
                zp[a] = z[a] - h;
                let fm = b_integrals_raw(&zp[..dim], &zp[dim..])[idx];
                zp[a] = z[a];
                (fp - fm) / (2.0 * h)
            })
            .collect()
    };
    let gm = grad(m);
    let gn = grad(n);
    (0..dim)
        .map(|i| gm[i] * gn[dim + i] - gm[dim + i] * gn[i])
        .sum()
}

/// Goldfish acceleration induced by `H = 1/2 (sum pi)^2` on a goldfish chart:
/// `qdot_i = P pi_i`, hence `qddot_i = P pidot_i + pi_i Pdot`.
/// Returns `(qdot, qddot)`.
pub fn reduced_goldfish_motion(s: &PoissonStructure, z: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = s.particles();
    let h = reduced_hamiltonian_observable(s);
    let flow = hamiltonian_flow(s, &h, z)?;
    let total: f64 = z[n..2 * n].iter().sum();
    let total_dot: f64 = flow[n..2 * n].iter().sum();
    let qdot = flow[..n].to_vec();
    let qddot = (0..n)
        .map(|i| total * flow[n + i] + z[n + i] * total_dot)
        .collect();
    Ok((qdot, qddot))
}
