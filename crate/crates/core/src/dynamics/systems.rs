use nalgebra::DVector;

use super::integrator::OdeSystem;
use super::{ecm_energy_raw, ecm_rates_raw, goldfish_accel, EcmState, GoldfishState};
use crate::antisym::Antisymmetric;
use crate::geometry::{self, GeodesicState};
use crate::symfun;

/// Goldfish flow in first-order form, state `[q, qdot]`.
#[derive(Debug, Clone, Copy)]
pub struct GoldfishSystem {
    n: usize,
}

impl GoldfishSystem {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn pack(&self, s: &GoldfishState) -> Vec<f64> {
        let mut y = s.q.as_slice().to_vec();
        y.extend_from_slice(&s.qdot);
        y
    }

    fn bn(&self, y: &[f64]) -> Vec<f64> {
        let jac = symfun::jacobian_of(&y[..self.n]);
        (jac * DVector::from_column_slice(&y[self.n..])).as_slice().to_vec()
    }
}

impl OdeSystem for GoldfishSystem {
    fn dim(&self) -> usize {
        2 * self.n
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let (q, v) = y.split_at(self.n);
        dy[..self.n].copy_from_slice(v);
        goldfish_accel(q, v, &mut dy[self.n..]);
    }

    fn positions<'a>(&self, y: &'a [f64]) -> &'a [f64] {
        &y[..self.n]
    }

    fn diagnostics(&self, y0: &[f64], y: &[f64]) -> Vec<(String, f64)> {
        let b0 = self.bn(y0);
        let b = self.bn(y);
        let drift = b0
            .iter()
            .zip(&b)
            .fold(0.0, |m: f64, (x, z)| m.max((x - z).abs()));
        let p0: f64 = y0[self.n..].iter().sum();
        let p: f64 = y[self.n..].iter().sum();
        vec![
            ("b_drift".into(), drift),
            ("total_momentum_drift".into(), p - p0),
        ]
    }
}

/// ECM flow, state `[q, p, f_upper]`.
#[derive(Debug, Clone, Copy)]
pub struct EcmSystem {
    n: usize,
}

impl EcmSystem {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn pack(&self, s: &EcmState) -> Vec<f64> {
        let mut y = s.q.as_slice().to_vec();
        y.extend_from_slice(&s.p);
        y.extend_from_slice(s.f.upper());
        y
    }

    pub fn unpack<'a>(&self, y: &'a [f64]) -> (&'a [f64], &'a [f64], Antisymmetric) {
        let n = self.n;
        let f = Antisymmetric::from_upper(n, y[2 * n..].to_vec()).expect("state layout");
        (&y[..n], &y[n..2 * n], f)
    }

    fn g_norm(&self, q: &[f64], p: &[f64], f: &Antisymmetric) -> f64 {
        if p.iter().any(|v| *v < 0.0) {
            return f64::NAN;
        }
        let g = Antisymmetric::from_fn(self.n, |i, j| {
            2.0 * (f.get(i, j) + (q[i] - q[j]) * (p[i] * p[j]).sqrt())
        });
        g.frobenius_norm()
    }
}

impl OdeSystem for EcmSystem {
    fn dim(&self) -> usize {
        2 * self.n + self.n * (self.n - 1) / 2
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let (q, p, f) = self.unpack(y);
        let r = ecm_rates_raw(q, p, &f);
        let n = self.n;
        dy[..n].copy_from_slice(&r.qdot);
        dy[n..2 * n].copy_from_slice(&r.pdot);
        dy[2 * n..].copy_from_slice(r.fdot.upper());
    }

    fn positions<'a>(&self, y: &'a [f64]) -> &'a [f64] {
        &y[..self.n]
    }

    fn diagnostics(&self, y0: &[f64], y: &[f64]) -> Vec<(String, f64)> {
        let (q0, p0, f0) = self.unpack(y0);
        let (q, p, f) = self.unpack(y);
        vec![
            (
                "H_drift".into(),
                ecm_energy_raw(q, p, &f) - ecm_energy_raw(q0, p0, &f0),
            ),
            ("G_norm".into(), self.g_norm(q, p, &f)),
            (
                "total_momentum_drift".into(),
                p.iter().sum::<f64>() - p0.iter().sum::<f64>(),
            ),
        ]
    }
}

/// Geodesic flow of the induced metric, state `[q, pi]`.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicSystem {
    n: usize,
}

impl GeodesicSystem {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn pack(&self, s: &GeodesicState) -> Vec<f64> {
        let mut y = s.q.as_slice().to_vec();
        y.extend_from_slice(&s.pi);
        y
    }
}

impl OdeSystem for GeodesicSystem {
    fn dim(&self) -> usize {
        2 * self.n
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let (qdot, pidot) = geometry::geodesic_rhs_raw(&y[..self.n], &y[self.n..]);
        dy[..self.n].copy_from_slice(&qdot);
        dy[self.n..].copy_from_slice(&pidot);
    }

    fn positions<'a>(&self, y: &'a [f64]) -> &'a [f64] {
        &y[..self.n]
    }

    fn diagnostics(&self, y0: &[f64], y: &[f64]) -> Vec<(String, f64)> {
        let h = |y: &[f64]| geometry::geodesic_energy_raw(&y[..self.n], &y[self.n..]);
        vec![("H_drift".into(), h(y) - h(y0))]
    }
}
