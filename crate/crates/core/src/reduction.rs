//! Free symmetric-matrix motion and its reduction to the goldfish flow.
//!
//! `X(t) = X0 + t V0` with rank-one `V0 = v v^T` has eigenvalues that move as
//! goldfish particles. Writing `X = R D R^T`, the frame obeys `Rdot = R M`
//! and the vectors `u = R Q`, `v = R P` move freely.

use nalgebra::{DMatrix, DVector};

use crate::antisym::Antisymmetric;
use crate::dynamics::{goldfish_accel, integrate, IntegratorConfig, OdeSystem};
use crate::error::{Error, Result};
use crate::linalg;
use crate::symfun::{self, Configuration};

/// Default eigenvalue separation below which tracking gives up.
pub const DEFAULT_EIGEN_GAP: f64 = 1e-8;

/// Orthogonality defect that triggers polar re-projection of the frame.
pub const REORTHONORMALIZE_THRESHOLD: f64 = 1e-10;

/// Initial position and velocity of a straight line in symmetric matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFlow {
    x0: DMatrix<f64>,
    v0: DMatrix<f64>,
}

fn check_symmetric(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidConfiguration(format!("{what} is not square")));
    }
    if m != &m.transpose() {
        return Err(Error::InvalidConfiguration(format!("{what} is not symmetric")));
    }
    Ok(())
}

impl MatrixFlow {
    pub fn new(x0: DMatrix<f64>, v0: DMatrix<f64>) -> Result<Self> {
        check_symmetric(&x0, "X0")?;
        check_symmetric(&v0, "V0")?;
        if x0.nrows() != v0.nrows() {
            return Err(Error::DimensionMismatch {
                expected: x0.nrows(),
                got: v0.nrows(),
            });
        }
        let (values, _) = linalg::sorted_symmetric_eigen(&x0);
        let gap = symfun::min_gap(&values);
        if gap <= DEFAULT_EIGEN_GAP {
            return Err(Error::EigenvalueCollision { t: 0.0, gap });
        }
        Ok(Self { x0, v0 })
    }

    pub fn dim(&self) -> usize {
        self.x0.nrows()
    }

    pub fn x0(&self) -> &DMatrix<f64> {
        &self.x0
    }

    pub fn v0(&self) -> &DMatrix<f64> {
        &self.v0
    }
}

/// `X(t) = X0 + t V0`.
pub fn free_flow(m: &MatrixFlow, t: f64) -> DMatrix<f64> {
    &m.x0 + &m.v0 * t
}

/// Eigenvalues (ascending) and sign-continuous eigenvector frames on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenTrack {
    pub times: Vec<f64>,
    pub eigenvalues: Vec<Vec<f64>>,
    pub frames: Vec<DMatrix<f64>>,
}

fn fix_first_frame(r: &mut DMatrix<f64>) {
    for j in 0..r.ncols() {
        let col = r.column(j);
        let k = col.iamax();
        if col[k] < 0.0 {
            r.column_mut(j).neg_mut();
        }
    }
}

fn align_with(r: &mut DMatrix<f64>, prev: &DMatrix<f64>) {
    for j in 0..r.ncols() {
        if r.column(j).dot(&prev.column(j)) < 0.0 {
            r.column_mut(j).neg_mut();
        }
    }
}

pub fn eigen_track(m: &MatrixFlow, grid: &[f64]) -> Result<EigenTrack> {
    eigen_track_with_gap(m, grid, DEFAULT_EIGEN_GAP)
}

pub fn eigen_track_with_gap(m: &MatrixFlow, grid: &[f64], gap_tol: f64) -> Result<EigenTrack> {
    let mut track = EigenTrack {
        times: Vec::with_capacity(grid.len()),
        eigenvalues: Vec::with_capacity(grid.len()),
        frames: Vec::with_capacity(grid.len()),
    };
    for &t in grid {
        let (values, mut r) = linalg::sorted_symmetric_eigen(&free_flow(m, t));
        let gap = symfun::min_gap(&values);
        if gap <= gap_tol {
            return Err(Error::EigenvalueCollision { t, gap });
        }
        match track.frames.last() {
            Some(prev) => align_with(&mut r, prev),
            None => fix_first_frame(&mut r),
        }
        track.times.push(t);
        track.eigenvalues.push(values);
        track.frames.push(r);
    }
    Ok(track)
}

fn require_positive_velocity(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !(*x > 0.0)) {
        Some(index) => Err(Error::NonPositiveVelocity {
            index,
            value: v[index],
        }),
        None => Ok(()),
    }
}

fn require_positive_momentum(p: &[f64]) -> Result<()> {
    match p.iter().position(|x| !(*x > 0.0)) {
        Some(index) => Err(Error::NonPositiveMomentum {
            index,
            value: p[index],
        }),
        None => Ok(()),
    }
}

/// `X0 = diag(q0)`, `V0 = v v^T` with `v_i = sqrt(qdot0_i)`.
pub fn rank1_velocity(q0: &Configuration, qdot0: &[f64]) -> Result<MatrixFlow> {
    if q0.len() != qdot0.len() {
        return Err(Error::DimensionMismatch {
            expected: q0.len(),
            got: qdot0.len(),
        });
    }
    require_positive_velocity(qdot0)?;
    let v = DVector::from_iterator(qdot0.len(), qdot0.iter().map(|x| x.sqrt()));
    let x0 = DMatrix::from_diagonal(&DVector::from_column_slice(q0.as_slice()));
    MatrixFlow::new(x0, &v * v.transpose())
}

/// Canonical chart `(Q, P)` with `P_i = sqrt(p_i)`, `Q_i = 2 q_i sqrt(p_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedChart {
    q: Vec<f64>,
    p: Vec<f64>,
}

impl ReducedChart {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: q.len(),
                got: p.len(),
            });
        }
        require_positive_momentum(&p)?;
        Ok(Self { q, p })
    }

    pub fn big_q(&self) -> &[f64] {
        &self.q
    }

    pub fn big_p(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// `L_ij = Q_i P_j - Q_j P_i`.
    pub fn angular_momentum(&self) -> Antisymmetric {
        Antisymmetric::from_fn(self.len(), |i, j| self.q[i] * self.p[j] - self.q[j] * self.p[i])
    }
}

pub fn canonical_transform(q: &[f64], p: &[f64]) -> Result<ReducedChart> {
    require_positive_momentum(p)?;
    let big_p: Vec<f64> = p.iter().map(|x| x.sqrt()).collect();
    let big_q = q.iter().zip(&big_p).map(|(q, s)| 2.0 * q * s).collect();
    ReducedChart::new(big_q, big_p)
}

/// `(q, p) = (Q / 2P, P^2)`.
pub fn canonical_inverse(c: &ReducedChart) -> (Vec<f64>, Vec<f64>) {
    let q = c.q.iter().zip(&c.p).map(|(q, s)| q / (2.0 * s)).collect();
    let p = c.p.iter().map(|s| s * s).collect();
    (q, p)
}

/// The frame generator `M` in its three equivalent forms:
/// `f_ij / q_ij^2` with `f` on the constraint surface, `-sqrt(p_i p_j) / q_ij`,
/// and `-2 P_i^2 P_j^2 / (Q_i P_j - Q_j P_i)`.
pub fn m_matrix_forms(q: &[f64], p: &[f64]) -> Result<[Antisymmetric; 3]> {
    require_positive_momentum(p)?;
    let n = q.len();
    let chart = canonical_transform(q, p)?;
    let l = chart.angular_momentum();
    let big_p = chart.big_p();
    let via_f = Antisymmetric::from_fn(n, |i, j| {
        let qij = q[i] - q[j];
        let f = -qij * (p[i] * p[j]).sqrt();
        f / (qij * qij)
    });
    let via_p = Antisymmetric::from_fn(n, |i, j| -(p[i] * p[j]).sqrt() / (q[i] - q[j]));
    let via_qp = Antisymmetric::from_fn(n, |i, j| {
        -2.0 * big_p[i].powi(2) * big_p[j].powi(2) / l.get(i, j)
    });
    Ok([via_f, via_p, via_qp])
}

/// Largest pairwise disagreement among the forms of [`m_matrix_forms`],
/// relative to `max(1, |M_ij|)`.
pub fn m_matrix_form_spread(forms: &[Antisymmetric; 3]) -> f64 {
    let mut spread: f64 = 0.0;
    for k in 0..forms[0].upper().len() {
        let vals = [forms[0].upper()[k], forms[1].upper()[k], forms[2].upper()[k]];
        let scale = vals[1].abs().max(1.0);
        for a in 0..3 {
            for b in a + 1..3 {
                spread = spread.max((vals[a] - vals[b]).abs() / scale);
            }
        }
    }
    spread
}

pub fn m_matrix(q: &[f64], p: &[f64]) -> Result<Antisymmetric> {
    let forms = m_matrix_forms(q, p)?;
    debug_assert!(m_matrix_form_spread(&forms) < 1e-12, "M forms disagree");
    let [_, via_p, _] = forms;
    Ok(via_p)
}

/// Goldfish flow pushed through the canonical transform.
pub fn qp_rhs(c: &ReducedChart) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = c.len();
    let (big_q, big_p) = (&c.q, &c.p);
    let mut qdot = vec![0.0; n];
    let mut pdot = vec![0.0; n];
    for i in 0..n {
        let mut sum = 0.0;
        for j in 0..n {
            if j == i {
                continue;
            }
            let l = big_q[i] * big_p[j] - big_q[j] * big_p[i];
            if l == 0.0 {
                return Err(Error::DegenerateRay {
                    i: i.min(j),
                    j: i.max(j),
                });
            }
            sum += big_p[j].powi(3) / l;
        }
        qdot[i] = 2.0 * big_p[i].powi(3) + 2.0 * big_q[i] * big_p[i] * sum;
        pdot[i] = 2.0 * big_p[i].powi(2) * sum;
    }
    Ok((qdot, pdot))
}

/// `Xdot` reassembled from the frame: `R (Ddot + [M, D]) R^T`.
pub fn velocity_from_frame(
    r: &DMatrix<f64>,
    d: &[f64],
    d_dot: &[f64],
    m: &Antisymmetric,
) -> DMatrix<f64> {
    let n = d.len();
    let mm = m.to_matrix();
    let dd = DMatrix::from_diagonal(&DVector::from_column_slice(d));
    let inner = DMatrix::from_diagonal(&DVector::from_column_slice(d_dot)) + &mm * &dd - &dd * &mm;
    debug_assert_eq!(inner.nrows(), n);
    r * inner * r.transpose()
}

/// Goldfish positions and momenta with the frame, sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTrajectory {
    pub times: Vec<f64>,
    pub frames: Vec<DMatrix<f64>>,
    pub q: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
    pub big_q: Vec<Vec<f64>>,
    pub big_p: Vec<Vec<f64>>,
    /// Number of polar re-projections applied to the frame.
    pub reprojections: usize,
}

impl FrameTrajectory {
    pub fn max_orthogonality_defect(&self) -> f64 {
        self.frames
            .iter()
            .map(linalg::orthogonality_defect)
            .fold(0.0, f64::max)
    }
}

/// State `[q, p, R row-major]`.
struct FrameSystem {
    n: usize,
}

impl OdeSystem for FrameSystem {
    fn dim(&self) -> usize {
        2 * self.n + self.n * self.n
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let n = self.n;
        let (q, rest) = y.split_at(n);
        let (p, r) = rest.split_at(n);
        dy[..n].copy_from_slice(p);
        goldfish_accel(q, p, &mut dy[n..2 * n]);
        let m = |i: usize, j: usize| {
            if i == j {
                0.0
            } else {
                -(p[i] * p[j]).abs().sqrt() / (q[i] - q[j])
            }
        };
        for i in 0..n {
            for j in 0..n {
                dy[2 * n + i * n + j] = (0..n).map(|k| r[i * n + k] * m(k, j)).sum();
            }
        }
    }

    fn positions<'a>(&self, y: &'a [f64]) -> &'a [f64] {
        &y[..self.n]
    }
}

/// Integrates the goldfish flow with `Rdot = R M`, `R(0) = I`.
pub fn frame_flow(
    q0: &Configuration,
    qdot0: &[f64],
    grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<FrameTrajectory> {
    let n = q0.len();
    if qdot0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: qdot0.len(),
        });
    }
    require_positive_velocity(qdot0)?;
    if grid.is_empty() {
        return Err(Error::InvalidConfiguration("empty time grid".into()));
    }
    let sys = FrameSystem { n };
    let mut y: Vec<f64> = q0.as_slice().to_vec();
    y.extend_from_slice(qdot0);
    y.extend(DMatrix::<f64>::identity(n, n).iter().copied());

    let mut out = FrameTrajectory {
        times: Vec::with_capacity(grid.len()),
        frames: Vec::with_capacity(grid.len()),
        q: Vec::new(),
        p: Vec::new(),
        big_q: Vec::new(),
        big_p: Vec::new(),
        reprojections: 0,
    };
    let push = |out: &mut FrameTrajectory, t: f64, y: &[f64]| -> Result<()> {
        let (q, p) = (&y[..n], &y[n..2 * n]);
        let chart = canonical_transform(q, p)?;
        out.times.push(t);
        out.frames.push(DMatrix::from_row_slice(n, n, &y[2 * n..]));
        out.q.push(q.to_vec());
        out.p.push(p.to_vec());
        out.big_q.push(chart.q);
        out.big_p.push(chart.p);
        Ok(())
    };
    push(&mut out, grid[0], &y)?;
    for w in grid.windows(2) {
        let seg = integrate(&sys, &y, &[w[0], w[1]], cfg)?;
        y = seg.last_state().expect("segment end").to_vec();
        let r = DMatrix::from_row_slice(n, n, &y[2 * n..]);
        if linalg::orthogonality_defect(&r) > REORTHONORMALIZE_THRESHOLD {
            let u = linalg::polar_orthogonal(&r);
            for i in 0..n {
                for j in 0..n {
                    y[2 * n + i * n + j] = u[(i, j)];
                }
            }
            out.reprojections += 1;
        }
        push(&mut out, w[1], &y)?;
    }
    Ok(out)
}

/// `u(t) = R(t) Q(t)` and `v(t) = R(t) P(t)`.
pub fn invariant_vectors(ft: &FrameTrajectory) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let apply = |r: &DMatrix<f64>, x: &[f64]| (r * DVector::from_column_slice(x)).as_slice().to_vec();
    let u = ft
        .frames
        .iter()
        .zip(&ft.big_q)
        .map(|(r, q)| apply(r, q))
        .collect();
    let v = ft
        .frames
        .iter()
        .zip(&ft.big_p)
        .map(|(r, p)| apply(r, p))
        .collect();
    (u, v)
}

/// Free-vector Hamiltonian `1/2 (v . v)^2`.
pub fn reduced_energy(v: &[f64]) -> f64 {
    0.5 * v.iter().map(|x| x * x).sum::<f64>().powi(2)
}

/// Free-vector prediction `u(0) + 2 t v (v . v)`.
pub fn free_vector_position(u0: &[f64], v: &[f64], t: f64) -> Vec<f64> {
    let vv: f64 = v.iter().map(|x| x * x).sum();
    u0.iter().zip(v).map(|(u, v)| u + 2.0 * t * v * vv).collect()
}

/// Largest entry of `|R_a - R_b|` after matching every column sign of `b` to `a`.
pub fn frame_distance_up_to_signs(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..a.ncols() {
        let s = if a.column(j).dot(&b.column(j)) < 0.0 { -1.0 } else { 1.0 };
        for i in 0..a.nrows() {
            worst = worst.max((a[(i, j)] - s * b[(i, j)]).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{goldfish_exact, uniform_grid, GoldfishState};

    fn cfg(q: &[f64]) -> Configuration {
        Configuration::new(q.to_vec()).unwrap()
    }

    #[test]
    fn free_flow_examples() {
        let m = MatrixFlow::new(
            DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 1.0])),
            DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]),
        )
        .unwrap();
        assert_eq!(free_flow(&m, 1.0), DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 5.0]));
        assert_eq!(&free_flow(&m, 0.0), m.x0());
        let still = MatrixFlow::new(m.x0().clone(), DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(&free_flow(&still, 3.0), still.x0());
    }

    #[test]
    fn matrix_flow_validation() {
        let bad = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 1.0]);
        assert!(MatrixFlow::new(bad, DMatrix::zeros(2, 2)).is_err());
        let degenerate = DMatrix::identity(2, 2);
        assert!(matches!(
            MatrixFlow::new(degenerate, DMatrix::zeros(2, 2)),
            Err(Error::EigenvalueCollision { .. })
        ));
    }

    #[test]
    fn eigen_track_examples() {
        let m = rank1_velocity(&cfg(&[0.0, 1.0]), &[1.0, 4.0]).unwrap();
        assert_eq!(m.v0(), &DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]));
        let tr = eigen_track(&m, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(tr.frames[0], DMatrix::identity(2, 2));
        let l = &tr.eigenvalues[2];
        assert!((l[0] - (3.0 - 8f64.sqrt())).abs() < 1e-14);
        assert!((l[1] - (3.0 + 8f64.sqrt())).abs() < 1e-14);

        let still = MatrixFlow::new(m.x0().clone(), DMatrix::zeros(2, 2)).unwrap();
        let tr = eigen_track(&still, &[0.0, 1.0]).unwrap();
        assert_eq!(tr.frames[1], DMatrix::identity(2, 2));
        assert_eq!(tr.eigenvalues[1], vec![0.0, 1.0]);
    }

    #[test]
    fn eigen_track_is_continuous() {
        let m = rank1_velocity(&cfg(&[-0.5, 0.2, 1.1]), &[0.7, 1.3, 0.9]).unwrap();
        let mut prev_jump = f64::INFINITY;
        for points in [11, 41, 161] {
            let tr = eigen_track(&m, &uniform_grid(0.0, 0.3, points)).unwrap();
            let jump = tr
                .frames
                .windows(2)
                .map(|w| (&w[1] - &w[0]).amax())
                .fold(0.0, f64::max);
            assert!(jump < prev_jump / 2.0);
            prev_jump = jump;
        }
    }

    #[test]
    fn eigen_collision_reported() {
        let m = MatrixFlow::new(
            DMatrix::from_diagonal(&DVector::from_vec(vec![0.0, 1.0])),
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0])),
        )
        .unwrap();
        assert!(matches!(
            eigen_track(&m, &[0.0, 0.5]),
            Err(Error::EigenvalueCollision { .. })
        ));
    }

    #[test]
    fn rank1_examples() {
        let m = rank1_velocity(&cfg(&[0.0, 1.0]), &[1.0, 4.0]).unwrap();
        let (vals, _) = linalg::sorted_symmetric_eigen(m.v0());
        assert!(vals[0].abs() < 1e-14 && (vals[1] - 5.0).abs() < 1e-14);
        let (x1, _) = linalg::sorted_symmetric_eigen(&free_flow(&m, 1.0));
        let s0 = GoldfishState::new(cfg(&[0.0, 1.0]), vec![1.0, 4.0]).unwrap();
        let exact = goldfish_exact(&s0, 1.0).unwrap();
        for (a, b) in x1.iter().zip(exact.as_slice()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(
            rank1_velocity(&cfg(&[0.0, 1.0]), &[1.0, 0.0]),
            Err(Error::NonPositiveVelocity { index: 1, .. })
        ));
    }

    #[test]
    fn canonical_examples() {
        let c = canonical_transform(&[1.0, 2.0], &[4.0, 1.0]).unwrap();
        assert_eq!(c.big_p(), &[2.0, 1.0]);
        assert_eq!(c.big_q(), &[4.0, 4.0]);
        let (q, p) = canonical_inverse(&c);
        assert_eq!((q, p), (vec![1.0, 2.0], vec![4.0, 1.0]));
        let c = canonical_transform(&[0.0, 1.0], &[1.0, 4.0]).unwrap();
        assert_eq!(c.angular_momentum().get(0, 1), -4.0);
        assert!(matches!(
            canonical_transform(&[0.0], &[0.0]),
            Err(Error::NonPositiveMomentum { .. })
        ));
    }

    #[test]
    fn m_matrix_examples() {
        assert_eq!(m_matrix(&[0.0, 1.0], &[1.0, 4.0]).unwrap().get(0, 1), 2.0);
        assert_eq!(m_matrix(&[0.0, 1.0], &[1.0, 1.0]).unwrap().get(0, 1), 1.0);
        let forms = m_matrix_forms(&[0.0, 1.0], &[1.0, 4.0]).unwrap();
        assert_eq!(forms[2].get(0, 1), 2.0);
        let forms = m_matrix_forms(&[-1.3, 0.2, 0.9, 1.7], &[0.6, 1.4, 0.8, 1.1]).unwrap();
        assert!(m_matrix_form_spread(&forms) < 1e-12);
    }

    #[test]
    fn qp_rhs_examples() {
        let c = ReducedChart::new(vec![0.0, 4.0], vec![1.0, 2.0]).unwrap();
        let (qd, pd) = qp_rhs(&c).unwrap();
        assert_eq!(qd[0], 2.0);
        assert_eq!(pd[0], -4.0);
        assert_eq!(qd[0] * 1.0 - 0.0 * pd[0], 2.0);
        let one = ReducedChart::new(vec![0.7], vec![1.5]).unwrap();
        let (qd, pd) = qp_rhs(&one).unwrap();
        assert_eq!(qd, vec![2.0 * 1.5f64.powi(3)]);
        assert_eq!(pd, vec![0.0]);
        let ray = ReducedChart::new(vec![1.0, 2.0], vec![1.0, 2.0]).unwrap();
        assert!(matches!(qp_rhs(&ray), Err(Error::DegenerateRay { i: 0, j: 1 })));
    }

    /// Push-forward oracle: Qdot = 2 qdot P + 2 q Pdot, Pdot = pdot / (2P).
    #[test]
    fn qp_rhs_is_goldfish_pushforward() {
        let q = [-0.8, 0.1, 1.2];
        let p = [0.9, 1.3, 0.6];
        let mut acc = [0.0; 3];
        goldfish_accel(&q, &p, &mut acc);
        let c = canonical_transform(&q, &p).unwrap();
        let (qd, pd) = qp_rhs(&c).unwrap();
        for i in 0..3 {
            let big_p = p[i].sqrt();
            let pdot = acc[i] / (2.0 * big_p);
            assert!((pd[i] - pdot).abs() < 1e-12);
            assert!((qd[i] - (2.0 * p[i] * big_p + 2.0 * q[i] * pdot)).abs() < 1e-12);
        }
    }

    #[test]
    fn frame_consistency_at_zero() {
        let q0 = [-0.6, 0.3, 1.4];
        let v0 = [0.8, 1.2, 0.7];
        let m = rank1_velocity(&cfg(&q0), &v0).unwrap();
        let mm = m_matrix(&q0, &v0).unwrap();
        let xdot = velocity_from_frame(&DMatrix::identity(3, 3), &q0, &v0, &mm);
        assert!((xdot - m.v0()).amax() < 1e-12);
    }

    #[test]
    fn frame_flow_examples() {
        let grid = uniform_grid(0.0, 0.3, 7);
        let ft = frame_flow(&cfg(&[0.3]), &[1.2], &grid, &IntegratorConfig::tight()).unwrap();
        assert!(ft.frames.iter().all(|r| r[(0, 0)] == 1.0));

        let ft = frame_flow(&cfg(&[0.0, 1.0]), &[1.0, 4.0], &grid, &IntegratorConfig::tight()).unwrap();
        assert!(ft.max_orthogonality_defect() < 1e-8);
        let tr = eigen_track(&rank1_velocity(&cfg(&[0.0, 1.0]), &[1.0, 4.0]).unwrap(), &grid).unwrap();
        for (a, b) in ft.frames.iter().zip(&tr.frames) {
            assert!(frame_distance_up_to_signs(a, b) < 1e-6);
        }
        let (u, v) = invariant_vectors(&ft);
        assert_eq!(v[0], vec![1.0, 2.0]);
        assert_eq!(u[0], vec![0.0, 4.0]);
        assert_eq!(reduced_energy(&v[0]), 12.5);
        for (k, &t) in ft.times.iter().enumerate() {
            let dv = v[k].iter().zip(&v[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(dv < 1e-7);
            let pred = free_vector_position(&u[0], &v[0], t);
            let du = u[k].iter().zip(&pred).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(du < 1e-7);
        }
    }
}
