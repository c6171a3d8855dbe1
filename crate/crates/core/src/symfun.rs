//! Elementary symmetric coordinates and their closed-form Jacobians.
//!
//! The map `q -> x` with `x_n = e_n(q)` straightens goldfish trajectories.
//! Its Jacobian is a Vandermonde-type matrix, so the closed forms below lose
//! accuracy when positions are large or nearly coincident; the verification
//! domains stay inside `|q| <= 3` with gaps of at least `0.1`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default minimal gap between neighbouring positions.
pub const DEFAULT_COLLISION_GAP: f64 = 1e-8;

/// Default bound on the imaginary part of a recovered root.
pub const DEFAULT_IMAG_TOL: f64 = 1e-7;

/// Ordered, pairwise distinct particle positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    q: Vec<f64>,
}

impl Configuration {
    /// Validates with the default collision gap.
    pub fn new(q: Vec<f64>) -> Result<Self> {
        Self::with_gap(q, DEFAULT_COLLISION_GAP)
    }

    pub fn with_gap(q: Vec<f64>, gap: f64) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidConfiguration("no particles".into()));
        }
        if let Some(bad) = q.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidConfiguration(format!(
                "non-finite position {bad}"
            )));
        }
        for w in q.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidConfiguration(format!(
                    "positions not strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
            if w[1] - w[0] <= gap {
                return Err(Error::InvalidConfiguration(format!(
                    "gap {} between {} and {} below tolerance {gap}",
                    w[1] - w[0],
                    w[0],
                    w[1]
                )));
            }
        }
        Ok(Self { q })
    }

    /// Sorts ascending before validating.
    pub fn from_unsorted(mut q: Vec<f64>) -> Result<Self> {
        q.sort_by(f64::total_cmp);
        Self::new(q)
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.q
    }

    /// Smallest gap between neighbours; infinite for a single particle.
    pub fn min_gap(&self) -> f64 {
        min_gap(&self.q)
    }
}

impl AsRef<[f64]> for Configuration {
    fn as_ref(&self) -> &[f64] {
        &self.q
    }
}

/// Smallest pairwise distance in an arbitrary (unsorted) slice.
pub fn min_gap(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

/// Point in the flat (elementary symmetric) chart.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatPoint {
    pub x: Vec<f64>,
}

impl FlatPoint {
    pub fn new(x: Vec<f64>) -> Self {
        Self { x }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Returns `[e_0, e_1, ..., e_N]` of `values`, with `e_0 = 1`.
pub fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (k, &v) in values.iter().enumerate() {
        for n in (1..=k + 1).rev() {
            e[n] += v * e[n - 1];
        }
    }
    e
}

/// `e_n` of `values` with the entry at `skip` removed, `n = 0..N-1`.
fn elementary_symmetric_without(values: &[f64], skip: usize) -> Vec<f64> {
    let mut e = vec![0.0; values.len()];
    e[0] = 1.0;
    let mut k = 0;
    for (i, &v) in values.iter().enumerate() {
        if i == skip {
            continue;
        }
        for n in (1..=k + 1).rev() {
            e[n] += v * e[n - 1];
        }
        k += 1;
    }
    e
}

/// `x_n = e_n(q)` for `n = 1..N`.
pub fn elem_sym_coords(q: &Configuration) -> FlatPoint {
    let e = elementary_symmetric(q.as_slice());
    FlatPoint::new(e[1..].to_vec())
}

/// `J[n][j] = dx_n/dq_j = e_{n-1}(q without q_j)`, rows indexed by `n`.
pub fn jacobian(q: &Configuration) -> DMatrix<f64> {
    jacobian_of(q.as_slice())
}

/// Same as [`jacobian`] for an unvalidated slice of values.
pub fn jacobian_of(values: &[f64]) -> DMatrix<f64> {
    let n = values.len();
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        let e = elementary_symmetric_without(values, j);
        for row in 0..n {
            jac[(row, j)] = e[row];
        }
    }
    jac
}

/// Vandermonde product `prod_{i<j} (q_i - q_j)`.
pub fn jacobian_det(q: &Configuration) -> f64 {
    let q = q.as_slice();
    let mut det = 1.0;
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            det *= q[i] - q[j];
        }
    }
    det
}

/// `prod_{j != i} (q_i - q_j)`.
pub(crate) fn node_denominator(q: &[f64], i: usize) -> f64 {
    q.iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &qj)| q[i] - qj)
        .product()
}

/// Closed-form inverse `(J^-1)[i][m] = (-1)^m q_i^(N-1-m) / prod_{j != i}(q_i - q_j)`
/// (zero-based `m`).
pub fn jacobian_inverse(q: &Configuration) -> DMatrix<f64> {
    let q = q.as_slice();
    let n = q.len();
    DMatrix::from_fn(n, n, |i, m| {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sign * q[i].powi((n - 1 - m) as i32) / node_denominator(q, i)
    })
}

/// Roots of `l^N - x_1 l^(N-1) + x_2 l^(N-2) - ... + (-1)^N x_N`, ascending.
///
/// Roots come from the companion-matrix eigenvalues followed by a few Newton
/// polishing steps on the real parts. `imag_tol` bounds the discarded
/// imaginary parts (scaled by `max(1, |root|)`).
pub fn roots_from_coords(x: &FlatPoint, imag_tol: f64) -> Result<Configuration> {
    roots_from_coords_with_gap(x, imag_tol, DEFAULT_COLLISION_GAP)
}

pub fn roots_from_coords_with_gap(
    x: &FlatPoint,
    imag_tol: f64,
    collision_gap: f64,
) -> Result<Configuration> {
    let n = x.len();
    if n == 0 {
        return Err(Error::InvalidConfiguration("empty flat point".into()));
    }
    if let Some(bad) = x.x.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidConfiguration(format!(
            "non-finite flat coordinate {bad}"
        )));
    }
    // monic coefficients, highest power first: c[0] = 1, c[n] = (-1)^n x_n
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1.0);
    for (k, &xk) in x.x.iter().enumerate() {
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(sign * xk);
    }

    let mut roots = if n == 1 {
        vec![x.x[0]]
    } else {
        let mut companion = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            // last column holds -c_{n-i} for the power l^i
            companion[(i, n - 1)] = -coeffs[n - i];
        }
        let eig = companion.complex_eigenvalues();
        let mut real = Vec::with_capacity(n);
        for z in eig.iter() {
            let scale = z.re.abs().max(1.0);
            if z.im.abs() >= imag_tol * scale {
                return Err(Error::ComplexRoots { imag: z.im.abs() });
            }
            real.push(polish_root(&coeffs, z.re));
        }
        real
    };
    roots.sort_by(f64::total_cmp);
    let gap = min_gap(&roots);
    if gap <= collision_gap {
        return Err(Error::RootCollision {
            gap,
            tol: collision_gap,
        });
    }
    Configuration::with_gap(roots, collision_gap)
}

fn horner(coeffs: &[f64], z: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn polish_root(coeffs: &[f64], mut z: f64) -> f64 {
    let (mut p, _) = horner(coeffs, z);
    for _ in 0..4 {
        let (pz, dp) = horner(coeffs, z);
        if dp == 0.0 || pz == 0.0 {
            break;
        }
        let candidate = z - pz / dp;
        let (pc, _) = horner(coeffs, candidate);
        if pc.abs() < p.abs() {
            z = candidate;
            p = pc;
        } else {
            break;
        }
    }
    z
}
