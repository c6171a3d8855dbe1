use nalgebra::DMatrix;

/// Antisymmetric `N x N` matrix stored as its strict upper triangle,
/// row-major: `(0,1), (0,2), ..., (0,N-1), (1,2), ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Antisymmetric {
    n: usize,
    upper: Vec<f64>,
}

/// Position of `(i, j)`, `i < j`, in the packed upper triangle.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

impl Antisymmetric {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            upper: vec![0.0; n * n.saturating_sub(1) / 2],
        }
    }

    /// From the packed upper triangle; `None` if the length does not fit `n`.
    pub fn from_upper(n: usize, upper: Vec<f64>) -> Option<Self> {
        (upper.len() == n * n.saturating_sub(1) / 2).then_some(Self { n, upper })
    }

    /// Upper triangle of `m`; the lower triangle and diagonal are ignored.
    pub fn from_matrix_upper(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut a = Self::zeros(n);
        for (i, j) in pairs(n) {
            a.set(i, j, m[(i, j)]);
        }
        a
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let upper = pairs(n).into_iter().map(|(i, j)| f(i, j)).collect();
        Self { n, upper }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[pair_index(self.n, i, j)],
            std::cmp::Ordering::Greater => -self.upper[pair_index(self.n, j, i)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    /// Sets `(i, j)` and implicitly `(j, i) = -value`. Diagonal writes are ignored.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[pair_index(self.n, i, j)] = value,
            std::cmp::Ordering::Greater => self.upper[pair_index(self.n, j, i)] = -value,
            std::cmp::Ordering::Equal => {}
        }
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn frobenius_norm(&self) -> f64 {
        (2.0 * self.upper.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }
}
