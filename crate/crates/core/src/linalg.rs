//! Tridiagonal systems and their rank-one updates.

use crate::error::{Error, Result};

const PIVOT_FLOOR: f64 = 1e-300;

/// `A x = d` with `A` tridiagonal. `lower[0]` and `upper[n-1]` are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Replaces row `k` by the identity row `x_k = rhs_k`.
    pub fn pin_row(&mut self, k: usize) {
        self.lower[k] = 0.0;
        self.diag[k] = 1.0;
        self.upper[k] = 0.0;
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Thomas algorithm, no pivoting.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        assert_eq!(rhs.len(), n);
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];

        let mut pivot = self.diag[0];
        if pivot.abs() < PIVOT_FLOOR {
            return Err(Error::ZeroPivot { row: 0 });
        }
        c[0] = self.upper[0] / pivot;
        d[0] = rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.lower[i] * c[i - 1];
            if pivot.abs() < PIVOT_FLOOR || !pivot.is_finite() {
                return Err(Error::ZeroPivot { row: i });
            }
            c[i] = if i + 1 < n {
                self.upper[i] / pivot
            } else {
                0.0
            };
            d[i] = (rhs[i] - self.lower[i] * d[i - 1]) / pivot;
        }

        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }

    /// Solves `(A + p q^T) x = rhs` by Sherman-Morrison, where `q` is given
    /// sparsely as `(index, weight)` pairs.
    pub fn solve_rank_one(&self, p: &[f64], q: &[(usize, f64)], rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = self.solve(rhs)?;
        let z = self.solve(p)?;
        let dot = |v: &[f64]| q.iter().map(|&(i, w)| w * v[i]).sum::<f64>();
        let denom = 1.0 + dot(&z);
        if denom.abs() < PIVOT_FLOOR || !denom.is_finite() {
            return Err(Error::ZeroPivot { row: usize::MAX });
        }
        let scale = dot(&x) / denom;
        x.iter_mut().zip(&z).for_each(|(xi, zi)| *xi -= scale * zi);
        Ok(x)
    }
}
